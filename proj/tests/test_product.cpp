#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"

using namespace bcaret;
using namespace testutil;

namespace {

constexpr ControlId P = 0, Q = 1, R = 2;
constexpr SymbolId A = 0, B = 1, C = 2;

// Name-based lookups keep the tests independent of the product's id layout.
ControlId ctl(const Abpds& bp, const std::string& name) {
  for (ControlId p = 0; p < bp.control_count(); ++p)
    if (bp.control_name(p) == name) return p;
  FAIL(("no control named " + name));
  return 0;
}

SymbolId sym(const Abpds& bp, const std::string& name) {
  for (SymbolId s = 0; s < bp.alphabet_size(); ++s)
    if (bp.symbol_name(s) == name) return s;
  FAIL(("no symbol named " + name));
  return 0;
}

std::string tag(const LabelledPds& pds, ControlId p, const std::string& f) {
  return "[" + pds.control_name(p) + "," + f + "]";
}

std::string stag(const LabelledPds& pds, SymbolId s, const std::string& f) {
  return "[" + pds.symbol_name(s) + "," + f + "]";
}

// A rule is identified by head and target multiset (order-insensitive).
bool has_rule(const Abpds& bp, ControlId from, SymbolId s, std::vector<AbpdsTarget> targets) {
  std::sort(targets.begin(), targets.end());
  for (std::size_t ri : bp.rules_at(from, s)) {
    std::vector<AbpdsTarget> got = bp.rules()[ri].targets;
    std::sort(got.begin(), got.end());
    if (got == targets) return true;
  }
  return false;
}

Labelling sets_labelling(std::map<std::string, std::vector<ControlId>> sets) {
  Labelling out;
  out.sets = std::move(sets);
  return out;
}

}  // namespace

TEST_CASE("successor sets splice target words onto the popped stack") {
  Abpds bp;
  ControlId pe = bp.add_control("pe");
  ControlId p1 = bp.add_control("p1");
  ControlId p2 = bp.add_control("p2");
  SymbolId a = bp.add_symbol("a");
  bp.add_rule(AbpdsRule{pe, a, {AbpdsTarget{pe, {a}}}});
  bp.add_rule(AbpdsRule{pe, a, {AbpdsTarget{p1, {a}}, AbpdsTarget{p2, {a}}}});

  Config c = cfg(pe, {a});
  auto succ = abpds_successor_sets(bp, c);
  REQUIRE(succ.size() == 2);
  CHECK(succ[0].second == std::vector<Config>{cfg(pe, {a})});
  CHECK(succ[1].second == std::vector<Config>{cfg(p1, {a}), cfg(p2, {a})});

  CHECK(abpds_successor_sets(bp, cfg(p1, {a})).empty());
}

TEST_CASE("rule storage deduplicates and keeps declaration order") {
  Abpds bp;
  ControlId x = bp.add_control("x");
  SymbolId a = bp.add_symbol("a");
  CHECK(bp.add_rule(AbpdsRule{x, a, {AbpdsTarget{x, {a}}}}));
  CHECK(!bp.add_rule(AbpdsRule{x, a, {AbpdsTarget{x, {a}}}}));  // exact duplicate
  CHECK(bp.add_rule(AbpdsRule{x, a, {AbpdsTarget{x, {}}}}));
  CHECK(bp.rules().size() == 2);
}

TEST_CASE("standard product of the running system has the predicted size") {
  LabelledPds pds = t1();
  FormulaPtr phi = parse_formula("EX^a isr");
  BuiltProduct prod = build_standard(pds, phi, {{"isr", {R}}});

  // closure {isr, EX^a isr}: |P|(|Cl|+1)+1 and |Gamma|(|Cl|+1)+1
  CHECK(closure(phi).size() == 2);
  CHECK(prod.bp.control_count() == 10);
  CHECK(prod.bp.alphabet_size() == 10);

  // the query goes to the root-tagged control, stack unchanged
  Config q = prod.map_config(cfg(P, {A}));
  CHECK(q.control == ctl(prod.bp, tag(pds, P, "EX^a isr")));
  CHECK(q.stack == cfg(P, {A}).stack);
}

TEST_CASE("every pds rule survives verbatim in the product") {
  LabelledPds pds = t1();
  for (const char* text : {"EX^a isr", "E[ isp U^g isr ]", "A[ isp R^a isr ]"}) {
    BuiltProduct prod =
        build_standard(pds, parse_formula(text), {{"isr", {R}}, {"isp", {P}}});
    for (const LabelledRule& r : pds.rules()) {
      std::vector<SymbolId> word(r.push.begin(), r.push.end());
      CHECK(has_rule(prod.bp, r.from_control, r.from_symbol,
                     {AbpdsTarget{r.to_control, word}}));
    }
  }
}

TEST_CASE("release formulas put every tagged control in the accepting set") {
  LabelledPds pds = t1();
  FormulaPtr phi = parse_formula("E[ isp R^g isr ]");
  BuiltProduct prod = build_standard(pds, phi, {{"isr", {R}}, {"isp", {P}}});
  for (ControlId p : {P, Q, R})
    CHECK(prod.bp.is_accepting(ctl(prod.bp, tag(pds, p, "E[ isp R^g isr ]"))));
  // atom polarity acceptance: only members are accepting
  CHECK(prod.bp.is_accepting(ctl(prod.bp, tag(pds, P, "isp"))));
  CHECK(!prod.bp.is_accepting(ctl(prod.bp, tag(pds, Q, "isp"))));
  CHECK(!prod.bp.is_accepting(ctl(prod.bp, "_trap")));
}

TEST_CASE("atom rules loop exactly at polarity-matching controls") {
  LabelledPds pds = t1();
  FormulaPtr phi = parse_formula("isr && !isp");
  BuiltProduct prod = build_standard(pds, phi, {{"isr", {R}}, {"isp", {P}}});
  const Abpds& bp = prod.bp;

  ControlId posR = ctl(bp, tag(pds, R, "isr"));
  ControlId posP = ctl(bp, tag(pds, P, "isr"));
  for (SymbolId g : {A, B, C}) {
    CHECK(has_rule(bp, posR, g, {AbpdsTarget{posR, {g}}}));
    CHECK(bp.rules_at(posP, g).empty());
  }
  CHECK(bp.is_accepting(posR));
  CHECK(!bp.is_accepting(posP));

  ControlId negQ = ctl(bp, tag(pds, Q, "!isp"));
  ControlId negP = ctl(bp, tag(pds, P, "!isp"));
  for (SymbolId g : {A, B, C}) {
    CHECK(has_rule(bp, negQ, g, {AbpdsTarget{negQ, {g}}}));
    CHECK(bp.rules_at(negP, g).empty());
  }
  CHECK(bp.is_accepting(negQ));
  CHECK(!bp.is_accepting(negP));
}

TEST_CASE("boolean connectives split into pair and per-disjunct rules") {
  LabelledPds pds = t1();
  BuiltProduct andProd =
      build_standard(pds, parse_formula("isr && isp"), {{"isr", {R}}, {"isp", {P}}});
  {
    const Abpds& bp = andProd.bp;
    ControlId from = ctl(bp, tag(pds, P, "(isr && isp)"));
    CHECK(has_rule(bp, from, A,
                   {AbpdsTarget{ctl(bp, tag(pds, P, "isr")), {A}},
                    AbpdsTarget{ctl(bp, tag(pds, P, "isp")), {A}}}));
  }
  BuiltProduct orProd =
      build_standard(pds, parse_formula("isr || isp"), {{"isr", {R}}, {"isp", {P}}});
  {
    const Abpds& bp = orProd.bp;
    ControlId from = ctl(bp, tag(pds, P, "(isr || isp)"));
    CHECK(has_rule(bp, from, A, {AbpdsTarget{ctl(bp, tag(pds, P, "isr")), {A}}}));
    CHECK(has_rule(bp, from, A, {AbpdsTarget{ctl(bp, tag(pds, P, "isp")), {A}}}));
  }
}

TEST_CASE("abstract next routes calls through tagged return cells and rets to the trap") {
  LabelledPds pds = t1();
  FormulaPtr phi = parse_formula("EX^a isr");
  BuiltProduct prod = build_standard(pds, phi, {{"isr", {R}}});
  const Abpds& bp = prod.bp;

  // call branch: plain callee control, entry symbol, tagged return cell
  CHECK(has_rule(bp, ctl(bp, tag(pds, P, "EX^a isr")), A,
                 {AbpdsTarget{Q, {B, sym(bp, stag(pds, C, "isr"))}}}));
  // int branch: tagged continuation
  CHECK(has_rule(bp, ctl(bp, tag(pds, R, "EX^a isr")), C,
                 {AbpdsTarget{ctl(bp, tag(pds, R, "isr")), {C}}}));
  // ret branch: the dead-end trap
  CHECK(has_rule(bp, ctl(bp, tag(pds, Q, "EX^a isr")), B,
                 {AbpdsTarget{ctl(bp, "_trap"), {sym(bp, "_gbot")}}}));

  // return extraction: every ret target unwraps every tagged cell
  for (SymbolId g : {A, B, C})
    for (const char* f : {"isr", "EX^a isr"})
      CHECK(has_rule(bp, R, sym(bp, stag(pds, g, f)),
                     {AbpdsTarget{ctl(bp, tag(pds, R, f)), {g}}}));

  // trap loop, not accepting
  CHECK(has_rule(bp, ctl(bp, "_trap"), sym(bp, "_gbot"),
                 {AbpdsTarget{ctl(bp, "_trap"), {sym(bp, "_gbot")}}}));
  CHECK(!bp.is_accepting(ctl(bp, "_trap")));
}

TEST_CASE("every closure member is handled at every control") {
  LabelledPds pds = t1();
  FormulaPtr phi = parse_formula("E[ (isp || EX^g isr) U^a AX^g isr ]");
  Labelling labels = sets_labelling({{"isr", {R}}, {"isp", {P}}});
  BuiltProduct prod = build_product(pds, phi, labels);
  const Abpds& bp = prod.bp;

  for (const FormulaPtr& f : closure(phi)) {
    bool atom = f->kind() == FormulaKind::Atom || f->kind() == FormulaKind::NegAtom;
    for (ControlId p : {P, Q, R}) {
      ControlId from = ctl(bp, tag(pds, p, to_string(f)));
      bool any = false;
      for (SymbolId g = 0; g < bp.alphabet_size() && !any; ++g)
        any = !bp.rules_at(from, g).empty();
      bool polarity_false = atom && !any;
      CHECK((any || polarity_false));
    }
  }
}

TEST_CASE("tagged symbols on rule sides always carry closure formulas") {
  LabelledPds pds = t1();
  FormulaPtr phi = parse_formula("A[ isp U^a EX^a isr ]");
  BuiltProduct prod = build_standard(pds, phi, {{"isr", {R}}, {"isp", {P}}});
  const Abpds& bp = prod.bp;

  std::set<std::string> closure_names;
  for (const FormulaPtr& f : closure(phi)) closure_names.insert(to_string(f));

  auto check_symbol = [&](SymbolId s) {
    std::string name = bp.symbol_name(s);
    if (name.empty() || name[0] != '[') return;  // plain or trap symbol
    auto comma = name.find(',');
    REQUIRE(comma != std::string::npos);
    std::string f = name.substr(comma + 1, name.size() - comma - 2);
    CHECK(closure_names.count(f));
  };
  for (const AbpdsRule& r : bp.rules()) {
    check_symbol(r.from_symbol);
    for (const AbpdsTarget& t : r.targets)
      for (SymbolId s : t.word) check_symbol(s);
  }
}

TEST_CASE("regular products embed one scan automaton per atom polarity") {
  LabelledPds pds = t1();

  // top-of-stack-is-a, as a two-state word automaton shared by all controls
  MultiAutomaton topA(pds.alphabet_size());
  StateId s0 = topA.add_state();
  StateId sf = topA.add_state();
  for (ControlId p : {P, Q, R}) topA.set_initial(p, s0);
  topA.add_transition(s0, A, sf);
  for (SymbolId g : {A, B, C}) topA.add_transition(sf, g, sf);
  topA.mark_final(sf);

  FormulaPtr phi = parse_formula("EX^g topa");
  BuiltProduct prod = build_regular(pds, phi, {{"topa", topA}});
  std::size_t base = pds.control_count() * (closure(phi).size() + 1) + 1;
  CHECK(prod.bp.control_count() == base + topA.state_count());

  // entry rules route the tagged control into the scan
  const Abpds& bp = prod.bp;
  for (SymbolId g : {A, B, C})
    CHECK(has_rule(bp, ctl(bp, tag(pds, P, "topa")), g,
                   {AbpdsTarget{ctl(bp, "_ap_topa_0"), {g}}}));
  // scan transitions pop
  CHECK(has_rule(bp, ctl(bp, "_ap_topa_0"), A, {AbpdsTarget{ctl(bp, "_ap_topa_1"), {}}}));
  // final states loop on the bottom marker and accept
  CHECK(has_rule(bp, ctl(bp, "_ap_topa_1"), kBottomSymbol,
                 {AbpdsTarget{ctl(bp, "_ap_topa_1"), {kBottomSymbol}}}));
  CHECK(bp.is_accepting(ctl(bp, "_ap_topa_1")));
  CHECK(!bp.is_accepting(ctl(bp, "_ap_topa_0")));

  // a negated atom embeds the complement with its own state block
  FormulaPtr neg = parse_formula("EX^g !topa");
  BuiltProduct nprod = build_regular(pds, neg, {{"topa", topA}});
  MultiAutomaton comp = ma_complement(topA);
  std::size_t nbase = pds.control_count() * (closure(neg).size() + 1) + 1;
  CHECK(nprod.bp.control_count() == nbase + comp.state_count());
}

TEST_CASE("state-set bindings and their regular lifts verify the same queries") {
  Rng rng(1313);
  int agreements = 0;
  for (int trial = 0; trial < 25; ++trial) {
    LabelledPds pds = random_int_only_pds(rng);
    FormulaPtr phi = random_formula(rng, 1 + rng.upto(2));
    Labelling labels = random_labelling(rng, pds);
    for (int i = 0; i < 3; ++i) {
      Config c = random_config(rng, pds.control_count(), pds.alphabet_size(), 2);
      Verdict vs = model_check(pds, phi, labels, c, {}, false);
      Verdict vr = model_check(pds, phi, labels, c, {}, true);
      if (conclusive(vs.outcome) && conclusive(vr.outcome)) {
        CHECK(vs.outcome == vr.outcome);
        ++agreements;
      }
    }
  }
  CHECK(agreements > 30);
}
