#pragma once

// Shared fixtures, naive reference implementations and instance generators
// for the test binaries. The reference implementations are deliberately
// exhaustive and independent of the library algorithms they cross-check;
// expected values hard-coded in the test cases were produced by these.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bcaret/engine.hpp"
#include "bcaret/formula.hpp"
#include "bcaret/pds.hpp"
#include "bcaret/product.hpp"

namespace testutil {

using namespace bcaret;

// Running examples used across the suite: T1 exercises one call, one return
// and one internal loop; T2 is the minimal never-returning call.
inline const char* kT1Text = R"(
controls p q r ;
alphabet a b c ;
rule p a -call-> q b c ;
rule q b -ret-> r ;
rule r c -int-> r c ;
)";

inline const char* kT2Text = R"(
controls p ;
alphabet a b ;
rule p a -call-> p a b ;
)";

inline LabelledPds t1() { return parse_pds(kT1Text); }
inline LabelledPds t2() { return parse_pds(kT2Text); }

inline Config cfg(ControlId p, std::initializer_list<SymbolId> stack_above_bottom) {
  return make_config(p, stack_above_bottom);
}

// ---------------------------------------------------------------------------
// Reference: one-step successors by direct rule matching.

inline std::vector<Config> ref_step(const LabelledPds& pds, const Config& c) {
  std::vector<Config> out;
  if (c.stack.empty() || c.stack.front() == kBottomSymbol) return out;
  for (const LabelledRule& r : pds.rules()) {
    if (r.from_control != c.control || r.from_symbol != c.stack.front()) continue;
    Config n;
    n.control = r.to_control;
    n.stack.assign(r.push.begin(), r.push.end());
    n.stack.insert(n.stack.end(), c.stack.begin() + 1, c.stack.end());
    out.push_back(std::move(n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reference: abstract successors via exhaustive run walking. A call branch
// contributes the first configuration whose stack height returns to the
// height of the starting configuration; walking stops at the step budget.

inline void ref_abstract_walk(const LabelledPds& pds, const Config& c, std::size_t want_height,
                              int budget, long& nodes_left, std::set<AbstractTarget>& found,
                              bool& complete) {
  if (nodes_left-- <= 0) {
    complete = false;
    return;
  }
  if (c.stack.size() == want_height) {
    found.insert(AbstractTarget{c});
    return;
  }
  std::vector<Config> next = ref_step(pds, c);
  if (next.empty()) return;  // the branch died before matching; nothing owed
  if (budget <= 0) {
    complete = false;
    return;
  }
  for (const Config& n : next)
    ref_abstract_walk(pds, n, want_height, budget - 1, nodes_left, found, complete);
}

inline AbstractSuccessors ref_abstract(const LabelledPds& pds, const Config& c, int budget,
                                       long node_cap = 200000) {
  std::set<AbstractTarget> found;
  bool complete = true;
  for (const LabelledRule& r : pds.rules()) {
    if (c.stack.empty() || r.from_control != c.control || r.from_symbol != c.stack.front())
      continue;
    Config n;
    n.control = r.to_control;
    n.stack.assign(r.push.begin(), r.push.end());
    n.stack.insert(n.stack.end(), c.stack.begin() + 1, c.stack.end());
    if (r.kind == RuleKind::Int) {
      found.insert(AbstractTarget{n});
    } else if (r.kind == RuleKind::Ret) {
      found.insert(AbstractTarget{});  // the BOTTOM outcome
    } else {
      ref_abstract_walk(pds, n, c.stack.size(), budget - 1, node_cap, found, complete);
    }
  }
  AbstractSuccessors out;
  out.targets.assign(found.begin(), found.end());
  out.complete = complete;
  return out;
}

// ---------------------------------------------------------------------------
// Reference: top-down alternating word acceptance (the library computes
// frontier antichains bottom-up instead).

inline bool ref_ama_accept_from(const AltMultiAutomaton& ama, StateId q,
                                std::span<const SymbolId> word) {
  if (word.empty()) return ama.is_final(q);
  for (const StateSet& t : ama.targets_at(q, word.front())) {
    bool all = true;
    t.for_each([&](std::size_t m) {
      if (all && !ref_ama_accept_from(ama, static_cast<StateId>(m), word.subspan(1))) all = false;
    });
    if (all) return true;
  }
  return false;
}

inline bool ref_ama_accepts(const AltMultiAutomaton& ama, const Config& c) {
  if (!ama.has_initial(c.control)) return false;
  return ref_ama_accept_from(ama, ama.initial(c.control), c.stack);
}

// ---------------------------------------------------------------------------
// Reference: bounded alternating backward reachability. Decides, for every
// configuration with at most `max_cells` symbols above bottom, whether some
// rule tree rewrites it into configurations that all satisfy `base`.
// Successors that grow beyond the bound count as reachable or unreachable
// according to `optimistic`; callers compare the two modes and trust only
// configurations on which they agree.

struct RefReach {
  std::map<Config, bool> in;

  bool decided_in(const Config& c) const {
    auto it = in.find(c);
    return it != in.end() && it->second;
  }
};

// Every configuration of bp with at most max_cells symbols above bottom.
inline std::vector<Config> bounded_configs(const Abpds& bp, std::size_t max_cells) {
  std::vector<Config> all;
  std::vector<SymbolId> word;
  auto emit = [&](ControlId p) {
    Config c;
    c.control = p;
    c.stack = word;
    c.stack.push_back(kBottomSymbol);
    all.push_back(std::move(c));
  };
  std::function<void(std::size_t)> build = [&](std::size_t left) {
    for (ControlId p = 0; p < bp.control_count(); ++p) emit(p);
    if (left == 0) return;
    for (SymbolId s = 0; s < bp.alphabet_size(); ++s) {
      word.push_back(s);
      build(left - 1);
      word.pop_back();
    }
  };
  build(max_cells);
  return all;
}

inline RefReach ref_backward_reach(const Abpds& bp, const std::function<bool(const Config&)>& base,
                                   std::size_t max_cells, bool optimistic) {
  std::vector<Config> all = bounded_configs(bp, max_cells);

  RefReach r;
  for (const Config& c : all) r.in[c] = base(c);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Config& c : all) {
      if (r.in[c]) continue;
      for (const auto& [idx, succs] : abpds_successor_sets(bp, c)) {
        bool every = true;
        for (const Config& s : succs) {
          if (s.stack.size() > max_cells + 1) {
            if (!optimistic) every = false;
          } else if (!r.in[s]) {
            every = false;
          }
          if (!every) break;
        }
        if (every) {
          r.in[c] = true;
          changed = true;
          break;
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Seeded randomness and instance generators.

struct Rng {
  std::mt19937 g;
  explicit Rng(unsigned seed) : g(seed) {}

  int upto(int n) { return std::uniform_int_distribution<int>(0, n - 1)(g); }
  bool coin() { return upto(2) == 0; }
};

inline Config random_config(Rng& rng, std::size_t controls, std::size_t symbols, int max_cells) {
  Config c;
  c.control = static_cast<ControlId>(rng.upto(static_cast<int>(controls)));
  int n = rng.upto(max_cells + 1);
  for (int i = 0; i < n; ++i)
    c.stack.push_back(static_cast<SymbolId>(rng.upto(static_cast<int>(symbols))));
  c.stack.push_back(kBottomSymbol);
  return c;
}

inline Abpds random_abpds(Rng& rng) {
  Abpds bp;
  int nc = 1 + rng.upto(3);
  int ns = 1 + rng.upto(3);
  for (int p = 0; p < nc; ++p) bp.add_control("p" + std::to_string(p));
  for (int s = 0; s < ns; ++s) bp.add_symbol("g" + std::to_string(s));
  int nr = 1 + rng.upto(8);
  for (int i = 0; i < nr; ++i) {
    AbpdsRule r;
    r.from_control = static_cast<ControlId>(rng.upto(nc));
    r.from_symbol = static_cast<SymbolId>(rng.upto(ns));
    int nt = rng.upto(3);  // 0 (accepting leaf), 1 or 2 branches
    for (int t = 0; t < nt; ++t) {
      AbpdsTarget tgt;
      tgt.control = static_cast<ControlId>(rng.upto(nc));
      int wl = rng.upto(3);
      for (int w = 0; w < wl; ++w) tgt.word.push_back(static_cast<SymbolId>(rng.upto(ns)));
      r.targets.push_back(std::move(tgt));
    }
    bp.add_rule(std::move(r));
  }
  for (int p = 0; p < nc; ++p)
    if (rng.coin()) bp.mark_accepting(static_cast<ControlId>(p));
  return bp;
}

// Total internal-only system: every (control, symbol) pair has one or two
// int rules pushing exactly one symbol, so stack height never changes, no
// configuration is dead and the reachable closure is finite.
inline LabelledPds random_int_only_pds(Rng& rng) {
  LabelledPds pds;
  int nc = 1 + rng.upto(3);
  int ns = 1 + rng.upto(3);
  for (int p = 0; p < nc; ++p) pds.add_control("p" + std::to_string(p));
  for (int s = 0; s < ns; ++s) pds.add_symbol("g" + std::to_string(s));
  for (int p = 0; p < nc; ++p)
    for (int s = 0; s < ns; ++s) {
      int copies = 1 + rng.upto(2);
      for (int i = 0; i < copies; ++i) {
        LabelledRule r;
        r.from_control = static_cast<ControlId>(p);
        r.from_symbol = static_cast<SymbolId>(s);
        r.to_control = static_cast<ControlId>(rng.upto(nc));
        r.push = {static_cast<SymbolId>(rng.upto(ns))};
        r.kind = RuleKind::Int;
        pds.add_rule(std::move(r));
      }
    }
  return pds;
}

// Layered call/ret system with every global path infinite. Symbol 0 is the
// only base symbol: it is never popped (no ret reads it, calls push it as
// the return cell, int rules at base level keep a base top), so runs never
// expose the bottom marker. Calls only target strictly higher layers, which
// bounds nesting and keeps the reachable closure finite.
inline LabelledPds random_call_ret_pds(Rng& rng) {
  LabelledPds pds;
  int nc = 1 + rng.upto(2);
  int layers = 2;  // symbols: base g0, entries h1, h2
  for (int p = 0; p < nc; ++p) pds.add_control("p" + std::to_string(p));
  pds.add_symbol("g0");
  for (int l = 1; l <= layers; ++l) pds.add_symbol("h" + std::to_string(l));
  auto add = [&](int p, int s, RuleKind k, int q, std::vector<SymbolId> push) {
    LabelledRule r;
    r.from_control = static_cast<ControlId>(p);
    r.from_symbol = static_cast<SymbolId>(s);
    r.to_control = static_cast<ControlId>(q);
    r.push = std::move(push);
    r.kind = k;
    pds.add_rule(std::move(r));
  };
  for (int p = 0; p < nc; ++p) {
    // base symbol: internal move staying at base, or a call into layer >= 1
    if (rng.coin())
      add(p, 0, RuleKind::Int, rng.upto(nc), {0});
    else
      add(p, 0, RuleKind::Call, rng.upto(nc), {static_cast<SymbolId>(1 + rng.upto(layers)), 0});
    for (int l = 1; l <= layers; ++l) {
      int choice = rng.upto(l < layers ? 3 : 2);
      if (choice == 0)
        add(p, l, RuleKind::Ret, rng.upto(nc), {});
      else if (choice == 1)
        add(p, l, RuleKind::Int, rng.upto(nc), {static_cast<SymbolId>(1 + rng.upto(layers))});
      else
        add(p, l, RuleKind::Call, rng.upto(nc), {static_cast<SymbolId>(l + 1), 0});
    }
    // occasionally one extra rule for nondeterminism
    if (rng.coin()) add(p, 1 + rng.upto(layers), RuleKind::Ret, rng.upto(nc), {});
  }
  return pds;
}

// Unconstrained system; callers filter for the properties they need.
inline LabelledPds random_general_pds(Rng& rng) {
  LabelledPds pds;
  int nc = 1 + rng.upto(3);
  int ns = 1 + rng.upto(3);
  for (int p = 0; p < nc; ++p) pds.add_control("p" + std::to_string(p));
  for (int s = 0; s < ns; ++s) pds.add_symbol("g" + std::to_string(s));
  int nr = 1 + rng.upto(8);
  for (int i = 0; i < nr; ++i) {
    LabelledRule r;
    r.from_control = static_cast<ControlId>(rng.upto(nc));
    r.from_symbol = static_cast<SymbolId>(rng.upto(ns));
    r.to_control = static_cast<ControlId>(rng.upto(nc));
    switch (rng.upto(3)) {
      case 0:
        r.kind = RuleKind::Call;
        r.push = {static_cast<SymbolId>(rng.upto(ns)), static_cast<SymbolId>(rng.upto(ns))};
        break;
      case 1:
        r.kind = RuleKind::Ret;
        break;
      default: {
        r.kind = RuleKind::Int;
        int wl = rng.upto(3);
        for (int w = 0; w < wl; ++w) r.push.push_back(static_cast<SymbolId>(rng.upto(ns)));
        break;
      }
    }
    pds.add_rule(std::move(r));
  }
  return pds;
}

inline const std::vector<std::string>& atom_names() {
  static const std::vector<std::string> names = {"e0", "e1", "e2"};
  return names;
}

struct FormulaGenOptions {
  bool allow_abstract = true;
  bool allow_release = true;
  bool allow_negation = true;
};

inline FormulaPtr random_formula(Rng& rng, int depth, const FormulaGenOptions& opt = {}) {
  auto atom = [&]() -> FormulaPtr {
    const auto& names = atom_names();
    const std::string& n = names[static_cast<std::size_t>(rng.upto(static_cast<int>(names.size())))];
    if (opt.allow_negation && rng.upto(4) == 0) return Formula::make_neg_atom(n);
    return Formula::make_atom(n);
  };
  if (depth <= 0) {
    switch (rng.upto(6)) {
      case 0: return Formula::make_true();
      case 1: return Formula::make_false();
      default: return atom();
    }
  }
  StepKind step = (opt.allow_abstract && rng.coin()) ? StepKind::Abstract : StepKind::Global;
  switch (rng.upto(opt.allow_release ? 8 : 6)) {
    case 0: return Formula::make_and(random_formula(rng, depth - 1, opt),
                                     random_formula(rng, depth - 1, opt));
    case 1: return Formula::make_or(random_formula(rng, depth - 1, opt),
                                    random_formula(rng, depth - 1, opt));
    case 2: return Formula::make_next(false, step, random_formula(rng, depth - 1, opt));
    case 3: return Formula::make_next(true, step, random_formula(rng, depth - 1, opt));
    case 4: return Formula::make_until(false, step, random_formula(rng, depth - 1, opt),
                                       random_formula(rng, depth - 1, opt));
    case 5: return Formula::make_until(true, step, random_formula(rng, depth - 1, opt),
                                       random_formula(rng, depth - 1, opt));
    case 6: return Formula::make_release(false, step, random_formula(rng, depth - 1, opt),
                                         random_formula(rng, depth - 1, opt));
    default: return Formula::make_release(true, step, random_formula(rng, depth - 1, opt),
                                          random_formula(rng, depth - 1, opt));
  }
}

inline Labelling random_labelling(Rng& rng, const LabelledPds& pds) {
  Labelling out;
  for (const std::string& name : atom_names()) {
    std::vector<ControlId> members;
    for (ControlId p = 0; p < pds.control_count(); ++p)
      if (rng.coin()) members.push_back(p);
    out.sets[name] = std::move(members);
  }
  return out;
}

// Verdict comparison used by the differential criteria: conflicting
// conclusive answers are disagreements; UNKNOWN on either side is not.
inline bool conclusive(Outcome o) { return o != Outcome::Unknown; }

inline Outcome game_to_outcome(GameResult g) {
  switch (g) {
    case GameResult::Accept: return Outcome::Sat;
    case GameResult::Reject: return Outcome::Unsat;
    case GameResult::Unknown: break;
  }
  return Outcome::Unknown;
}

}  // namespace testutil
