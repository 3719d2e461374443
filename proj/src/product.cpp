#include "bcaret/product.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bcaret {

ControlId Abpds::add_control(std::string name) {
  control_names_.push_back(std::move(name));
  accepting_.grow(control_names_.size());
  return static_cast<ControlId>(control_names_.size() - 1);
}

SymbolId Abpds::add_symbol(std::string name) {
  symbol_names_.push_back(std::move(name));
  return static_cast<SymbolId>(symbol_names_.size() - 1);
}

std::string Abpds::symbol_name(SymbolId s) const {
  if (s == kBottomSymbol) return "#";
  return symbol_names_[s];
}

bool Abpds::add_rule(AbpdsRule rule) {
  std::uint64_t key = (std::uint64_t{rule.from_control} << 32) | rule.from_symbol;
  auto& bucket = index_[key];
  for (std::size_t idx : bucket)
    if (rules_[idx].targets == rule.targets) return false;
  bucket.push_back(rules_.size());
  rules_.push_back(std::move(rule));
  return true;
}

std::span<const std::size_t> Abpds::rules_at(ControlId p, SymbolId s) const {
  std::uint64_t key = (std::uint64_t{p} << 32) | s;
  auto it = index_.find(key);
  if (it == index_.end()) return {};
  return it->second;
}

void Abpds::mark_accepting(ControlId p) {
  accepting_.grow(p + 1);
  accepting_.set(p);
}

std::vector<std::pair<std::size_t, std::vector<Config>>> abpds_successor_sets(const Abpds& bp,
                                                                              const Config& c) {
  std::vector<std::pair<std::size_t, std::vector<Config>>> out;
  if (c.stack.empty()) return out;
  for (std::size_t idx : bp.rules_at(c.control, c.stack.front())) {
    const AbpdsRule& rule = bp.rules()[idx];
    std::vector<Config> branch;
    branch.reserve(rule.targets.size());
    for (const AbpdsTarget& t : rule.targets) {
      Config nxt;
      nxt.control = t.control;
      nxt.stack.assign(t.word.begin(), t.word.end());
      nxt.stack.insert(nxt.stack.end(), c.stack.begin() + 1, c.stack.end());
      branch.push_back(std::move(nxt));
    }
    out.emplace_back(idx, std::move(branch));
  }
  return out;
}

std::string dump_abpds(const Abpds& bp) {
  std::ostringstream out;
  for (std::size_t p = 0; p < bp.control_count(); ++p) {
    out << "control " << bp.control_name(static_cast<ControlId>(p));
    if (bp.is_accepting(static_cast<ControlId>(p))) out << " accepting";
    out << "\n";
  }
  for (std::size_t s = 0; s < bp.alphabet_size(); ++s)
    out << "symbol " << bp.symbol_name(static_cast<SymbolId>(s)) << "\n";
  for (const AbpdsRule& rule : bp.rules()) {
    out << "rule " << bp.control_name(rule.from_control) << " " << bp.symbol_name(rule.from_symbol)
        << " ->";
    if (rule.targets.empty()) out << " true";
    for (std::size_t i = 0; i < rule.targets.size(); ++i) {
      if (i) out << " &";
      out << " (" << bp.control_name(rule.targets[i].control) << ",";
      for (SymbolId s : rule.targets[i].word) out << " " << bp.symbol_name(s);
      out << ")";
    }
    out << "\n";
  }
  return out.str();
}

Config BuiltProduct::map_config(const Config& pds_config) const {
  Config out = pds_config;
  out.control = query_control[pds_config.control];
  return out;
}

Abpds abpds_from_pds(const LabelledPds& pds, std::span<const ControlId> accepting) {
  Abpds bp;
  for (std::size_t p = 0; p < pds.control_count(); ++p)
    bp.add_control(pds.control_name(static_cast<ControlId>(p)));
  for (std::size_t s = 0; s < pds.alphabet_size(); ++s)
    bp.add_symbol(pds.symbol_name(static_cast<SymbolId>(s)));
  for (const LabelledRule& r : pds.rules())
    bp.add_rule(AbpdsRule{r.from_control, r.from_symbol, {AbpdsTarget{r.to_control, r.push}}});
  for (ControlId p : accepting) bp.mark_accepting(p);
  return bp;
}

namespace {

// Id layout of the product: plain controls and symbols keep the pds ids so
// configurations carry over unchanged; tagged copies and the trap follow.
struct Layout {
  std::size_t P, G, CL;

  ControlId plain(ControlId p) const { return p; }
  ControlId tagged(ControlId p, std::size_t k) const {
    return static_cast<ControlId>(P + p * CL + k);
  }
  ControlId trap() const { return static_cast<ControlId>(P + P * CL); }

  SymbolId sym(SymbolId g) const { return g; }
  SymbolId sym_tagged(SymbolId g, std::size_t k) const {
    return static_cast<SymbolId>(G + g * CL + k);
  }
  SymbolId sym_trap() const { return static_cast<SymbolId>(G + G * CL); }
};

struct Builder {
  const LabelledPds& pds;
  Abpds bp;
  std::vector<FormulaPtr> cl;
  std::map<std::string, std::size_t> clidx;
  Layout lay;

  explicit Builder(const LabelledPds& pds_in, const FormulaPtr& phi) : pds(pds_in) {
    cl = closure(phi);
    lay.P = pds.control_count();
    lay.G = pds.alphabet_size();
    lay.CL = cl.size();
    for (std::size_t k = 0; k < cl.size(); ++k) clidx[to_string(cl[k])] = k;
    for (std::size_t p = 0; p < lay.P; ++p)
      bp.add_control(pds.control_name(static_cast<ControlId>(p)));
    for (std::size_t p = 0; p < lay.P; ++p)
      for (std::size_t k = 0; k < lay.CL; ++k)
        bp.add_control("[" + pds.control_name(static_cast<ControlId>(p)) + "," +
                       to_string(cl[k]) + "]");
    bp.add_control("_trap");
    for (std::size_t g = 0; g < lay.G; ++g)
      bp.add_symbol(pds.symbol_name(static_cast<SymbolId>(g)));
    for (std::size_t g = 0; g < lay.G; ++g)
      for (std::size_t k = 0; k < lay.CL; ++k)
        bp.add_symbol("[" + pds.symbol_name(static_cast<SymbolId>(g)) + "," + to_string(cl[k]) +
                      "]");
    bp.add_symbol("_gbot");
  }

  std::size_t index_of(const FormulaPtr& f) const { return clidx.at(to_string(f)); }

  static void push_unique(std::vector<AbpdsTarget>& targets, AbpdsTarget t) {
    if (std::find(targets.begin(), targets.end(), t) == targets.end())
      targets.push_back(std::move(t));
  }

  AbpdsTarget here(ControlId p, std::size_t k, SymbolId g) const {
    return AbpdsTarget{lay.tagged(p, k), {lay.sym(g)}};
  }

  AbpdsTarget step_target(const LabelledRule& r, std::size_t k) const {
    std::vector<SymbolId> word(r.push.begin(), r.push.end());
    return AbpdsTarget{lay.tagged(r.to_control, k), std::move(word)};
  }

  AbpdsTarget call_target(const LabelledRule& r, std::size_t k) const {
    return AbpdsTarget{lay.plain(r.to_control), {r.push[0], lay.sym_tagged(r.push[1], k)}};
  }

  AbpdsTarget trap_target() const { return AbpdsTarget{lay.trap(), {lay.sym_trap()}}; }

  void add(ControlId from, SymbolId sym, std::vector<AbpdsTarget> targets) {
    bp.add_rule(AbpdsRule{from, sym, std::move(targets)});
  }

  // Emits the rules for closure member k read at (p, g). Atom and NegAtom
  // are handled by the caller, which knows the valuation style.
  void emit(std::size_t k, ControlId p, SymbolId g) {
    const FormulaPtr& f = cl[k];
    const ControlId from = lay.tagged(p, k);
    const SymbolId sym = lay.sym(g);
    auto rules = pds.rules_at(p, g);
    switch (f->kind()) {
      case FormulaKind::True:
        add(from, sym, {AbpdsTarget{from, {sym}}});
        break;
      case FormulaKind::False:
      case FormulaKind::Atom:
      case FormulaKind::NegAtom:
        break;
      case FormulaKind::And:
        add(from, sym, {here(p, index_of(f->left()), g), here(p, index_of(f->right()), g)});
        break;
      case FormulaKind::Or:
        add(from, sym, {here(p, index_of(f->left()), g)});
        add(from, sym, {here(p, index_of(f->right()), g)});
        break;
      case FormulaKind::ExistsNext: {
        std::size_t k1 = index_of(f->left());
        if (f->step() == StepKind::Global) {
          for (std::size_t ri : rules) add(from, sym, {step_target(pds.rules()[ri], k1)});
        } else {
          bool any_ret = false;
          for (std::size_t ri : rules) {
            const LabelledRule& r = pds.rules()[ri];
            if (r.kind == RuleKind::Call)
              add(from, sym, {call_target(r, k1)});
            else if (r.kind == RuleKind::Int)
              add(from, sym, {step_target(r, k1)});
            else
              any_ret = true;
          }
          if (any_ret) add(from, sym, {trap_target()});
        }
        break;
      }
      case FormulaKind::ForallNext: {
        std::size_t k1 = index_of(f->left());
        std::vector<AbpdsTarget> all;
        if (f->step() == StepKind::Global) {
          for (std::size_t ri : rules) push_unique(all, step_target(pds.rules()[ri], k1));
        } else {
          bool any_ret = false;
          for (std::size_t ri : rules) {
            const LabelledRule& r = pds.rules()[ri];
            if (r.kind == RuleKind::Call)
              push_unique(all, call_target(r, k1));
            else if (r.kind == RuleKind::Int)
              push_unique(all, step_target(r, k1));
            else
              any_ret = true;
          }
          if (any_ret) push_unique(all, trap_target());
        }
        add(from, sym, std::move(all));
        break;
      }
      case FormulaKind::ExistsUntil:
      case FormulaKind::ForallUntil: {
        std::size_t k1 = index_of(f->left());
        std::size_t k2 = index_of(f->right());
        add(from, sym, {here(p, k2, g)});
        emit_path_step(f, k, p, g, {here(p, k1, g)});
        break;
      }
      case FormulaKind::ExistsRelease:
      case FormulaKind::ForallRelease: {
        std::size_t k1 = index_of(f->left());
        std::size_t k2 = index_of(f->right());
        add(from, sym, {here(p, k2, g), here(p, k1, g)});
        emit_path_step(f, k, p, g, {here(p, k2, g)});
        break;
      }
    }
  }

  // Second half of the Until/Release rules: pair the carried obligation with
  // the recursion into each successor branch. Existential quantifiers split
  // into one rule per branch; universal ones fold the branches into a single
  // conjunctive rule (empty when no pds rule applies).
  void emit_path_step(const FormulaPtr& f, std::size_t k, ControlId p, SymbolId g,
                      std::vector<AbpdsTarget> carry) {
    const ControlId from = lay.tagged(p, k);
    const SymbolId sym = lay.sym(g);
    const bool forall =
        f->kind() == FormulaKind::ForallUntil || f->kind() == FormulaKind::ForallRelease;
    auto rules = pds.rules_at(p, g);
    std::vector<AbpdsTarget> all = forall ? std::vector<AbpdsTarget>{} : carry;
    auto branch = [&](std::vector<AbpdsTarget> targets) {
      if (forall) {
        for (AbpdsTarget& t : targets) push_unique(all, std::move(t));
      } else {
        add(from, sym, std::move(targets));
      }
    };
    for (std::size_t ri : rules) {
      const LabelledRule& r = pds.rules()[ri];
      if (f->step() == StepKind::Global) {
        std::vector<AbpdsTarget> t = carry;
        push_unique(t, step_target(r, k));
        branch(std::move(t));
      } else if (r.kind == RuleKind::Call) {
        std::vector<AbpdsTarget> t = carry;
        push_unique(t, call_target(r, k));
        branch(std::move(t));
      } else if (r.kind == RuleKind::Int) {
        std::vector<AbpdsTarget> t = carry;
        push_unique(t, step_target(r, k));
        branch(std::move(t));
      } else {
        branch({trap_target()});
      }
    }
    if (forall) add(from, sym, std::move(all));
  }

  // Parts shared by both valuation styles: the embedded pds rules, the
  // per-member rules over all (p, gamma), the return extraction rules, the
  // trap loop, and the acceptance marks that do not depend on atoms.
  void emit_common() {
    for (const LabelledRule& r : pds.rules())
      bp.add_rule(AbpdsRule{lay.plain(r.from_control), lay.sym(r.from_symbol),
                            {AbpdsTarget{lay.plain(r.to_control),
                                         {r.push.begin(), r.push.end()}}}});
    for (std::size_t k = 0; k < lay.CL; ++k)
      for (ControlId p = 0; p < lay.P; ++p)
        for (SymbolId g = 0; g < lay.G; ++g) emit(k, p, g);
    for (const LabelledRule& r : pds.rules()) {
      if (r.kind != RuleKind::Ret) continue;
      for (SymbolId g = 0; g < lay.G; ++g)
        for (std::size_t k = 0; k < lay.CL; ++k)
          add(lay.plain(r.to_control), lay.sym_tagged(g, k),
              {AbpdsTarget{lay.tagged(r.to_control, k), {lay.sym(g)}}});
    }
    add(lay.trap(), lay.sym_trap(), {trap_target()});
    for (std::size_t k = 0; k < lay.CL; ++k) {
      if (cl[k]->kind() == FormulaKind::True || cl[k]->is_release())
        for (ControlId p = 0; p < lay.P; ++p) bp.mark_accepting(lay.tagged(p, k));
    }
  }

  BuiltProduct finish(const FormulaPtr& phi) {
    BuiltProduct out;
    out.bp = std::move(bp);
    out.query_control.resize(lay.P);
    std::size_t kphi = index_of(phi);
    for (ControlId p = 0; p < lay.P; ++p) out.query_control[p] = lay.tagged(p, kphi);
    return out;
  }
};

}  // namespace

BuiltProduct build_standard(const LabelledPds& pds, const FormulaPtr& phi,
                            const std::map<std::string, std::vector<ControlId>>& valuation) {
  Builder b(pds, phi);
  auto holds = [&](const std::string& atom, ControlId p) {
    auto it = valuation.find(atom);
    if (it == valuation.end())
      throw Error(ErrorCode::UnknownAtom, "no valuation for atom '" + atom + "'");
    return std::find(it->second.begin(), it->second.end(), p) != it->second.end();
  };
  b.emit_common();
  for (std::size_t k = 0; k < b.lay.CL; ++k) {
    const FormulaPtr& f = b.cl[k];
    if (f->kind() != FormulaKind::Atom && f->kind() != FormulaKind::NegAtom) continue;
    bool positive = f->kind() == FormulaKind::Atom;
    for (ControlId p = 0; p < b.lay.P; ++p) {
      if (holds(f->atom(), p) != positive) continue;
      ControlId from = b.lay.tagged(p, k);
      for (SymbolId g = 0; g < b.lay.G; ++g)
        b.add(from, b.lay.sym(g), {AbpdsTarget{from, {b.lay.sym(g)}}});
      b.bp.mark_accepting(from);
    }
  }
  return b.finish(phi);
}

namespace {

// Every control needs an entry state before complementing or embedding;
// controls without one accept nothing.
MultiAutomaton complete_ma(const MultiAutomaton& ma, std::size_t control_count) {
  MultiAutomaton out = ma;
  for (ControlId p = 0; p < control_count; ++p)
    if (!out.initial(p)) out.set_initial(p, out.add_state());
  return out;
}

}  // namespace

BuiltProduct build_regular(const LabelledPds& pds, const FormulaPtr& phi,
                           const std::map<std::string, MultiAutomaton>& valuation) {
  Builder b(pds, phi);
  b.emit_common();
  // One embedded word automaton per positive atom and per negated atom; its
  // states become extra product controls that consume the stack.
  auto embed = [&](const std::string& display, const MultiAutomaton& ma,
                   std::span<const std::pair<ControlId, std::size_t>> entries) {
    std::vector<ControlId> states(ma.state_count());
    for (std::size_t q = 0; q < ma.state_count(); ++q)
      states[q] = b.bp.add_control("_" + display + "_" + std::to_string(q));
    for (const auto& t : ma.transitions()) {
      b.add(states[t.from], b.lay.sym(t.symbol), {AbpdsTarget{states[t.to], {}}});
      // A tagged return cell stands for its plain symbol, so the scan reads
      // through the annotation.
      for (std::size_t k = 0; k < b.lay.CL; ++k)
        b.add(states[t.from], b.lay.sym_tagged(t.symbol, k), {AbpdsTarget{states[t.to], {}}});
    }
    // The trap symbol never occurs inside a stack a query can produce; an
    // absorbing loop keeps the scan from dying mid-word there, which would
    // otherwise let accepting states pop unboundedly often before getting
    // stuck and stall the outer region iteration on junk configurations.
    for (std::size_t q = 0; q < ma.state_count(); ++q)
      b.add(states[q], b.lay.sym_trap(), {AbpdsTarget{states[q], {b.lay.sym_trap()}}});
    for (std::size_t q = 0; q < ma.state_count(); ++q)
      if (ma.is_final(static_cast<StateId>(q))) {
        b.add(states[q], kBottomSymbol, {AbpdsTarget{states[q], {kBottomSymbol}}});
        b.bp.mark_accepting(states[q]);
      }
    for (const auto& [p, k] : entries) {
      ControlId from = b.lay.tagged(p, k);
      auto init = ma.initial(p);
      for (SymbolId g = 0; g < b.lay.G; ++g)
        b.add(from, b.lay.sym(g), {AbpdsTarget{states[*init], {b.lay.sym(g)}}});
    }
  };
  std::map<std::string, std::vector<std::size_t>> pos, neg;
  for (std::size_t k = 0; k < b.lay.CL; ++k) {
    const FormulaPtr& f = b.cl[k];
    if (f->kind() == FormulaKind::Atom) pos[f->atom()].push_back(k);
    if (f->kind() == FormulaKind::NegAtom) neg[f->atom()].push_back(k);
  }
  auto lookup = [&](const std::string& atom) -> const MultiAutomaton& {
    auto it = valuation.find(atom);
    if (it == valuation.end())
      throw Error(ErrorCode::UnknownAtom, "no valuation for atom '" + atom + "'");
    return it->second;
  };
  for (const auto& [atom, ks] : pos) {
    MultiAutomaton ma = complete_ma(lookup(atom), b.lay.P);
    std::vector<std::pair<ControlId, std::size_t>> entries;
    for (std::size_t k : ks)
      for (ControlId p = 0; p < b.lay.P; ++p) entries.emplace_back(p, k);
    embed("ap_" + atom, ma, entries);
  }
  for (const auto& [atom, ks] : neg) {
    MultiAutomaton ma = ma_complement(complete_ma(lookup(atom), b.lay.P));
    std::vector<std::pair<ControlId, std::size_t>> entries;
    for (std::size_t k : ks)
      for (ControlId p = 0; p < b.lay.P; ++p) entries.emplace_back(p, k);
    embed("nap_" + atom, ma, entries);
  }
  return b.finish(phi);
}

}  // namespace bcaret
