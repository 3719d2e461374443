#include "bcaret/engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace bcaret {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Sat: return "SAT";
    case Outcome::Unsat: return "UNSAT";
    case Outcome::Unknown: return "UNKNOWN";
  }
  return "?";
}

namespace {

std::vector<SymbolId> product_symbols(const Abpds& bp) {
  std::vector<SymbolId> out;
  out.reserve(bp.alphabet_size() + 1);
  for (SymbolId s = 0; s < bp.alphabet_size(); ++s) out.push_back(s);
  out.push_back(kBottomSymbol);
  return out;
}

// Enumerates every minimal way to discharge all targets of `rule` in A: one
// frontier per target word read from the target control's initial state,
// united across targets. Calls fn(union) per combination.
template <typename Fn>
void for_each_rule_combo(const AltMultiAutomaton& A, const AbpdsRule& rule, Fn&& fn) {
  std::vector<FrontierSet> frontier_sets;
  frontier_sets.reserve(rule.targets.size());
  for (const AbpdsTarget& t : rule.targets) {
    StateId init = A.initial(t.control);
    if (init == kInvalidState) return;
    FrontierSet f = ama_frontiers(A, init, t.word);
    if (f.empty()) return;
    frontier_sets.push_back(std::move(f));
  }
  StateSet acc(A.state_count());
  auto rec = [&](auto&& self, std::size_t i, const StateSet& cur) -> void {
    if (i == frontier_sets.size()) {
      fn(cur);
      return;
    }
    for (const StateSet& r : frontier_sets[i]) {
      StateSet next = cur;
      next.unite(r.resized(A.state_count()));
      self(self, i + 1, next);
    }
  };
  rec(rec, 0, acc);
}

}  // namespace

AltMultiAutomaton ama_universal(const Abpds& bp) {
  AltMultiAutomaton out;
  for (ControlId p = 0; p < bp.control_count(); ++p) out.set_initial(p, out.add_state());
  StateSet none(out.state_count());
  for (ControlId p = 0; p < bp.control_count(); ++p)
    for (SymbolId s : product_symbols(bp)) out.add_transition(out.initial(p), s, none);
  return out;
}

AltMultiAutomaton ama_for_configs(const Abpds& bp, std::span<const Config> configs) {
  AltMultiAutomaton out;
  for (ControlId p = 0; p < bp.control_count(); ++p) out.set_initial(p, out.add_state());
  for (const Config& c : configs) {
    StateId cur = out.initial(c.control);
    for (SymbolId s : c.stack) {
      StateId next = out.add_state();
      StateSet t(out.state_count());
      t.set(next);
      out.add_transition(cur, s, t);
      cur = next;
    }
    out.mark_final(cur);
  }
  return out;
}

AltMultiAutomaton pre_star(const Abpds& bp, const AltMultiAutomaton& target) {
  AltMultiAutomaton A = target;
  const auto& rules = bp.rules();

  // Rule re-evaluation dependencies: a new transition (q, s, _) can only
  // change frontiers of rules whose target word starts at q with s, or
  // mentions s beyond the first position (read from an unknown state).
  std::map<std::uint64_t, std::vector<std::size_t>> by_first;
  std::map<SymbolId, std::vector<std::size_t>> by_later;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (const AbpdsTarget& t : rules[i].targets) {
      if (t.word.empty()) continue;
      StateId init = A.initial(t.control);
      by_first[(std::uint64_t{init} << 32) | t.word[0]].push_back(i);
      for (std::size_t j = 1; j < t.word.size(); ++j) by_later[t.word[j]].push_back(i);
    }
  }
  std::deque<std::size_t> queue;
  std::vector<bool> queued(rules.size(), true);
  for (std::size_t i = 0; i < rules.size(); ++i) queue.push_back(i);

  auto wake = [&](StateId q, SymbolId s) {
    auto push_all = [&](const std::vector<std::size_t>* v) {
      if (!v) return;
      for (std::size_t i : *v)
        if (!queued[i]) {
          queued[i] = true;
          queue.push_back(i);
        }
    };
    auto itf = by_first.find((std::uint64_t{q} << 32) | s);
    push_all(itf == by_first.end() ? nullptr : &itf->second);
    auto itl = by_later.find(s);
    push_all(itl == by_later.end() ? nullptr : &itl->second);
  };

  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    queued[i] = false;
    const AbpdsRule& rule = rules[i];
    StateId from = A.initial(rule.from_control);
    if (from == kInvalidState) continue;
    for_each_rule_combo(A, rule, [&](const StateSet& u) {
      if (A.add_transition(from, rule.from_symbol, u)) wake(from, rule.from_symbol);
    });
  }
  return A;
}

namespace {

// One refinement step: accepts configurations with an accepting control that
// can take a rule whose branches all land inside Z. Z's states are kept (the
// frontier unions continue there); a fresh initial layer is stacked on top.
AltMultiAutomaton restrict_step(const Abpds& bp, const AltMultiAutomaton& Z) {
  AltMultiAutomaton G = Z;
  std::vector<StateId> fresh(bp.control_count());
  for (ControlId p = 0; p < bp.control_count(); ++p) fresh[p] = G.add_state();
  for (const AbpdsRule& rule : bp.rules()) {
    if (!bp.is_accepting(rule.from_control)) continue;
    for_each_rule_combo(Z, rule, [&](const StateSet& u) {
      G.add_transition(fresh[rule.from_control], rule.from_symbol,
                       u.resized(G.state_count()));
    });
  }
  for (ControlId p = 0; p < bp.control_count(); ++p) G.set_initial(p, fresh[p]);
  return G;
}

}  // namespace

Region accepting_region(const Abpds& bp, const EngineOptions& opts) {
  std::vector<SymbolId> alphabet;
  for (SymbolId s = 0; s < bp.alphabet_size(); ++s) alphabet.push_back(s);

  Region out;
  AltMultiAutomaton Z = ama_universal(bp);
  for (int it = 1; it <= opts.max_outer_iterations; ++it) {
    out.iterations = it;
    AltMultiAutomaton next = prune_unreachable(pre_star(bp, restrict_step(bp, Z)));
    // The sequence only shrinks, so stability is plain inclusion of the
    // previous round in the new one.
    if (ama_included(Z, next, alphabet)) {
      out.converged = true;
      out.automaton = std::move(next);
      return out;
    }
    Z = std::move(next);
  }
  out.automaton = std::move(Z);
  return out;
}

Verdict member(const Abpds& bp, const Config& c, const EngineOptions& opts) {
  Region region = accepting_region(bp, opts);
  Verdict v;
  v.iterations = region.iterations;
  v.region_states = region.automaton.state_count();
  v.region_transitions = region.automaton.transition_count();
  bool accepted = ama_accepts(region.automaton, c);
  if (!accepted) {
    // Every round over-approximates, so rejection is exact even at the cap.
    v.outcome = Outcome::Unsat;
    v.certified = true;
  } else if (region.converged) {
    v.outcome = Outcome::Sat;
    v.certified = true;
  } else {
    v.outcome = Outcome::Unknown;
    v.certified = false;
  }
  return v;
}

}  // namespace bcaret
