#include "bcaret/confsets.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <utility>

namespace bcaret {

StateId MultiAutomaton::add_state() {
  finals_.grow(states_ + 1);
  return static_cast<StateId>(states_++);
}

void MultiAutomaton::set_initial(ControlId control, StateId state) { initial_[control] = state; }

std::optional<StateId> MultiAutomaton::initial(ControlId control) const {
  auto it = initial_.find(control);
  if (it == initial_.end()) return std::nullopt;
  return it->second;
}

void MultiAutomaton::add_transition(StateId from, SymbolId symbol, StateId to) {
  delta_.push_back(Transition{from, symbol, to});
}

void MultiAutomaton::mark_final(StateId state) { finals_.set(state); }

StateSet MultiAutomaton::post(const StateSet& from, SymbolId symbol) const {
  StateSet out(states_);
  for (const Transition& t : delta_)
    if (t.symbol == symbol && from.test(t.from)) out.set(t.to);
  return out;
}

bool ma_accepts(const MultiAutomaton& ma, const Config& c) {
  auto start = ma.initial(c.control);
  if (!start) return false;
  StateSet cur(ma.state_count());
  cur.set(*start);
  for (SymbolId s : c.stack) {
    if (s == kBottomSymbol) break;  // acceptance ignores the bottom marker
    cur = ma.post(cur, s);
    if (cur.empty()) return false;
  }
  return cur.intersects(ma.finals());
}

MultiAutomaton ma_complement(const MultiAutomaton& ma) {
  MultiAutomaton out(ma.alphabet_size());
  // Determinize per control, then invert finals. Each control gets its own
  // component, so the result has fresh, unshared initial states. The subset
  // construction is total: the empty subset is an explicit sink.
  for (const auto& [control, q0] : ma.initials()) {
    std::map<StateSet, StateId> ids;
    std::deque<StateSet> work;
    StateSet start(ma.state_count());
    start.set(q0);
    auto intern = [&](const StateSet& s) {
      auto it = ids.find(s);
      if (it != ids.end()) return it->second;
      StateId id = out.add_state();
      ids.emplace(s, id);
      if (!s.intersects(ma.finals())) out.mark_final(id);
      work.push_back(s);
      return id;
    };
    StateId start_id = intern(start);
    out.set_initial(control, start_id);
    while (!work.empty()) {
      StateSet cur = work.front();
      work.pop_front();
      StateId cur_id = ids.at(cur);
      for (SymbolId s = 0; s < ma.alphabet_size(); ++s)
        out.add_transition(cur_id, s, intern(ma.post(cur, s)));
    }
  }
  return out;
}

MultiAutomaton ma_from_control_set(std::size_t control_count, std::size_t alphabet_size,
                                   std::span<const ControlId> members) {
  MultiAutomaton out(alphabet_size);
  StateId sink = out.add_state();
  out.mark_final(sink);
  for (SymbolId s = 0; s < alphabet_size; ++s) out.add_transition(sink, s, sink);
  for (ControlId p = 0; p < control_count; ++p) {
    StateId init = out.add_state();
    out.set_initial(p, init);
    if (std::find(members.begin(), members.end(), p) != members.end()) {
      out.mark_final(init);
      for (SymbolId s = 0; s < alphabet_size; ++s) out.add_transition(init, s, sink);
    }
  }
  return out;
}

StateId AltMultiAutomaton::add_state() {
  finals_.grow(states_ + 1);
  return static_cast<StateId>(states_++);
}

void AltMultiAutomaton::set_initial(ControlId control, StateId state) {
  if (control >= initial_.size()) initial_.resize(control + 1, kInvalidState);
  initial_[control] = state;
}

StateId AltMultiAutomaton::initial(ControlId control) const {
  return control < initial_.size() ? initial_[control] : kInvalidState;
}

bool AltMultiAutomaton::add_transition(StateId from, SymbolId symbol, const StateSet& targets) {
  std::uint64_t key = (std::uint64_t{from} << 32) | symbol;
  return delta_[key].insert(targets);
}

void AltMultiAutomaton::mark_final(StateId state) {
  finals_.grow(state + 1);
  finals_.set(state);
}

std::span<const StateSet> AltMultiAutomaton::targets_at(StateId from, SymbolId symbol) const {
  std::uint64_t key = (std::uint64_t{from} << 32) | symbol;
  auto it = delta_.find(key);
  if (it == delta_.end()) return {};
  return it->second.elems();
}

std::size_t AltMultiAutomaton::transition_count() const {
  std::size_t n = 0;
  for (const auto& [key, chain] : delta_) n += chain.size();
  return n;
}

namespace {

// All minimal unions obtainable by picking one target set per state of
// `states` on `symbol`. A state without transitions kills the combination.
void step_combinations(const AltMultiAutomaton& ama, const StateSet& states, SymbolId symbol,
                       Antichain& out) {
  std::vector<std::span<const StateSet>> choices;
  bool dead = false;
  states.for_each([&](std::size_t q) {
    auto alts = ama.targets_at(static_cast<StateId>(q), symbol);
    if (alts.empty()) dead = true;
    choices.push_back(alts);
  });
  if (dead) return;
  StateSet acc(ama.state_count());
  auto rec = [&](auto&& self, std::size_t i, const StateSet& cur) -> void {
    if (i == choices.size()) {
      out.insert(cur);
      return;
    }
    for (const StateSet& t : choices[i]) {
      StateSet next = cur;
      next.unite(t.resized(ama.state_count()));
      self(self, i + 1, next);
    }
  };
  rec(rec, 0, acc);
}

}  // namespace

FrontierSet ama_frontiers(const AltMultiAutomaton& ama, StateId start,
                          std::span<const SymbolId> word) {
  Antichain cur;
  StateSet init(ama.state_count());
  init.set(start);
  cur.insert(init);
  for (SymbolId s : word) {
    Antichain next;
    for (const StateSet& frontier : cur.elems()) step_combinations(ama, frontier, s, next);
    cur = std::move(next);
    if (cur.empty()) break;
  }
  return cur.elems();
}

bool ama_accepts(const AltMultiAutomaton& ama, const Config& c) {
  StateId start = ama.initial(c.control);
  if (start == kInvalidState) return false;
  for (const StateSet& frontier : ama_frontiers(ama, start, c.stack))
    if (frontier.subset_of(ama.finals())) return true;
  return false;
}

namespace {

struct IncKey {
  StateSet sa;
  std::vector<StateSet> fb;

  bool operator<(const IncKey& o) const {
    if (sa < o.sa) return true;
    if (o.sa < sa) return false;
    return fb < o.fb;
  }
};

}  // namespace

bool ama_included(const AltMultiAutomaton& a, const AltMultiAutomaton& b,
                  std::span<const SymbolId> alphabet,
                  std::span<const std::pair<ControlId, ControlId>> pairs) {
  // Searches for a configuration-shaped word accepted by `a` but not `b`.
  // A product state pairs one way for `a` to be in the middle of a word (a
  // single frontier) with every way for `b` (its full frontier antichain).
  std::set<IncKey> visited;

  auto b_accepts_here = [&](const std::vector<StateSet>& fb) {
    for (const StateSet& sb : fb) {
      Antichain done;
      step_combinations(b, sb, kBottomSymbol, done);
      for (const StateSet& u : done.elems())
        if (u.subset_of(b.finals())) return true;
    }
    return false;
  };

  auto a_accepts_here = [&](const StateSet& sa) {
    Antichain done;
    step_combinations(a, sa, kBottomSymbol, done);
    for (const StateSet& u : done.elems())
      if (u.subset_of(a.finals())) return true;
    return false;
  };

  auto search = [&](auto&& self, const StateSet& sa, const std::vector<StateSet>& fb) -> bool {
    // b already discharged every obligation: no counterexample below here.
    for (const StateSet& sb : fb)
      if (sb.empty()) return false;
    IncKey key{sa, fb};
    auto sorted = key;
    std::sort(sorted.fb.begin(), sorted.fb.end());
    if (!visited.insert(sorted).second) return false;
    if (a_accepts_here(sa) && !b_accepts_here(fb)) return true;
    for (SymbolId s : alphabet) {
      Antichain bnext;
      for (const StateSet& sb : fb) step_combinations(b, sb, s, bnext);
      Antichain anext;
      step_combinations(a, sa, s, anext);
      for (const StateSet& sa2 : anext.elems())
        if (self(self, sa2, bnext.elems())) return true;
    }
    return false;
  };

  auto pair_holds = [&](ControlId x, ControlId y) {
    if (!a.has_initial(x)) return true;  // a accepts nothing for x
    StateSet sa(a.state_count());
    sa.set(a.initial(x));
    std::vector<StateSet> fb;
    if (b.has_initial(y)) {
      StateSet sb(b.state_count());
      sb.set(b.initial(y));
      fb.push_back(sb);
    }
    return !search(search, sa, fb);
  };

  if (!pairs.empty()) {
    for (const auto& [x, y] : pairs)
      if (!pair_holds(x, y)) return false;
    return true;
  }
  std::size_t controls = std::max(a.control_count(), b.control_count());
  for (ControlId p = 0; p < controls; ++p)
    if (!pair_holds(p, p)) return false;
  return true;
}

AltMultiAutomaton prune_unreachable(const AltMultiAutomaton& ama, std::vector<StateId>* remap) {
  std::vector<bool> reach(ama.state_count(), false);
  std::deque<StateId> work;
  for (ControlId p = 0; p < ama.control_count(); ++p)
    if (ama.has_initial(p) && !reach[ama.initial(p)]) {
      reach[ama.initial(p)] = true;
      work.push_back(ama.initial(p));
    }
  // Reachability follows every member of every target set.
  std::map<StateId, std::vector<std::pair<SymbolId, const StateSet*>>> out_edges;
  ama.for_each_transition([&](StateId from, SymbolId sym, const StateSet& t) {
    out_edges[from].emplace_back(sym, &t);
  });
  while (!work.empty()) {
    StateId q = work.front();
    work.pop_front();
    auto it = out_edges.find(q);
    if (it == out_edges.end()) continue;
    for (auto& [sym, targets] : it->second)
      targets->for_each([&](std::size_t m) {
        if (!reach[m]) {
          reach[m] = true;
          work.push_back(static_cast<StateId>(m));
        }
      });
  }
  std::vector<StateId> map(ama.state_count(), kInvalidState);
  AltMultiAutomaton out;
  for (StateId q = 0; q < ama.state_count(); ++q)
    if (reach[q]) {
      map[q] = out.add_state();
      if (ama.is_final(q)) out.mark_final(map[q]);
    }
  for (ControlId p = 0; p < ama.control_count(); ++p)
    if (ama.has_initial(p)) out.set_initial(p, map[ama.initial(p)]);
  ama.for_each_transition([&](StateId from, SymbolId sym, const StateSet& t) {
    if (!reach[from]) return;
    StateSet nt(out.state_count());
    t.for_each([&](std::size_t m) { nt.set(map[m]); });
    out.add_transition(map[from], sym, nt);
  });
  if (remap) *remap = map;
  return out;
}

}  // namespace bcaret
