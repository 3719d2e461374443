#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bcaret/bits.hpp"
#include "bcaret/pds.hpp"

namespace bcaret {

using StateId = std::uint32_t;

// Finite automaton reading stack words top-down, with one designated entry
// state per control. Words exclude the bottom marker: acceptance of a
// configuration reads the stack with the trailing bottom stripped.
class MultiAutomaton {
 public:
  explicit MultiAutomaton(std::size_t alphabet_size) : alphabet_(alphabet_size) {}

  std::size_t alphabet_size() const { return alphabet_; }

  StateId add_state();
  std::size_t state_count() const { return states_; }

  void set_initial(ControlId control, StateId state);
  std::optional<StateId> initial(ControlId control) const;
  const std::map<ControlId, StateId>& initials() const { return initial_; }

  void add_transition(StateId from, SymbolId symbol, StateId to);
  void mark_final(StateId state);
  bool is_final(StateId state) const { return finals_.test(state); }
  const StateSet& finals() const { return finals_; }

  struct Transition {
    StateId from;
    SymbolId symbol;
    StateId to;
  };
  const std::vector<Transition>& transitions() const { return delta_; }

  StateSet post(const StateSet& from, SymbolId symbol) const;

 private:
  std::size_t alphabet_;
  std::size_t states_ = 0;
  std::map<ControlId, StateId> initial_;
  std::vector<Transition> delta_;
  StateSet finals_{0};
};

bool ma_accepts(const MultiAutomaton& ma, const Config& c);

// Complement over the same control domain: for each control the accepted
// stack-word language is inverted with respect to the full alphabet.
MultiAutomaton ma_complement(const MultiAutomaton& ma);

// The configurations whose control lies in `members`, with any stack.
MultiAutomaton ma_from_control_set(std::size_t control_count, std::size_t alphabet_size,
                                   std::span<const ControlId> members);

inline constexpr StateId kInvalidState = std::numeric_limits<StateId>::max();

// Alternating variant: a transition maps (state, symbol) to a set of states
// that must all continue accepting the rest of the word. Words here include
// the bottom marker. Per (state, symbol) the stored target sets form an
// antichain of minimal elements; a superset target is redundant because a
// smaller obligation set accepts every word a larger one does.
class AltMultiAutomaton {
 public:
  StateId add_state();
  std::size_t state_count() const { return states_; }

  void set_initial(ControlId control, StateId state);
  StateId initial(ControlId control) const;
  bool has_initial(ControlId control) const {
    return control < initial_.size() && initial_[control] != kInvalidState;
  }
  std::size_t control_count() const { return initial_.size(); }

  // Returns true when the target set survived, i.e. it was not dominated by
  // an existing target set for the same (from, symbol). Dominated existing
  // sets are evicted.
  bool add_transition(StateId from, SymbolId symbol, const StateSet& targets);

  void mark_final(StateId state);
  bool is_final(StateId state) const { return state < finals_.size() && finals_.test(state); }
  const StateSet& finals() const { return finals_; }

  // Antichain of target sets for (from, symbol); empty when none.
  std::span<const StateSet> targets_at(StateId from, SymbolId symbol) const;

  template <typename Fn>
  void for_each_transition(Fn&& fn) const {
    for (const auto& [key, chain] : delta_)
      for (const StateSet& t : chain.elems())
        fn(static_cast<StateId>(key >> 32), static_cast<SymbolId>(key & 0xffffffffu), t);
  }

  std::size_t transition_count() const;

 private:
  std::size_t states_ = 0;
  std::vector<StateId> initial_;
  std::map<std::uint64_t, Antichain> delta_;
  StateSet finals_{0};
};

// A frontier is one way to discharge a word: the set of states reached after
// reading it, all of which must then accept the remainder. The result is the
// antichain of minimal frontiers; an empty frontier means the word is
// discharged outright.
using FrontierSet = std::vector<StateSet>;

FrontierSet ama_frontiers(const AltMultiAutomaton& ama, StateId start,
                          std::span<const SymbolId> word);

// Acceptance of a configuration: the stack (including bottom) read from the
// control's initial state admits a frontier lying inside the final states.
bool ama_accepts(const AltMultiAutomaton& ama, const Config& c);

// Language inclusion restricted to configuration-shaped words: every word in
// alphabet* followed by the bottom marker accepted by `a` from initial(x) is
// accepted by `b` from initial(y), for every pair (x, y). An empty pair list
// means the identity pairing over all controls either side knows.
// `alphabet` lists the non-bottom symbols to search over.
bool ama_included(const AltMultiAutomaton& a, const AltMultiAutomaton& b,
                  std::span<const SymbolId> alphabet,
                  std::span<const std::pair<ControlId, ControlId>> pairs = {});

// Copy with states unreachable from the initial states removed. If `remap`
// is non-null it receives old-state -> new-state (kInvalidState when dropped).
AltMultiAutomaton prune_unreachable(const AltMultiAutomaton& ama,
                                    std::vector<StateId>* remap = nullptr);

}  // namespace bcaret
