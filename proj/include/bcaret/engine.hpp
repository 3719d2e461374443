#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bcaret/confsets.hpp"
#include "bcaret/formula.hpp"
#include "bcaret/pds.hpp"
#include "bcaret/product.hpp"

namespace bcaret {

struct EngineOptions {
  int max_outer_iterations = 64;
  int oracle_bound = 8;
};

enum class Outcome { Sat, Unsat, Unknown };

const char* outcome_name(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  int iterations = 0;
  std::size_t region_states = 0;
  std::size_t region_transitions = 0;
  // True when the outer iteration reached a fixpoint, making both answers
  // exact rather than over-approximate.
  bool certified = false;
};

// Universal automaton: accepts every configuration of bp.
AltMultiAutomaton ama_universal(const Abpds& bp);

// Accepts exactly the given configurations.
AltMultiAutomaton ama_for_configs(const Abpds& bp, std::span<const Config> configs);

// Saturation: extends `target` with transitions until it accepts exactly the
// configurations from which bp can reach the target language. The input's
// initial states must have no incoming transitions.
AltMultiAutomaton pre_star(const Abpds& bp, const AltMultiAutomaton& target);

struct Region {
  AltMultiAutomaton automaton;
  bool converged = false;
  int iterations = 0;
};

// Downward iteration towards the set of configurations admitting an
// accepting run. On convergence the automaton is exact; at the iteration cap
// it is an over-approximation (converged=false).
Region accepting_region(const Abpds& bp, const EngineOptions& opts = {});

Verdict member(const Abpds& bp, const Config& c, const EngineOptions& opts = {});

enum class GameMode { Pessimistic, Optimistic, Both };
enum class GameResult { Accept, Reject, Unknown };

const char* game_result_name(GameResult r);

// Finite-arena reference check: configurations with stack height above
// `bound` are treated as losing (pessimistic) or winning (optimistic) for
// the run builder. Mode Both returns Accept only when pessimistic wins and
// Reject only when optimistic loses.
GameResult bounded_game_oracle(const Abpds& bp, const Config& c, int bound,
                               GameMode mode = GameMode::Both);

// Atom valuations: plain control sets and/or regular stack predicates.
struct Labelling {
  std::map<std::string, std::vector<ControlId>> sets;
  std::map<std::string, MultiAutomaton> automata;

  bool has_regular() const { return !automata.empty(); }
};

struct OracleLimits {
  int max_height = 12;
  std::size_t max_nodes = 200000;
};

// Direct fixpoint evaluation over the explored configuration space. Returns
// Unknown when exploration hits a limit before closing.
Outcome semantic_oracle(const LabelledPds& pds, const FormulaPtr& phi, const Labelling& labels,
                        const Config& c, const OracleLimits& limits = {});

// Route to the right product builder: regular when `labels` holds any
// automaton or force_regular is set, with plain control sets lifted to
// whole-stack automata; otherwise the state-set construction.
BuiltProduct build_product(const LabelledPds& pds, const FormulaPtr& phi, const Labelling& labels,
                           bool force_regular = false);

// End-to-end check: product construction followed by membership.
Verdict model_check(const LabelledPds& pds, const FormulaPtr& phi, const Labelling& labels,
                    const Config& c, const EngineOptions& opts = {}, bool force_regular = false);

}  // namespace bcaret
