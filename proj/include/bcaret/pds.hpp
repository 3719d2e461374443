#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bcaret/errors.hpp"

namespace bcaret {

using ControlId = std::uint32_t;
using SymbolId = std::uint32_t;

// The stack-bottom marker. It is not part of the declared alphabet, sits
// permanently at the end of every stack, and no rule may read or push it.
inline constexpr SymbolId kBottomSymbol = std::numeric_limits<SymbolId>::max();

enum class RuleKind { Call, Int, Ret };

const char* rule_kind_name(RuleKind kind);

struct LabelledRule {
  ControlId from_control = 0;
  SymbolId from_symbol = 0;
  ControlId to_control = 0;
  std::vector<SymbolId> push;  // replacement for from_symbol, top first
  RuleKind kind = RuleKind::Int;
};

class LabelledPds {
 public:
  ControlId add_control(std::string name);
  SymbolId add_symbol(std::string name);

  std::size_t control_count() const { return control_names_.size(); }
  std::size_t alphabet_size() const { return symbol_names_.size(); }

  const std::string& control_name(ControlId p) const { return control_names_[p]; }
  std::string symbol_name(SymbolId s) const;

  std::optional<ControlId> find_control(std::string_view name) const;
  std::optional<SymbolId> find_symbol(std::string_view name) const;

  // Validates arity against the kind and rejects any use of the bottom
  // marker; throws Error on violation. Returns the rule's index.
  std::size_t add_rule(LabelledRule rule);

  const std::vector<LabelledRule>& rules() const { return rules_; }
  std::span<const std::size_t> rules_at(ControlId p, SymbolId s) const;

 private:
  std::vector<std::string> control_names_;
  std::vector<std::string> symbol_names_;
  std::vector<LabelledRule> rules_;
  // (control, symbol) -> rule indices in declaration order
  std::map<std::uint64_t, std::vector<std::size_t>> index_;
};

// A configuration. The stack is stored top-first and always ends with
// kBottomSymbol, which appears nowhere else.
struct Config {
  ControlId control = 0;
  std::vector<SymbolId> stack;

  auto operator<=>(const Config&) const = default;
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const;
};

Config make_config(ControlId control, std::initializer_list<SymbolId> symbols_above_bottom);

// (rule index, successor) pairs in rule declaration order.
std::vector<std::pair<std::size_t, Config>> immediate_successors(const LabelledPds& pds,
                                                                 const Config& c);

// An abstract-successor target: either a configuration or the distinguished
// BOTTOM outcome a return step maps to. BOTTOM sorts before every config.
struct AbstractTarget {
  std::optional<Config> config;  // nullopt encodes BOTTOM

  bool is_bottom() const { return !config.has_value(); }
  auto operator<=>(const AbstractTarget&) const = default;
};

struct AbstractSuccessors {
  std::vector<AbstractTarget> targets;  // sorted, unique
  // True when every explored branch matched, reached BOTTOM, or ran out of
  // successors within the step budget.
  bool complete = true;
};

AbstractSuccessors abstract_successors(const LabelledPds& pds, const Config& c, int budget);

// Least fixpoint of control reachability across balanced pops: pops(p, s)
// holds the controls reachable at the moment s (pushed under control p) has
// been consumed together with everything pushed above it.
class PopSummaries {
 public:
  explicit PopSummaries(const LabelledPds& pds);

  std::span<const ControlId> pops(ControlId p, SymbolId s) const;

 private:
  std::size_t alphabet_;
  std::vector<std::vector<ControlId>> table_;
};

enum class PathMode { Global, Abstract };

struct PathPrefix {
  std::vector<Config> configs;
  bool hits_bottom = false;  // abstract path ended in the BOTTOM outcome

  auto operator<=>(const PathPrefix&) const = default;
};

// All successor-path prefixes with exactly `depth` steps, or fewer if the
// path dies or (in abstract mode) ends in BOTTOM first. Sorted, unique.
std::vector<PathPrefix> enumerate_paths(const LabelledPds& pds, const Config& from, PathMode mode,
                                        int depth);

LabelledPds parse_pds(std::string_view text);
Config parse_config(const LabelledPds& pds, std::string_view text);

std::string format_config(const LabelledPds& pds, const Config& c);
std::string dump_pds(const LabelledPds& pds);

}  // namespace bcaret
