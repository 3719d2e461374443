#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bcaret/bits.hpp"
#include "bcaret/confsets.hpp"
#include "bcaret/formula.hpp"
#include "bcaret/pds.hpp"

namespace bcaret {

struct AbpdsTarget {
  ControlId control = 0;
  std::vector<SymbolId> word;  // replacement for the read symbol, top first

  auto operator<=>(const AbpdsTarget&) const = default;
};

// One alternating rule: reading `from_symbol` under `from_control` spawns a
// branch for every entry of `targets`, all of which must accept. An empty
// target set discharges the branch immediately.
struct AbpdsRule {
  ControlId from_control = 0;
  SymbolId from_symbol = 0;
  std::vector<AbpdsTarget> targets;

  auto operator<=>(const AbpdsRule&) const = default;
};

class Abpds {
 public:
  ControlId add_control(std::string name);
  SymbolId add_symbol(std::string name);

  std::size_t control_count() const { return control_names_.size(); }
  std::size_t alphabet_size() const { return symbol_names_.size(); }

  const std::string& control_name(ControlId p) const { return control_names_[p]; }
  std::string symbol_name(SymbolId s) const;

  // Exact duplicates are dropped. Returns true when the rule was new.
  bool add_rule(AbpdsRule rule);

  const std::vector<AbpdsRule>& rules() const { return rules_; }
  std::span<const std::size_t> rules_at(ControlId p, SymbolId s) const;

  void mark_accepting(ControlId p);
  bool is_accepting(ControlId p) const { return p < accepting_.size() && accepting_.test(p); }
  const StateSet& accepting() const { return accepting_; }

 private:
  std::vector<std::string> control_names_;
  std::vector<std::string> symbol_names_;
  std::vector<AbpdsRule> rules_;
  std::map<std::uint64_t, std::vector<std::size_t>> index_;
  StateSet accepting_{0};
};

// (rule index, instantiated successor configurations) for each rule readable
// at the head of c, in rule order. Word instantiation replaces the top symbol
// and keeps the tail.
std::vector<std::pair<std::size_t, std::vector<Config>>> abpds_successor_sets(const Abpds& bp,
                                                                              const Config& c);

std::string dump_abpds(const Abpds& bp);

struct BuiltProduct {
  Abpds bp;
  // pds control -> product control carrying the checked formula
  std::vector<ControlId> query_control;

  // Plain stack symbols share ids between the pds and the product, so the
  // stack carries over unchanged.
  Config map_config(const Config& pds_config) const;
};

// Product of a pds with a formula under a state-set valuation: `valuation`
// maps atom names to the controls where the atom holds. Atoms in the closure
// missing from the map throw UnknownAtom.
BuiltProduct build_standard(const LabelledPds& pds, const FormulaPtr& phi,
                            const std::map<std::string, std::vector<ControlId>>& valuation);

// Product under a regular valuation: each atom denotes a MultiAutomaton over
// the pds controls and alphabet.
BuiltProduct build_regular(const LabelledPds& pds, const FormulaPtr& phi,
                           const std::map<std::string, MultiAutomaton>& valuation);

// Embeds a plain pds as an alternating system (all targets singleton),
// marking `accepting` controls. Shares control and symbol ids with the pds.
Abpds abpds_from_pds(const LabelledPds& pds, std::span<const ControlId> accepting);

}  // namespace bcaret
