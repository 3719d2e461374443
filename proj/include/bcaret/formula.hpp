#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bcaret/errors.hpp"

namespace bcaret {

enum class StepKind { Global, Abstract };

enum class FormulaKind {
  True,
  False,
  Atom,
  NegAtom,
  And,
  Or,
  ExistsNext,
  ForallNext,
  ExistsUntil,
  ForallUntil,
  ExistsRelease,
  ForallRelease,
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable formula node in positive normal form: negation occurs only on
// atoms. Temporal nodes carry the step kind (global or abstract).
class Formula {
 public:
  FormulaKind kind() const { return kind_; }
  StepKind step() const { return step_; }
  const std::string& atom() const { return atom_; }
  const FormulaPtr& left() const { return left_; }
  const FormulaPtr& right() const { return right_; }

  bool is_temporal() const { return kind_ >= FormulaKind::ExistsNext; }
  bool is_release() const {
    return kind_ == FormulaKind::ExistsRelease || kind_ == FormulaKind::ForallRelease;
  }

  static FormulaPtr make_true();
  static FormulaPtr make_false();
  static FormulaPtr make_atom(std::string name);
  static FormulaPtr make_neg_atom(std::string name);
  static FormulaPtr make_and(FormulaPtr a, FormulaPtr b);
  static FormulaPtr make_or(FormulaPtr a, FormulaPtr b);
  static FormulaPtr make_next(bool forall, StepKind step, FormulaPtr f);
  static FormulaPtr make_until(bool forall, StepKind step, FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr make_release(bool forall, StepKind step, FormulaPtr lhs, FormulaPtr rhs);

 private:
  Formula() = default;
  friend struct FormulaBuilder;

  FormulaKind kind_ = FormulaKind::True;
  StepKind step_ = StepKind::Global;
  std::string atom_;
  FormulaPtr left_;
  FormulaPtr right_;
};

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

// Canonical rendering; equal strings iff structurally equal.
std::string to_string(const FormulaPtr& f);

// Dual of a PNF formula (still PNF): atoms flip polarity, And/Or and
// Until/Release swap, E/A quantifiers swap, step kinds are preserved.
FormulaPtr negate_pnf(const FormulaPtr& f);

// Subformula closure in post-order of the syntax tree, keeping the first
// occurrence of each structurally distinct member.
std::vector<FormulaPtr> closure(const FormulaPtr& f);

// True when some temporal operator in f uses the abstract step kind.
bool uses_abstract_steps(const FormulaPtr& f);

// Atom names appearing positively / under negation, each sorted and unique.
std::vector<std::string> positive_atoms(const FormulaPtr& f);
std::vector<std::string> negated_atoms(const FormulaPtr& f);

FormulaPtr parse_formula(std::string_view text);

}  // namespace bcaret
