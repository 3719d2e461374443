#include "bcaret/formula.hpp"

#include <algorithm>
#include <set>

#include "lexer.hpp"

namespace bcaret {

// Node construction goes through a private builder to keep Formula immutable
// from the outside.
struct FormulaBuilder {
  static FormulaPtr make(FormulaKind kind, StepKind step, std::string atom, FormulaPtr l,
                         FormulaPtr r) {
    auto f = std::shared_ptr<Formula>(new Formula());
    f->kind_ = kind;
    f->step_ = step;
    f->atom_ = std::move(atom);
    f->left_ = std::move(l);
    f->right_ = std::move(r);
    return f;
  }
};

FormulaPtr Formula::make_true() {
  return FormulaBuilder::make(FormulaKind::True, StepKind::Global, "", nullptr, nullptr);
}
FormulaPtr Formula::make_false() {
  return FormulaBuilder::make(FormulaKind::False, StepKind::Global, "", nullptr, nullptr);
}
FormulaPtr Formula::make_atom(std::string name) {
  return FormulaBuilder::make(FormulaKind::Atom, StepKind::Global, std::move(name), nullptr,
                              nullptr);
}
FormulaPtr Formula::make_neg_atom(std::string name) {
  return FormulaBuilder::make(FormulaKind::NegAtom, StepKind::Global, std::move(name), nullptr,
                              nullptr);
}
FormulaPtr Formula::make_and(FormulaPtr a, FormulaPtr b) {
  return FormulaBuilder::make(FormulaKind::And, StepKind::Global, "", std::move(a), std::move(b));
}
FormulaPtr Formula::make_or(FormulaPtr a, FormulaPtr b) {
  return FormulaBuilder::make(FormulaKind::Or, StepKind::Global, "", std::move(a), std::move(b));
}
FormulaPtr Formula::make_next(bool forall, StepKind step, FormulaPtr f) {
  return FormulaBuilder::make(forall ? FormulaKind::ForallNext : FormulaKind::ExistsNext, step, "",
                              std::move(f), nullptr);
}
FormulaPtr Formula::make_until(bool forall, StepKind step, FormulaPtr lhs, FormulaPtr rhs) {
  return FormulaBuilder::make(forall ? FormulaKind::ForallUntil : FormulaKind::ExistsUntil, step,
                              "", std::move(lhs), std::move(rhs));
}
FormulaPtr Formula::make_release(bool forall, StepKind step, FormulaPtr lhs, FormulaPtr rhs) {
  return FormulaBuilder::make(forall ? FormulaKind::ForallRelease : FormulaKind::ExistsRelease,
                              step, "", std::move(lhs), std::move(rhs));
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind()) return false;
  if (a->is_temporal() && a->step() != b->step()) return false;
  if (a->atom() != b->atom()) return false;
  return structurally_equal(a->left(), b->left()) && structurally_equal(a->right(), b->right());
}

namespace {

const char* step_suffix(StepKind s) { return s == StepKind::Global ? "^g" : "^a"; }

}  // namespace

std::string to_string(const FormulaPtr& f) {
  switch (f->kind()) {
    case FormulaKind::True: return "true";
    case FormulaKind::False: return "false";
    case FormulaKind::Atom: return f->atom();
    case FormulaKind::NegAtom: return "!" + f->atom();
    case FormulaKind::And: return "(" + to_string(f->left()) + " && " + to_string(f->right()) + ")";
    case FormulaKind::Or: return "(" + to_string(f->left()) + " || " + to_string(f->right()) + ")";
    case FormulaKind::ExistsNext:
      return std::string("EX") + step_suffix(f->step()) + " " + to_string(f->left());
    case FormulaKind::ForallNext:
      return std::string("AX") + step_suffix(f->step()) + " " + to_string(f->left());
    case FormulaKind::ExistsUntil:
      return "E[ " + to_string(f->left()) + " U" + step_suffix(f->step()) + " " +
             to_string(f->right()) + " ]";
    case FormulaKind::ForallUntil:
      return "A[ " + to_string(f->left()) + " U" + step_suffix(f->step()) + " " +
             to_string(f->right()) + " ]";
    case FormulaKind::ExistsRelease:
      return "E[ " + to_string(f->left()) + " R" + step_suffix(f->step()) + " " +
             to_string(f->right()) + " ]";
    case FormulaKind::ForallRelease:
      return "A[ " + to_string(f->left()) + " R" + step_suffix(f->step()) + " " +
             to_string(f->right()) + " ]";
  }
  return "?";
}

FormulaPtr negate_pnf(const FormulaPtr& f) {
  switch (f->kind()) {
    case FormulaKind::True: return Formula::make_false();
    case FormulaKind::False: return Formula::make_true();
    case FormulaKind::Atom: return Formula::make_neg_atom(f->atom());
    case FormulaKind::NegAtom: return Formula::make_atom(f->atom());
    case FormulaKind::And: return Formula::make_or(negate_pnf(f->left()), negate_pnf(f->right()));
    case FormulaKind::Or: return Formula::make_and(negate_pnf(f->left()), negate_pnf(f->right()));
    case FormulaKind::ExistsNext:
      return Formula::make_next(true, f->step(), negate_pnf(f->left()));
    case FormulaKind::ForallNext:
      return Formula::make_next(false, f->step(), negate_pnf(f->left()));
    case FormulaKind::ExistsUntil:
      return Formula::make_release(true, f->step(), negate_pnf(f->left()),
                                   negate_pnf(f->right()));
    case FormulaKind::ForallUntil:
      return Formula::make_release(false, f->step(), negate_pnf(f->left()),
                                   negate_pnf(f->right()));
    case FormulaKind::ExistsRelease:
      return Formula::make_until(true, f->step(), negate_pnf(f->left()), negate_pnf(f->right()));
    case FormulaKind::ForallRelease:
      return Formula::make_until(false, f->step(), negate_pnf(f->left()), negate_pnf(f->right()));
  }
  return nullptr;
}

namespace {

void closure_walk(const FormulaPtr& f, std::vector<FormulaPtr>& out, std::set<std::string>& seen) {
  if (f->left()) closure_walk(f->left(), out, seen);
  if (f->right()) closure_walk(f->right(), out, seen);
  if (seen.insert(to_string(f)).second) out.push_back(f);
}

}  // namespace

std::vector<FormulaPtr> closure(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  std::set<std::string> seen;
  closure_walk(f, out, seen);
  return out;
}

bool uses_abstract_steps(const FormulaPtr& f) {
  if (!f) return false;
  if (f->is_temporal() && f->step() == StepKind::Abstract) return true;
  return uses_abstract_steps(f->left()) || uses_abstract_steps(f->right());
}

namespace {

void collect_atoms(const FormulaPtr& f, std::set<std::string>& pos, std::set<std::string>& neg) {
  if (!f) return;
  if (f->kind() == FormulaKind::Atom) pos.insert(f->atom());
  if (f->kind() == FormulaKind::NegAtom) neg.insert(f->atom());
  collect_atoms(f->left(), pos, neg);
  collect_atoms(f->right(), pos, neg);
}

}  // namespace

std::vector<std::string> positive_atoms(const FormulaPtr& f) {
  std::set<std::string> pos, neg;
  collect_atoms(f, pos, neg);
  return {pos.begin(), pos.end()};
}

std::vector<std::string> negated_atoms(const FormulaPtr& f) {
  std::set<std::string> pos, neg;
  collect_atoms(f, pos, neg);
  return {neg.begin(), neg.end()};
}

namespace {

const std::set<std::string, std::less<>> kReserved = {"true", "false", "E",  "A",  "EX", "AX",
                                                      "EF",   "AF",    "EG", "AG", "U",  "R"};

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : lex_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    if (!lex_.at_end()) lex_.fail("trailing input after formula");
    return f;
  }

 private:
  StepKind parse_step(const char* op) {
    if (!lex_.accept_punct("^"))
      throw Error(ErrorCode::UnknownOperator, std::string(op) + " needs a step kind '^g' or '^a'",
                  lex_.peek().line, lex_.peek().col);
    const Token t = lex_.peek();
    std::string s = lex_.expect_ident("step kind");
    if (s == "g") return StepKind::Global;
    if (s == "a") return StepKind::Abstract;
    throw Error(ErrorCode::UnknownOperator, "unknown step kind '^" + s + "'", t.line, t.col);
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (lex_.accept_punct("||")) f = Formula::make_or(f, parse_and());
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (lex_.accept_punct("&&")) f = Formula::make_and(f, parse_unary());
    return f;
  }

  FormulaPtr parse_unary() {
    if (lex_.accept_punct("!")) return negate_pnf(parse_unary());
    const Token t = lex_.peek();
    if (t.kind == Token::Punct && t.text == "(") {
      lex_.next();
      FormulaPtr f = parse_or();
      lex_.expect_punct(")");
      return f;
    }
    if (t.kind != Token::Ident) lex_.fail("expected a formula");
    if (t.text == "true") {
      lex_.next();
      return Formula::make_true();
    }
    if (t.text == "false") {
      lex_.next();
      return Formula::make_false();
    }
    if (t.text == "E" || t.text == "A") return parse_bracket(t.text == "A");
    if (t.text == "EX" || t.text == "AX") {
      lex_.next();
      StepKind step = parse_step(t.text.c_str());
      return Formula::make_next(t.text[0] == 'A', step, parse_unary());
    }
    if (t.text == "EF" || t.text == "AF") {
      lex_.next();
      StepKind step = parse_step(t.text.c_str());
      return Formula::make_until(t.text[0] == 'A', step, Formula::make_true(), parse_unary());
    }
    if (t.text == "EG" || t.text == "AG") {
      lex_.next();
      StepKind step = parse_step(t.text.c_str());
      return Formula::make_release(t.text[0] == 'A', step, Formula::make_false(), parse_unary());
    }
    if (kReserved.count(t.text))
      throw Error(ErrorCode::UnknownOperator, "'" + t.text + "' cannot start a formula", t.line,
                  t.col);
    lex_.next();
    return Formula::make_atom(t.text);
  }

  FormulaPtr parse_bracket(bool forall) {
    lex_.next();  // E or A
    lex_.expect_punct("[");
    FormulaPtr lhs = parse_or();
    const Token op = lex_.peek();
    std::string name = lex_.expect_ident("'U' or 'R'");
    bool until;
    if (name == "U")
      until = true;
    else if (name == "R")
      until = false;
    else
      throw Error(ErrorCode::UnknownOperator, "unknown path operator '" + name + "'", op.line,
                  op.col);
    StepKind step = parse_step(name.c_str());
    FormulaPtr rhs = parse_or();
    lex_.expect_punct("]");
    return until ? Formula::make_until(forall, step, lhs, rhs)
                 : Formula::make_release(forall, step, lhs, rhs);
  }

  Lexer lex_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

}  // namespace bcaret
