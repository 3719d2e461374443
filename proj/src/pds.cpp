#include "bcaret/pds.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "bcaret/bits.hpp"
#include "lexer.hpp"

namespace bcaret {

const char* rule_kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::Call: return "call";
    case RuleKind::Int: return "int";
    case RuleKind::Ret: return "ret";
  }
  return "?";
}

ControlId LabelledPds::add_control(std::string name) {
  if (find_control(name)) throw Error(ErrorCode::Syntax, "duplicate control '" + name + "'");
  control_names_.push_back(std::move(name));
  return static_cast<ControlId>(control_names_.size() - 1);
}

SymbolId LabelledPds::add_symbol(std::string name) {
  if (find_symbol(name)) throw Error(ErrorCode::Syntax, "duplicate symbol '" + name + "'");
  symbol_names_.push_back(std::move(name));
  return static_cast<SymbolId>(symbol_names_.size() - 1);
}

std::string LabelledPds::symbol_name(SymbolId s) const {
  if (s == kBottomSymbol) return "#";
  return symbol_names_[s];
}

std::optional<ControlId> LabelledPds::find_control(std::string_view name) const {
  for (std::size_t i = 0; i < control_names_.size(); ++i)
    if (control_names_[i] == name) return static_cast<ControlId>(i);
  return std::nullopt;
}

std::optional<SymbolId> LabelledPds::find_symbol(std::string_view name) const {
  for (std::size_t i = 0; i < symbol_names_.size(); ++i)
    if (symbol_names_[i] == name) return static_cast<SymbolId>(i);
  return std::nullopt;
}

std::size_t LabelledPds::add_rule(LabelledRule rule) {
  if (rule.from_symbol == kBottomSymbol)
    throw Error(ErrorCode::BottomRewrite, "rule reads the stack bottom");
  for (SymbolId s : rule.push)
    if (s == kBottomSymbol) throw Error(ErrorCode::BottomRewrite, "rule pushes the stack bottom");
  if (rule.kind == RuleKind::Call && rule.push.size() != 2)
    throw Error(ErrorCode::CallArity, "call rule must push exactly two symbols");
  if (rule.kind == RuleKind::Ret && !rule.push.empty())
    throw Error(ErrorCode::RetArity, "ret rule must push no symbols");
  std::size_t idx = rules_.size();
  std::uint64_t key = (std::uint64_t{rule.from_control} << 32) | rule.from_symbol;
  index_[key].push_back(idx);
  rules_.push_back(std::move(rule));
  return idx;
}

std::span<const std::size_t> LabelledPds::rules_at(ControlId p, SymbolId s) const {
  std::uint64_t key = (std::uint64_t{p} << 32) | s;
  auto it = index_.find(key);
  if (it == index_.end()) return {};
  return it->second;
}

std::size_t ConfigHash::operator()(const Config& c) const {
  std::size_t h = 0xcbf29ce484222325ull;
  auto mix = [&](std::size_t v) { h = (h ^ v) * 0x100000001b3ull; };
  mix(c.control);
  for (SymbolId s : c.stack) mix(s);
  return h;
}

Config make_config(ControlId control, std::initializer_list<SymbolId> symbols_above_bottom) {
  Config c;
  c.control = control;
  c.stack.assign(symbols_above_bottom);
  c.stack.push_back(kBottomSymbol);
  return c;
}

namespace {

Config apply_rule(const LabelledRule& rule, const Config& c) {
  Config out;
  out.control = rule.to_control;
  out.stack.reserve(rule.push.size() + c.stack.size() - 1);
  out.stack.assign(rule.push.begin(), rule.push.end());
  out.stack.insert(out.stack.end(), c.stack.begin() + 1, c.stack.end());
  return out;
}

}  // namespace

std::vector<std::pair<std::size_t, Config>> immediate_successors(const LabelledPds& pds,
                                                                 const Config& c) {
  std::vector<std::pair<std::size_t, Config>> out;
  if (c.stack.empty() || c.stack.front() == kBottomSymbol) return out;
  for (std::size_t idx : pds.rules_at(c.control, c.stack.front()))
    out.emplace_back(idx, apply_rule(pds.rules()[idx], c));
  return out;
}

AbstractSuccessors abstract_successors(const LabelledPds& pds, const Config& c, int budget) {
  AbstractSuccessors out;
  std::set<AbstractTarget> acc;
  if (c.stack.empty() || c.stack.front() == kBottomSymbol) return out;
  const std::size_t base_h = c.stack.size();
  std::set<std::pair<Config, int>> visited;

  // Walks the global successors of a freshly entered call until the stack
  // first drops back to the caller's height; that configuration is the
  // abstract successor contributed by this branch.
  auto explore = [&](auto&& self, const Config& cfg, int used) -> void {
    if (cfg.stack.size() == base_h) {
      acc.insert(AbstractTarget{cfg});
      return;
    }
    if (used >= budget) {
      if (!immediate_successors(pds, cfg).empty()) out.complete = false;
      return;
    }
    if (!visited.insert({cfg, used}).second) return;
    for (auto& [idx, nxt] : immediate_successors(pds, cfg)) self(self, nxt, used + 1);
  };

  for (std::size_t idx : pds.rules_at(c.control, c.stack.front())) {
    const LabelledRule& rule = pds.rules()[idx];
    switch (rule.kind) {
      case RuleKind::Int:
        acc.insert(AbstractTarget{apply_rule(rule, c)});
        break;
      case RuleKind::Ret:
        acc.insert(AbstractTarget{});
        break;
      case RuleKind::Call:
        explore(explore, apply_rule(rule, c), 1);
        break;
    }
  }
  out.targets.assign(acc.begin(), acc.end());
  return out;
}

PopSummaries::PopSummaries(const LabelledPds& pds) : alphabet_(pds.alphabet_size()) {
  const std::size_t P = pds.control_count();
  std::vector<StateSet> sets(P * alphabet_, StateSet(P));
  bool changed = true;
  while (changed) {
    changed = false;
    for (const LabelledRule& rule : pds.rules()) {
      // controls reachable once the rule's replacement word has been popped
      StateSet reach(P);
      reach.set(rule.to_control);
      for (SymbolId s : rule.push) {
        StateSet next(P);
        reach.for_each([&](std::size_t x) { next.unite(sets[x * alphabet_ + s]); });
        reach = std::move(next);
      }
      StateSet& slot = sets[rule.from_control * alphabet_ + rule.from_symbol];
      if (!reach.subset_of(slot)) {
        slot.unite(reach);
        changed = true;
      }
    }
  }
  table_.resize(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t p : sets[i].members()) table_[i].push_back(static_cast<ControlId>(p));
}

std::span<const ControlId> PopSummaries::pops(ControlId p, SymbolId s) const {
  return table_[p * alphabet_ + s];
}

std::vector<PathPrefix> enumerate_paths(const LabelledPds& pds, const Config& from, PathMode mode,
                                        int depth) {
  std::set<PathPrefix> acc;
  std::optional<PopSummaries> summaries;
  if (mode == PathMode::Abstract) summaries.emplace(pds);

  // Abstract successors here are exact: a call lands on every control the
  // pop summaries admit for its entry symbol, with the return cell on top.
  auto abstract_step = [&](const Config& c) {
    std::vector<AbstractTarget> out;
    std::set<AbstractTarget> seen;
    if (c.stack.front() == kBottomSymbol) return out;
    for (std::size_t idx : pds.rules_at(c.control, c.stack.front())) {
      const LabelledRule& rule = pds.rules()[idx];
      switch (rule.kind) {
        case RuleKind::Int:
          seen.insert(AbstractTarget{apply_rule(rule, c)});
          break;
        case RuleKind::Ret:
          seen.insert(AbstractTarget{});
          break;
        case RuleKind::Call:
          for (ControlId d : summaries->pops(rule.to_control, rule.push[0])) {
            Config t;
            t.control = d;
            t.stack.assign(c.stack.begin() + 1, c.stack.end());
            t.stack.insert(t.stack.begin(), rule.push[1]);
            seen.insert(AbstractTarget{std::move(t)});
          }
          break;
      }
    }
    out.assign(seen.begin(), seen.end());
    return out;
  };

  std::vector<Config> path{from};
  auto go = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      acc.insert(PathPrefix{path, false});
      return;
    }
    if (mode == PathMode::Global) {
      auto succs = immediate_successors(pds, path.back());
      if (succs.empty()) {
        acc.insert(PathPrefix{path, false});
        return;
      }
      for (auto& [idx, nxt] : succs) {
        path.push_back(nxt);
        self(self, remaining - 1);
        path.pop_back();
      }
    } else {
      auto targets = abstract_step(path.back());
      if (targets.empty()) {
        acc.insert(PathPrefix{path, false});
        return;
      }
      for (auto& t : targets) {
        if (t.is_bottom()) {
          acc.insert(PathPrefix{path, true});
        } else {
          path.push_back(*t.config);
          self(self, remaining - 1);
          path.pop_back();
        }
      }
    }
  };
  go(go, depth);
  return {acc.begin(), acc.end()};
}

namespace {

SymbolId lookup_symbol(const LabelledPds& pds, Lexer& lex) {
  const Token& t = lex.peek();
  if (t.kind == Token::Bottom) lex.fail("the stack bottom cannot appear here");
  std::string name = lex.next().text;
  auto s = pds.find_symbol(name);
  if (!s)
    throw Error(ErrorCode::Syntax, "undeclared symbol '" + name + "'", t.line, t.col);
  return *s;
}

ControlId lookup_control(const LabelledPds& pds, Lexer& lex) {
  const Token& t = lex.peek();
  std::string name = lex.expect_ident("control name");
  auto p = pds.find_control(name);
  if (!p)
    throw Error(ErrorCode::Syntax, "undeclared control '" + name + "'", t.line, t.col);
  return *p;
}

}  // namespace

LabelledPds parse_pds(std::string_view text) {
  LabelledPds pds;
  Lexer lex(text);
  while (!lex.at_end()) {
    const Token head = lex.peek();
    if (lex.accept_ident("controls")) {
      while (!lex.accept_punct(";")) {
        const Token& t = lex.peek();
        std::string name = lex.expect_ident("control name");
        if (pds.find_control(name))
          throw Error(ErrorCode::Syntax, "duplicate control '" + name + "'", t.line, t.col);
        pds.add_control(std::move(name));
      }
    } else if (lex.accept_ident("alphabet")) {
      while (!lex.accept_punct(";")) {
        const Token& t = lex.peek();
        if (t.kind == Token::Bottom) lex.fail("'#' is reserved for the stack bottom");
        std::string name = lex.expect_ident("symbol name");
        if (pds.find_symbol(name))
          throw Error(ErrorCode::Syntax, "duplicate symbol '" + name + "'", t.line, t.col);
        pds.add_symbol(std::move(name));
      }
    } else if (lex.accept_ident("rule")) {
      LabelledRule rule;
      rule.from_control = lookup_control(pds, lex);
      if (lex.peek().kind == Token::Bottom)
        throw Error(ErrorCode::BottomRewrite, "rule reads the stack bottom", head.line, head.col);
      rule.from_symbol = lookup_symbol(pds, lex);
      if (lex.accept_punct("-call->"))
        rule.kind = RuleKind::Call;
      else if (lex.accept_punct("-ret->"))
        rule.kind = RuleKind::Ret;
      else if (lex.accept_punct("-int->"))
        rule.kind = RuleKind::Int;
      else
        lex.fail("expected '-call->', '-ret->' or '-int->'");
      rule.to_control = lookup_control(pds, lex);
      while (!lex.accept_punct(";")) {
        if (lex.peek().kind == Token::Bottom)
          throw Error(ErrorCode::BottomRewrite, "rule pushes the stack bottom", head.line,
                      head.col);
        rule.push.push_back(lookup_symbol(pds, lex));
      }
      if (rule.kind == RuleKind::Call && rule.push.size() != 2)
        throw Error(ErrorCode::CallArity, "call rule must push exactly two symbols", head.line,
                    head.col);
      if (rule.kind == RuleKind::Ret && !rule.push.empty())
        throw Error(ErrorCode::RetArity, "ret rule must push no symbols", head.line, head.col);
      pds.add_rule(std::move(rule));
    } else {
      lex.fail("expected 'controls', 'alphabet' or 'rule'");
    }
  }
  return pds;
}

Config parse_config(const LabelledPds& pds, std::string_view text) {
  Lexer lex(text);
  Config c;
  c.control = lookup_control(pds, lex);
  lex.expect_punct(":");
  bool saw_bottom = false;
  while (!lex.at_end()) {
    if (lex.peek().kind == Token::Bottom) {
      lex.next();
      saw_bottom = true;
      c.stack.push_back(kBottomSymbol);
      break;
    }
    c.stack.push_back(lookup_symbol(pds, lex));
  }
  if (!saw_bottom) lex.fail("configuration must end with '#'");
  if (!lex.at_end()) lex.fail("trailing input after '#'");
  return c;
}

std::string format_config(const LabelledPds& pds, const Config& c) {
  std::string out = pds.control_name(c.control) + " :";
  for (SymbolId s : c.stack) out += " " + pds.symbol_name(s);
  return out;
}

std::string dump_pds(const LabelledPds& pds) {
  std::ostringstream out;
  out << "controls";
  for (std::size_t p = 0; p < pds.control_count(); ++p)
    out << " " << pds.control_name(static_cast<ControlId>(p));
  out << " ;\n";
  out << "alphabet";
  for (std::size_t s = 0; s < pds.alphabet_size(); ++s)
    out << " " << pds.symbol_name(static_cast<SymbolId>(s));
  out << " ;\n";
  for (const LabelledRule& rule : pds.rules()) {
    out << "rule " << pds.control_name(rule.from_control) << " "
        << pds.symbol_name(rule.from_symbol) << " -" << rule_kind_name(rule.kind) << "-> "
        << pds.control_name(rule.to_control);
    for (SymbolId s : rule.push) out << " " << pds.symbol_name(s);
    out << " ;\n";
  }
  return out.str();
}

}  // namespace bcaret
