#include <algorithm>
#include <map>
#include <set>

#include "bcaret/asmfront.hpp"

#include "lexer.hpp"

namespace bcaret {

namespace {

Stmt parse_stmt(Lexer& lx) {
  Stmt s;
  s.line = lx.peek().line;
  std::string op = lx.expect_ident("a statement");
  if (op == "nop") {
    s.op = OpKind::Nop;
  } else if (op == "mov") {
    s.op = OpKind::Mov;
    s.reg = lx.expect_ident("a register");
    s.value = static_cast<int>(lx.expect_number());
  } else if (op == "choose") {
    s.op = OpKind::Choose;
    s.reg = lx.expect_ident("a register");
  } else if (op == "if_eq") {
    s.op = OpKind::IfEq;
    s.reg = lx.expect_ident("a register");
    s.value = static_cast<int>(lx.expect_number());
    s.target = lx.expect_ident("a label");
  } else if (op == "jmp") {
    s.op = OpKind::Jmp;
    s.target = lx.expect_ident("a label");
  } else if (op == "call") {
    s.op = OpKind::Call;
    s.target = lx.expect_ident("a procedure");
  } else if (op == "ret") {
    s.op = OpKind::Ret;
  } else if (op == "exit") {
    s.op = OpKind::Exit;
  } else {
    throw Error(ErrorCode::Syntax, "unknown statement '" + op + "'", s.line);
  }
  return s;
}

}  // namespace

Program parse_program(std::string_view text) {
  Lexer lx(text);
  Program prog;
  bool have_entry = false;
  while (!lx.at_end()) {
    int line = lx.peek().line;
    std::string head = lx.expect_ident("'reg', 'entry' or 'proc'");
    if (head == "reg") {
      RegDecl rd;
      rd.name = lx.expect_ident("a register name");
      if (lx.expect_ident("'in'") != "in")
        throw Error(ErrorCode::Syntax, "expected 'in'", line);
      if (lx.expect_number("the domain lower bound") != 0)
        throw Error(ErrorCode::Syntax, "register domains start at 0", line);
      lx.expect_punct("..");
      rd.max = static_cast<int>(lx.expect_number("the domain upper bound"));
      if (rd.max > 3)
        throw Error(ErrorCode::DomainOverflow,
                    "register '" + rd.name + "' domain exceeds four values", line);
      lx.expect_punct(";");
      prog.regs.push_back(std::move(rd));
    } else if (head == "entry") {
      if (have_entry) throw Error(ErrorCode::Syntax, "duplicate entry declaration", line);
      prog.entry = lx.expect_ident("a label");
      have_entry = true;
      lx.expect_punct(";");
    } else if (head == "proc") {
      ProcDecl pd;
      pd.name = lx.expect_ident("a procedure name");
      lx.expect_punct("{");
      while (!lx.accept_punct("}")) {
        int stmt_line = lx.peek().line;
        std::string label = lx.expect_ident("a label");
        lx.expect_punct(":");
        Stmt body = parse_stmt(lx);
        body.label = label;
        body.line = stmt_line;
        lx.expect_punct(";");
        pd.body.push_back(std::move(body));
      }
      if (pd.body.empty())
        throw Error(ErrorCode::Syntax, "procedure '" + pd.name + "' has no statements", line);
      prog.procs.push_back(std::move(pd));
    } else {
      throw Error(ErrorCode::Syntax, "expected 'reg', 'entry' or 'proc'", line);
    }
  }
  if (!have_entry) throw Error(ErrorCode::Syntax, "missing entry declaration");
  if (prog.procs.empty()) throw Error(ErrorCode::Syntax, "program has no procedures");
  return prog;
}

namespace {

struct Layouts {
  std::vector<int> maxes;
  std::vector<std::string> names;
  std::size_t count = 1;

  std::vector<int> decode(std::size_t idx) const {
    std::vector<int> v(maxes.size());
    for (std::size_t i = maxes.size(); i-- > 0;) {
      v[i] = static_cast<int>(idx % (maxes[i] + 1));
      idx /= maxes[i] + 1;
    }
    return v;
  }
  std::size_t encode(const std::vector<int>& v) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < maxes.size(); ++i) idx = idx * (maxes[i] + 1) + v[i];
    return idx;
  }
  std::string control_name(std::size_t idx) const {
    if (maxes.empty()) return "v";
    std::string out = "v";
    std::vector<int> v = decode(idx);
    for (std::size_t i = 0; i < maxes.size(); ++i)
      out += "_" + names[i] + std::to_string(v[i]);
    return out;
  }
};

}  // namespace

CompiledProgram compile_program(const Program& prog) {
  CompiledProgram out;
  out.program_ = prog;
  Layouts lay;
  for (const RegDecl& rd : prog.regs) {
    if (rd.max < 0 || rd.max > 3)
      throw Error(ErrorCode::DomainOverflow, "register '" + rd.name + "' domain exceeds four values");
    if (std::find(lay.names.begin(), lay.names.end(), rd.name) != lay.names.end())
      throw Error(ErrorCode::Syntax, "duplicate register '" + rd.name + "'");
    lay.names.push_back(rd.name);
    lay.maxes.push_back(rd.max);
    lay.count *= rd.max + 1;
    out.reg_names_.push_back(rd.name);
    out.reg_max_.push_back(rd.max);
  }
  auto reg_index = [&](const std::string& name, int line) {
    auto it = std::find(lay.names.begin(), lay.names.end(), name);
    if (it == lay.names.end())
      throw Error(ErrorCode::Syntax, "unknown register '" + name + "'", line);
    return static_cast<std::size_t>(it - lay.names.begin());
  };

  std::map<std::string, std::size_t> proc_of;   // name -> index in prog.procs
  std::map<std::string, SymbolId> label_sym;
  for (std::size_t pi = 0; pi < prog.procs.size(); ++pi) {
    const ProcDecl& pd = prog.procs[pi];
    if (!proc_of.emplace(pd.name, pi).second)
      throw Error(ErrorCode::Syntax, "duplicate procedure '" + pd.name + "'");
    OpKind last = pd.body.back().op;
    if (last != OpKind::Ret && last != OpKind::Exit)
      throw Error(ErrorCode::Syntax,
                  "procedure '" + pd.name + "' must end in ret or exit", pd.body.back().line);
  }

  for (std::size_t i = 0; i < lay.count; ++i) out.pds.add_control(lay.control_name(i));
  for (const ProcDecl& pd : prog.procs)
    for (const Stmt& s : pd.body) {
      if (label_sym.count(s.label))
        throw Error(ErrorCode::Syntax, "duplicate label '" + s.label + "'", s.line);
      label_sym[s.label] = out.pds.add_symbol(s.label);
    }

  auto sym = [&](const std::string& label, int line) {
    auto it = label_sym.find(label);
    if (it == label_sym.end())
      throw Error(ErrorCode::UndefinedLabel, "undefined label '" + label + "'", line);
    return it->second;
  };
  auto proc_entry = [&](const std::string& name, int line) {
    auto it = proc_of.find(name);
    if (it == proc_of.end())
      throw Error(ErrorCode::UndefinedProc, "undefined procedure '" + name + "'", line);
    return label_sym.at(prog.procs[it->second].body.front().label);
  };

  for (const ProcDecl& pd : prog.procs) {
    for (std::size_t si = 0; si < pd.body.size(); ++si) {
      const Stmt& s = pd.body[si];
      SymbolId here = label_sym.at(s.label);
      auto next_sym = [&]() {
        if (si + 1 >= pd.body.size())
          throw Error(ErrorCode::Syntax,
                      "statement at '" + s.label + "' falls off the end of '" + pd.name + "'",
                      s.line);
        return label_sym.at(pd.body[si + 1].label);
      };
      for (std::size_t ci = 0; ci < lay.count; ++ci) {
        ControlId c = static_cast<ControlId>(ci);
        switch (s.op) {
          case OpKind::Nop:
            out.pds.add_rule({c, here, c, {next_sym()}, RuleKind::Int});
            break;
          case OpKind::Mov: {
            std::size_t ri = reg_index(s.reg, s.line);
            if (s.value < 0 || s.value > lay.maxes[ri])
              throw Error(ErrorCode::DomainOverflow,
                          "value " + std::to_string(s.value) + " outside domain of '" + s.reg + "'",
                          s.line);
            std::vector<int> v = lay.decode(ci);
            v[ri] = s.value;
            out.pds.add_rule(
                {c, here, static_cast<ControlId>(lay.encode(v)), {next_sym()}, RuleKind::Int});
            break;
          }
          case OpKind::Choose: {
            std::size_t ri = reg_index(s.reg, s.line);
            for (int val = 0; val <= lay.maxes[ri]; ++val) {
              std::vector<int> v = lay.decode(ci);
              v[ri] = val;
              out.pds.add_rule(
                  {c, here, static_cast<ControlId>(lay.encode(v)), {next_sym()}, RuleKind::Int});
            }
            break;
          }
          case OpKind::IfEq: {
            std::size_t ri = reg_index(s.reg, s.line);
            if (s.value < 0 || s.value > lay.maxes[ri])
              throw Error(ErrorCode::DomainOverflow,
                          "value " + std::to_string(s.value) + " outside domain of '" + s.reg + "'",
                          s.line);
            bool taken = lay.decode(ci)[ri] == s.value;
            SymbolId to = taken ? sym(s.target, s.line) : next_sym();
            out.pds.add_rule({c, here, c, {to}, RuleKind::Int});
            break;
          }
          case OpKind::Jmp:
            out.pds.add_rule({c, here, c, {sym(s.target, s.line)}, RuleKind::Int});
            break;
          case OpKind::Call:
            out.pds.add_rule(
                {c, here, c, {proc_entry(s.target, s.line), next_sym()}, RuleKind::Call});
            break;
          case OpKind::Ret:
            out.pds.add_rule({c, here, c, {}, RuleKind::Ret});
            break;
          case OpKind::Exit:
            break;
        }
      }
    }
  }

  auto ite = label_sym.find(prog.entry);
  if (ite == label_sym.end())
    throw Error(ErrorCode::UndefinedLabel, "undefined entry label '" + prog.entry + "'");
  out.entry = make_config(0, {ite->second});
  return out;
}

CompiledProgram compile_asm(std::string_view text) { return compile_program(parse_program(text)); }

namespace {

// L(init --w--> final) = first · Γ* with an optional second fixed cell.
MultiAutomaton prefix_ma(std::size_t control_count, std::size_t alphabet,
                         const std::vector<SymbolId>& firsts,
                         std::optional<SymbolId> second = std::nullopt) {
  MultiAutomaton ma(alphabet);
  StateId s0 = ma.add_state();
  StateId cur = s0;
  if (second) {
    StateId mid = ma.add_state();
    for (SymbolId f : firsts) ma.add_transition(s0, f, mid);
    StateId fin = ma.add_state();
    ma.add_transition(mid, *second, fin);
    cur = fin;
  } else {
    StateId fin = ma.add_state();
    for (SymbolId f : firsts) ma.add_transition(s0, f, fin);
    cur = fin;
  }
  for (SymbolId g = 0; g < alphabet; ++g) ma.add_transition(cur, g, cur);
  ma.mark_final(cur);
  for (ControlId p = 0; p < control_count; ++p) ma.set_initial(p, s0);
  return ma;
}

}  // namespace

Labelling CompiledProgram::resolve_atoms(std::span<const std::string> names) const {
  Labelling out;
  std::map<std::string, SymbolId> label_sym;
  std::map<std::string, std::vector<SymbolId>> call_sites;
  for (const ProcDecl& pd : program_.procs)
    for (const Stmt& s : pd.body) {
      label_sym[s.label] = *pds.find_symbol(s.label);
      if (s.op == OpKind::Call) call_sites[s.target].push_back(*pds.find_symbol(s.label));
    }
  Layouts lay;
  lay.names = reg_names_;
  for (int m : reg_max_) {
    lay.maxes.push_back(m);
    lay.count *= m + 1;
  }

  for (const std::string& name : names) {
    if (out.sets.count(name) || out.automata.count(name)) continue;
    bool matched = false;
    for (std::size_t ri = 0; ri < reg_names_.size() && !matched; ++ri) {
      const std::string prefix = reg_names_[ri] + "_";
      if (name.rfind(prefix, 0) != 0) continue;
      const std::string rest = name.substr(prefix.size());
      if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) continue;
      int v = std::stoi(rest);
      if (v > reg_max_[ri])
        throw Error(ErrorCode::DomainOverflow, "atom '" + name + "' names a value outside 0.." +
                                                   std::to_string(reg_max_[ri]));
      std::vector<ControlId> members;
      for (std::size_t ci = 0; ci < lay.count; ++ci)
        if (lay.decode(ci)[ri] == v) members.push_back(static_cast<ControlId>(ci));
      out.sets[name] = std::move(members);
      matched = true;
    }
    if (matched) continue;

    auto label_atom = [&](const std::string& rest) -> bool {
      auto it = label_sym.find(rest);
      if (it == label_sym.end()) return false;
      out.automata.insert_or_assign(
          name, prefix_ma(pds.control_count(), pds.alphabet_size(), {it->second}));
      return true;
    };
    if (name.rfind("at_", 0) == 0 && label_atom(name.substr(3))) continue;
    if (name.rfind("top_", 0) == 0 && label_atom(name.substr(4))) continue;
    if (name.rfind("call_", 0) == 0) {
      const std::string proc = name.substr(5);
      bool known = std::any_of(program_.procs.begin(), program_.procs.end(),
                               [&](const ProcDecl& pd) { return pd.name == proc; });
      if (known) {
        // no call sites is fine: the atom then holds nowhere
        auto it = call_sites.find(proc);
        out.automata.insert_or_assign(
            name, prefix_ma(pds.control_count(), pds.alphabet_size(),
                            it == call_sites.end() ? std::vector<SymbolId>{} : it->second));
        continue;
      }
    }
    if (name.rfind("top2_", 0) == 0) {
      const std::string rest = name.substr(5);
      bool done = false;
      for (std::size_t cut = 1; cut + 1 < rest.size() && !done; ++cut) {
        if (rest[cut] != '_') continue;
        auto it1 = label_sym.find(rest.substr(0, cut));
        auto it2 = label_sym.find(rest.substr(cut + 1));
        if (it1 == label_sym.end() || it2 == label_sym.end()) continue;
        out.automata.insert_or_assign(
            name, prefix_ma(pds.control_count(), pds.alphabet_size(), {it1->second},
                            it2->second));
        done = true;
      }
      if (done) continue;
    }
    throw Error(ErrorCode::UnknownAtom, "atom '" + name + "' matches no program entity");
  }
  return out;
}

Labelling CompiledProgram::resolve_atoms_for(const FormulaPtr& phi) const {
  std::vector<std::string> names = positive_atoms(phi);
  for (const std::string& n : negated_atoms(phi)) names.push_back(n);
  return resolve_atoms(names);
}

}  // namespace bcaret
