#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bcaret/engine.hpp"
#include "bcaret/pds.hpp"

namespace bcaret {

enum class OpKind { Nop, Mov, Choose, IfEq, Jmp, Call, Ret, Exit };

struct Stmt {
  std::string label;
  OpKind op = OpKind::Nop;
  std::string reg;      // Mov, Choose, IfEq
  int value = 0;        // Mov, IfEq
  std::string target;   // IfEq, Jmp: label; Call: procedure
  int line = -1;
};

struct RegDecl {
  std::string name;
  int max = 0;  // domain 0..max
};

struct ProcDecl {
  std::string name;
  std::vector<Stmt> body;
};

struct Program {
  std::vector<RegDecl> regs;
  std::string entry;
  std::vector<ProcDecl> procs;
};

Program parse_program(std::string_view text);

struct CompiledProgram {
  LabelledPds pds;
  Config entry;  // entry label over all-zero registers

  // Atom name patterns resolved against the program:
  //   <reg>_<v>        register value, as a control set
  //   at_<label>       control flow at a label, regular
  //   call_<proc>      about to execute a call to proc, regular
  //   top_<label>      top of stack is the return cell for label, regular
  //   top2_<l1>_<l2>   the two topmost cells, regular
  Labelling resolve_atoms(std::span<const std::string> names) const;
  Labelling resolve_atoms_for(const FormulaPtr& phi) const;

  const Program& program() const { return program_; }

  Program program_;
  std::vector<std::string> reg_names_;
  std::vector<int> reg_max_;
  // statement labels in pds symbol order are the program locations
};

CompiledProgram compile_program(const Program& prog);
CompiledProgram compile_asm(std::string_view text);

}  // namespace bcaret
