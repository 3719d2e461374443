#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bcaret/asmfront.hpp"
#include "bcaret/cli.hpp"
#include "bcaret/engine.hpp"

#include "lexer.hpp"

namespace bcaret {

Labelling parse_labels(const LabelledPds& pds, std::string_view text) {
  Lexer lx(text);
  Labelling out;
  while (!lx.at_end()) {
    int line = lx.peek().line;
    std::string head = lx.expect_ident("'atom'");
    if (head != "atom") throw Error(ErrorCode::Syntax, "expected 'atom'", line);
    std::string name = lx.expect_ident("an atom name");
    if (out.sets.count(name) || out.automata.count(name))
      throw Error(ErrorCode::Syntax, "atom '" + name + "' bound twice", line);
    std::string kind = lx.expect_ident("'states' or 'ma'");
    if (kind == "states") {
      lx.expect_punct("{");
      std::vector<ControlId> members;
      while (!lx.accept_punct("}")) {
        int mline = lx.peek().line;
        std::string control = lx.expect_ident("a control name");
        auto id = pds.find_control(control);
        if (!id)
          throw Error(ErrorCode::Syntax, "unknown control '" + control + "'", mline);
        if (std::find(members.begin(), members.end(), *id) == members.end())
          members.push_back(*id);
      }
      out.sets[name] = std::move(members);
    } else if (kind == "ma") {
      lx.expect_punct("{");
      MultiAutomaton ma(pds.alphabet_size());
      std::map<std::string, StateId> states;
      auto state_of = [&](const std::string& sname) {
        auto it = states.find(sname);
        if (it != states.end()) return it->second;
        StateId id = ma.add_state();
        states.emplace(sname, id);
        // states named after controls become that control's entry point
        if (auto c = pds.find_control(sname)) ma.set_initial(*c, id);
        return id;
      };
      while (!lx.accept_punct("}")) {
        int sline = lx.peek().line;
        std::string stmt = lx.expect_ident("'trans' or 'final'");
        if (stmt == "trans") {
          StateId from = state_of(lx.expect_ident("a source state"));
          std::vector<SymbolId> syms;
          if (lx.accept_punct("*")) {
            for (SymbolId g = 0; g < pds.alphabet_size(); ++g) syms.push_back(g);
          } else {
            int yline = lx.peek().line;
            std::string sym = lx.expect_ident("a stack symbol or '*'");
            auto sid = pds.find_symbol(sym);
            if (!sid) throw Error(ErrorCode::Syntax, "unknown symbol '" + sym + "'", yline);
            syms.push_back(*sid);
          }
          StateId to = state_of(lx.expect_ident("a target state"));
          for (SymbolId g : syms) ma.add_transition(from, g, to);
          lx.expect_punct(";");
        } else if (stmt == "final") {
          do {
            ma.mark_final(state_of(lx.expect_ident("a state")));
          } while (lx.peek().kind == Token::Ident);
          lx.expect_punct(";");
        } else {
          throw Error(ErrorCode::Syntax, "expected 'trans' or 'final'", sline);
        }
      }
      out.automata.emplace(name, std::move(ma));
    } else {
      throw Error(ErrorCode::Syntax, "expected 'states' or 'ma'", line);
    }
    lx.expect_punct(";");
  }
  return out;
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Syntax, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Sat: return 0;
    case Outcome::Unsat: return 1;
    case Outcome::Unknown: return 2;
  }
  return 2;
}

struct CheckInputs {
  LabelledPds pds;
  FormulaPtr phi;
  Labelling labels;
  Config config;
};

CheckInputs load_inputs(const std::string& pds_path, const std::string& asm_path,
                        const std::string& formula_path, const std::string& labels_path,
                        const std::string& config_text, bool need_config) {
  CheckInputs in;
  in.phi = parse_formula(slurp(formula_path));
  if (!asm_path.empty()) {
    if (!pds_path.empty())
      throw Error(ErrorCode::Syntax, "--pds and --asm are mutually exclusive");
    if (!labels_path.empty())
      throw Error(ErrorCode::Syntax, "--labels is derived from the formula under --asm");
    CompiledProgram cp = compile_asm(slurp(asm_path));
    in.labels = cp.resolve_atoms_for(in.phi);
    in.config = config_text.empty() ? cp.entry : parse_config(cp.pds, config_text);
    in.pds = std::move(cp.pds);
    return in;
  }
  if (pds_path.empty()) throw Error(ErrorCode::Syntax, "one of --pds or --asm is required");
  in.pds = parse_pds(slurp(pds_path));
  if (!labels_path.empty()) in.labels = parse_labels(in.pds, slurp(labels_path));
  if (need_config) {
    if (config_text.empty()) throw Error(ErrorCode::Syntax, "--config is required with --pds");
    in.config = parse_config(in.pds, config_text);
  }
  return in;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"BCARET model checker for labelled pushdown systems"};
  app.require_subcommand(1);

  std::string pds_path, formula_path, labels_path, config_text, asm_path;
  std::string engine = "saturation";
  int bound = -1;
  int max_iter = 64;
  bool force_regular = false;
  bool json_out = false;

  auto add_common = [&](CLI::App* cmd, bool need_config) {
    cmd->add_option("--pds", pds_path, "pushdown system file");
    cmd->add_option("--asm", asm_path,
                    "program file; labels come from the formula's atom patterns");
    cmd->add_option("--formula", formula_path, "formula file")->required();
    cmd->add_option("--labels", labels_path, "atom valuation file (with --pds)");
    if (need_config)
      cmd->add_option("--config", config_text,
                      "start configuration; defaults to the program entry with --asm");
    cmd->add_flag("--regular", force_regular, "force the regular-valuation pipeline");
    cmd->add_flag("--json", json_out, "machine readable output");
  };

  CLI::App* check = app.add_subcommand("check", "decide whether a configuration satisfies a formula");
  add_common(check, true);
  check->add_option("--engine", engine, "saturation, game or semantic")
      ->check(CLI::IsMember({"saturation", "game", "semantic"}));
  check->add_option("--bound", bound, "stack height bound for the game and semantic engines");
  check->add_option("--max-iter", max_iter, "outer iteration cap for the saturation engine");

  CLI::App* oracle = app.add_subcommand("oracle", "run both reference oracles and compare");
  add_common(oracle, true);
  oracle->add_option("--bound", bound, "stack height bound for the oracles");

  CLI::App* compile = app.add_subcommand("compile", "compile a program into a pushdown system");
  compile->add_option("--asm", asm_path, "program file")->required();
  compile->add_flag("--json", json_out, "machine readable output");

  CLI::App* stats = app.add_subcommand("stats", "print product automaton sizes");
  add_common(stats, false);

  std::vector<const char*> argv;
  argv.push_back("bcaret");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 3;
    }
    err << e.what() << "\n";
    return 3;
  }

  try {
    if (check->parsed()) {
      CheckInputs in =
          load_inputs(pds_path, asm_path, formula_path, labels_path, config_text, true);
      nlohmann::json rec;
      rec["engine"] = engine;
      Outcome verdict = Outcome::Unknown;
      if (engine == "saturation") {
        EngineOptions opts;
        opts.max_outer_iterations = max_iter;
        Verdict v = model_check(in.pds, in.phi, in.labels, in.config, opts, force_regular);
        verdict = v.outcome;
        rec["iterations"] = v.iterations;
        rec["region_states"] = v.region_states;
        rec["region_transitions"] = v.region_transitions;
        rec["certified"] = v.certified;
        if (!json_out) {
          out << outcome_name(verdict) << "\n";
          out << "engine: saturation\n";
          out << "iterations: " << v.iterations << "\n";
          out << "region: " << v.region_states << " states, " << v.region_transitions
              << " transitions\n";
          out << "certified: " << (v.certified ? "yes" : "no") << "\n";
        }
      } else if (engine == "game") {
        BuiltProduct prod = build_product(in.pds, in.phi, in.labels, force_regular);
        int b = bound > 0 ? bound : EngineOptions{}.oracle_bound;
        GameResult g = bounded_game_oracle(prod.bp, prod.map_config(in.config), b);
        verdict = g == GameResult::Accept   ? Outcome::Sat
                  : g == GameResult::Reject ? Outcome::Unsat
                                            : Outcome::Unknown;
        rec["bound"] = b;
        rec["game"] = game_result_name(g);
        if (!json_out) {
          out << outcome_name(verdict) << "\n";
          out << "engine: game (bound " << b << ")\n";
        }
      } else {
        OracleLimits limits;
        if (bound > 0) limits.max_height = bound;
        verdict = semantic_oracle(in.pds, in.phi, in.labels, in.config, limits);
        rec["bound"] = limits.max_height;
        if (!json_out) {
          out << outcome_name(verdict) << "\n";
          out << "engine: semantic (height limit " << limits.max_height << ")\n";
        }
      }
      rec["verdict"] = outcome_name(verdict);
      if (json_out) out << rec.dump(2) << "\n";
      return exit_code(verdict);
    }

    if (oracle->parsed()) {
      CheckInputs in =
          load_inputs(pds_path, asm_path, formula_path, labels_path, config_text, true);
      BuiltProduct prod = build_product(in.pds, in.phi, in.labels, force_regular);
      int b = bound > 0 ? bound : EngineOptions{}.oracle_bound;
      GameResult g = bounded_game_oracle(prod.bp, prod.map_config(in.config), b);
      OracleLimits limits;
      if (bound > 0) limits.max_height = bound;
      Outcome s = semantic_oracle(in.pds, in.phi, in.labels, in.config, limits);
      Outcome gv = g == GameResult::Accept   ? Outcome::Sat
                   : g == GameResult::Reject ? Outcome::Unsat
                                             : Outcome::Unknown;
      Outcome verdict;
      bool certified;
      if (gv != Outcome::Unknown && s != Outcome::Unknown && gv != s) {
        verdict = Outcome::Unknown;
        certified = false;
      } else if (gv != Outcome::Unknown) {
        verdict = gv;
        certified = true;
      } else if (s != Outcome::Unknown) {
        verdict = s;
        certified = true;
      } else {
        verdict = Outcome::Unknown;
        certified = false;
      }
      if (json_out) {
        nlohmann::json rec;
        rec["game"] = game_result_name(g);
        rec["semantic"] = outcome_name(s);
        rec["verdict"] = outcome_name(verdict);
        rec["certified"] = certified;
        rec["bound"] = b;
        out << rec.dump(2) << "\n";
      } else {
        out << outcome_name(verdict) << "\n";
        out << "game: " << game_result_name(g) << " (bound " << b << ")\n";
        out << "semantic: " << outcome_name(s) << "\n";
        out << "certified: " << (certified ? "yes" : "no") << "\n";
      }
      return exit_code(verdict);
    }

    if (compile->parsed()) {
      CompiledProgram cp = compile_asm(slurp(asm_path));
      if (json_out) {
        nlohmann::json rec;
        rec["controls"] = cp.pds.control_count();
        rec["symbols"] = cp.pds.alphabet_size();
        rec["rules"] = cp.pds.rules().size();
        rec["entry"] = format_config(cp.pds, cp.entry);
        out << rec.dump(2) << "\n";
      } else {
        out << "// entry: " << format_config(cp.pds, cp.entry) << "\n";
        out << dump_pds(cp.pds);
      }
      return 0;
    }

    if (stats->parsed()) {
      CheckInputs in = load_inputs(pds_path, asm_path, formula_path, labels_path, "", false);
      BuiltProduct prod = build_product(in.pds, in.phi, in.labels, force_regular);
      if (json_out) {
        nlohmann::json rec;
        rec["controls"] = prod.bp.control_count();
        rec["symbols"] = prod.bp.alphabet_size();
        rec["rules"] = prod.bp.rules().size();
        rec["closure"] = closure(in.phi).size();
        out << rec.dump(2) << "\n";
      } else {
        out << "controls: " << prod.bp.control_count() << "\n";
        out << "symbols: " << prod.bp.alphabet_size() << "\n";
        out << "rules: " << prod.bp.rules().size() << "\n";
        out << "closure: " << closure(in.phi).size() << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}

}  // namespace bcaret
