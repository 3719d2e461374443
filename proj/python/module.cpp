#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bcaret/asmfront.hpp"
#include "bcaret/cli.hpp"
#include "bcaret/engine.hpp"

namespace py = pybind11;
using namespace bcaret;

namespace {

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["verdict"] = outcome_name(v.outcome);
  d["iterations"] = v.iterations;
  d["region_states"] = v.region_states;
  d["region_transitions"] = v.region_transitions;
  d["certified"] = v.certified;
  return d;
}

// shared_ptr-to-const does not work as a pybind11 holder, so formulas cross
// the boundary in a value wrapper
struct PyFormula {
  FormulaPtr f;
};

}  // namespace

PYBIND11_MODULE(bcaret, m) {
  m.doc() = "BCARET model checking for labelled pushdown systems";

  py::register_exception<Error>(m, "BcaretError");

  py::class_<LabelledPds>(m, "Pds")
      .def_static("parse", [](const std::string& text) { return parse_pds(text); })
      .def_property_readonly("control_count", &LabelledPds::control_count)
      .def_property_readonly("alphabet_size", &LabelledPds::alphabet_size)
      .def_property_readonly("rule_count",
                             [](const LabelledPds& p) { return p.rules().size(); })
      .def("dump", [](const LabelledPds& p) { return dump_pds(p); })
      .def("successors",
           [](const LabelledPds& p, const std::string& config) {
             std::vector<std::string> out;
             for (auto& [ri, nxt] : immediate_successors(p, parse_config(p, config)))
               out.push_back(format_config(p, nxt));
             return out;
           })
      .def("abstract_successors",
           [](const LabelledPds& p, const std::string& config, int budget) {
             auto res = abstract_successors(p, parse_config(p, config), budget);
             std::vector<std::string> targets;
             for (auto& t : res.targets)
               targets.push_back(t.is_bottom() ? "BOTTOM" : format_config(p, *t.config));
             return py::make_tuple(targets, res.complete);
           },
           py::arg("config"), py::arg("budget") = 64)
      .def("__repr__", [](const LabelledPds& p) {
        std::ostringstream ss;
        ss << "<Pds controls=" << p.control_count() << " symbols=" << p.alphabet_size()
           << " rules=" << p.rules().size() << ">";
        return ss.str();
      });

  py::class_<PyFormula>(m, "Formula")
      .def_static("parse",
                  [](const std::string& text) { return PyFormula{parse_formula(text)}; })
      .def("negate", [](const PyFormula& w) { return PyFormula{negate_pnf(w.f)}; })
      .def_property_readonly("closure_size",
                             [](const PyFormula& w) { return closure(w.f).size(); })
      .def("__str__", [](const PyFormula& w) { return to_string(w.f); })
      .def("__repr__", [](const PyFormula& w) { return "<Formula " + to_string(w.f) + ">"; });

  m.def(
      "check",
      [](const std::string& pds_text, const std::string& formula_text,
         const std::string& labels_text, const std::string& config_text,
         const std::string& engine, int bound, int max_iter, bool regular) -> py::dict {
        LabelledPds pds = parse_pds(pds_text);
        FormulaPtr phi = parse_formula(formula_text);
        Labelling labels;
        if (!labels_text.empty()) labels = parse_labels(pds, labels_text);
        Config cfg = parse_config(pds, config_text);
        if (engine == "saturation") {
          EngineOptions opts;
          opts.max_outer_iterations = max_iter;
          return verdict_dict(model_check(pds, phi, labels, cfg, opts, regular));
        }
        py::dict d;
        if (engine == "game") {
          BuiltProduct prod = build_product(pds, phi, labels, regular);
          GameResult g = bounded_game_oracle(prod.bp, prod.map_config(cfg), bound);
          d["verdict"] = g == GameResult::Accept   ? "SAT"
                         : g == GameResult::Reject ? "UNSAT"
                                                   : "UNKNOWN";
          d["game"] = game_result_name(g);
          return d;
        }
        if (engine == "semantic") {
          OracleLimits limits;
          if (bound > 0) limits.max_height = bound;
          d["verdict"] = outcome_name(semantic_oracle(pds, phi, labels, cfg, limits));
          return d;
        }
        throw Error(ErrorCode::UnknownOperator, "unknown engine '" + engine + "'");
      },
      py::arg("pds"), py::arg("formula"), py::arg("labels") = std::string(),
      py::arg("config") = std::string(), py::arg("engine") = "saturation", py::arg("bound") = 8,
      py::arg("max_iter") = 64, py::arg("regular") = false);

  m.def("product_stats", [](const std::string& pds_text, const std::string& formula_text,
                            const std::string& labels_text, bool regular) {
    LabelledPds pds = parse_pds(pds_text);
    FormulaPtr phi = parse_formula(formula_text);
    Labelling labels;
    if (!labels_text.empty()) labels = parse_labels(pds, labels_text);
    BuiltProduct prod = build_product(pds, phi, labels, regular);
    py::dict d;
    d["controls"] = prod.bp.control_count();
    d["symbols"] = prod.bp.alphabet_size();
    d["rules"] = prod.bp.rules().size();
    return d;
  }, py::arg("pds"), py::arg("formula"), py::arg("labels") = std::string(),
     py::arg("regular") = false);

  m.def("compile_asm", [](const std::string& text) {
    CompiledProgram cp = compile_asm(text);
    py::dict d;
    d["pds"] = dump_pds(cp.pds);
    d["entry"] = format_config(cp.pds, cp.entry);
    d["controls"] = cp.pds.control_count();
    d["rules"] = cp.pds.rules().size();
    return d;
  });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
