#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ccm/annotate.hpp"
#include "ccm/cli.hpp"
#include "ccm/dsl.hpp"
#include "ccm/enumerate.hpp"
#include "ccm/error.hpp"
#include "ccm/ghost.hpp"
#include "ccm/tso.hpp"

namespace py = pybind11;
using namespace ccm;

namespace {

py::dict state_dict(const VarTable& vars, const State& s) {
  py::dict d;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (vars[v].domain.boolean) {
      d[py::str(vars[v].name)] = py::bool_(s[v] != 0);
    } else {
      d[py::str(vars[v].name)] = py::int_(s[v]);
    }
  }
  return d;
}

// Initial state of the document with values from `overrides` applied.
State initial(const dsl::Document& doc, const std::optional<py::dict>& overrides) {
  const VarTable& vars = doc.program.vars();
  State s = vars.initial_state();
  if (!overrides) return s;
  for (auto [key, value] : *overrides) {
    const int v = vars.index_of(py::cast<std::string>(key));
    const int x = py::isinstance<py::bool_>(value) ? (py::cast<bool>(value) ? 1 : 0)
                                                     : py::cast<int>(value);
    if (!vars[static_cast<std::size_t>(v)].domain.contains(x)) {
      throw ValidationError("value outside the domain of '" + vars[static_cast<std::size_t>(v)].name + "'");
    }
    s.set(static_cast<std::size_t>(v), x);
  }
  return s;
}

py::list labels(const Program& p, OpSet set) {
  py::list out;
  for (int o : members(set)) out.append(p.op(o).id);
  return out;
}

py::list edge_list(const Program& p, const Order& order) {
  py::list out;
  for (auto [a, b] : order.edges()) out.append(py::make_tuple(p.op(a).id, p.op(b).id));
  return out;
}

py::dict report_dict(const CheckReport& r) {
  py::list witnesses;
  for (const auto& w : r.witnesses) {
    py::dict d;
    d["condition"] = w.condition;
    d["ops"] = w.ops;
    d["states"] = w.rendered;
    d["detail"] = w.detail;
    witnesses.append(d);
  }
  py::dict out;
  out["pass"] = r.pass;
  out["witnesses"] = witnesses;
  return out;
}

Limits limits_of(std::size_t max_ops, std::size_t max_states) {
  Limits l;
  l.max_ops = max_ops;
  l.max_states = max_states;
  return l;
}

tso::Mode mode_of(const std::string& model) {
  if (model == "tso-plain") return tso::Mode::kPlain;
  if (model == "tso-disciplined") return tso::Mode::kDisciplined;
  throw ValidationError("unknown TSO model '" + model + "'");
}

py::list enumerate_executions(const dsl::Document& doc, const std::string& model,
                              bool complete_only, const std::optional<py::dict>& init,
                              std::size_t max_ops, std::size_t max_states) {
  const Program& p = doc.program;
  const State s = initial(doc, init);
  const Limits limits = limits_of(max_ops, max_states);
  py::list out;
  if (model.starts_with("tso-")) {
    const auto classes = tso::classify_variables(p, doc.declared_classes);
    const auto shapes = tso::check_shapes(p, classes);
    if (!shapes.pass) throw ValidationError(shapes.witnesses.front().detail);
    for (const auto& t : tso::explore(p, s, classes, mode_of(model))) {
      if (complete_only && !t.complete) continue;
      py::list actions;
      for (const auto& a : t.actions) actions.append(tso::describe(a, p));
      py::dict d;
      d["actions"] = actions;
      d["complete"] = t.complete;
      d["final"] = state_dict(p.vars(), t.final_config.memory);
      out.append(d);
    }
    return out;
  }
  EnumerationResult r;
  if (model == "cc") {
    r = enumerate_cc(p, s, complete_only, limits);
  } else if (model == "sc") {
    r = enumerate_sc(p, s, complete_only, limits);
  } else if (model == "cc-oracle") {
    r = enumerate_cc_oracle(p, s, complete_only);
  } else {
    throw ValidationError("unknown model '" + model + "'");
  }
  for (const auto& e : r.executions) {
    py::dict d;
    d["ops"] = labels(p, e.carrier());
    d["order"] = edge_list(p, e.order);
    d["final"] = state_dict(p.vars(), e.final_state);
    out.append(d);
  }
  return out;
}

py::dict check_ghost(const dsl::Document& doc, const std::optional<py::dict>& init) {
  const Augmentation aug = Augmentation::from_program(doc.program);
  py::dict out;
  const CheckReport proj = check_projection(aug);
  out["projection"] = report_dict(proj);
  out["commutation"] =
      proj.pass ? py::object(report_dict(check_commutation_preservation(aug))) : py::none();
  out["simulation"] = report_dict(check_ghost_soundness_semantics(aug, initial(doc, init)));
  return out;
}

py::dict bridge(const dsl::Document& doc, const std::string& model,
                const std::optional<py::dict>& init) {
  const Program& p = doc.program;
  const auto classes = tso::classify_variables(p, doc.declared_classes);
  const auto shapes = tso::check_shapes(p, classes);
  if (!shapes.pass) throw ValidationError(shapes.witnesses.front().detail);
  const auto r = tso::bridge_check(p, initial(doc, init), classes, mode_of(model));
  py::dict out = report_dict(r.report);
  out["traces"] = r.traces;
  out["complete"] = r.complete;
  out["valid"] = r.valid;
  py::list behaviors;
  for (const State& s : r.behaviors) behaviors.append(state_dict(p.vars(), s));
  out["behaviors"] = behaviors;
  return out;
}

}  // namespace

PYBIND11_MODULE(_ccm, m) {
  m.doc() = "Coherent causal memory: litmus programs, proof outlines and TSO traces";

  auto base = py::register_exception<Error>(m, "CcmError", PyExc_RuntimeError);
  py::register_exception<dsl::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<LookupError>(m, "LookupError", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());

  py::class_<dsl::Document>(m, "Document")
      .def_property_readonly("labels",
                             [](const dsl::Document& d) {
                               std::vector<std::string> out;
                               for (const auto& op : d.program.ops()) out.push_back(op.id);
                               return out;
                             })
      .def_property_readonly("threads",
                             [](const dsl::Document& d) { return d.program.threads(); })
      .def_property_readonly("variables",
                             [](const dsl::Document& d) {
                               std::vector<std::string> out;
                               for (const auto& v : d.program.vars()) out.push_back(v.name);
                               return out;
                             })
      .def_property_readonly("order",
                             [](const dsl::Document& d) {
                               return edge_list(d.program, d.program.order());
                             })
      .def_property_readonly("has_annotation",
                             [](const dsl::Document& d) { return d.has_annotation; })
      .def_property_readonly("has_ghost", &dsl::Document::has_ghost)
      .def("initial_state",
           [](const dsl::Document& d) {
             return state_dict(d.program.vars(), d.program.vars().initial_state());
           })
      .def("__eq__", [](const dsl::Document& a, const dsl::Document& b) { return a == b; })
      .def("__str__", [](const dsl::Document& d) { return dsl::serialize(d); });

  m.def("parse", [](const std::string& text) { return dsl::parse(text); }, py::arg("text"));
  m.def("load", &dsl::load, py::arg("path"));
  m.def("serialize", &dsl::serialize, py::arg("doc"));

  m.def("enumerate", &enumerate_executions, py::arg("doc"), py::arg("model") = "cc",
        py::arg("complete_only") = false, py::arg("init") = py::none(),
        py::arg("max_ops") = Limits{}.max_ops, py::arg("max_states") = Limits{}.max_states);

  m.def(
      "check_annotation",
      [](const dsl::Document& d) {
        if (!d.has_annotation) throw ValidationError("document has no annotation");
        py::dict out = report_dict(check_annotation(d.annotation, d.program));
        out["local"] = check_local(d.annotation, d.program).pass;
        out["noninterference"] = check_noninterference(d.annotation, d.program).pass;
        return out;
      },
      py::arg("doc"));
  m.def(
      "check_soundness",
      [](const dsl::Document& d, const std::optional<py::dict>& init) {
        if (!d.has_annotation) throw ValidationError("document has no annotation");
        return report_dict(check_soundness_conclusion(d.annotation, d.program, initial(d, init)));
      },
      py::arg("doc"), py::arg("init") = py::none());
  m.def("check_ghost", &check_ghost, py::arg("doc"), py::arg("init") = py::none());
  m.def("bridge", &bridge, py::arg("doc"), py::arg("model") = "tso-disciplined",
        py::arg("init") = py::none());
  m.def(
      "soundness_harness",
      [](std::uint64_t seed, std::size_t trials) {
        const HarnessResult h = random_soundness_harness(seed, trials);
        py::dict out = report_dict(h.report);
        out["trials"] = h.trials;
        out["annotated"] = h.annotated;
        return out;
      },
      py::arg("seed") = 1, py::arg("trials") = 200);
  m.def(
      "acceptance",
      [](const std::string& dir) {
        py::list out;
        for (const auto& row : cli::run_acceptance(dir)) {
          out.append(py::make_tuple(row.name, row.pass, row.detail));
        }
        return out;
      },
      py::arg("corpus_dir"));
}
