#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "transference/ap_count.hpp"
#include "transference/dense_model.hpp"
#include "transference/discrepancy.hpp"
#include "transference/errors.hpp"
#include "transference/linear_forms.hpp"
#include "transference/parallel.hpp"
#include "transference/pipeline.hpp"
#include "transference/report.hpp"
#include "transference/weightfn.hpp"

namespace py = pybind11;
using namespace transference;
using nlohmann::json;

namespace {

py::object to_py(const json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

json from_py(const py::object& obj) {
  return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

WeightFn weight(const Group& g, std::vector<double> values, const std::string& tag) {
  return WeightFn(g, std::move(values), parse_weight_tag(tag));
}

py::dict dense_result(const DenseModelResult& r) {
  py::dict out = to_py(to_json(r));
  out["model"] = std::vector<double>(r.model.values().begin(), r.model.values().end());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical lab for the transference argument on Z_N";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto pre = py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<StageError>(m, "StageError", base.ptr());
  py::register_exception<CoprimalityViolation>(m, "CoprimalityViolation", pre.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", pre.ptr());
  py::register_exception<WrongK>(m, "WrongK", pre.ptr());
  py::register_exception<NotDominated>(m, "NotDominated", pre.ptr());

  py::class_<Group>(m, "Group")
      .def(py::init(&Group::make), py::arg("N"), py::arg("k"))
      .def_property_readonly("N", &Group::modulus)
      .def_property_readonly("k", &Group::ap_length)
      .def_property_readonly("arity", &Group::arity)
      .def("inverse", &Group::inverse)
      .def("__eq__", [](const Group& a, const Group& b) { return a == b; })
      .def("__repr__", [](const Group& g) {
        return "Group(N=" + std::to_string(g.modulus()) + ", k=" + std::to_string(g.ap_length()) + ")";
      });

  py::class_<WeightFn>(m, "WeightFn")
      .def(py::init(&weight), py::arg("group"), py::arg("values"), py::arg("tag") = "f")
      .def_static("constant",
                  [](const Group& g, double v, const std::string& tag) {
                    return WeightFn::constant(g, v, parse_weight_tag(tag));
                  },
                  py::arg("group"), py::arg("value"), py::arg("tag") = "f")
      .def_static("load", [](const std::string& path) { return read_weight_file(path); })
      .def("save",
           [](const WeightFn& w, const std::string& path, const std::string& format) {
             write_weight_file(path, w, parse_file_format(format));
           },
           py::arg("path"), py::arg("format") = "json")
      .def_property_readonly("group", &WeightFn::group)
      .def_property_readonly("tag", [](const WeightFn& w) { return std::string(to_string(w.tag())); })
      .def_property_readonly("values", [](const WeightFn& w) {
        return std::vector<double>(w.values().begin(), w.values().end());
      })
      .def("mean", [](const WeightFn& w) { return mean(w); })
      .def("__len__", &WeightFn::size)
      .def("__getitem__", [](const WeightFn& w, std::size_t x) {
        if (x >= w.size()) throw py::index_error();
        return w[x];
      });

  m.def("generate",
        [](const Group& g, const std::string& kind, double p, double delta, std::uint64_t seed) {
          const GeneratedPair pair =
              generate(g, GeneratorSpec{parse_generator_kind(kind), p, delta, seed});
          return py::make_tuple(pair.nu, pair.f);
        },
        py::arg("group"), py::arg("generator") = "random_sparse", py::arg("p") = 0.3,
        py::arg("delta") = 0.5, py::arg("seed") = 7);
  m.def("rescale_to_unit_mass", &rescale_to_unit_mass, py::arg("f"), py::arg("target"));

  m.def("lfc_exact",
        [](const WeightFn& nu, const std::string& bits, double budget) {
          return to_py(to_json(lfc_exact(nu, ExponentPattern::parse(nu.group().ap_length(), bits), budget)));
        },
        py::arg("nu"), py::arg("pattern"), py::arg("budget") = kDefaultExactBudget);
  m.def("lfc_monte_carlo",
        [](const WeightFn& nu, const std::string& bits, std::uint64_t samples, std::uint64_t seed) {
          return to_py(to_json(lfc_monte_carlo(
              nu, ExponentPattern::parse(nu.group().ap_length(), bits), samples, seed)));
        },
        py::arg("nu"), py::arg("pattern"), py::arg("samples") = 100000, py::arg("seed") = 0);
  m.def("lfc_sweep",
        [](const WeightFn& nu, std::size_t patterns, std::uint64_t samples, std::uint64_t seed,
           bool exact) {
          return to_py(to_json(lfc_sweep(nu, patterns, samples, seed,
                                         exact ? LfcMode::exact : LfcMode::monte_carlo)));
        },
        py::arg("nu"), py::arg("patterns") = 16, py::arg("samples") = 100000,
        py::arg("seed") = 0, py::arg("exact") = false);

  m.def("ap_density",
        [](const WeightFn& f, int k, const std::string& method) {
          return ap_density(f, k, parse_ap_method(method)).value;
        },
        py::arg("f"), py::arg("k") = 3, py::arg("method") = "direct");
  m.def("ap_gap", &ap_gap, py::arg("f"), py::arg("g"), py::arg("k") = 3);

  m.def("discrepancy_search",
        [](const WeightFn& g, const WeightFn& h, int j, std::uint64_t restarts,
           std::uint64_t seed, bool witness) {
          const auto r = discrepancy_search(g, h, LinearForm(g.group(), j), restarts, seed);
          return to_py(to_json(r, witness));
        },
        py::arg("g"), py::arg("h"), py::arg("j") = 1, py::arg("restarts") = 8,
        py::arg("seed") = 0, py::arg("witness") = true);
  m.def("box_norm_bound",
        [](const WeightFn& nu, int j, std::uint64_t samples, std::uint64_t seed, double budget) {
          return to_py(to_json(box_norm_bound(nu, LinearForm(nu.group(), j), budget, samples, seed)));
        },
        py::arg("nu"), py::arg("j") = 1, py::arg("samples") = 1000000, py::arg("seed") = 0,
        py::arg("budget") = kDefaultBoundBudget);

  m.def("extract_dense_model",
        [](const WeightFn& f, const WeightFn& nu, double eps, std::uint64_t restarts,
           std::size_t max_iters, std::uint64_t seed) {
          try {
            return dense_result(
                extract_dense_model(f, nu, LinearForm(f.group(), 1), eps, restarts, max_iters, seed));
          } catch (const NoConvergence& e) {
            return dense_result(e.result());
          }
        },
        py::arg("f"), py::arg("nu"), py::arg("epsilon") = 0.05, py::arg("restarts") = 8,
        py::arg("max_iters") = 500, py::arg("seed") = 0);
  m.def("verify_model",
        [](const WeightFn& f, const WeightFn& model, double eps, std::uint64_t restarts,
           std::uint64_t seed) {
          json out = json::array();
          for (const auto& r : verify_model(f, model, f.group(), eps, restarts, seed)) {
            out.push_back(to_json(r, false));
          }
          return to_py(out);
        },
        py::arg("f"), py::arg("model"), py::arg("epsilon") = 0.05, py::arg("restarts") = 8,
        py::arg("seed") = 0);

  m.def("run_pipeline",
        [](const py::dict& config, bool include_timing) {
          const PipelineConfig cfg = pipeline_config_from_json(from_py(config));
          PipelineReport report;
          {
            py::gil_scoped_release release;
            report = run_pipeline(cfg);
          }
          return to_py(to_json(report, include_timing));
        },
        py::arg("config") = py::dict(), py::arg("include_timing") = true);
  m.def("default_config", [] { return to_py(to_json(PipelineConfig{})); });

  m.def("set_threads", &set_thread_count, py::arg("count"));
  m.def("threads", &thread_count);
  m.attr("__version__") = "0.1.0";
}
