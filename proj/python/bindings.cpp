#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tcpkit/error.hpp"
#include "tcpkit/repro.hpp"
#include "tcpkit/serialize.hpp"

namespace py = pybind11;
using namespace tcpkit;

namespace {

// Reports cross the boundary as plain dicts with the CLI's JSON layout.
py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Json from_py(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Property property_of(const std::string& name) {
  if (name == "p") return Property::kP;
  if (name == "ssp") return Property::kStrictlySemiPositive;
  if (name == "r") return Property::kR;
  if (name == "strong-p" || name == "strong_p") return Property::kStrongP;
  throw Error(ErrorCode::kBadValue, "unknown property " + name);
}

}  // namespace

PYBIND11_MODULE(_tcpkit, m) {
  m.doc() = "Tensor complementarity problem toolkit";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<Tensor>(m, "Tensor")
      .def(py::init([](int order, int dim,
                       const std::vector<std::pair<std::vector<int>, double>>& entries) {
             std::vector<Entry> list;
             for (const auto& [idx, val] : entries) list.push_back({idx, val});
             return Tensor::from_entries(order, dim, std::move(list));
           }),
           py::arg("order"), py::arg("dim"), py::arg("entries"),
           "entries: iterable of (index tuple, value), 0-based")
      .def_static("zero", &Tensor::zero)
      .def_static("diagonal", [](int order, const std::vector<double>& d) {
        return Tensor::diagonal(order, d);
      })
      .def_property_readonly("order", &Tensor::order)
      .def_property_readonly("dim", &Tensor::dim)
      .def_property_readonly("nnz", &Tensor::nnz)
      .def("entries", [](const Tensor& a) {
        std::vector<std::pair<std::vector<int>, double>> out;
        for (const Entry& e : a.entries()) out.emplace_back(e.index, e.value);
        return out;
      })
      .def("at", [](const Tensor& a, const std::vector<int>& idx) { return a.at(idx); })
      .def("__eq__", [](const Tensor& a, const Tensor& b) { return a == b; })
      .def("__repr__", [](const Tensor& a) {
        return "Tensor(order=" + std::to_string(a.order()) + ", dim=" +
               std::to_string(a.dim()) + ", nnz=" + std::to_string(a.nnz()) + ")";
      });

  py::class_<TcpInstance>(m, "TcpInstance")
      .def(py::init<Tensor, Vec>(), py::arg("tensor"), py::arg("q"))
      .def_property_readonly("tensor", &TcpInstance::tensor)
      .def_property_readonly("q", &TcpInstance::q)
      .def("__eq__", [](const TcpInstance& a, const TcpInstance& b) { return a == b; });

  m.def("apply_power", &apply_power, py::arg("tensor"), py::arg("x"));
  m.def("form_value", &form_value, py::arg("tensor"), py::arg("x"));
  m.def("principal_subtensor",
        [](const Tensor& a, const std::vector<int>& subset) {
          return principal_subtensor(a, subset);
        });
  m.def("random_tensor", &random_tensor, py::arg("order"), py::arg("dim"),
        py::arg("density"), py::arg("lo"), py::arg("hi"), py::arg("seed"));
  m.def("p_objective", &p_objective);
  m.def("strong_p_objective",
        py::overload_cast<const Tensor&, const Vec&, const Vec&>(&strong_p_objective));

  m.def("residuals", [](const TcpInstance& inst, const Vec& x) {
    return to_py(to_json(residuals(inst, x)));
  });
  m.def("is_solution", &is_solution, py::arg("instance"), py::arg("x"),
        py::arg("tol") = kSolutionTol);
  m.def("natural_residual_norm", &natural_residual_norm);

  m.def(
      "enumerate_solutions",
      [](const TcpInstance& inst, std::uint64_t seed, int threads) {
        SolverOptions o;
        o.seed = seed;
        o.threads = threads;
        py::gil_scoped_release release;
        const Json j = to_json(enumerate_solutions(inst, o));
        py::gil_scoped_acquire acquire;
        return to_py(j);
      },
      py::arg("instance"), py::arg("seed") = kDefaultSeed, py::arg("threads") = 1);
  m.def(
      "solve_iterative",
      [](const TcpInstance& inst, std::optional<Vec> start, std::uint64_t seed) {
        IterativeOptions o;
        o.start = std::move(start);
        o.seed = seed;
        return to_py(to_json(solve_iterative(inst, o)));
      },
      py::arg("instance"), py::arg("start") = std::nullopt,
      py::arg("seed") = kDefaultSeed);
  m.def(
      "gus_probe",
      [](const Tensor& a, const std::vector<Vec>& qs,
         std::optional<std::tuple<double, double, int>> grid, std::uint64_t seed) {
        GusOptions o;
        o.solver.seed = seed;
        if (grid) {
          std::tie(o.grid_lo, o.grid_hi, o.grid_steps) = *grid;
        } else if (!qs.empty()) {
          o.include_grid = false;
        }
        return to_py(to_json(gus_probe(a, qs, o), o));
      },
      py::arg("tensor"), py::arg("qs") = std::vector<Vec>{},
      py::arg("grid") = std::nullopt, py::arg("seed") = kDefaultSeed,
      "Without qs the default grid is probed; with qs only those unless grid "
      "is given as (lo, hi, steps).");
  m.def(
      "check",
      [](const std::string& property, const Tensor& a, std::size_t samples,
         std::uint64_t seed) {
        CheckOptions o;
        o.samples = samples;
        o.seed = seed;
        return to_py(to_json(check_property(property_of(property), a, o), o));
      },
      py::arg("property"), py::arg("tensor"), py::arg("samples") = 20000,
      py::arg("seed") = kDefaultSeed, "property: p, ssp, r or strong-p");
  m.def(
      "eigenpairs",
      [](const Tensor& a, const std::string& kind, std::uint64_t seed) {
        EigenOptions o;
        o.seed = seed;
        if (kind == "h" || kind == "H") return to_py(to_json(h_eigenpairs(a, o), o));
        if (kind == "z" || kind == "Z") return to_py(to_json(z_eigenpairs(a, o), o));
        throw Error(ErrorCode::kBadValue, "kind must be h or z");
      },
      py::arg("tensor"), py::arg("kind"), py::arg("seed") = kDefaultSeed);
  m.def(
      "repro",
      [](const std::string& id, std::uint64_t seed) {
        if (id == "all") {
          std::vector<ReproReport> all;
          for (std::string_view c : kReproCases) all.push_back(repro_case(c, seed));
          return to_py(to_json(all));
        }
        return to_py(to_json(repro_case(id, seed)));
      },
      py::arg("case"), py::arg("seed") = kDefaultSeed);

  m.def("tensor_to_json", [](const Tensor& a) { return to_py(to_json(a)); });
  m.def("tensor_from_json", [](const py::object& o) { return tensor_from_json(from_py(o)); });
  m.def("instance_to_json", [](const TcpInstance& i) { return to_py(to_json(i)); });
  m.def("instance_from_json",
        [](const py::object& o) { return instance_from_json(from_py(o)); });
}
