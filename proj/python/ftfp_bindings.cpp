#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "ftfp/errors.hpp"
#include "ftfp/instance.hpp"
#include "ftfp/lp.hpp"
#include "ftfp/pipeline.hpp"
#include "ftfp/solution.hpp"
#include "ftfp/solvers.hpp"

namespace py = pybind11;
using namespace ftfp;

namespace {

template <typename T>
std::vector<std::vector<T>> to_rows(const Matrix<T>& m) {
  std::vector<std::vector<T>> out(m.rows(), std::vector<T>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

template <typename T>
Matrix<T> from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
  Matrix<T> m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw py::value_error("ragged matrix: row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Instance make_instance(std::vector<double> site_costs, std::vector<Demand> demands,
                       const std::vector<std::vector<double>>& dist, std::string name) {
  if (dist.size() != site_costs.size()) throw py::value_error("dist must have one row per site");
  Instance inst;
  inst.dist = from_rows(dist, demands.size());
  inst.site_costs = std::move(site_costs);
  inst.demands = std::move(demands);
  inst.name = std::move(name);
  return inst;
}

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["algo"] = std::string(to_string(r.algo));
  d["cost_s1"] = r.cost_s1;
  d["cost_s2"] = r.cost_s2;
  d["cost_total"] = r.cost_total;
  d["lp_star"] = r.lp_star;
  d["lp_star_residual"] = r.lp_star_residual;
  d["lp_star_residual_capped"] = r.lp_star_residual_capped;
  d["rho_sub"] = r.rho_sub;
  d["ratio_total"] = r.ratio_total;
  d["chain_bound"] = r.chain_bound;
  d["chain_slack"] = r.chain_slack;
  d["wall_times"] = r.wall_times;
  return d;
}

py::tuple violations(const std::vector<Violation>& vs) {
  py::list out;
  for (const auto& v : vs) out.append(py::make_tuple(v.kind, v.message));
  return py::tuple(out);
}

Subroutine make_sub(const std::string& ftfl, std::uint64_t node_budget) {
  return Subroutine{parse_subroutine_kind(ftfl), node_budget};
}

}  // namespace

PYBIND11_MODULE(ftfp, m) {
  m.doc() = "Fault-tolerant facility placement: LP rounding pipelines and exact solvers";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  py::class_<Instance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("site_costs"), py::arg("demands"), py::arg("dist"),
           py::arg("name") = "")
      .def_readwrite("site_costs", &Instance::site_costs)
      .def_readwrite("demands", &Instance::demands)
      .def_readwrite("name", &Instance::name)
      .def_property(
          "dist", [](const Instance& i) { return to_rows(i.dist); },
          [](Instance& i, const std::vector<std::vector<double>>& d) { i.dist = from_rows(d, i.num_clients()); })
      .def_property_readonly("num_sites", &Instance::num_sites)
      .def_property_readonly("num_clients", &Instance::num_clients)
      .def_property_readonly("max_demand", &Instance::max_demand)
      .def_property_readonly("min_demand", &Instance::min_demand)
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; })
      .def("__repr__", [](const Instance& i) {
        return "<ftfp.Instance n=" + std::to_string(i.num_sites()) + " m=" + std::to_string(i.num_clients()) + ">";
      });

  py::class_<IntegralSolution>(m, "Solution")
      .def_readonly("y", &IntegralSolution::y)
      .def_property_readonly("x", [](const IntegralSolution& s) { return to_rows(s.x); })
      .def_readonly("cost", &IntegralSolution::cost)
      .def("__repr__", [](const IntegralSolution& s) { return "<ftfp.Solution cost=" + format_real(s.cost) + ">"; });

  m.def("parse_instance", &parse_instance_string, py::arg("text"));
  m.def("serialize_instance", &serialize_instance, py::arg("instance"));
  m.def("read_instance", &read_instance_file, py::arg("path"));
  m.def(
      "generate",
      [](int sites, int clients, Demand demand_min, Demand demand_max, std::uint64_t seed, double cost_min,
         double cost_max) {
        return generate(GenParams{sites, clients, demand_min, demand_max, cost_min, cost_max, seed});
      },
      py::arg("sites"), py::arg("clients"), py::arg("demand_min"), py::arg("demand_max"), py::arg("seed"),
      py::arg("cost_min") = 0.0, py::arg("cost_max") = 1.0);
  m.def("validate", [](const Instance& i) { return violations(validate(i)); }, py::arg("instance"),
        "Empty tuple when valid, else (kind, message) pairs.");

  m.def(
      "solve_lp",
      [](const Instance& inst, std::optional<std::vector<double>> caps) {
        const LpSolution lp = solve_lp(build_lp(inst, std::move(caps)));
        py::dict d;
        d["objective"] = lp.primal.objective;
        d["y"] = lp.primal.y;
        d["x"] = to_rows(lp.primal.x);
        d["alpha"] = lp.dual.alpha;
        d["beta"] = to_rows(lp.dual.beta);
        d["gamma"] = lp.dual.gamma;
        d["dual_objective"] = lp.dual.objective;
        return d;
      },
      py::arg("instance"), py::arg("caps") = py::none());
  m.def("lp_value", &lp_value, py::arg("instance"), py::arg("caps") = py::none());

  auto solve_with = [](SolveResult (*fn)(const Instance&, const Subroutine&)) {
    return [fn](const Instance& inst, const std::string& ftfl, std::uint64_t node_budget) {
      SolveResult res = [&] {
        py::gil_scoped_release release;
        return fn(inst, make_sub(ftfl, node_budget));
      }();
      return py::make_tuple(res.solution, report_dict(res.report));
    };
  };
  m.def("solve_reduce", solve_with(&solve_reduce), py::arg("instance"), py::arg("ftfl") = "exact",
        py::arg("node_budget") = kDefaultNodeBudget, "Returns (solution, report).");
  m.def("solve_large", solve_with(&solve_large), py::arg("instance"), py::arg("ftfl") = "exact",
        py::arg("node_budget") = kDefaultNodeBudget, "Returns (solution, report).");
  m.def(
      "solve_oracle",
      [](const Instance& inst, std::uint64_t node_budget) {
        py::gil_scoped_release release;
        return solve_oracle(inst, node_budget);
      },
      py::arg("instance"), py::arg("node_budget") = kDefaultNodeBudget);
  m.def(
      "verify_solution",
      [](const Instance& inst, const std::vector<Demand>& y, const std::vector<std::vector<Demand>>& x, double cost) {
        IntegralSolution s{y, from_rows(x, inst.num_clients()), cost};
        return violations(verify_solution(inst, s));
      },
      py::arg("instance"), py::arg("y"), py::arg("x"), py::arg("cost"));
  m.def(
      "verify_solution", [](const Instance& inst, const IntegralSolution& s) { return violations(verify_solution(inst, s)); },
      py::arg("instance"), py::arg("solution"));
}
