#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>

#include "pdas/generate.hpp"
#include "pdas/isotonic.hpp"
#include "pdas/oracles.hpp"
#include "pdas/trend_filter.hpp"

namespace py = pybind11;
using namespace pdas;

namespace {

using InArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Vector to_vector(const InArray& a) {
  if (a.ndim() != 1) throw ValidationError("expected a one-dimensional array");
  return Vector(a.data(), a.data() + a.size());
}

py::array_t<double> to_array(const Vector& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

IRProblem ir_problem(const InArray& y, const std::optional<InArray>& w) {
  return w ? IRProblem(to_vector(y), to_vector(*w)) : IRProblem(to_vector(y));
}

SignPartition labels_from(const std::string& s) {
  std::vector<Label> labels;
  labels.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case 'P': labels.push_back(Label::P); break;
      case 'N': labels.push_back(Label::N); break;
      case 'A': labels.push_back(Label::A); break;
      default: throw ValidationError(std::string("partition labels must be P, N or A, got '") + c + "'");
    }
  }
  return SignPartition(std::move(labels));
}

py::list ranges_of(const BlockPartition& bp) {
  py::list out;
  for (const Block& b : bp.blocks()) out.append(py::make_tuple(b.lo, b.hi));
  return out;
}

py::dict ir_result(const IrSolution& s) {
  py::dict d;
  d["theta"] = to_array(s.theta);
  d["z"] = to_array(s.z);
  d["blocks"] = ranges_of(s.partition);
  d["report"] = s.report;
  return d;
}

py::dict oracle_result(const oracle::OracleResult& r) {
  py::dict d;
  d["theta"] = to_array(r.theta);
  d["z"] = to_array(r.z);
  d["sweeps"] = r.sweeps;
  d["polished"] = r.polished;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Primal-dual active-set solvers for isotonic regression and trend filtering";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
  py::register_exception<NotConverged>(m, "NotConverged", error.ptr());

  py::class_<SolveReport>(m, "SolveReport")
      .def_property_readonly("status", [](const SolveReport& r) { return to_string(r.status); })
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("merge_count", &SolveReport::merge_count)
      .def_readonly("split_count", &SolveReport::split_count)
      .def_readonly("division_count", &SolveReport::division_count)
      .def_readonly("violation_trajectory", &SolveReport::violation_trajectory)
      .def_readonly("cycle_period", &SolveReport::cycle_period)
      .def_readonly("objective", &SolveReport::objective)
      .def_readonly("wall_time", &SolveReport::wall_time)
      .def("__repr__", [](const SolveReport& r) {
        return "<SolveReport " + to_string(r.status) + " iterations=" + std::to_string(r.iterations) +
               ">";
      });

  m.def(
      "pav",
      [](const InArray& y, const std::optional<InArray>& w) {
        return ir_result(pav_solve(ir_problem(y, w)));
      },
      py::arg("y"), py::arg("w") = py::none(),
      "Isotonic regression by pool adjacent violators.");

  m.def(
      "pdas_ir",
      [](const InArray& y, const std::optional<InArray>& w,
         const std::optional<std::vector<std::pair<std::size_t, std::size_t>>>& warm_start) {
        const IRProblem problem = ir_problem(y, w);
        std::optional<BlockPartition> initial;
        if (warm_start) {
          BlockLayout layout{problem.size(), {}};
          for (auto [lo, hi] : *warm_start) layout.ranges.push_back({lo, hi});
          initial.emplace(problem, layout);
        }
        IrSolution s = [&] {
          py::gil_scoped_release release;
          return pdas_ir_solve(problem, initial);
        }();
        return ir_result(s);
      },
      py::arg("y"), py::arg("w") = py::none(), py::arg("warm_start") = py::none(),
      "Isotonic regression by the active-set method. warm_start is a list of\n"
      "inclusive 0-based (lo, hi) blocks covering the data.");

  m.def(
      "tf",
      [](const InArray& y, double lam, int order, const std::string& penalty,
         const std::string& variant, std::size_t max_iter, int t_max, std::size_t sf2_m,
         double delta_s, double delta_e, const std::optional<std::string>& warm_start) {
        const TFProblem problem(to_vector(y), lam, order, parse_penalty(penalty));
        TfSolverConfig cfg;
        cfg.variant = parse_variant(variant);
        cfg.max_iter = max_iter;
        cfg.sf1.t_max = t_max;
        cfg.sf2.m = sf2_m;
        cfg.sf2.delta_s = delta_s;
        cfg.sf2.delta_e = delta_e;
        std::optional<SignPartition> initial;
        if (warm_start) initial = labels_from(*warm_start);
        TfSolution s = [&] {
          py::gil_scoped_release release;
          return tf_solve(problem, cfg, initial);
        }();
        py::dict d;
        d["theta"] = to_array(s.point.theta);
        d["z"] = to_array(s.point.z);
        d["partition"] = s.partition.key();
        d["report"] = s.report;
        return d;
      },
      py::arg("y"), py::arg("lam"), py::arg("order") = 1, py::arg("penalty") = "l1",
      py::arg("variant") = "sf2", py::arg("max_iter") = default_max_iter, py::arg("t_max") = 5,
      py::arg("m") = 5, py::arg("delta_s") = 0.9, py::arg("delta_e") = 1.1,
      py::arg("warm_start") = py::none(),
      "Trend filtering. warm_start and the returned partition are strings with\n"
      "one of P, N, A per operator row.");

  m.def(
      "generate",
      [](const std::string& kind, std::size_t n, std::uint64_t seed,
         const std::optional<InArray>& base) {
        const Vector b = base ? to_vector(*base) : Vector{};
        return to_array(generate({parse_gen_kind(kind), n, seed}, b));
      },
      py::arg("kind"), py::arg("n"), py::arg("seed"), py::arg("base") = py::none(),
      "Synthetic data: linear, uniform or perturb.");

  m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("a"), py::arg("b") = 0);

  m.def(
      "objective_ir",
      [](const InArray& y, const InArray& theta, const std::optional<InArray>& w) {
        return objective_ir(ir_problem(y, w), to_vector(theta));
      },
      py::arg("y"), py::arg("theta"), py::arg("w") = py::none());

  m.def(
      "objective_tf",
      [](const InArray& y, const InArray& theta, double lam, int order, const std::string& penalty) {
        return objective_tf(TFProblem(to_vector(y), lam, order, parse_penalty(penalty)),
                            to_vector(theta));
      },
      py::arg("y"), py::arg("theta"), py::arg("lam"), py::arg("order") = 1,
      py::arg("penalty") = "l1");

  m.def(
      "dual_cd_ir",
      [](const InArray& y, const std::optional<InArray>& w) {
        return oracle_result(oracle::dual_cd_ir(ir_problem(y, w)));
      },
      py::arg("y"), py::arg("w") = py::none(), "Reference isotonic solver by dual coordinate descent.");

  m.def(
      "dual_cd_tf",
      [](const InArray& y, double lam, int order, const std::string& penalty,
         std::size_t max_sweeps, double tol) {
        const TFProblem problem(to_vector(y), lam, order, parse_penalty(penalty));
        return oracle_result(oracle::dual_cd_tf(problem, {max_sweeps, tol}));
      },
      py::arg("y"), py::arg("lam"), py::arg("order") = 1, py::arg("penalty") = "l1",
      py::arg("max_sweeps") = oracle::OracleConfig{}.max_sweeps,
      py::arg("tol") = oracle::OracleConfig{}.tol,
      "Reference trend filtering solver by dual coordinate descent.");

  m.def(
      "exhaustive_tf",
      [](const InArray& y, double lam, int order, const std::string& penalty) {
        return oracle_result(
            oracle::exhaustive_tf(TFProblem(to_vector(y), lam, order, parse_penalty(penalty))));
      },
      py::arg("y"), py::arg("lam"), py::arg("order") = 1, py::arg("penalty") = "l1",
      "Trend filtering by enumerating sign partitions; at most 12 operator rows.");

  m.def(
      "kkt_check_ir",
      [](const InArray& y, const InArray& theta, const InArray& z, double tol,
         const std::optional<InArray>& w) {
        return oracle::kkt_check_ir(ir_problem(y, w), to_vector(theta), to_vector(z), tol);
      },
      py::arg("y"), py::arg("theta"), py::arg("z"), py::arg("tol") = 1e-8,
      py::arg("w") = py::none());

  m.def(
      "optimality_check_tf",
      [](const InArray& y, const InArray& theta, const InArray& z, double lam, int order,
         const std::string& penalty, double tol) {
        return optimality_check_tf(TFProblem(to_vector(y), lam, order, parse_penalty(penalty)),
                                   {to_vector(theta), to_vector(z)}, tol);
      },
      py::arg("y"), py::arg("theta"), py::arg("z"), py::arg("lam"), py::arg("order") = 1,
      py::arg("penalty") = "l1", py::arg("tol") = 1e-8);
}
