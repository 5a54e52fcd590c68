#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bella/manifest.hpp"
#include "bella/reference.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

bella::SolveResult solve_impl(const bella::Problem& problem, const bella::SolverConfig& config,
                              const bella::Vec& x0, const std::string& direction,
                              double safeguard_D) {
  auto provider = bella::make_direction_provider(direction, safeguard_D);
  return bella::bella_solve(problem, config, x0, *provider);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bregman envelope linesearch (BELLA) composite-minimization solver";

  py::class_<bella::Kernel>(m, "Kernel")
      .def_property_readonly("name", &bella::Kernel::name)
      .def_property_readonly("dimension", &bella::Kernel::dimension)
      .def_property_readonly("coercive", &bella::Kernel::coercive)
      .def("value", &bella::Kernel::value, "x"_a)
      .def("gradient", &bella::Kernel::gradient, "x"_a)
      .def("hessian_vec", &bella::Kernel::hessian_vec, "x"_a, "v"_a)
      .def("gradient_conjugate", &bella::Kernel::gradient_conjugate, "y"_a)
      .def("in_domain_interior", &bella::Kernel::in_domain_interior, "x"_a);

  m.def("make_kernel", &bella::make_kernel, "spec"_a, "n"_a,
        "Kernel by name: euclidean | quartic:a:b | shannon | burg");
  m.def("bregman_distance", &bella::bregman_distance, "kernel"_a, "x"_a, "y"_a);

  py::class_<bella::Problem>(m, "Problem")
      .def_property_readonly("name", [](const bella::Problem& p) { return p.name; })
      .def_property_readonly("dimension", &bella::Problem::dimension)
      .def_property_readonly("rel_smoothness",
                             [](const bella::Problem& p) { return p.smooth.rel_smoothness; })
      .def_property_readonly("kernel", [](const bella::Problem& p) { return p.kernel; })
      .def_property_readonly("known_infimum",
                             [](const bella::Problem& p) { return p.known_infimum; })
      .def("objective", &bella::Problem::objective, "x"_a)
      .def("smooth_value", [](const bella::Problem& p, const bella::Vec& x) {
        return p.smooth.value(x);
      }, "x"_a)
      .def("smooth_gradient", [](const bella::Problem& p, const bella::Vec& x) {
        return p.smooth.gradient(x);
      }, "x"_a)
      .def("nonsmooth_value", [](const bella::Problem& p, const bella::Vec& x) {
        return p.nonsmooth.value(x);
      }, "x"_a)
      .def("prox", [](const bella::Problem& p, double gamma, const bella::Vec& zbar) {
        return p.nonsmooth.bregman_prox(p.kernel, gamma, zbar);
      }, "gamma"_a, "zbar"_a)
      .def("solution_set_distance", [](const bella::Problem& p, const bella::Vec& x) {
        if (!p.has_solution_distance())
          throw std::logic_error("problem has no solution_set_distance");
        return p.solution_set_distance(x);
      }, "x"_a);

  m.def("builtin_problem", &bella::builtin_problem, "name"_a, "n"_a, "seed"_a = 0);
  m.def("builtin_problem_names", &bella::builtin_problem_names);
  m.def("hard_threshold_prox", &bella::hard_threshold_prox, "gamma"_a, "lambda_"_a, "zbar"_a);
  m.def("soft_threshold_prox", &bella::soft_threshold_prox, "gamma"_a, "lambda_"_a, "zbar"_a);

  py::class_<bella::FbStep>(m, "FbStep")
      .def_readonly("x", &bella::FbStep::x)
      .def_readonly("x_bar", &bella::FbStep::x_bar)
      .def_readonly("forward_point", &bella::FbStep::forward_point)
      .def_readonly("bfbe", &bella::FbStep::bfbe)
      .def_readonly("bregman_residual", &bella::FbStep::bregman_residual)
      .def_readonly("gamma", &bella::FbStep::gamma);

  m.def("forward_step", &bella::forward_step, "problem"_a, "gamma"_a, "x"_a);
  m.def("fb_operator", &bella::fb_operator, "problem"_a, "gamma"_a, "x"_a);
  m.def("bfbe", &bella::bfbe, "problem"_a, "gamma"_a, "x"_a);
  m.def("bfbe_gradient", &bella::bfbe_gradient, "problem"_a, "gamma"_a, "x"_a);

  py::class_<bella::SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("gamma", &bella::SolverConfig::gamma)
      .def_readwrite("sigma", &bella::SolverConfig::sigma)
      .def_readwrite("epsilon", &bella::SolverConfig::epsilon)
      .def_readwrite("i_max", &bella::SolverConfig::i_max)
      .def_readwrite("max_iters", &bella::SolverConfig::max_iters)
      .def_readwrite("adaptive", &bella::SolverConfig::adaptive)
      .def_readwrite("initial_L", &bella::SolverConfig::initial_L)
      .def_readwrite("record_points", &bella::SolverConfig::record_points);

  m.def("default_solver_config", &bella::default_solver_config, "L"_a);

  py::class_<bella::IterationRecord>(m, "IterationRecord")
      .def_readonly("k", &bella::IterationRecord::k)
      .def_readonly("tau", &bella::IterationRecord::tau)
      .def_readonly("backtracks", &bella::IterationRecord::backtracks)
      .def_readonly("bfbe_value", &bella::IterationRecord::bfbe_value)
      .def_readonly("phi_at_xbar", &bella::IterationRecord::phi_at_xbar)
      .def_readonly("bregman_residual", &bella::IterationRecord::bregman_residual)
      .def_readonly("euclid_residual", &bella::IterationRecord::euclid_residual)
      .def_readonly("gamma", &bella::IterationRecord::current_gamma)
      .def_readonly("L", &bella::IterationRecord::current_L)
      .def_readonly("direction_norm", &bella::IterationRecord::direction_norm)
      .def_readonly("accepted_unit_step", &bella::IterationRecord::accepted_unit_step)
      .def_readonly("dist_to_solution", &bella::IterationRecord::dist_to_solution);

  py::class_<bella::SolveResult>(m, "SolveResult")
      .def_readonly("x_hat", &bella::SolveResult::x_hat)
      .def_readonly("x_final", &bella::SolveResult::x_final)
      .def_readonly("iterations", &bella::SolveResult::iterations)
      .def_property_readonly("status",
                             [](const bella::SolveResult& r) { return bella::to_string(r.status); })
      .def_readonly("total_prox_calls", &bella::SolveResult::total_prox_calls)
      .def_readonly("warnings", &bella::SolveResult::warnings)
      .def_readonly("failure_detail", &bella::SolveResult::failure_detail)
      .def_property_readonly("final_bregman_residual",
                             &bella::SolveResult::final_bregman_residual);

  m.def("solve", &solve_impl, "problem"_a, "config"_a, "x0"_a, "direction"_a = "bfbs",
        "safeguard_D"_a = 100.0,
        "Run the envelope linesearch from x0 with the named direction provider");
  m.def("residual_certificate", &bella::residual_certificate, "problem"_a, "gamma"_a, "x"_a,
        "x_bar"_a, "region_L_h"_a, "region_sigma_h"_a);

  m.def("finite_diff_gradient", &bella::finite_diff_gradient, "field"_a, "x"_a, "step"_a);
}
