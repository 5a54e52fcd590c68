#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bella/kernels.hpp"

namespace bella {

/// Smooth part f of the composite objective, with its relative-smoothness
/// modulus L_f w.r.t. the paired kernel. hessian_vec is optional and only
/// needed by envelope-gradient diagnostics.
struct SmoothTerm {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Vec(const Vec&, const Vec&)> hessian_vec;  // may be empty
  double rel_smoothness = 0.0;

  bool has_hessian_vec() const { return static_cast<bool>(hessian_vec); }
};

/// Nonsmooth part g with its Bregman proximal oracle
///   bregman_prox(h, gamma, zbar) in argmin_z { g(z) + (1/gamma) D_h(z, zbar) }.
/// The oracle returns exactly one point even where the argmin is set-valued;
/// tie-breaks are documented per prox.
struct NonsmoothTerm {
  std::function<double(const Vec&)> value;  // extended real
  std::function<Vec(const Kernel&, double, const Vec&)> bregman_prox;
};

/// Composite model: minimize f(x) + g(x) over the closure of int dom h.
struct Problem {
  std::string name;
  SmoothTerm smooth;
  NonsmoothTerm nonsmooth;
  Kernel kernel;
  std::optional<double> known_infimum;
  std::function<double(const Vec&)> solution_set_distance;  // may be empty

  Eigen::Index dimension() const { return kernel.dimension(); }
  double objective(const Vec& x) const { return smooth.value(x) + nonsmooth.value(x); }
  bool has_solution_distance() const { return static_cast<bool>(solution_set_distance); }
};

/// Benchmark registry. Names: "quadratic", "circle", "l0-ls", "l1-ls",
/// "poisson". Random data is drawn from splitmix64 streams keyed on `seed`,
/// so a (name, n, seed) triple wires a bit-reproducible problem.
Problem builtin_problem(const std::string& name, Eigen::Index n, std::uint64_t seed);
std::vector<std::string> builtin_problem_names();

/// Euclidean-kernel prox of g = lambda |.|_0: keep entries strictly above the
/// threshold sqrt(2 gamma lambda), zero the rest. Exact ties go to zero.
Vec hard_threshold_prox(double gamma, double lambda, const Vec& zbar);

/// Euclidean-kernel prox of g = lambda |.|_1 (soft threshold at gamma lambda).
Vec soft_threshold_prox(double gamma, double lambda, const Vec& zbar);

/// g identically zero; prox returns the anchor.
NonsmoothTerm zero_nonsmooth();

/// Indicator of the box [lo, hi]^n. For separable kernels the per-coordinate
/// D_h(., zbar) is convex with minimum at zbar, so the prox is the clamp.
NonsmoothTerm box_indicator_nonsmooth(double lo, double hi);

/// SmoothTerm-flavored overload of the kernels-module check.
inline RelSmoothnessReport verify_relative_smoothness(
    const Kernel& kernel, const SmoothTerm& f, double L,
    const std::vector<std::pair<Vec, Vec>>& samples) {
  return verify_relative_smoothness(kernel, f.value, f.gradient, L, samples);
}

}  // namespace bella
