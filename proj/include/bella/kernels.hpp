#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bella/rng.hpp"

namespace bella {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Root solve or other numeric procedure failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Legendre kernel oracle: value h, gradient, Hessian-vector product,
/// inverse gradient map (the conjugate gradient), and an interior-domain test.
///
/// Kernels are immutable after construction and shareable across concurrent
/// solver runs; every operation is pure. Vector lengths are checked against
/// the declared dimension on each call.
class Kernel {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  using HessVecFn = std::function<Vec(const Vec&, const Vec&)>;
  using PredFn = std::function<bool(const Vec&)>;

  Kernel(std::string name, Eigen::Index dimension, ValueFn value, GradFn gradient,
         HessVecFn hessian_vec, GradFn gradient_conjugate, PredFn domain_interior_test,
         bool coercive = true)
      : name_(std::move(name)),
        dimension_(dimension),
        value_(std::move(value)),
        gradient_(std::move(gradient)),
        hessian_vec_(std::move(hessian_vec)),
        gradient_conjugate_(std::move(gradient_conjugate)),
        domain_interior_test_(std::move(domain_interior_test)),
        coercive_(coercive) {
    if (dimension_ <= 0) throw std::invalid_argument("kernel dimension must be positive");
  }

  const std::string& name() const { return name_; }
  Eigen::Index dimension() const { return dimension_; }
  bool coercive() const { return coercive_; }

  /// h(x); +inf outside the declared domain.
  double value(const Vec& x) const {
    check_dim(x);
    return value_(x);
  }

  Vec gradient(const Vec& x) const {
    check_dim(x);
    return gradient_(x);
  }

  Vec hessian_vec(const Vec& x, const Vec& v) const {
    check_dim(x);
    check_dim(v);
    return hessian_vec_(x, v);
  }

  /// The inverse gradient map nabla h^* (defined on the gradient range).
  Vec gradient_conjugate(const Vec& y) const {
    check_dim(y);
    return gradient_conjugate_(y);
  }

  bool in_domain_interior(const Vec& x) const {
    check_dim(x);
    return domain_interior_test_(x);
  }

 private:
  void check_dim(const Vec& v) const {
    if (v.size() != dimension_)
      throw std::invalid_argument("kernel '" + name_ + "' expects dimension " +
                                  std::to_string(dimension_) + ", got " +
                                  std::to_string(v.size()));
  }

  std::string name_;
  Eigen::Index dimension_;
  ValueFn value_;
  GradFn gradient_;
  HessVecFn hessian_vec_;
  GradFn gradient_conjugate_;
  PredFn domain_interior_test_;
  bool coercive_;
};

// Built-in kernels.
Kernel euclidean_kernel(Eigen::Index n);
Kernel quartic_kernel(Eigen::Index n, double alpha, double beta);
Kernel shannon_entropy_kernel(Eigen::Index n);
Kernel burg_entropy_kernel(Eigen::Index n);

/// Kernel registry lookup: "euclidean", "quartic:alpha:beta", "shannon", "burg".
Kernel make_kernel(const std::string& spec, Eigen::Index n);
std::vector<std::string> kernel_registry_names();

/// Bregman distance D_h(x, y) = h(x) - h(y) - <grad h(y), x - y>; +inf when
/// y is not interior or x is outside dom h. Nonnegative; zero iff x == y.
///
/// When the direct formula loses all significant digits (x close to y), the
/// value is recovered from the second-order model 0.5 <d, hess_h(y) d>, which
/// is accurate exactly in that regime. This keeps D_h-based stopping tests
/// meaningful at tolerances far below the cancellation floor of h.
double bregman_distance(const Kernel& kernel, const Vec& x, const Vec& y);

/// Inverse gradient map of the quartic kernel h = (alpha/4)|x|^4 + (beta/2)|x|^2:
/// returns x = (t/|y|) y where t >= 0 solves alpha t^3 + beta t = |y|.
/// Safeguarded Newton with bisection fallback on the bracket [0, max(1, |y|/beta)].
Vec gradient_conjugate_quartic(const Vec& y, double alpha, double beta);

struct RelSmoothnessReport {
  bool pass = true;
  double worst_ratio = 0.0;  // max |f(y)-f(x)-<grad f(x),y-x>| / (L D_h(y,x))
  std::ptrdiff_t worst_pair = -1;
  std::ptrdiff_t pairs_checked = 0;
};

/// Checks the two-sided descent inequality
///   |f(y) - f(x) - <grad f(x), y - x>| <= L D_h(y, x)
/// at every sampled pair. Samples outside int dom h are rejected.
RelSmoothnessReport verify_relative_smoothness(
    const Kernel& kernel, const std::function<double(const Vec&)>& f_value,
    const std::function<Vec(const Vec&)>& f_gradient, double L,
    const std::vector<std::pair<Vec, Vec>>& samples);

}  // namespace bella
