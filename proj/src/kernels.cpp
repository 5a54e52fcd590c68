#include "bella/kernels.hpp"

#include <cmath>
#include <sstream>

namespace bella {

namespace {

constexpr double kInteriorFloor = 1e-300;  // strictly positive, subnormal-safe

bool all_above_floor(const Vec& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!(x[i] > kInteriorFloor)) return false;
  return true;
}

}  // namespace

Kernel euclidean_kernel(Eigen::Index n) {
  return Kernel(
      "euclidean", n, [](const Vec& x) { return 0.5 * x.squaredNorm(); },
      [](const Vec& x) { return x; }, [](const Vec&, const Vec& v) { return v; },
      [](const Vec& y) { return y; }, [](const Vec&) { return true; },
      /*coercive=*/true);
}

Kernel quartic_kernel(Eigen::Index n, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("quartic kernel requires alpha > 0 and beta > 0");
  std::ostringstream name;
  name << "quartic:" << alpha << ":" << beta;
  return Kernel(
      name.str(), n,
      [alpha, beta](const Vec& x) {
        const double s = x.squaredNorm();
        return 0.25 * alpha * s * s + 0.5 * beta * s;
      },
      [alpha, beta](const Vec& x) { return Vec((alpha * x.squaredNorm() + beta) * x); },
      [alpha, beta](const Vec& x, const Vec& v) {
        return Vec((alpha * x.squaredNorm() + beta) * v + (2.0 * alpha * x.dot(v)) * x);
      },
      [alpha, beta](const Vec& y) { return gradient_conjugate_quartic(y, alpha, beta); },
      [](const Vec&) { return true; },
      /*coercive=*/true);
}

Kernel shannon_entropy_kernel(Eigen::Index n) {
  return Kernel(
      "shannon", n,
      [](const Vec& x) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          if (x[i] < 0.0) return kInf;
          if (x[i] > 0.0) s += x[i] * std::log(x[i]);  // 0 log 0 = 0
        }
        return s;
      },
      [](const Vec& x) {
        Vec g(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = std::log(x[i]) + 1.0;
        return g;
      },
      [](const Vec& x, const Vec& v) { return Vec(v.array() / x.array()); },
      [](const Vec& y) { return Vec((y.array() - 1.0).exp()); }, &all_above_floor,
      /*coercive=*/true);
}

Kernel burg_entropy_kernel(Eigen::Index n) {
  return Kernel(
      "burg", n,
      [](const Vec& x) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          if (!(x[i] > 0.0)) return kInf;
          s -= std::log(x[i]);
        }
        return s;
      },
      [](const Vec& x) { return Vec(-x.array().inverse()); },
      [](const Vec& x, const Vec& v) { return Vec(v.array() / x.array().square()); },
      [](const Vec& y) {
        for (Eigen::Index i = 0; i < y.size(); ++i)
          if (!(y[i] < 0.0))
            throw NumericalError(
                "burg inverse gradient map undefined: component " + std::to_string(i) +
                " of the dual point is nonnegative (" + std::to_string(y[i]) + ")");
        return Vec(-y.array().inverse());
      },
      &all_above_floor,
      // Not 1-coercive: -log grows sublinearly. The solver warns when it sees
      // this flag; Burg stays in the registry for Poisson-type problems.
      /*coercive=*/false);
}

Kernel make_kernel(const std::string& spec, Eigen::Index n) {
  if (spec == "euclidean") return euclidean_kernel(n);
  if (spec == "shannon") return shannon_entropy_kernel(n);
  if (spec == "burg") return burg_entropy_kernel(n);
  if (spec.rfind("quartic", 0) == 0) {
    double alpha = 1.0, beta = 1.0;
    if (spec.size() > 7) {
      if (spec[7] != ':') throw std::invalid_argument("bad quartic kernel spec '" + spec + "'");
      std::istringstream rest(spec.substr(8));
      std::string a, b;
      if (!std::getline(rest, a, ':') || !std::getline(rest, b))
        throw std::invalid_argument("quartic kernel spec must be 'quartic:alpha:beta'");
      alpha = std::stod(a);
      beta = std::stod(b);
    }
    return quartic_kernel(n, alpha, beta);
  }
  std::string names;
  for (const auto& s : kernel_registry_names()) names += (names.empty() ? "" : ", ") + s;
  throw std::invalid_argument("unknown kernel '" + spec + "'; valid kernels: " + names);
}

std::vector<std::string> kernel_registry_names() {
  return {"euclidean", "quartic:alpha:beta", "shannon", "burg"};
}

double bregman_distance(const Kernel& kernel, const Vec& x, const Vec& y) {
  if (!kernel.in_domain_interior(y)) return kInf;
  const double hx = kernel.value(x);
  if (!std::isfinite(hx)) return kInf;
  const double hy = kernel.value(y);
  const Vec d = x - y;
  const double lin = kernel.gradient(y).dot(d);
  const double raw = hx - hy - lin;
  const double scale = std::abs(hx) + std::abs(hy) + std::abs(lin);
  constexpr double kCancelGuard = 64.0 * std::numeric_limits<double>::epsilon();
  if (std::abs(raw) <= kCancelGuard * scale) {
    // All digits of the direct formula are rounding noise here; the quadratic
    // model is exact to O(|d|^3) and |d| is tiny whenever D_h is.
    const double quad = 0.5 * d.dot(kernel.hessian_vec(y, d));
    return quad > 0.0 ? quad : 0.0;
  }
  return raw > 0.0 ? raw : 0.0;
}

Vec gradient_conjugate_quartic(const Vec& y, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("gradient_conjugate_quartic requires alpha > 0, beta > 0");
  const double r = y.norm();
  if (r == 0.0) return Vec::Zero(y.size());

  // alpha t^3 + beta t is strictly increasing, so the root is unique and
  // bracketed by [0, max(1, r/beta)].
  double lo = 0.0;
  double hi = std::max(1.0, r / beta);
  auto residual = [&](double t) { return (alpha * t * t * t) + beta * t - r; };
  double t = 0.5 * hi;
  double f = residual(t);
  const double tol = 1e-14 * std::max(1.0, r);
  bool coarse_ok = false;
  for (int iter = 0; iter < 200; ++iter) {
    if (f == 0.0) break;
    if (std::abs(f) <= tol) {
      // Keep polishing to machine precision so the inverse-map round trip
      // stays tight even for small |y|; stop once Newton stagnates.
      if (coarse_ok) break;
      coarse_ok = true;
    }
    if (f > 0.0)
      hi = t;
    else
      lo = t;
    const double df = 3.0 * alpha * t * t + beta;
    double t_next = t - f / df;
    if (!(t_next > lo && t_next < hi)) t_next = 0.5 * (lo + hi);  // bisection fallback
    if (t_next == t) break;
    t = t_next;
    f = residual(t);
  }
  if (std::abs(f) > tol)
    throw NumericalError("quartic inverse gradient root solve did not converge: residual " +
                         std::to_string(f));
  return Vec((t / r) * y);
}

RelSmoothnessReport verify_relative_smoothness(
    const Kernel& kernel, const std::function<double(const Vec&)>& f_value,
    const std::function<Vec(const Vec&)>& f_gradient, double L,
    const std::vector<std::pair<Vec, Vec>>& samples) {
  if (L < 0.0) throw std::invalid_argument("relative smoothness modulus must be nonnegative");
  RelSmoothnessReport report;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Vec& x = samples[i].first;
    const Vec& y = samples[i].second;
    if (!kernel.in_domain_interior(x) || !kernel.in_domain_interior(y))
      throw std::domain_error("verify_relative_smoothness: sample pair " + std::to_string(i) +
                              " lies outside int dom h");
    const double fx = f_value(x);
    const double fy = f_value(y);
    const double lhs = std::abs(fy - fx - f_gradient(x).dot(y - x));
    const double rhs = L * bregman_distance(kernel, y, x);
    const double slack = 1e-10 * (1.0 + std::abs(fx) + std::abs(fy) + rhs);
    const double ratio = lhs / (rhs > 0.0 ? rhs : (lhs > slack ? 0.0 : 1.0));
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_pair = static_cast<std::ptrdiff_t>(i);
    }
    if (lhs > rhs + slack) report.pass = false;
    ++report.pairs_checked;
  }
  return report;
}

}  // namespace bella
