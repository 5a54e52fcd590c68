#include <cmath>

#include <doctest.h>

#include "bella/envelope.hpp"
#include "bella/reference.hpp"
#include "test_util.hpp"

using namespace bella;
using bella::testing::sample_interior;

namespace {

Problem zero_problem(Eigen::Index n) {
  SmoothTerm f;
  f.value = [](const Vec&) { return 0.0; };
  f.gradient = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
  f.hessian_vec = [](const Vec&, const Vec& v) { return Vec(Vec::Zero(v.size())); };
  f.rel_smoothness = 0.0;
  return Problem{"zero", std::move(f), zero_nonsmooth(), euclidean_kernel(n), 0.0, nullptr};
}

// 1-D least squares with identity design and l1 penalty, lambda = 1.
Problem identity_l1_problem() {
  SmoothTerm f;
  f.value = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  f.gradient = [](const Vec& x) { return x; };
  f.hessian_vec = [](const Vec&, const Vec& v) { return v; };
  f.rel_smoothness = 1.0;
  NonsmoothTerm g;
  g.value = [](const Vec& x) { return x.lpNorm<1>(); };
  g.bregman_prox = [](const Kernel&, double gamma, const Vec& zbar) {
    return soft_threshold_prox(gamma, 1.0, zbar);
  };
  return Problem{"identity-l1", std::move(f), std::move(g), euclidean_kernel(1), std::nullopt,
                 nullptr};
}

double bisect_cubic_root(double target) {  // t^3 + t = target, oracle for the quartic map
  double lo = 0.0, hi = std::max(1.0, target);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * mid + mid < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("forward_step: gradient step under the energy kernel") {
  const Problem p = builtin_problem("quadratic", 1, 0);
  Vec x(1);
  x << 2.0;
  CHECK(forward_step(p, 0.5, x)[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("forward_step: identity when f = 0") {
  const Problem p = zero_problem(3);
  SplitMix64 gen(1);
  const Vec x = gen.uniform_vector(3, -2.0, 2.0);
  CHECK((forward_step(p, 0.7, x) - x).norm() == 0.0);
}

TEST_CASE("forward_step through the quartic mirror map matches the bisection oracle") {
  SmoothTerm f;  // f = x^4/4 in one dimension
  f.value = [](const Vec& x) { return 0.25 * std::pow(x[0], 4); };
  f.gradient = [](const Vec& x) { return Vec(Vec::Constant(1, std::pow(x[0], 3))); };
  f.rel_smoothness = 1.0;
  const Problem p{"quartic-1d", std::move(f), zero_nonsmooth(), quartic_kernel(1, 1.0, 1.0),
                  std::nullopt, nullptr};
  Vec x(1);
  x << 1.0;
  // grad h(1) = 2, grad f(1) = 1, dual point 2 - 0.5 = 1.5
  const double expected = bisect_cubic_root(1.5);
  const Vec z = forward_step(p, 0.5, x);
  CHECK(z[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(z[0] == doctest::Approx(0.8612241).epsilon(1e-6));
}

TEST_CASE("forward_step rejects points outside the interior") {
  const Problem p = builtin_problem("poisson", 2, 0);
  Vec bad(2);
  bad << 1.0, -1.0;
  CHECK_THROWS_AS((void)forward_step(p, 0.01, bad), std::domain_error);
}

TEST_CASE("fb_operator on the quadratic: frozen step and residual") {
  const Problem p = builtin_problem("quadratic", 1, 0);
  Vec x(1);
  x << 2.0;
  const FbStep step = fb_operator(p, 0.5, x);
  CHECK(step.x_bar[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(step.bregman_residual == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(step.forward_point[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("fb_operator applies the prox after the forward step") {
  const Problem p = identity_l1_problem();
  Vec x(1);
  x << 2.0;
  const FbStep step = fb_operator(p, 0.5, x);
  CHECK(step.forward_point[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(step.x_bar[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("fb_operator at a fixed point returns the point itself") {
  const Problem p = builtin_problem("circle", 2, 0);
  Vec x(2);
  x << 1.0, 0.0;  // on the unit sphere: grad f = 0 and g = 0
  const FbStep step = fb_operator(p, 0.5, x);
  CHECK((step.x_bar - x).norm() == 0.0);
  CHECK(step.bregman_residual == 0.0);
}

TEST_CASE("bfbe: analytic model minimum on the quadratic") {
  const Problem p = builtin_problem("quadratic", 1, 0);
  Vec x(1);
  x << 2.0;
  // model 2 + 2(z-2) + (z-2)^2 has minimum value 1 at z = 1
  CHECK(bfbe(p, 0.5, x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("bfbe equals the objective exactly at fixed points") {
  const Problem p = builtin_problem("circle", 2, 0);
  Vec x(2);
  x << 0.0, 1.0;
  CHECK(bfbe(p, 0.5, x) == doctest::Approx(p.objective(x)).epsilon(1e-14));
}

TEST_CASE("bfbe vanishes identically for the empty model") {
  const Problem p = zero_problem(2);
  SplitMix64 gen(2);
  for (int i = 0; i < 10; ++i)
    CHECK(bfbe(p, 1.0, gen.uniform_vector(2, -5.0, 5.0)) == 0.0);
}

TEST_CASE("envelope upper bound and sandwich inequalities on sampled points") {
  SplitMix64 gen(3);
  for (const auto& name : builtin_problem_names()) {
    CAPTURE(name);
    const Problem p = builtin_problem(name, 2, 11);
    const double lf = p.smooth.rel_smoothness;
    const double gamma = 0.95 / lf;
    for (int i = 0; i < 100; ++i) {
      Vec x = sample_interior(p.kernel, gen);
      if (name == "poisson") x = x.array().max(0.2).min(4.0);
      const FbStep step = fb_operator(p, gamma, x);
      const double phi_x = p.objective(x);
      if (std::isfinite(phi_x)) CHECK(step.bfbe <= phi_x + 1e-8);
      const double gap = step.bfbe - step.phi_xbar();
      CHECK(gap >= (1.0 - gamma * lf) / gamma * step.bregman_residual - 1e-8);
      CHECK(gap <= (1.0 + gamma * lf) / gamma * step.bregman_residual + 1e-8);
      // equality in the upper bound only at (near) fixed points
      if (step.bregman_residual > 1e-12)
        CHECK(step.bfbe < phi_x + 1e-10);
    }
  }
}

TEST_CASE("fixed points persist when gamma shrinks") {
  const Problem p = builtin_problem("circle", 2, 0);
  Vec x(2);
  x << std::sqrt(0.5), -std::sqrt(0.5);
  for (double gamma : {0.9, 0.45, 0.225}) {
    const FbStep step = fb_operator(p, gamma, x);
    CHECK(step.bregman_residual <= 1e-18);
  }
}

TEST_CASE("bfbe_gradient: frozen value, zero at fixed points, FD agreement") {
  const Problem quadratic = builtin_problem("quadratic", 1, 0);
  Vec x(1);
  x << 2.0;
  // envelope is x^2/4 analytically, derivative x/2
  CHECK(bfbe_gradient(quadratic, 0.5, x)[0] == doctest::Approx(1.0).epsilon(1e-14));

  const Problem circle = builtin_problem("circle", 2, 0);
  Vec fixed(2);
  fixed << 1.0, 0.0;
  CHECK(bfbe_gradient(circle, 0.5, fixed).norm() == 0.0);

  SplitMix64 gen(5);
  for (const auto& name : {"quadratic", "circle"}) {
    const Problem p = builtin_problem(name, 2, 17);
    const double gamma = 0.95 / p.smooth.rel_smoothness;
    int checked = 0;
    while (checked < 50) {
      const Vec pt = gen.uniform_vector(2, -2.0, 2.0);
      const Vec analytic = bfbe_gradient(p, gamma, pt);
      if (analytic.norm() < 1e-6) continue;  // relative comparison needs signal
      const Vec fd = finite_diff_gradient(
          [&](const Vec& z) { return bfbe(p, gamma, z); }, pt, 1e-5);
      CHECK((fd - analytic).norm() <= 1e-5 * analytic.norm());
      ++checked;
    }
  }
}

TEST_CASE("bfbe_gradient demands a Hessian oracle") {
  Problem p = builtin_problem("quadratic", 2, 0);
  p.smooth.hessian_vec = nullptr;
  CHECK_THROWS_AS((void)bfbe_gradient(p, 0.5, Vec::Zero(2)), std::logic_error);
}

TEST_CASE("fb_operator flags range violations from a broken prox") {
  Problem p = builtin_problem("poisson", 2, 0);
  p.nonsmooth.bregman_prox = [](const Kernel&, double, const Vec& zbar) {
    return Vec(-zbar);  // leaves the Burg domain on purpose
  };
  Vec x(2);
  x << 1.0, 1.0;
  CHECK_THROWS_AS((void)fb_operator(p, 0.01, x), RangeViolationError);
}
