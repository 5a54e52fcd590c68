#include "bella/envelope.hpp"

#include <cmath>

namespace bella {

Vec forward_step(const Problem& problem, double gamma, const Vec& x) {
  const Kernel& h = problem.kernel;
  if (!(gamma > 0.0)) throw std::invalid_argument("forward_step requires gamma > 0");
  if (!h.in_domain_interior(x))
    throw std::domain_error("forward_step: point outside int dom h");
  const Vec dual = h.gradient(x) - gamma * problem.smooth.gradient(x);
  return h.gradient_conjugate(dual);
}

FbStep fb_operator(const Problem& problem, double gamma, const Vec& x) {
  const Kernel& h = problem.kernel;
  if (!(gamma > 0.0)) throw std::invalid_argument("fb_operator requires gamma > 0");
  if (!h.in_domain_interior(x))
    throw std::domain_error("fb_operator: point outside int dom h");

  FbStep step;
  step.x = x;
  step.gamma = gamma;
  step.f_x = problem.smooth.value(x);
  step.grad_f_x = problem.smooth.gradient(x);
  step.forward_point = h.gradient_conjugate(h.gradient(x) - gamma * step.grad_f_x);
  step.x_bar = problem.nonsmooth.bregman_prox(h, gamma, step.forward_point);
  if (!h.in_domain_interior(step.x_bar))
    throw RangeViolationError(
        "forward-backward range violation: prox output left int dom h (problem '" +
        problem.name + "')");
  step.f_xbar = problem.smooth.value(step.x_bar);
  step.g_xbar = problem.nonsmooth.value(step.x_bar);
  step.bregman_residual = bregman_distance(h, step.x_bar, x);
  step.bfbe = step.f_x + step.grad_f_x.dot(step.x_bar - x) + step.g_xbar +
              step.bregman_residual / gamma;
  return step;
}

double bfbe(const Problem& problem, double gamma, const Vec& x) {
  return fb_operator(problem, gamma, x).bfbe;
}

Vec bfbe_gradient(const Problem& problem, double gamma, const Vec& x) {
  if (!problem.smooth.has_hessian_vec())
    throw std::logic_error(
        "bfbe_gradient: smooth term does not provide a Hessian-vector product");
  const FbStep step = fb_operator(problem, gamma, x);
  const Vec r = step.x - step.x_bar;
  return Vec(problem.kernel.hessian_vec(x, r) / gamma - problem.smooth.hessian_vec(x, r));
}

}  // namespace bella
