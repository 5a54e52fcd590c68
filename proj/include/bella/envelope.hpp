#pragma once

#include <stdexcept>

#include "bella/problem.hpp"

namespace bella {

/// The proximal step landed outside int dom h, violating the standing
/// range assumption on the forward-backward operator.
class RangeViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One forward-backward application at x: the mirror forward point, the
/// prox output x_bar in T(x), the envelope value and the Bregman residual
/// D_h(x_bar, x). Smooth/nonsmooth evaluations made along the way are cached
/// so a linesearch can reuse the accepted candidate's step as the next
/// iteration's base point without extra oracle calls.
struct FbStep {
  Vec x;
  Vec x_bar;
  Vec forward_point;
  double bfbe = 0.0;
  double bregman_residual = 0.0;
  double gamma = 0.0;

  // cached oracle values
  double f_x = 0.0;
  Vec grad_f_x;
  double f_xbar = 0.0;
  double g_xbar = 0.0;

  double phi_xbar() const { return f_xbar + g_xbar; }
  Vec residual() const { return x - x_bar; }
};

/// Mirror gradient step: nabla h^*(nabla h(x) - gamma nabla f(x)).
Vec forward_step(const Problem& problem, double gamma, const Vec& x);

/// Full Bregman forward-backward application (prox of g at the forward
/// point). Throws RangeViolationError if the prox output leaves int dom h.
FbStep fb_operator(const Problem& problem, double gamma, const Vec& x);

/// Envelope value at x:
///   f(x) + <grad f(x), x_bar - x> + g(x_bar) + (1/gamma) D_h(x_bar, x).
/// One prox call total.
double bfbe(const Problem& problem, double gamma, const Vec& x);

/// Envelope gradient ((1/gamma) hess_h(x) - hess_f(x)) (x - x_bar).
/// A gradient only where T is single-valued and g is prox-regular; exposed
/// as a diagnostic. Requires hessian_vec on the smooth term.
Vec bfbe_gradient(const Problem& problem, double gamma, const Vec& x);

}  // namespace bella
