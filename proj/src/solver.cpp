#include "bella/solver.hpp"

#include <cmath>
#include <sstream>

namespace bella {

namespace {

// Resolved (gamma, sigma) honoring the config's explicit values, with the
// documented defaults filled in from the modulus L.
std::pair<double, double> resolve_gamma_sigma(const SolverConfig& config, double L) {
  double gamma = config.gamma;
  if (gamma == 0.0) gamma = L > 0.0 ? 0.95 / L : 1.0;
  double sigma = config.sigma;
  if (sigma == 0.0) sigma = 0.45 * (1.0 - gamma * L) / gamma;
  return {gamma, sigma};
}

std::string format_window(double lo, double hi) {
  std::ostringstream os;
  os << "(" << lo << ", " << hi << ")";
  return os.str();
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::RangeViolation: return "RangeViolation";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

SolverConfig default_solver_config(double L) {
  if (L < 0.0) throw std::invalid_argument("modulus L must be nonnegative");
  SolverConfig config;
  auto [gamma, sigma] = resolve_gamma_sigma(config, L);
  config.gamma = gamma;
  config.sigma = sigma;
  return config;
}

void validate_config(const SolverConfig& config, double L_f) {
  if (config.epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
  if (config.max_iters <= 0) throw std::invalid_argument("max_iters must be positive");
  if (config.i_max && *config.i_max < 0)
    throw std::invalid_argument("i_max must be nonnegative");
  if (config.adaptive) {
    if (!(config.initial_L > 0.0))
      throw std::invalid_argument("adaptive mode requires initial_L > 0");
    if (config.gamma < 0.0 || config.sigma < 0.0)
      throw std::invalid_argument("gamma and sigma must be nonnegative");
    return;
  }
  if (L_f < 0.0) throw std::invalid_argument("L_f must be nonnegative");
  auto [gamma, sigma] = resolve_gamma_sigma(config, L_f);
  const double gamma_hi = L_f > 0.0 ? 1.0 / L_f : kInf;
  if (!(gamma > 0.0) || !(gamma < gamma_hi))
    throw std::invalid_argument("gamma must lie in " + format_window(0.0, gamma_hi) +
                                " = (0, 1/L_f); got " + std::to_string(gamma));
  const double sigma_hi = (1.0 - gamma * L_f) / gamma;
  if (!(sigma > 0.0) || !(sigma < sigma_hi))
    throw std::invalid_argument("sigma must lie in " + format_window(0.0, sigma_hi) +
                                " = (0, (1-gamma*L_f)/gamma); got " + std::to_string(sigma));
}

bool adaptive_lf_guard(const Problem& problem, AdaptiveState& state, const FbStep& fb) {
  (void)problem;  // oracle values are cached on the step
  const double rhs =
      fb.f_x + fb.grad_f_x.dot(fb.x_bar - fb.x) + state.L * fb.bregman_residual;
  if (fb.f_xbar > rhs + 1e-12 * (1.0 + std::abs(rhs))) {
    state.gamma *= 0.5;
    state.L *= 2.0;
    state.sigma *= 2.0;
    ++state.doublings;
    return true;
  }
  return false;
}

SolveResult bella_solve(const Problem& problem, const SolverConfig& config, const Vec& x0,
                        DirectionProvider& directions) {
  validate_config(config, problem.smooth.rel_smoothness);
  const Kernel& kernel = problem.kernel;
  if (x0.size() != problem.dimension())
    throw std::invalid_argument("x0 dimension mismatch");
  if (!kernel.in_domain_interior(x0))
    throw std::domain_error("bella_solve: x0 outside int dom h");

  SolveResult result;
  if (!kernel.coercive())
    result.warnings.push_back("kernel '" + kernel.name() +
                              "' is not 1-coercive; convergence guarantees may not apply");

  const double model_L =
      config.adaptive ? config.initial_L : problem.smooth.rel_smoothness;
  auto [gamma0, sigma0] = resolve_gamma_sigma(config, model_L);
  AdaptiveState ad{gamma0, model_L, sigma0, 0};
  bool sigma_warned = false;

  const auto dist_at = [&](const Vec& x) {
    return problem.has_solution_distance() ? problem.solution_set_distance(x)
                                           : std::numeric_limits<double>::quiet_NaN();
  };

  Vec x = x0;
  FbStep fb;

  const auto finish = [&](SolveStatus status, const std::string& detail) {
    result.status = status;
    result.failure_detail = detail;
    result.x_hat = fb.x_bar.size() ? fb.x_bar : x;
    result.x_final = x;
    result.adaptive_doublings = ad.doublings;
  };

  const auto record = [&](long k, double tau, int backtracks, double direction_norm,
                          bool unit_step) {
    IterationRecord rec;
    rec.k = k;
    rec.tau = tau;
    rec.backtracks = backtracks;
    rec.bfbe_value = fb.bfbe;
    rec.phi_at_xbar = fb.phi_xbar();
    rec.bregman_residual = fb.bregman_residual;
    rec.euclid_residual = (fb.x - fb.x_bar).norm();
    rec.current_gamma = ad.gamma;
    rec.current_L = ad.L;
    rec.direction_norm = direction_norm;
    rec.accepted_unit_step = unit_step;
    rec.dist_to_solution = dist_at(fb.x);
    result.iterations.push_back(rec);
    if (config.record_points) {
      result.points.push_back(fb.x);
      result.points_bar.push_back(fb.x_bar);
    }
  };

  // Line 1 plus the adaptive guard loop. Returns false on failure.
  const auto settle_forward_backward = [&](bool have_fb) -> bool {
    try {
      if (!have_fb) {
        fb = fb_operator(problem, ad.gamma, x);
        ++result.total_prox_calls;
      }
      while (config.adaptive && adaptive_lf_guard(problem, ad, fb)) {
        if (ad.doublings > 64) {
          finish(SolveStatus::NumericalFailure,
                 "adaptive guard doubled L more than 64 times");
          return false;
        }
        directions.reset();  // the residual map changed with gamma
        if (!sigma_warned && ad.sigma >= (1.0 - ad.gamma * ad.L) / ad.gamma) {
          result.warnings.push_back(
              "adaptive sigma left the nominal range (0, (1-gamma*L)/gamma)");
          sigma_warned = true;
        }
        fb = fb_operator(problem, ad.gamma, x);
        ++result.total_prox_calls;
      }
    } catch (const RangeViolationError& e) {
      finish(SolveStatus::RangeViolation, e.what());
      return false;
    } catch (const NumericalError& e) {
      finish(SolveStatus::NumericalFailure, e.what());
      return false;
    }
    if (!std::isfinite(fb.bfbe)) {
      finish(SolveStatus::NumericalFailure, "non-finite envelope value at iterate");
      record(static_cast<long>(result.iterations.size()), 0.0, 0, 0.0, false);
      return false;
    }
    directions.observe(fb.x, fb.residual());
    return true;
  };

  directions.reset();
  if (!settle_forward_backward(false)) return result;

  for (long k = 0;; ++k) {
    if (fb.bregman_residual <= config.epsilon) {
      record(k, 0.0, 0, 0.0, false);
      finish(SolveStatus::Converged, "");
      return result;
    }
    if (k >= config.max_iters) {
      record(k, 0.0, 0, 0.0, false);
      finish(SolveStatus::MaxIters, "");
      return result;
    }

    const Vec d = directions.direction(fb.x, fb.x_bar);
    const double direction_norm = d.norm();
    const double threshold = fb.bfbe - ad.sigma * fb.bregman_residual;
    // Algebraically (1-tau) x_bar + tau (x + d); written so the base offset
    // vanishes exactly for the plain splitting direction d = x_bar - x.
    const Vec base = (fb.x - fb.x_bar) + d;

    double tau = 1.0;
    int backtracks = 0;
    bool accepted = false;
    bool plain = false;
    bool next_ready = false;
    FbStep fb_next;
    Vec candidate;

    for (;;) {
      candidate = fb.x_bar + tau * base;
      bool trial_ok = false;
      if (kernel.in_domain_interior(candidate)) {
        try {
          fb_next = fb_operator(problem, ad.gamma, candidate);
          ++result.total_prox_calls;
          trial_ok = std::isfinite(fb_next.bfbe);
        } catch (const RangeViolationError& e) {
          finish(SolveStatus::RangeViolation, e.what());
          record(k, 0.0, backtracks, direction_norm, false);
          return result;
        } catch (const NumericalError&) {
          trial_ok = false;  // treat as a failed trial and backtrack
        }
      }
      if (trial_ok && fb_next.bfbe <= threshold) {
        accepted = true;
        next_ready = true;
        break;
      }
      if ((candidate.array() == fb.x_bar.array()).all()) {
        // The candidate collapsed onto x_bar at floating precision, so the
        // plain splitting step is the same point; take it.
        plain = true;
        next_ready = trial_ok;
        break;
      }
      if (config.i_max && backtracks == *config.i_max) {
        plain = true;
        break;
      }
      if (backtracks >= 2000) {
        finish(SolveStatus::NumericalFailure, "linesearch stalled after 2000 backtrackings");
        record(k, 0.0, backtracks, direction_norm, false);
        return result;
      }
      tau *= 0.5;
      ++backtracks;
    }

    if (plain && !next_ready) {
      try {
        fb_next = fb_operator(problem, ad.gamma, fb.x_bar);
        ++result.total_prox_calls;
      } catch (const RangeViolationError& e) {
        finish(SolveStatus::RangeViolation, e.what());
        record(k, 0.0, backtracks, direction_norm, false);
        return result;
      } catch (const NumericalError& e) {
        finish(SolveStatus::NumericalFailure, e.what());
        record(k, 0.0, backtracks, direction_norm, false);
        return result;
      }
    }

    record(k, plain ? 0.0 : tau, backtracks, direction_norm,
           accepted && backtracks == 0);
    x = plain ? fb.x_bar : candidate;
    fb = fb_next;
    if (!settle_forward_backward(true)) return result;
  }
}

double residual_certificate(const Problem& problem, double gamma, const Vec& x,
                            const Vec& x_bar, double region_L_h, double region_sigma_h) {
  if (!(region_sigma_h > 0.0))
    throw std::invalid_argument("residual_certificate requires region_sigma_h > 0");
  if (!(region_L_h > 0.0))
    throw std::invalid_argument("residual_certificate requires region_L_h > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("residual_certificate requires gamma > 0");
  const double d = bregman_distance(problem.kernel, x_bar, x);
  const double l_f = problem.smooth.rel_smoothness;
  return (1.0 + gamma * l_f) / gamma *
         std::sqrt(2.0 * region_L_h * region_L_h / region_sigma_h * d);
}

}  // namespace bella
