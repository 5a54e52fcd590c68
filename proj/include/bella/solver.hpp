#pragma once

#include <optional>
#include <vector>

#include "bella/directions.hpp"
#include "bella/envelope.hpp"

namespace bella {

enum class SolveStatus { Converged, MaxIters, RangeViolation, NumericalFailure };

const char* to_string(SolveStatus status);

struct SolverConfig {
  double gamma = 0.0;  // stepsize; must satisfy 0 < gamma < 1/L_f unless adaptive
  double sigma = 0.0;  // linesearch constant; 0 < sigma < (1 - gamma L_f)/gamma unless adaptive
  double epsilon = 1e-8;        // termination tolerance on D_h(x_bar, x); 0 = asymptotic mode
  std::optional<int> i_max;     // backtracking cap; nullopt = unbounded
  long max_iters = 10000;
  bool adaptive = false;        // retrieve L_f adaptively from initial_L
  double initial_L = 1.0;       // used only when adaptive
  bool record_points = false;   // keep per-iteration x and x_bar in the result
};

/// gamma = 0.95/L, sigma = 0.45 (1 - gamma L)/gamma, i_max unbounded,
/// max_iters 10000. The admissible ranges are open, so midpoints with a
/// safety margin.
SolverConfig default_solver_config(double L);

/// Throws std::invalid_argument naming the violated range when the
/// non-adaptive stepsize/linesearch constraints fail for this L_f.
void validate_config(const SolverConfig& config, double L_f);

struct IterationRecord {
  long k = 0;
  double tau = 0.0;       // accepted stepsize; 0 when the plain splitting step was taken
  int backtracks = 0;
  double bfbe_value = 0.0;
  double phi_at_xbar = 0.0;
  double bregman_residual = 0.0;
  double euclid_residual = 0.0;
  double current_gamma = 0.0;
  double current_L = 0.0;
  double direction_norm = 0.0;
  bool accepted_unit_step = false;
  double dist_to_solution = std::numeric_limits<double>::quiet_NaN();  // when known
};

struct SolveResult {
  Vec x_hat;    // returned point x_bar^k
  Vec x_final;  // the base iterate x^k paired with x_hat
  std::vector<IterationRecord> iterations;
  SolveStatus status = SolveStatus::MaxIters;
  long total_prox_calls = 0;
  std::vector<std::string> warnings;
  std::string failure_detail;
  long adaptive_doublings = 0;  // total guard firings over the run
  std::vector<Vec> points;      // filled when config.record_points
  std::vector<Vec> points_bar;  // aligned with `iterations`

  double final_bregman_residual() const {
    return iterations.empty() ? std::numeric_limits<double>::quiet_NaN()
                              : iterations.back().bregman_residual;
  }
};

/// Mutable stepsize state for the adaptive-L_f variant.
struct AdaptiveState {
  double gamma = 0.0;
  double L = 0.0;
  double sigma = 0.0;
  int doublings = 0;
};

/// One application of the adaptive guard: if the descent inequality
///   f(x_bar) <= f(x) + <grad f(x), x_bar - x> + L D_h(x_bar, x)
/// fails at the current L, halves gamma, doubles L and sigma, and returns
/// true (the forward-backward step must then be recomputed). No change and
/// false otherwise.
bool adaptive_lf_guard(const Problem& problem, AdaptiveState& state, const FbStep& fb);

/// Envelope linesearch solve. Implements the full iteration: forward-backward
/// step, D_h stopping test, direction query, halving linesearch on the
/// envelope decrease condition, plain splitting step on backtracking
/// exhaustion, and the optional adaptive-L_f guard.
SolveResult bella_solve(const Problem& problem, const SolverConfig& config, const Vec& x0,
                        DirectionProvider& directions);

/// Stationarity certificate attached to a returned pair (x, x_bar):
///   ((1 + gamma L_f)/gamma) sqrt(2 region_L_h^2 / region_sigma_h * D_h(x_bar, x)).
/// region_L_h / region_sigma_h are Lipschitz and strong-convexity moduli of h
/// on a region containing the iterates (both exactly 1 for the Euclidean
/// kernel). Bounds the minimal-norm Frechet subgradient of f + g at x_bar.
double residual_certificate(const Problem& problem, double gamma, const Vec& x,
                            const Vec& x_bar, double region_L_h, double region_sigma_h);

}  // namespace bella
