#pragma once

#include <functional>

#include "bella/envelope.hpp"

namespace bella {

/// Rectangular evaluation grid, dimensions 1 or 2, at most 1e7 nodes.
struct GridSpec {
  Vec lower;
  Vec upper;
  Eigen::Index points_per_axis = 0;

  Eigen::Index dimension() const { return lower.size(); }
  double spacing(Eigen::Index axis) const {
    return (upper[axis] - lower[axis]) / static_cast<double>(points_per_axis - 1);
  }
  double cell_diagonal() const;
  void validate() const;  // throws std::invalid_argument on a bad spec
};

struct GridArgmin {
  Vec point;
  double value = 0.0;
};

/// Exhaustive minimization over the grid. Ties break to the lexicographically
/// smallest node; deterministic and independent of evaluation order. Throws
/// NumericalError when the objective is +inf on the whole grid.
GridArgmin grid_argmin(const std::function<double(const Vec&)>& objective,
                       const GridSpec& grid);

struct PpEquivalenceReport {
  bool pass = false;
  bool multivalued = false;  // distinct near-optimal minimizers detected
  Vec grid_point;
  Vec fb_point;
  double point_distance = 0.0;
  double cell_diagonal = 0.0;
  double grid_value = 0.0;
  double bfbe_value = 0.0;
  double value_tolerance = 0.0;
};

/// Brute-force check of the forward-backward / proximal-point identity:
/// grid-minimizes phi(z) + D_{hhat}(z, x) with hhat = (1/gamma) h - f and
/// compares the minimizer against fb_operator and the minimum value against
/// the envelope. Passes when the points agree within one grid cell diagonal,
/// or when the disagreement is explained by multivaluedness (equal values at
/// distant points).
PpEquivalenceReport check_pp_equivalence(const Problem& problem, double gamma, const Vec& x,
                                         const GridSpec& grid);

/// Central finite differences of a scalar field, one coordinate at a time.
Vec finite_diff_gradient(const std::function<double(const Vec&)>& scalar_field, const Vec& x,
                         double step);

}  // namespace bella
