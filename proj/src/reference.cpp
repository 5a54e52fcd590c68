#include "bella/reference.hpp"

#include <cmath>

namespace bella {

double GridSpec::cell_diagonal() const {
  double s = 0.0;
  for (Eigen::Index a = 0; a < dimension(); ++a) s += spacing(a) * spacing(a);
  return std::sqrt(s);
}

void GridSpec::validate() const {
  if (lower.size() != upper.size() || lower.size() < 1)
    throw std::invalid_argument("grid bounds must be nonempty and of equal dimension");
  if (lower.size() > 2)
    throw std::invalid_argument("grid oracle supports dimensions 1 and 2 only");
  if (points_per_axis < 2)
    throw std::invalid_argument("grid needs at least 2 points per axis");
  for (Eigen::Index a = 0; a < lower.size(); ++a)
    if (!(lower[a] < upper[a]))
      throw std::invalid_argument("grid requires lower < upper componentwise");
  double total = 1.0;
  for (Eigen::Index a = 0; a < lower.size(); ++a)
    total *= static_cast<double>(points_per_axis);
  if (total > 1e7) throw std::invalid_argument("grid exceeds the 1e7 node cap");
}

GridArgmin grid_argmin(const std::function<double(const Vec&)>& objective,
                       const GridSpec& grid) {
  grid.validate();
  const Eigen::Index dim = grid.dimension();
  const Eigen::Index pts = grid.points_per_axis;

  GridArgmin best;
  best.value = kInf;
  Vec node(dim);
  if (dim == 1) {
    for (Eigen::Index i = 0; i < pts; ++i) {
      node[0] = grid.lower[0] + static_cast<double>(i) * grid.spacing(0);
      const double v = objective(node);
      if (v < best.value) {
        best.value = v;
        best.point = node;
      }
    }
  } else {
    for (Eigen::Index i = 0; i < pts; ++i) {
      node[0] = grid.lower[0] + static_cast<double>(i) * grid.spacing(0);
      for (Eigen::Index j = 0; j < pts; ++j) {
        node[1] = grid.lower[1] + static_cast<double>(j) * grid.spacing(1);
        const double v = objective(node);
        if (v < best.value) {
          best.value = v;
          best.point = node;
        }
      }
    }
  }
  if (!(best.value < kInf))
    throw NumericalError("grid_argmin: objective is +inf on the entire grid");
  return best;
}

PpEquivalenceReport check_pp_equivalence(const Problem& problem, double gamma, const Vec& x,
                                         const GridSpec& grid) {
  grid.validate();
  if (x.size() != problem.dimension())
    throw std::invalid_argument("check_pp_equivalence: point dimension mismatch");

  const Kernel& h = problem.kernel;
  // hhat = (1/gamma) h - f; D_hhat(z, x) expanded directly.
  const double hhat_x = h.value(x) / gamma - problem.smooth.value(x);
  const Vec grad_hhat_x = h.gradient(x) / gamma - problem.smooth.gradient(x);
  // phi(z) + D_hhat(z, x); the f(z) from phi cancels the -f(z) inside hhat(z).
  const auto pp_objective = [&](const Vec& z) {
    const double hz = h.value(z);
    if (!std::isfinite(hz)) return kInf;
    const double gz = problem.nonsmooth.value(z);
    if (!std::isfinite(gz)) return kInf;
    return gz + hz / gamma - hhat_x - grad_hhat_x.dot(z - x);
  };

  const FbStep fb = fb_operator(problem, gamma, x);
  const GridArgmin best = grid_argmin(pp_objective, grid);

  PpEquivalenceReport report;
  report.grid_point = best.point;
  report.grid_value = best.value;
  report.fb_point = fb.x_bar;
  report.bfbe_value = fb.bfbe;
  report.cell_diagonal = grid.cell_diagonal();
  report.point_distance = (best.point - fb.x_bar).norm();
  report.value_tolerance = 1e-9 * (1.0 + std::abs(best.value));
  if (report.point_distance <= report.cell_diagonal * (1.0 + 1e-12)) {
    report.pass = true;
  } else if (pp_objective(fb.x_bar) <= best.value + report.value_tolerance) {
    // The operator is multivalued here: the forward-backward selection and
    // the grid winner are distinct, equally good minimizers.
    report.multivalued = true;
    report.pass = true;
  }
  return report;
}

Vec finite_diff_gradient(const std::function<double(const Vec&)>& scalar_field, const Vec& x,
                         double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_gradient requires step > 0");
  Vec g(x.size());
  Vec probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double fp = scalar_field(probe);
    probe[i] = x[i] - step;
    const double fm = scalar_field(probe);
    probe[i] = x[i];
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NumericalError("finite_diff_gradient: non-finite field evaluation");
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

}  // namespace bella
