#pragma once

#include <vector>

#include "bella/problem.hpp"
#include "bella/rng.hpp"
#include "bella/solver.hpp"

namespace bella::testing {

// Interior sample box per kernel family: symmetric for full-domain kernels,
// strictly positive for the entropy kernels.
inline Vec sample_interior(const Kernel& kernel, SplitMix64& gen) {
  const bool full_domain =
      kernel.in_domain_interior(Vec::Constant(kernel.dimension(), -1.0));
  return full_domain ? gen.uniform_vector(kernel.dimension(), -3.0, 3.0)
                     : gen.uniform_vector(kernel.dimension(), 0.1, 3.0);
}

inline std::vector<std::pair<Vec, Vec>> sample_interior_pairs(const Kernel& kernel,
                                                              SplitMix64& gen, int count) {
  std::vector<std::pair<Vec, Vec>> pairs;
  pairs.reserve(count);
  for (int i = 0; i < count; ++i)
    pairs.emplace_back(sample_interior(kernel, gen), sample_interior(kernel, gen));
  return pairs;
}

// Per-regime sufficient-decrease check over a recorded trace: rows where
// gamma changed (adaptive guard fired) start a fresh regime. sigma for a row
// is sigma0 scaled by the same factor as L (the guard doubles both).
inline bool decrease_holds(const std::vector<IterationRecord>& rows, double sigma0,
                           double tol_scale = 1e-10) {
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i + 1].current_gamma != rows[i].current_gamma) continue;
    const double sigma = sigma0 * (rows[i].current_L / rows[0].current_L);
    const double lhs = rows[i + 1].bfbe_value;
    const double rhs = rows[i].bfbe_value - sigma * rows[i].bregman_residual;
    if (lhs > rhs + tol_scale * (1.0 + std::abs(rhs))) return false;
  }
  return true;
}

inline int max_backtracks(const std::vector<IterationRecord>& rows) {
  int worst = 0;
  for (const auto& r : rows) worst = std::max(worst, r.backtracks);
  return worst;
}

}  // namespace bella::testing
