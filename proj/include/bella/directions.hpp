#pragma once

#include <deque>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bella/rng.hpp"

namespace bella {

enum class DirectionKind { Bfbs, Zero, Broyden, LBfgs };

/// Stateful generator of candidate directions for the envelope linesearch,
/// driven by the fixed-point residual R(x) = x - x_bar. Every emitted
/// direction obeys |d| <= safeguard_D * |R(x)| (post-rescale), which is the
/// boundedness safeguard the global analysis needs. State is owned by
/// exactly one solve; it is not shareable mid-run.
class DirectionProvider {
 public:
  explicit DirectionProvider(double safeguard_D) : safeguard_D_(safeguard_D) {}
  virtual ~DirectionProvider() = default;

  virtual DirectionKind kind() const = 0;

  /// Safeguarded direction at the current iterate.
  virtual Vec direction(const Vec& x, const Vec& x_bar);

  /// Record an accepted iterate and its residual. Quasi-Newton state is built
  /// from consecutive accepted iterates only; rejected linesearch trials must
  /// not be observed.
  virtual void observe(const Vec& x, const Vec& residual) {}

  virtual void reset() {}

  double safeguard_cap() const { return safeguard_D_; }

 protected:
  friend Vec quasi_newton_direction(DirectionProvider&, const Vec&);
  /// Direction before the safeguard rescale.
  virtual Vec raw_direction(const Vec& residual) = 0;

 private:
  double safeguard_D_;
};

/// Plain splitting direction d = x_bar - x. With it the unit-step candidate
/// equals x_bar, so the linesearch accepts immediately and the method reduces
/// to the Bregman forward-backward iteration.
Vec bfbs_direction(const Vec& x, const Vec& x_bar);

/// Rank-one secant update H+ = H + (s - H y) y^T / <y, y>, so H+ y = s
/// exactly. Skipped (returns H) when <y, y> < 1e-24 or the update would push
/// the Frobenius norm of H+ above norm_cap.
Eigen::MatrixXd broyden_update(const Eigen::MatrixXd& H, const Vec& s, const Vec& y,
                               double norm_cap = 1e6);

/// Applies the provider's operator to the residual and rescales into the
/// safeguard ball: d <- d * min(1, D |R| / |d|). Providers with no history
/// fall back to the steepest-residual step d = -R.
Vec quasi_newton_direction(DirectionProvider& provider, const Vec& residual);

class BfbsDirections final : public DirectionProvider {
 public:
  explicit BfbsDirections(double safeguard_D = 100.0) : DirectionProvider(safeguard_D) {}
  DirectionKind kind() const override { return DirectionKind::Bfbs; }

 protected:
  Vec raw_direction(const Vec& residual) override { return -residual; }
};

class ZeroDirections final : public DirectionProvider {
 public:
  explicit ZeroDirections(double safeguard_D = 100.0) : DirectionProvider(safeguard_D) {}
  DirectionKind kind() const override { return DirectionKind::Zero; }

 protected:
  Vec raw_direction(const Vec& residual) override { return Vec::Zero(residual.size()); }
};

/// Dense Broyden approximation of the inverse residual Jacobian, d = -H R(x).
class BroydenDirections final : public DirectionProvider {
 public:
  explicit BroydenDirections(double safeguard_D = 100.0, double norm_cap = 1e6)
      : DirectionProvider(safeguard_D), norm_cap_(norm_cap) {}
  DirectionKind kind() const override { return DirectionKind::Broyden; }
  void observe(const Vec& x, const Vec& residual) override;
  void reset() override;
  const Eigen::MatrixXd& matrix() const { return H_; }

 protected:
  Vec raw_direction(const Vec& residual) override;

 private:
  Eigen::MatrixXd H_;
  Vec prev_x_, prev_r_;
  bool has_prev_ = false;
  double norm_cap_;
};

/// Limited-memory quasi-Newton on the residual map via the two-loop
/// recursion; pairs with nonpositive curvature are skipped to keep the
/// implicit operator bounded.
class LbfgsDirections final : public DirectionProvider {
 public:
  explicit LbfgsDirections(int memory = 10, double safeguard_D = 100.0)
      : DirectionProvider(safeguard_D), memory_(memory) {
    if (memory_ <= 0) throw std::invalid_argument("lbfgs memory must be positive");
  }
  DirectionKind kind() const override { return DirectionKind::LBfgs; }
  void observe(const Vec& x, const Vec& residual) override;
  void reset() override;
  int memory() const { return memory_; }
  std::size_t stored_pairs() const { return pairs_.size(); }

  /// Two-loop application of the implicit inverse-Jacobian estimate.
  Vec apply(const Vec& v) const;

 protected:
  Vec raw_direction(const Vec& residual) override;

 private:
  struct Pair {
    Vec s, y;
    double rho;
  };
  int memory_;
  std::deque<Pair> pairs_;
  Vec prev_x_, prev_r_;
  bool has_prev_ = false;
};

/// Registry parse: "bfbs", "zero", "broyden", "lbfgs:m" (m optional, default 10).
std::unique_ptr<DirectionProvider> make_direction_provider(const std::string& spec,
                                                           double safeguard_D = 100.0);
std::vector<std::string> direction_registry_names();

}  // namespace bella
