#include "bella/directions.hpp"

#include <cmath>
#include <stdexcept>

namespace bella {

Vec DirectionProvider::direction(const Vec& x, const Vec& x_bar) {
  return quasi_newton_direction(*this, x - x_bar);
}

Vec bfbs_direction(const Vec& x, const Vec& x_bar) { return x_bar - x; }

Eigen::MatrixXd broyden_update(const Eigen::MatrixXd& H, const Vec& s, const Vec& y,
                               double norm_cap) {
  if (H.rows() != H.cols() || H.rows() != s.size() || s.size() != y.size())
    throw std::invalid_argument("broyden_update: dimension mismatch");
  const double yy = y.squaredNorm();
  if (yy < 1e-24) return H;
  Eigen::MatrixXd next = H + ((s - H * y) / yy) * y.transpose();
  if (next.norm() > norm_cap) return H;
  return next;
}

Vec quasi_newton_direction(DirectionProvider& provider, const Vec& residual) {
  Vec d = provider.raw_direction(residual);
  const double dn = d.norm();
  const double cap = provider.safeguard_cap() * residual.norm();
  if (dn > cap) d *= cap / dn;
  return d;
}

void BroydenDirections::observe(const Vec& x, const Vec& residual) {
  if (H_.rows() != x.size()) H_ = Eigen::MatrixXd::Identity(x.size(), x.size());
  if (has_prev_) H_ = broyden_update(H_, x - prev_x_, residual - prev_r_, norm_cap_);
  prev_x_ = x;
  prev_r_ = residual;
  has_prev_ = true;
}

void BroydenDirections::reset() {
  H_.resize(0, 0);
  has_prev_ = false;
}

Vec BroydenDirections::raw_direction(const Vec& residual) {
  if (H_.rows() != residual.size()) return -residual;  // empty history
  return Vec(-(H_ * residual));
}

void LbfgsDirections::observe(const Vec& x, const Vec& residual) {
  if (has_prev_) {
    Pair p{x - prev_x_, residual - prev_r_, 0.0};
    const double sy = p.s.dot(p.y);
    if (sy > 1e-12 * p.s.norm() * p.y.norm()) {  // curvature skip keeps H bounded
      p.rho = 1.0 / sy;
      pairs_.push_back(std::move(p));
      if (pairs_.size() > static_cast<std::size_t>(memory_)) pairs_.pop_front();
    }
  }
  prev_x_ = x;
  prev_r_ = residual;
  has_prev_ = true;
}

void LbfgsDirections::reset() {
  pairs_.clear();
  has_prev_ = false;
}

Vec LbfgsDirections::apply(const Vec& v) const {
  Vec q = v;
  std::vector<double> alpha(pairs_.size());
  for (std::size_t i = pairs_.size(); i-- > 0;) {
    alpha[i] = pairs_[i].rho * pairs_[i].s.dot(q);
    q -= alpha[i] * pairs_[i].y;
  }
  const auto& last = pairs_.back();
  q *= last.s.dot(last.y) / last.y.squaredNorm();
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const double beta = pairs_[i].rho * pairs_[i].y.dot(q);
    q += (alpha[i] - beta) * pairs_[i].s;
  }
  return q;
}

Vec LbfgsDirections::raw_direction(const Vec& residual) {
  if (pairs_.empty()) return -residual;  // steepest-residual fallback
  return Vec(-apply(residual));
}

std::unique_ptr<DirectionProvider> make_direction_provider(const std::string& spec,
                                                           double safeguard_D) {
  if (spec == "bfbs") return std::make_unique<BfbsDirections>(safeguard_D);
  if (spec == "zero") return std::make_unique<ZeroDirections>(safeguard_D);
  if (spec == "broyden") return std::make_unique<BroydenDirections>(safeguard_D);
  if (spec.rfind("lbfgs", 0) == 0) {
    int memory = 10;
    if (spec.size() > 5) {
      if (spec[5] != ':')
        throw std::invalid_argument("bad direction spec '" + spec + "'");
      memory = std::stoi(spec.substr(6));
    }
    return std::make_unique<LbfgsDirections>(memory, safeguard_D);
  }
  std::string names;
  for (const auto& s : direction_registry_names()) names += (names.empty() ? "" : ", ") + s;
  throw std::invalid_argument("unknown direction '" + spec + "'; valid directions: " + names);
}

std::vector<std::string> direction_registry_names() {
  return {"bfbs", "zero", "broyden", "lbfgs:m"};
}

}  // namespace bella
