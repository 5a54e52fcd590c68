#include "bella/problem.hpp"

#include <cmath>
#include <memory>

#include <Eigen/Dense>

namespace bella {

namespace {

enum Stream : std::uint64_t { kMatrixStream = 1, kRhsStream = 2 };

// Largest eigenvalue of A^T A by power iteration, run to stagnation of the
// Rayleigh quotient. Deterministic start vector.
double spectral_norm_squared(const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd B = A.transpose() * A;
  const Eigen::Index n = B.rows();
  if (n == 1) return B(0, 0);
  Vec v = Vec::Ones(n).normalized();
  double lambda = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    Vec w = B * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    const double next = v.dot(B * v);
    if (std::abs(next - lambda) <= 1e-15 * std::max(1.0, std::abs(next)) && iter > 4) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

struct LeastSquaresData {
  Eigen::MatrixXd A;
  Vec b;
  double lf;
};

std::shared_ptr<const LeastSquaresData> make_least_squares_data(Eigen::Index n,
                                                                std::uint64_t seed,
                                                                bool positive) {
  auto data = std::make_shared<LeastSquaresData>();
  SplitMix64 gen_a(mix_seed(seed, kMatrixStream));
  SplitMix64 gen_b(mix_seed(seed, kRhsStream));
  data->A.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      data->A(i, j) = positive ? gen_a.uniform(0.1, 1.1) : gen_a.uniform(-1.0, 1.0);
  data->b.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    data->b[i] = positive ? gen_b.uniform(0.5, 1.5) : gen_b.uniform(-1.0, 1.0);
  // Tiny headroom so the sampled-pair smoothness check cannot trip on the
  // rounding of the power iteration itself.
  data->lf = spectral_norm_squared(data->A) * (1.0 + 1e-10);
  return data;
}

SmoothTerm least_squares_smooth(std::shared_ptr<const LeastSquaresData> data) {
  SmoothTerm f;
  f.value = [data](const Vec& x) { return 0.5 * (data->A * x - data->b).squaredNorm(); };
  f.gradient = [data](const Vec& x) { return Vec(data->A.transpose() * (data->A * x - data->b)); };
  f.hessian_vec = [data](const Vec&, const Vec& v) {
    return Vec(data->A.transpose() * (data->A * v));
  };
  f.rel_smoothness = data->lf;
  return f;
}

Problem make_quadratic(Eigen::Index n) {
  SmoothTerm f;
  f.value = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  f.gradient = [](const Vec& x) { return x; };
  f.hessian_vec = [](const Vec&, const Vec& v) { return v; };
  f.rel_smoothness = 1.0;
  Problem p{"quadratic", std::move(f), zero_nonsmooth(), euclidean_kernel(n), 0.0,
            [](const Vec& x) { return x.norm(); }};
  return p;
}

Problem make_circle(Eigen::Index n) {
  SmoothTerm f;
  f.value = [](const Vec& x) {
    const double s = x.squaredNorm() - 1.0;
    return 0.25 * s * s;
  };
  f.gradient = [](const Vec& x) { return Vec((x.squaredNorm() - 1.0) * x); };
  f.hessian_vec = [](const Vec& x, const Vec& v) {
    return Vec((x.squaredNorm() - 1.0) * v + (2.0 * x.dot(v)) * x);
  };
  // With h = |x|^4/4 + |x|^2/2, both Hessians diagonalize along x and its
  // orthogonal complement with eigenvalues (3r-1, r-1) vs (3r+1, r+1) at
  // r = |x|^2, so L_f = 1 is the sharp modulus (attained at r = 0).
  f.rel_smoothness = 1.0;
  Problem p{"circle",
            std::move(f),
            zero_nonsmooth(),
            quartic_kernel(n, 1.0, 1.0),
            0.0,
            [](const Vec& x) { return std::abs(x.norm() - 1.0); }};
  return p;
}

Problem make_sparse_least_squares(Eigen::Index n, std::uint64_t seed, bool l1) {
  auto data = make_least_squares_data(n, seed, /*positive=*/false);
  const double lambda = 0.1;
  NonsmoothTerm g;
  if (l1) {
    g.value = [lambda](const Vec& x) { return lambda * x.lpNorm<1>(); };
    g.bregman_prox = [lambda](const Kernel&, double gamma, const Vec& zbar) {
      return soft_threshold_prox(gamma, lambda, zbar);
    };
  } else {
    g.value = [lambda](const Vec& x) {
      Eigen::Index nnz = 0;
      for (Eigen::Index i = 0; i < x.size(); ++i) nnz += (x[i] != 0.0);
      return lambda * static_cast<double>(nnz);
    };
    g.bregman_prox = [lambda](const Kernel&, double gamma, const Vec& zbar) {
      return hard_threshold_prox(gamma, lambda, zbar);
    };
  }
  Problem p{l1 ? "l1-ls" : "l0-ls", least_squares_smooth(data), std::move(g),
            euclidean_kernel(n),    std::nullopt,              nullptr};
  return p;
}

Problem make_poisson(Eigen::Index n, std::uint64_t seed) {
  auto data = make_least_squares_data(n, seed, /*positive=*/true);
  SmoothTerm f;
  f.value = [data](const Vec& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < data->A.rows(); ++i) {
      const double ax = data->A.row(i).dot(x);
      if (!(ax > 0.0)) return kInf;
      s += ax - data->b[i] * std::log(ax);
    }
    return s;
  };
  f.gradient = [data](const Vec& x) {
    Vec g = Vec::Zero(x.size());
    for (Eigen::Index i = 0; i < data->A.rows(); ++i) {
      const double ax = data->A.row(i).dot(x);
      g += (1.0 - data->b[i] / ax) * data->A.row(i).transpose();
    }
    return g;
  };
  f.hessian_vec = [data](const Vec& x, const Vec& v) {
    Vec hv = Vec::Zero(x.size());
    for (Eigen::Index i = 0; i < data->A.rows(); ++i) {
      const double ax = data->A.row(i).dot(x);
      const double av = data->A.row(i).dot(v);
      hv += (data->b[i] * av / (ax * ax)) * data->A.row(i).transpose();
    }
    return hv;
  };
  // Relative to Burg entropy, f is sum(b)-smooth: Cauchy-Schwarz gives
  // (a^T u)^2 <= <a,x>^2 sum_j u_j^2 / x_j^2 for a, x > 0, and f is convex.
  f.rel_smoothness = data->b.sum();
  // Strictly positive A and b keep every forward-backward step inside the
  // Burg domain by construction; the box keeps iterates away from 0 and inf.
  Problem p{"poisson",     std::move(f), box_indicator_nonsmooth(0.05, 5.0),
            burg_entropy_kernel(n), std::nullopt, nullptr};
  return p;
}

}  // namespace

Problem builtin_problem(const std::string& name, Eigen::Index n, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("problem dimension must be positive");
  if (name == "quadratic") return make_quadratic(n);
  if (name == "circle") return make_circle(n);
  if (name == "l0-ls") return make_sparse_least_squares(n, seed, /*l1=*/false);
  if (name == "l1-ls") return make_sparse_least_squares(n, seed, /*l1=*/true);
  if (name == "poisson") return make_poisson(n, seed);
  std::string names;
  for (const auto& s : builtin_problem_names()) names += (names.empty() ? "" : ", ") + s;
  throw std::invalid_argument("unknown problem '" + name + "'; valid problems: " + names);
}

std::vector<std::string> builtin_problem_names() {
  return {"quadratic", "circle", "l0-ls", "l1-ls", "poisson"};
}

Vec hard_threshold_prox(double gamma, double lambda, const Vec& zbar) {
  if (!(gamma > 0.0)) throw std::invalid_argument("hard_threshold_prox requires gamma > 0");
  if (lambda < 0.0) throw std::invalid_argument("hard_threshold_prox requires lambda >= 0");
  if (lambda == 0.0) return zbar;
  const double threshold = std::sqrt(2.0 * gamma * lambda);
  Vec z = zbar;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (std::abs(z[i]) <= threshold) z[i] = 0.0;  // tie goes to zero
  return z;
}

Vec soft_threshold_prox(double gamma, double lambda, const Vec& zbar) {
  if (!(gamma > 0.0)) throw std::invalid_argument("soft_threshold_prox requires gamma > 0");
  if (lambda < 0.0) throw std::invalid_argument("soft_threshold_prox requires lambda >= 0");
  const double t = gamma * lambda;
  Vec z(zbar.size());
  for (Eigen::Index i = 0; i < z.size(); ++i)
    z[i] = std::copysign(std::max(std::abs(zbar[i]) - t, 0.0), zbar[i]);
  return z;
}

NonsmoothTerm zero_nonsmooth() {
  NonsmoothTerm g;
  g.value = [](const Vec&) { return 0.0; };
  g.bregman_prox = [](const Kernel&, double, const Vec& zbar) { return zbar; };
  return g;
}

NonsmoothTerm box_indicator_nonsmooth(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("box indicator requires lo < hi");
  NonsmoothTerm g;
  g.value = [lo, hi](const Vec& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] < lo || x[i] > hi) return kInf;
    return 0.0;
  };
  g.bregman_prox = [lo, hi](const Kernel&, double, const Vec& zbar) {
    return Vec(zbar.array().max(lo).min(hi));
  };
  return g;
}

}  // namespace bella
