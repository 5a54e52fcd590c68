// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run via `ctest -R acceptance` or directly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bella/manifest.hpp"
#include "bella/reference.hpp"
#include "test_util.hpp"

using namespace bella;

namespace {

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(int number, std::string title)
      : number_(number), title_(std::move(title)) {}

  void require(bool ok, const std::string& detail) {
    if (!ok) {
      pass_ = false;
      if (!detail.empty()) details_.push_back(detail);
    }
  }

  ~Criterion() {
    std::printf("[%s] criterion %d: %s\n", pass_ ? "PASS" : "FAIL", number_, title_.c_str());
    for (const auto& d : details_) std::printf("       %s\n", d.c_str());
    if (!pass_) ++g_failures;
    std::fflush(stdout);
  }

 private:
  int number_;
  std::string title_;
  bool pass_ = true;
  std::vector<std::string> details_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct BenchCase {
  std::string name;
  Eigen::Index n;
  double sample_lo, sample_hi;
};

const std::vector<BenchCase>& registry_cases() {
  static const std::vector<BenchCase> cases = {
      {"quadratic", 5, -3.0, 3.0}, {"circle", 2, -3.0, 3.0},  {"l0-ls", 5, -3.0, 3.0},
      {"l1-ls", 5, -3.0, 3.0},     {"poisson", 4, 0.2, 4.0},
  };
  return cases;
}

class HugeRandomDirections final : public DirectionProvider {
 public:
  explicit HugeRandomDirections(std::uint64_t seed)
      : DirectionProvider(kInf), gen_(seed) {}
  DirectionKind kind() const override { return DirectionKind::Zero; }
  Vec direction(const Vec& x, const Vec&) override {
    Vec d = gen_.uniform_vector(x.size(), -1.0, 1.0);
    return Vec(d * (1e6 / d.norm()));
  }

 protected:
  Vec raw_direction(const Vec& residual) override { return -residual; }

 private:
  SplitMix64 gen_;
};

void criterion_envelope_inequalities() {
  Criterion c(1, "envelope upper bound and sandwich at 1000 points per problem");
  const auto start = std::chrono::steady_clock::now();
  SplitMix64 gen(101);
  for (const auto& bench : registry_cases()) {
    const Problem p = builtin_problem(bench.name, bench.n, 2024);
    const double lf = p.smooth.rel_smoothness;
    const double gamma = 0.95 / lf;
    for (int i = 0; i < 1000; ++i) {
      const Vec x = gen.uniform_vector(bench.n, bench.sample_lo, bench.sample_hi);
      const FbStep step = fb_operator(p, gamma, x);
      const double phi_x = p.objective(x);
      if (std::isfinite(phi_x) && !(step.bfbe <= phi_x + 1e-8)) {
        c.require(false, bench.name + ": envelope exceeded the objective");
        break;
      }
      const double gap = step.bfbe - step.phi_xbar();
      const double lower = (1.0 - gamma * lf) / gamma * step.bregman_residual;
      const double upper = (1.0 + gamma * lf) / gamma * step.bregman_residual;
      if (!(gap >= lower - 1e-8 && gap <= upper + 1e-8)) {
        std::ostringstream os;
        os << bench.name << ": sandwich violated at sample " << i << " (gap " << gap
           << " not in [" << lower << ", " << upper << "])";
        c.require(false, os.str());
        break;
      }
    }
  }
  c.require(seconds_since(start) < 10.0, "runtime budget of 10 s exceeded");
}

void criterion_pp_equivalence() {
  Criterion c(2, "forward-backward agrees with the proximal-point grid oracle");
  const auto start = std::chrono::steady_clock::now();
  SplitMix64 gen(202);
  for (const auto& bench : registry_cases()) {
    for (Eigen::Index n = 1; n <= 2; ++n) {
      const Problem p = builtin_problem(bench.name, n, 2024);
      const bool positive = bench.name == "poisson";
      GridSpec grid;
      grid.lower = Vec::Constant(n, positive ? 0.02 : -6.0);
      grid.upper = Vec::Constant(n, 6.0);
      grid.points_per_axis = n == 1 ? 8001 : 801;
      for (double factor : {0.1, 0.5, 0.9}) {
        const double gamma = factor / p.smooth.rel_smoothness;
        for (int trial = 0; trial < 20; ++trial) {
          const Vec x = positive ? gen.uniform_vector(n, 0.5, 2.0)
                                 : gen.uniform_vector(n, -2.0, 2.0);
          const auto report = check_pp_equivalence(p, gamma, x, grid);
          if (!report.pass) {
            std::ostringstream os;
            os << bench.name << " n=" << n << " gamma=" << gamma << ": points differ by "
               << report.point_distance << " (cell " << report.cell_diagonal << ")";
            c.require(false, os.str());
            break;
          }
        }
      }
    }
  }
  c.require(seconds_since(start) < 60.0, "runtime budget of 60 s exceeded");
}

void criterion_bfbe_gradient() {
  Criterion c(3, "envelope gradient matches central finite differences");
  SplitMix64 gen(303);
  const double step_size = 1e-5;
  for (const auto& name : {"quadratic", "circle", "l0-ls"}) {
    const Eigen::Index n = 2;
    const Problem p = builtin_problem(name, n, 2024);
    const double gamma = 0.95 / p.smooth.rel_smoothness;
    const bool is_l0 = std::string(name) == "l0-ls";
    const double threshold = std::sqrt(2.0 * gamma * 0.1);
    int checked = 0;
    while (checked < 50) {
      const Vec x = gen.uniform_vector(n, -2.0, 2.0);
      if (is_l0) {
        // stay 10x the FD step away from the threshold manifold
        const Vec fwd = forward_step(p, gamma, x);
        bool near_manifold = false;
        for (Eigen::Index i = 0; i < n; ++i)
          near_manifold |= std::abs(std::abs(fwd[i]) - threshold) < 10.0 * step_size;
        if (near_manifold) continue;
      }
      const Vec analytic = bfbe_gradient(p, gamma, x);
      if (analytic.norm() < 1e-6) continue;
      const Vec fd = finite_diff_gradient(
          [&](const Vec& z) { return bfbe(p, gamma, z); }, x, step_size);
      if (!((fd - analytic).norm() <= 1e-5 * analytic.norm())) {
        std::ostringstream os;
        os << name << ": gradient mismatch " << (fd - analytic).norm() << " at relative scale "
           << analytic.norm();
        c.require(false, os.str());
        break;
      }
      ++checked;
    }
  }
}

void criterion_decrease_and_backtracking() {
  Criterion c(4, "sufficient decrease everywhere; backtracking stays finite");
  SplitMix64 gen(404);
  for (const auto& bench : registry_cases()) {
    const Problem p = builtin_problem(bench.name, 2, 2024);
    SolverConfig config = default_solver_config(p.smooth.rel_smoothness);
    config.epsilon = 1e-6;
    config.max_iters = 3000;
    Vec x0 = gen.uniform_vector(2, std::max(bench.sample_lo, -2.0),
                                std::min(bench.sample_hi, 2.0));
    if (bench.name == "poisson") x0 = x0.array().max(0.2).min(4.0);

    for (const char* spec : {"bfbs", "zero", "broyden", "lbfgs:10"}) {
      auto provider = make_direction_provider(spec);
      const SolveResult r = bella_solve(p, config, x0, *provider);
      c.require(r.status == SolveStatus::Converged || r.status == SolveStatus::MaxIters,
                bench.name + "/" + spec + ": unexpected status");
      c.require(bella::testing::decrease_holds(r.iterations, config.sigma),
                bench.name + "/" + spec + ": decrease inequality violated");
      c.require(bella::testing::max_backtracks(r.iterations) <= 200,
                bench.name + "/" + spec + ": more than 200 backtracks");
    }

    HugeRandomDirections huge(bench.n);
    const SolveResult r = bella_solve(p, config, x0, huge);
    c.require(r.status == SolveStatus::Converged || r.status == SolveStatus::MaxIters,
              bench.name + "/adversarial: unexpected status");
    c.require(bella::testing::decrease_holds(r.iterations, config.sigma),
              bench.name + "/adversarial: decrease inequality violated");
    c.require(bella::testing::max_backtracks(r.iterations) <= 200,
              bench.name + "/adversarial: more than 200 backtracks");
  }
}

void criterion_iteration_complexity() {
  Criterion c(5, "iteration count within the telescoping bound on the quadratic");
  const Problem p = builtin_problem("quadratic", 1, 0);
  SolverConfig config;
  config.gamma = 0.5;
  config.sigma = 0.5;
  config.epsilon = 1e-4;
  Vec x0(1);
  x0 << 2.0;
  BfbsDirections dirs;
  const SolveResult r = bella_solve(p, config, x0, dirs);
  const long steps = static_cast<long>(r.iterations.size()) - 1;
  const double bound = (p.objective(x0) - *p.known_infimum) / (config.sigma * config.epsilon);
  c.require(r.status == SolveStatus::Converged, "did not converge");
  c.require(std::abs(bound - 40000.0) < 1e-9, "bound formula mismatch");
  c.require(steps <= 40000, "exceeded the theoretical bound");
  c.require(steps <= 50, "exceeded the expected practical count of 50");
}

void criterion_adaptive_lf() {
  Criterion c(6, "adaptive modulus: at most 8 doublings, then convergence");
  for (const auto& name : {"quadratic", "circle"}) {
    const Problem p = builtin_problem(name, 2, 2024);
    SolverConfig config;
    config.adaptive = true;
    config.initial_L = p.smooth.rel_smoothness / 100.0;
    config.epsilon = 1e-10;
    Vec x0(2);
    x0 << 1.3, -0.4;
    if (std::string(name) == "circle") x0 << 2.0, 0.5;
    BfbsDirections dirs;
    const SolveResult r = bella_solve(p, config, x0, dirs);
    c.require(r.status == SolveStatus::Converged, std::string(name) + ": did not converge");
    c.require(r.final_bregman_residual() <= config.epsilon,
              std::string(name) + ": final residual above epsilon");
    c.require(r.adaptive_doublings <= 8, std::string(name) + ": more than 8 doublings");
    for (std::size_t k = 0; k + 1 < r.iterations.size(); ++k)
      if (r.iterations[k + 1].current_L < r.iterations[k].current_L ||
          (r.iterations[k].current_L >= p.smooth.rel_smoothness &&
           r.iterations[k + 1].current_L != r.iterations[k].current_L)) {
        c.require(false, std::string(name) + ": L changed after reaching L_f");
        break;
      }
  }
}

void criterion_superlinear() {
  Criterion c(7, "unit steps and superlinear rate on the circle; linear baseline");
  const auto start = std::chrono::steady_clock::now();
  const Problem p = builtin_problem("circle", 2, 0);
  Vec x0(2);
  x0 << 2.0, 0.5;

  SolverConfig config = default_solver_config(p.smooth.rel_smoothness);
  config.epsilon = 1e-28;
  config.max_iters = 500;

  LbfgsDirections lbfgs(10);
  const SolveResult fast = bella_solve(p, config, x0, lbfgs);
  c.require(fast.status == SolveStatus::Converged, "lbfgs run did not converge");

  // (a) the last 10 pre-convergence iterations (the whole run when shorter)
  // accept the unit step outright
  const auto& rows = fast.iterations;
  const std::size_t steps = rows.size() - 1;
  c.require(steps >= 1, "lbfgs run recorded no steps");
  const std::size_t window = std::min<std::size_t>(10, steps);
  for (std::size_t k = steps - window; k < steps; ++k)
    c.require(rows[k].backtracks == 0 && rows[k].tau == 1.0,
              "backtracking occurred near convergence (k=" + std::to_string(rows[k].k) + ")");

  // (b) the distance ratio drops below 0.1 while dist is still above 1e-10
  bool superlinear_seen = false;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const double d0 = rows[k].dist_to_solution;
    const double d1 = rows[k + 1].dist_to_solution;
    if (d0 > 1e-10 && d1 / d0 < 0.1) {
      superlinear_seen = true;
      break;
    }
  }
  c.require(superlinear_seen, "no ratio below 0.1 before dist reached 1e-10");

  // (c) the plain splitting baseline stays linear (ratio above 0.3 at the tail)
  BfbsDirections bfbs;
  const SolveResult slow = bella_solve(p, config, x0, bfbs);
  c.require(slow.status == SolveStatus::Converged, "bfbs run did not converge");
  const auto& srows = slow.iterations;
  const std::size_t tail = srows.size() > 21 ? srows.size() - 21 : 0;
  for (std::size_t k = tail; k + 1 < srows.size(); ++k) {
    const double d0 = srows[k].dist_to_solution;
    const double d1 = srows[k + 1].dist_to_solution;
    if (d0 > 0.0 && !(d1 / d0 > 0.3)) {
      c.require(false, "bfbs tail ratio fell to " + std::to_string(d1 / d0));
      break;
    }
  }
  c.require(seconds_since(start) < 5.0, "runtime budget of 5 s exceeded");
}

void criterion_certificate() {
  Criterion c(8, "residual certificate dominates the exact l1 subgradient norm");
  const Problem p = builtin_problem("l1-ls", 8, 2024);
  const double lambda = 0.1;
  for (double eps : {1e-4, 1e-8}) {
    SolverConfig config = default_solver_config(p.smooth.rel_smoothness);
    config.epsilon = eps;
    Vec x0 = Vec::Zero(8);
    BfbsDirections dirs;
    const SolveResult r = bella_solve(p, config, x0, dirs);
    c.require(r.status == SolveStatus::Converged, "run did not converge");
    const Vec grad = p.smooth.gradient(r.x_hat);
    Vec sub(8);
    for (int i = 0; i < 8; ++i) {
      if (r.x_hat[i] != 0.0)
        sub[i] = grad[i] + lambda * (r.x_hat[i] > 0 ? 1.0 : -1.0);
      else
        sub[i] = std::copysign(std::max(std::abs(grad[i]) - lambda, 0.0), grad[i]);
    }
    const double cert =
        residual_certificate(p, config.gamma, r.x_final, r.x_hat, 1.0, 1.0);
    std::ostringstream os;
    os << "eps=" << eps << ": subgradient " << sub.norm() << " vs certificate " << cert;
    c.require(sub.norm() <= cert, os.str());
  }
}

void criterion_determinism() {
  Criterion c(9, "identical manifests produce byte-identical traces");
  for (const char* fmt : {"csv", "json"}) {
    RunManifest m;
    m.problem = "l1-ls";
    m.n = 6;
    m.seed = 99;
    m.x0 = "random";
    m.direction = "lbfgs:10";
    m.eps = 1e-10;
    m.format = fmt;
    m.trace_out = std::string("acceptance_det.") + fmt;
    const RunOutcome first = run_manifest(m);
    std::ifstream in1(first.trace_path, std::ios::binary);
    std::ostringstream bytes1;
    bytes1 << in1.rdbuf();
    const RunOutcome second = run_manifest(m);
    std::ifstream in2(second.trace_path, std::ios::binary);
    std::ostringstream bytes2;
    bytes2 << in2.rdbuf();
    c.require(!bytes1.str().empty(), "empty trace");
    c.require(bytes1.str() == bytes2.str(), std::string(fmt) + ": traces differ");
    std::remove(first.trace_path.c_str());
  }
}

}  // namespace

int main() {
  criterion_envelope_inequalities();
  criterion_pp_equivalence();
  criterion_bfbe_gradient();
  criterion_decrease_and_backtracking();
  criterion_iteration_complexity();
  criterion_adaptive_lf();
  criterion_superlinear();
  criterion_certificate();
  criterion_determinism();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
