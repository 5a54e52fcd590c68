#include "bella/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bella {

namespace {

constexpr std::uint64_t kX0Stream = 3;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("expected boolean, got '" + v + "'");
}

std::vector<double> parse_comma_list(const std::string& text) {
  std::vector<double> values;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) values.push_back(std::stod(trim(item)));
  return values;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RunManifest manifest_from_string(const std::string& text) {
  RunManifest m;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("manifest line " + std::to_string(lineno) +
                                  " is not key=value: '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "problem")
      m.problem = value;
    else if (key == "n")
      m.n = std::stol(value);
    else if (key == "seed")
      m.seed = std::stoull(value);
    else if (key == "x0")
      m.x0 = value;
    else if (key == "kernel")
      m.kernel = value;
    else if (key == "direction")
      m.direction = value;
    else if (key == "gamma")
      m.gamma = std::stod(value);
    else if (key == "sigma")
      m.sigma = std::stod(value);
    else if (key == "eps")
      m.eps = std::stod(value);
    else if (key == "imax")
      m.imax = value == "unbounded" ? std::optional<int>{} : std::optional<int>{std::stoi(value)};
    else if (key == "max-iters")
      m.max_iters = std::stol(value);
    else if (key == "adaptive")
      m.adaptive = parse_bool(value);
    else if (key == "initial-L")
      m.initial_L = std::stod(value);
    else if (key == "region-Lh")
      m.region_L_h = std::stod(value);
    else if (key == "region-sigmah")
      m.region_sigma_h = std::stod(value);
    else if (key == "trace-out")
      m.trace_out = value;
    else if (key == "format")
      m.format = value;
    else
      throw std::invalid_argument("unknown manifest key '" + key + "'");
  }
  return m;
}

RunManifest manifest_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read manifest file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return manifest_from_string(buffer.str());
}

std::string manifest_to_string(const RunManifest& m) {
  std::ostringstream os;
  os << "problem=" << m.problem << "\n";
  os << "n=" << m.n << "\n";
  os << "seed=" << m.seed << "\n";
  os << "x0=" << m.x0 << "\n";
  os << "kernel=" << m.kernel << "\n";
  os << "direction=" << m.direction << "\n";
  os << "gamma=" << format_double(m.gamma) << "\n";
  os << "sigma=" << format_double(m.sigma) << "\n";
  os << "eps=" << format_double(m.eps) << "\n";
  os << "imax=" << (m.imax ? std::to_string(*m.imax) : std::string("unbounded")) << "\n";
  os << "max-iters=" << m.max_iters << "\n";
  os << "adaptive=" << (m.adaptive ? "true" : "false") << "\n";
  os << "initial-L=" << format_double(m.initial_L) << "\n";
  if (m.region_L_h) os << "region-Lh=" << format_double(*m.region_L_h) << "\n";
  if (m.region_sigma_h) os << "region-sigmah=" << format_double(*m.region_sigma_h) << "\n";
  os << "trace-out=" << m.trace_out << "\n";
  os << "format=" << m.format << "\n";
  return os.str();
}

void manifest_to_file(const RunManifest& manifest, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write manifest file '" + path + "'");
  out << manifest_to_string(manifest);
}

SolverConfig solver_config_from(const RunManifest& m) {
  SolverConfig config;
  config.gamma = m.gamma;
  config.sigma = m.sigma;
  config.epsilon = m.eps;
  config.i_max = m.imax;
  config.max_iters = m.max_iters;
  config.adaptive = m.adaptive;
  config.initial_L = m.initial_L;
  return config;
}

Problem problem_from(const RunManifest& m) {
  Problem problem = builtin_problem(m.problem, m.n, m.seed);
  if (m.kernel != "default") problem.kernel = make_kernel(m.kernel, m.n);
  return problem;
}

Vec resolve_x0(const RunManifest& m, const Problem& problem) {
  const Eigen::Index n = problem.dimension();
  if (m.x0 == "random") {
    SplitMix64 gen(mix_seed(m.seed, kX0Stream));
    // Restricted-domain kernels get a positive box; full-domain a symmetric one.
    const bool full_domain = problem.kernel.in_domain_interior(Vec::Constant(n, -1.0));
    return full_domain ? gen.uniform_vector(n, -1.0, 1.0)
                       : gen.uniform_vector(n, 0.5, 1.5);
  }
  const std::vector<double> values = parse_comma_list(m.x0);
  if (static_cast<Eigen::Index>(values.size()) != n)
    throw std::invalid_argument("x0 has " + std::to_string(values.size()) +
                                " components, problem dimension is " + std::to_string(n));
  Vec x0(n);
  for (Eigen::Index i = 0; i < n; ++i) x0[i] = values[static_cast<std::size_t>(i)];
  if (!problem.kernel.in_domain_interior(x0))
    throw std::invalid_argument("x0 lies outside int dom h");
  return x0;
}

std::string resolve_trace_path(const RunManifest& m) {
  std::string path = m.trace_out;
  if (path.empty()) path = m.problem + ".trace." + m.format;
  if (!path.empty() && path[0] != '/') {
    if (const char* dir = std::getenv("BELLA_TRACE_DIR"); dir && *dir)
      path = std::string(dir) + "/" + path;
  }
  return path;
}

namespace {

std::optional<double> compute_certificate(const RunManifest& m, const Problem& problem,
                                          const SolveResult& result) {
  if (result.x_final.size() == 0 || result.x_hat.size() == 0) return std::nullopt;
  double lh = 0.0, sh = 0.0;
  if (m.region_L_h && m.region_sigma_h) {
    lh = *m.region_L_h;
    sh = *m.region_sigma_h;
  } else if (problem.kernel.name() == "euclidean") {
    lh = sh = 1.0;  // exact moduli of the energy kernel
  } else {
    return std::nullopt;
  }
  const auto& last = result.iterations.back();
  return residual_certificate(problem, last.current_gamma, result.x_final, result.x_hat, lh,
                              sh);
}

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return 0;
    case SolveStatus::MaxIters: return 2;
    case SolveStatus::RangeViolation:
    case SolveStatus::NumericalFailure: return 3;
  }
  return 3;
}

}  // namespace

RunOutcome run_manifest(const RunManifest& manifest, bool write_trace) {
  if (manifest.format != "csv" && manifest.format != "json")
    throw std::invalid_argument("trace format must be 'csv' or 'json'");
  RunOutcome outcome;
  outcome.manifest = manifest;
  const Problem problem = problem_from(manifest);
  const Vec x0 = resolve_x0(manifest, problem);
  const SolverConfig config = solver_config_from(manifest);
  validate_config(config, problem.smooth.rel_smoothness);
  auto provider = make_direction_provider(manifest.direction);
  outcome.result = bella_solve(problem, config, x0, *provider);
  outcome.certificate = compute_certificate(manifest, problem, outcome.result);
  outcome.exit_code = exit_code_for(outcome.result.status);
  if (write_trace) {
    outcome.trace_path = resolve_trace_path(manifest);
    std::ofstream out(outcome.trace_path, std::ios::binary);
    if (!out)
      throw std::invalid_argument("cannot write trace file '" + outcome.trace_path + "'");
    if (manifest.format == "csv")
      write_trace_csv(out, outcome);
    else
      write_trace_json(out, outcome);
  }
  return outcome;
}

void write_trace_csv(std::ostream& os, const RunOutcome& outcome) {
  const SolveResult& r = outcome.result;
  os << "k,tau,backtracks,bfbe,phi_xbar,bregman_residual,euclid_residual,gamma,L,"
        "direction_norm\n";
  for (const auto& rec : r.iterations) {
    os << rec.k << ',' << format_double(rec.tau) << ',' << rec.backtracks << ','
       << format_double(rec.bfbe_value) << ',' << format_double(rec.phi_at_xbar) << ','
       << format_double(rec.bregman_residual) << ',' << format_double(rec.euclid_residual)
       << ',' << format_double(rec.current_gamma) << ',' << format_double(rec.current_L)
       << ',' << format_double(rec.direction_norm) << '\n';
  }
  os << "# status," << to_string(r.status) << '\n';
  if (r.x_hat.size() > 20) {
    os << "# x_hat_norm," << format_double(r.x_hat.norm()) << '\n';
  } else {
    os << "# x_hat";
    for (Eigen::Index i = 0; i < r.x_hat.size(); ++i) os << ',' << format_double(r.x_hat[i]);
    os << '\n';
  }
  os << "# total_prox_calls," << r.total_prox_calls << '\n';
  if (outcome.certificate)
    os << "# certificate," << format_double(*outcome.certificate) << '\n';
}

void write_trace_json(std::ostream& os, const RunOutcome& outcome) {
  const SolveResult& r = outcome.result;
  nlohmann::ordered_json doc;
  doc["problem"] = outcome.manifest.problem;
  doc["direction"] = outcome.manifest.direction;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& rec : r.iterations) {
    nlohmann::ordered_json row;
    row["k"] = rec.k;
    row["tau"] = rec.tau;
    row["backtracks"] = rec.backtracks;
    row["bfbe"] = rec.bfbe_value;
    row["phi_xbar"] = rec.phi_at_xbar;
    row["bregman_residual"] = rec.bregman_residual;
    row["euclid_residual"] = rec.euclid_residual;
    row["gamma"] = rec.current_gamma;
    row["L"] = rec.current_L;
    row["direction_norm"] = rec.direction_norm;
    rows.push_back(std::move(row));
  }
  doc["iterations"] = std::move(rows);
  doc["status"] = to_string(r.status);
  if (r.x_hat.size() > 20) {
    doc["x_hat_norm"] = r.x_hat.norm();
  } else {
    doc["x_hat"] = std::vector<double>(r.x_hat.data(), r.x_hat.data() + r.x_hat.size());
  }
  doc["total_prox_calls"] = r.total_prox_calls;
  if (outcome.certificate) doc["certificate"] = *outcome.certificate;
  os << doc.dump(2) << '\n';
}

CompareReport compare_manifests(const std::vector<RunManifest>& manifests,
                                bool write_traces) {
  if (manifests.size() < 2)
    throw std::invalid_argument("compare requires at least 2 manifests");
  for (std::size_t i = 1; i < manifests.size(); ++i) {
    if (manifests[i].problem != manifests[0].problem || manifests[i].n != manifests[0].n ||
        manifests[i].seed != manifests[0].seed)
      throw std::invalid_argument(
          "compare requires manifests sharing one problem (name, n, seed)");
  }

  CompareReport report;
  for (const auto& m : manifests) {
    CompareEntry entry;
    entry.manifest = m;
    RunOutcome outcome = run_manifest(m, write_traces);
    entry.result = std::move(outcome.result);
    entry.steps = std::max<long>(0, static_cast<long>(entry.result.iterations.size()) - 1);
    const auto& iters = entry.result.iterations;
    for (std::size_t k = 0; k + 1 < iters.size(); ++k) {
      const double d0 = iters[k].dist_to_solution;
      const double d1 = iters[k + 1].dist_to_solution;
      if (std::isfinite(d0) && std::isfinite(d1) && d0 > 0.0)
        entry.dist_ratios.push_back(d1 / d0);
    }
    report.exit_code = std::max(report.exit_code, outcome.exit_code);
    report.entries.push_back(std::move(entry));
  }

  std::ostringstream table;
  table << "problem=" << manifests[0].problem << " n=" << manifests[0].n
        << " seed=" << manifests[0].seed << "\n";
  table << "direction        iters      prox     status           final_residual\n";
  for (const auto& e : report.entries) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s %-10ld %-8ld %-16s %.6e\n",
                  e.manifest.direction.c_str(), e.steps, e.result.total_prox_calls,
                  to_string(e.result.status), e.result.final_bregman_residual());
    table << line;
  }
  bool any_ratios = false;
  for (const auto& e : report.entries) any_ratios = any_ratios || !e.dist_ratios.empty();
  if (any_ratios) {
    table << "dist(x_k, X*) ratios per iteration:\n";
    for (const auto& e : report.entries) {
      table << "  " << e.manifest.direction << ":";
      for (double r : e.dist_ratios) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), " %.3e", r);
        table << buf;
      }
      table << "\n";
    }
  }
  report.table = table.str();
  return report;
}

}  // namespace bella
