#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bella/solver.hpp"

namespace bella {

/// Full description of one solver run: registry names, seeds, solver
/// parameters and trace destination. Round-trips losslessly through the flat
/// key=value config format (keys mirror the CLI flags).
struct RunManifest {
  std::string problem = "quadratic";
  Eigen::Index n = 2;
  std::uint64_t seed = 0;
  std::string x0 = "random";        // comma list or "random"
  std::string kernel = "default";   // "default" keeps the problem's own kernel
  std::string direction = "bfbs";
  double gamma = 0.0;               // 0 = library default 0.95/L
  double sigma = 0.0;               // 0 = library default 0.45 (1-gamma L)/gamma
  double eps = 1e-8;
  std::optional<int> imax;          // nullopt = unbounded
  long max_iters = 10000;
  bool adaptive = false;
  double initial_L = 1.0;
  std::optional<double> region_L_h;      // certificate moduli, both or neither
  std::optional<double> region_sigma_h;
  std::string trace_out;            // empty = "<problem>.trace.<format>"
  std::string format = "csv";       // csv | json

  bool operator==(const RunManifest&) const = default;
};

RunManifest manifest_from_string(const std::string& text);
RunManifest manifest_from_file(const std::string& path);
std::string manifest_to_string(const RunManifest& manifest);
void manifest_to_file(const RunManifest& manifest, const std::string& path);

SolverConfig solver_config_from(const RunManifest& manifest);

/// Materializes the problem (with kernel override) and the start point.
Problem problem_from(const RunManifest& manifest);
Vec resolve_x0(const RunManifest& manifest, const Problem& problem);

struct RunOutcome {
  RunManifest manifest;
  SolveResult result;
  std::optional<double> certificate;
  std::string trace_path;  // empty when no trace was written
  int exit_code = 0;       // 0 Converged, 2 MaxIters, 3 failures
};

/// Executes the manifest and (unless suppressed) writes the trace file.
/// Configuration errors surface as exceptions; the CLI maps them to exit 1.
RunOutcome run_manifest(const RunManifest& manifest, bool write_trace = true);

/// Trace serialization. One row per iteration with the fixed column set
///   k,tau,backtracks,bfbe,phi_xbar,bregman_residual,euclid_residual,gamma,L,direction_norm
/// followed by a footer with status, x_hat (its norm when n > 20), the prox
/// call count, and the certificate when moduli were supplied. Deterministic:
/// identical manifests produce byte-identical bytes.
void write_trace_csv(std::ostream& os, const RunOutcome& outcome);
void write_trace_json(std::ostream& os, const RunOutcome& outcome);

/// Joins with the BELLA_TRACE_DIR environment directory when `path` is
/// relative; falls back to "<problem>.trace.<format>" when `path` is empty.
std::string resolve_trace_path(const RunManifest& manifest);

struct CompareEntry {
  RunManifest manifest;
  SolveResult result;
  long steps = 0;
  std::vector<double> dist_ratios;  // dist(x^{k+1}) / dist(x^k), when known
};

struct CompareReport {
  std::vector<CompareEntry> entries;
  std::string table;
  int exit_code = 0;
};

/// Runs >= 2 manifests sharing one problem (same name, n, seed) and tabulates
/// iteration counts, prox calls, final residuals, and per-method distance
/// ratio sequences for rate inspection.
CompareReport compare_manifests(const std::vector<RunManifest>& manifests,
                                bool write_traces = false);

/// 17-significant-digit formatting used in every trace/manifest float field.
std::string format_double(double v);

}  // namespace bella
