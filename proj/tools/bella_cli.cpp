#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bella/manifest.hpp"

namespace {

// Registers every manifest field as a flag on `cmd`, writing through to `m`.
// CLI11's config support reads the same key=value format the library writes,
// with explicit flags taking precedence over file values.
void bind_manifest_flags(CLI::App& cmd, bella::RunManifest& m, std::string& imax,
                         double& region_lh, double& region_sh) {
  cmd.add_option("--problem", m.problem, "registry problem name");
  cmd.add_option("--n", m.n, "problem dimension");
  cmd.add_option("--seed", m.seed, "64-bit data seed");
  cmd.add_option("--x0", m.x0, "start point: comma list or 'random'");
  cmd.add_option("--kernel", m.kernel,
                 "kernel override: euclidean | quartic:a:b | shannon | burg | default");
  cmd.add_option("--direction", m.direction, "direction provider: bfbs | zero | broyden | lbfgs:m");
  cmd.add_option("--gamma", m.gamma, "stepsize (0 = library default 0.95/L)");
  cmd.add_option("--sigma", m.sigma, "linesearch constant (0 = library default)");
  cmd.add_option("--eps", m.eps, "termination tolerance on D_h(x_bar, x)");
  cmd.add_option("--imax", imax, "backtracking cap: integer or 'unbounded'");
  cmd.add_option("--max-iters", m.max_iters, "iteration cap");
  cmd.add_flag("--adaptive", m.adaptive, "retrieve L_f adaptively");
  cmd.add_option("--initial-L", m.initial_L, "initial modulus estimate for adaptive mode");
  cmd.add_option("--region-Lh", region_lh, "Lipschitz modulus of grad h for the certificate");
  cmd.add_option("--region-sigmah", region_sh,
                 "strong-convexity modulus of h for the certificate");
  cmd.add_option("--trace-out", m.trace_out, "trace file path (BELLA_TRACE_DIR joins relatives)");
  cmd.add_option("--format", m.format, "trace format: csv | json");
}

void absorb_extras(const CLI::App& cmd, bella::RunManifest& m, const std::string& imax,
                   double region_lh, double region_sh) {
  if (cmd.count("--imax") > 0)
    m.imax = imax == "unbounded" ? std::optional<int>{} : std::optional<int>{std::stoi(imax)};
  if (cmd.count("--region-Lh") > 0) m.region_L_h = region_lh;
  if (cmd.count("--region-sigmah") > 0) m.region_sigma_h = region_sh;
}

int do_run(const bella::RunManifest& manifest) {
  const bella::RunOutcome outcome = bella::run_manifest(manifest);
  for (const auto& w : outcome.result.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << "status=" << bella::to_string(outcome.result.status)
            << " iterations=" << (outcome.result.iterations.size() -
                                  (outcome.result.iterations.empty() ? 0 : 1))
            << " prox_calls=" << outcome.result.total_prox_calls
            << " final_residual=" << outcome.result.final_bregman_residual()
            << " trace=" << outcome.trace_path << "\n";
  if (!outcome.result.failure_detail.empty())
    std::cerr << "detail: " << outcome.result.failure_detail << "\n";
  return outcome.exit_code;
}

int do_compare(const std::vector<std::string>& files, bool write_traces) {
  std::vector<bella::RunManifest> manifests;
  manifests.reserve(files.size());
  for (const auto& f : files) manifests.push_back(bella::manifest_from_file(f));
  const bella::CompareReport report = bella::compare_manifests(manifests, write_traces);
  std::cout << report.table;
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BELLA: Bregman envelope linesearch solver for composite minimization"};
  app.require_subcommand(1);

  bella::RunManifest manifest;
  std::string imax = "unbounded";
  double region_lh = 0.0, region_sh = 0.0;

  CLI::App* run = app.add_subcommand("run", "solve one configured problem and write a trace");
  bind_manifest_flags(*run, manifest, imax, region_lh, region_sh);
  run->set_config("--config", "", "flat key=value manifest file (flags override)");

  CLI::App* compare =
      app.add_subcommand("compare", "run >= 2 manifests on one problem and tabulate");
  std::vector<std::string> compare_files;
  bool compare_traces = false;
  compare->add_option("manifests", compare_files, "manifest files")->required();
  compare->add_flag("--write-traces", compare_traces, "also write each run's trace file");

  try {
    app.parse(argc, argv);
    if (run->parsed()) {
      absorb_extras(*run, manifest, imax, region_lh, region_sh);
      return do_run(manifest);
    }
    return do_compare(compare_files, compare_traces);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
