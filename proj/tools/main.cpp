#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "befpp/errors.hpp"
#include "befpp/suites.hpp"

namespace {

using befpp::RunConfig;
using befpp::SuiteResult;

void add_common(CLI::App* cmd, RunConfig& cfg, std::vector<double>& a_flag,
                bool with_graph, bool with_eps) {
  if (with_graph) {
    cmd->add_option("--graph", cfg.graph_path, "graph JSON file");
    cmd->add_option("--builtin", cfg.builtin,
                    "builtin graph: two-cycle, triangle, tri-chords, "
                    "divfree4, layered");
  }
  cmd->add_option("--a", a_flag, "positive parameters a (comma separated)")
      ->delimiter(',');
  if (with_eps)
    cmd->add_option("--eps", cfg.eps_list,
                    "strictly decreasing epsilon list (comma separated)")
        ->delimiter(',');
  cmd->add_option("--n", cfg.n, "sample count");
  cmd->add_option("--seed", cfg.seed, "RNG seed");
  cmd->add_option("--workers", cfg.workers, "worker threads");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_flag("--allow-tiny-eps", cfg.allow_tiny_eps,
                "permit epsilon below 1e-4 (ill-conditioned regime)");
}

int report_and_exit(const SuiteResult& r) {
  for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  long failed = 0;
  for (const auto& rep : r.reports) {
    if (!rep.pass) ++failed;
    std::printf("%-6s %-58s stat=%-12.6g crit=%-12.6g n=%ld\n",
                rep.pass ? "pass" : "FAIL", rep.name.c_str(), rep.statistic,
                rep.critical, rep.n);
  }
  std::printf("%s: %zu checks, %ld failed\n", failed == 0 ? "PASS" : "FAIL",
              r.reports.size(), failed);
  for (const auto& f : r.files_written) std::printf("wrote %s\n", f.c_str());
  return befpp::exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bernoulli-Exponential first passage percolation: samplers, "
      "first-passage solvers, time-reversal coupling, and the Monte Carlo "
      "verification suites"};
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* env_out = std::getenv("BEFPP_OUT")) cfg.out_dir = env_out;
  std::vector<double> a_flag;

  auto* dist = app.add_subcommand(
      "verify-distributions",
      "sampler battery: atoms, conditional exponentials, min decomposition, "
      "memorylessness, conditional restriction, Gamma-Dirichlet independence");
  add_common(dist, cfg, a_flag, false, false);

  auto* conv = app.add_subcommand(
      "convergence",
      "rescaled-Dirichlet convergence toward the Be-Exp law across the "
      "epsilon list");
  add_common(conv, cfg, a_flag, false, true);

  auto* coup = app.add_subcommand(
      "verify-coupling",
      "time-reversal coupling checks: exact identities, closed loops, "
      "distributional laws, Beta marginals");
  add_common(coup, cfg, a_flag, true, true);
  coup->add_flag("--negative-control", cfg.negative_control,
                 "perturb weights off the divergence-free manifold; the dual "
                 "law checks are then expected to fail (exit 1)");
  coup->add_flag("--dump-env", cfg.dump_env,
                 "write one sampled environment and its reversal as CSV");

  auto* lay = app.add_subcommand(
      "layered-example",
      "constrained return time on the layered graph against the six-term "
      "dual formula");
  add_common(lay, cfg, a_flag, false, false);
  lay->add_option("--dump-witnesses", cfg.dump_witnesses,
                  "write witness paths for the first K samples");

  auto* info = app.add_subcommand("graph-info",
                                  "print and serialize a graph description");
  add_common(info, cfg, a_flag, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    cfg.a = Eigen::VectorXd::Zero(0);
    if (!a_flag.empty()) {
      cfg.a.resize(static_cast<long>(a_flag.size()));
      for (std::size_t i = 0; i < a_flag.size(); ++i)
        cfg.a[static_cast<long>(i)] = a_flag[i];
    } else {
      cfg.a = Eigen::Vector3d(1.0, 2.0, 3.0);
    }
    if (dist->parsed()) return report_and_exit(befpp::run_verify_distributions(cfg));
    if (conv->parsed()) return report_and_exit(befpp::run_convergence(cfg));
    if (coup->parsed()) return report_and_exit(befpp::run_verify_coupling(cfg));
    if (lay->parsed()) return report_and_exit(befpp::run_layered_example(cfg));
    if (info->parsed()) {
      std::string summary;
      const SuiteResult r = befpp::run_graph_info(cfg, &summary);
      std::fputs(summary.c_str(), stdout);
      for (const auto& f : r.files_written) std::printf("wrote %s\n", f.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
