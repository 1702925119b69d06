#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "befpp/graph.hpp"
#include "befpp/stats.hpp"

namespace befpp {

/// Shared configuration of the command-line suites. Everything is validated
/// up front; sampling never starts on a bad config.
struct RunConfig {
  std::string graph_path;          // JSON file; empty means builtin
  std::string builtin;             // builtin graph name
  Eigen::VectorXd a;               // distribution / layered parameters
  std::vector<double> eps_list = {0.5, 0.2, 0.1, 0.05, 0.02};
  long n = 100000;
  std::uint64_t seed = 42;
  int workers = 1;
  std::string out_dir = "out";
  bool negative_control = false;
  bool allow_tiny_eps = false;
  long dump_witnesses = 0;
  bool dump_env = false;
};

struct SuiteResult {
  std::vector<StatReport> reports;
  std::vector<std::string> files_written;
  std::vector<std::string> warnings;
  bool pass = true;
};

/// Exit 0 on full pass, 1 on statistical failure; validation problems throw
/// (the CLI maps them to exit 2).
int exit_code(const SuiteResult& r);

/// Full sampler battery: Be-Exp law, min decomposition, memorylessness
/// composition, conditional restriction, Gamma-Dirichlet independence.
SuiteResult run_verify_distributions(const RunConfig& cfg);

/// Rescaled-Dirichlet convergence: per-epsilon KS/atom statistics of
/// -eps log U against the Be-Exp limit, with a strictly-decreasing trend
/// verdict and a CSV of (eps, statistic).
SuiteResult run_convergence(const RunConfig& cfg);

/// Reversal suite: exact identities per sample (phi_check = upsilon + phi,
/// closed loops, reversed-path sums), distributional checks across the
/// epsilon list, Beta marginals of the reversed environment, and the
/// negative-control mode.
SuiteResult run_verify_coupling(const RunConfig& cfg);

/// Layered return-time experiment: N primal draws of the constrained
/// return time against N dual draws of the closed-form minimum, two-sample
/// KS, plus solver/oracle cross-checks on subsamples.
SuiteResult run_layered_example(const RunConfig& cfg);

/// Prints vertices, degrees, divergence; writes the canonical JSON form.
SuiteResult run_graph_info(const RunConfig& cfg, std::string* summary);

/// Loads the configured graph (builtin or JSON file).
WeightedDigraph resolve_graph(const RunConfig& cfg,
                              const std::string& default_builtin,
                              LayeredHandles* handles = nullptr);

/// Deterministic worker pool: fn(i) for i in [0, n), any worker count
/// produces identical results provided fn writes only to slot i.
void parallel_for(long n, int workers, const std::function<void(long)>& fn);

}  // namespace befpp
