#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "befpp/environment.hpp"
#include "befpp/graph.hpp"
#include "befpp/stats.hpp"

namespace befpp {

/// Stationary distribution of the quenched chain. log_pi is exact in log
/// space (entries can sit far below the linear underflow threshold at small
/// epsilon); pi is the linear view, and residual is the max-norm defect of
/// pi^T P = pi^T plus the normalization defect.
struct StationaryDistribution {
  Eigen::VectorXd pi;
  Eigen::VectorXd log_pi;
  double residual = 0.0;
};

/// Solves pi(y) = sum over edges (x,y) of pi(x) w(x,e) with sum(pi)=1 by
/// state-elimination Gaussian elimination (GTH) run in log space: the
/// elimination is subtraction-free, so every component keeps full relative
/// accuracy no matter how small. Throws SingularSystem when the chain is
/// numerically reducible.
StationaryDistribution stationary_distribution(const WeightedDigraph& g,
                                               const DirichletEnvironment& env);

/// Time-reversed environment on the dual graph:
/// log w_rev(y, e_rev) = log pi(x) - log pi(y) + log w(x, e) for e = (x,y).
/// Edge ids are shared with the primal (dual edge e reverses primal edge e).
/// Requires a stationary input consistent with env (residual <= 1e-10 and
/// per-dual-vertex normalization), else InconsistentStationaryInput.
DirichletEnvironment reverse_environment(const WeightedDigraph& g,
                                         const DirichletEnvironment& env,
                                         const StationaryDistribution& st);

/// Finite-epsilon realization of the reversal coupling: the potentials
/// phi = -eps log w, phi_check = -eps log w_rev, and the gradient
/// upsilon(e) = -eps log pi(tail) + eps log pi(head), with
/// phi_check = upsilon + phi edge by edge and upsilon summing to zero on
/// every closed path.
struct CouplingTriple {
  double epsilon = 0.0;
  Eigen::VectorXd phi;        // by primal edge id
  Eigen::VectorXd phi_check;  // by dual edge id (= primal id)
  Eigen::VectorXd upsilon;    // by primal edge id
  DirichletEnvironment env;
  DirichletEnvironment env_rev;
  StationaryDistribution stationary;
  bool weights_divergence_free = true;
};

CouplingTriple build_coupling(const WeightedDigraph& g, double epsilon,
                              std::uint64_t seed, std::uint64_t sample);

/// Reports max |sum of f over loop| against tol = 1e-9 * length * max|f|
/// (per loop, worst case reported). Loops must be closed directed paths.
StatReport closed_loop_check(const Eigen::VectorXd& edge_function,
                             const WeightedDigraph& g,
                             const std::vector<Path>& loops,
                             const std::string& name,
                             double tol_scale = 1e-9);

/// Signed sums over a fundamental cycle basis (gradient functions vanish on
/// these as well); same tolerance convention.
StatReport cycle_basis_check(const Eigen::VectorXd& edge_function,
                             const WeightedDigraph& g,
                             const std::vector<SignedCycle>& basis,
                             const std::string& name,
                             double tol_scale = 1e-9);

struct Theorem1Options {
  long n_samples = 20000;
  int workers = 1;
  double ks_slack = 1.5;
  /// Additive band allowances applied above the smallest epsilon of the
  /// list (finite-epsilon bias; the smallest epsilon is held to the strict
  /// bands).
  double ks_allowance_per_rate = 1.0;   // times eps * a_i
  double atom_allowance_per_eps = 0.30; // times eps
};

/// Distribution-level checks of the coupling in the small-epsilon regime:
/// per-vertex marginals of phi against the Be-Exp(a_x) battery, per-dual-
/// vertex marginals of phi_check against Be-Exp(a_check), and decreasing
/// KS trends along the epsilon list. Report-only: failures are reported,
/// not thrown.
std::vector<StatReport> theorem1_distributional_check(
    const WeightedDigraph& g, const std::vector<double>& epsilon_list,
    std::uint64_t seed, const Theorem1Options& opt);

/// KS of every reversed-environment coordinate against its
/// Beta(eps * a_e, eps * (sum of dual-vertex params) - eps * a_e) marginal.
std::vector<StatReport> reversed_beta_marginal_check(const WeightedDigraph& g,
                                                     double epsilon, long n,
                                                     std::uint64_t seed,
                                                     int workers,
                                                     double alpha = 0.001);

/// CSV rows "tail,head,phi,phi_check,upsilon,epsilon,sample" for audit.
std::string coupling_csv_header();
std::string coupling_csv_rows(const WeightedDigraph& g,
                              const CouplingTriple& c, long sample_id);

}  // namespace befpp
