#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace befpp {

/// Outcome of one statistical check. `pass` is always `statistic <= critical`.
struct StatReport {
  std::string name;
  double statistic = 0.0;
  double critical = 0.0;
  long n = 0;
  long m = 0;  // second sample size; 0 for one-sample tests
  double alpha = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

std::string to_json_line(const StatReport& r);
bool all_pass(const std::vector<StatReport>& reports);

//
// Special functions. log_gamma delegates to libm; the incomplete beta and
// gamma integrals are continued-fraction/series evaluations.
//
double log_gamma(double x);
double regularized_incomplete_beta(double a, double b, double x);
double regularized_gamma_p(double s, double x);
double chi_square_quantile(double p, int dof);
double exponential_cdf(double rate, double t);

/// Inverse Beta CDF by bisection on regularized_incomplete_beta.
double beta_quantile(double a, double b, double p);

/// P(-log U <= t) for U ~ Beta(a, b), evaluated piecewise so that both the
/// near-one region (t tiny) and the deep tail (t large, where 1 - e^-t
/// rounds to 1 but the law still carries mass for small parameters) keep
/// full accuracy.
double beta_neg_log_cdf(double a, double b, double t);

double ks_critical(long n, double alpha);
double ks_two_sample_critical(long n, long m, double alpha);

StatReport ks_one_sample(const Eigen::VectorXd& samples,
                         const std::function<double(double)>& cdf,
                         const std::string& name, double alpha = 0.05,
                         double slack = 1.0);
StatReport ks_two_sample(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         const std::string& name, double alpha = 0.001);

/// Binomial check of an atom frequency against `expected_p` with a 3-sigma
/// band (plus an optional additive allowance).
StatReport atom_test(long atom_count, long n, double expected_p,
                     const std::string& name, double allowance = 0.0);
/// Counts exact zeros in `samples`.
StatReport atom_test(const Eigen::VectorXd& samples, double expected_p,
                     const std::string& name);

StatReport chi_square_independence(const std::vector<int>& labels_a,
                                   int cells_a,
                                   const std::vector<int>& labels_b,
                                   int cells_b, const std::string& name,
                                   double alpha = 0.01);

/// Equal-count bin labels (empirical quantile bins).
std::vector<int> decile_bins(const Eigen::VectorXd& values, int bins = 10);

//
// Verification battery for the one-zero-coordinate exponential vector law:
// per-coordinate atom frequency against a_i / sum(a) and the conditioned
// positive part against Exp(a_i). With `exact_atoms` the atoms are exact
// zeros (sampler output); otherwise the per-row argmin plays that role
// (finite-temperature samples have no exact zeros).
//
struct BatteryOptions {
  bool exact_atoms = true;
  double ks_slack = 1.5;
  double ks_allowance_per_rate = 0.0;  // additive on the KS band, scaled by a_i
  double atom_allowance = 0.0;         // additive on the 3-sigma atom band
  double alpha = 0.05;
};

std::vector<StatReport> be_exp_battery(const Eigen::MatrixXd& samples,
                                       const Eigen::VectorXd& a,
                                       const BatteryOptions& opt,
                                       const std::string& name_prefix,
                                       std::uint64_t seed = 0);

/// Largest conditional-KS statistic in a battery result (the summary used
/// for convergence trends).
double battery_max_ks(const std::vector<StatReport>& reports);

}  // namespace befpp
