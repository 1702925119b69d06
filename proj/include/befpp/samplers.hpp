#pragma once

#include <Eigen/Dense>

#include "befpp/errors.hpp"
#include "befpp/rng.hpp"

namespace befpp {

/// p_i = a_i / sum(a). Rejects non-positive or non-finite entries.
Eigen::VectorXd prob_vector(const Eigen::VectorXd& a);

/// One draw of the vector ((1-B_1)E_1, ..., (1-B_M)E_M): B picks exactly one
/// coordinate with probabilities prob_vector(a), E_i ~ Exp(a_i) independent.
/// Exactly one coordinate is zero, the rest are strictly positive.
struct BeExpSample {
  Eigen::VectorXd x;
  int zero_index = -1;
};
BeExpSample sample_be_exp(const Eigen::VectorXd& a, RngStream& rng);

/// Gamma(alpha, 1) variate. Marsaglia-Tsang for alpha >= 1; smaller shapes
/// go through the log-space boost and exponentiate.
double sample_gamma(double alpha, RngStream& rng);

/// log W with W ~ Gamma(alpha, 1), exact in law for every alpha > 0 and
/// stable for shapes as small as 1e-6: for alpha < 1 uses
/// W = U^(1/alpha) * W' with W' ~ Gamma(alpha + 1, 1), i.e.
/// log W = log(U)/alpha + log W', which never underflows.
double sample_log_gamma(double alpha, RngStream& rng);

/// log U with U ~ Dirichlet(a), computed entirely in log space:
/// log U_i = log W_i - logsumexp(log W). exp of the result sums to 1.
Eigen::VectorXd sample_log_dirichlet(const Eigen::VectorXd& a, RngStream& rng);

/// Splits a vector of M >= 2 distinct positive reals into its minimum, the
/// argmin, and the min-shifted vector (exactly one zero, at the argmin).
/// Ties raise TiedMinimum; they have probability zero for continuous draws
/// and breaking them silently would mask generator bugs.
struct MinDecomposition {
  double min_value = 0.0;
  int argmin = -1;
  Eigen::VectorXd shifted;
};
MinDecomposition min_decompose(const Eigen::VectorXd& values);

double logsumexp(const Eigen::VectorXd& v);
double logaddexp(double a, double b);

}  // namespace befpp
