#include "befpp/samplers.hpp"

#include <cmath>
#include <string>

namespace befpp {

namespace {

void check_params(const Eigen::VectorXd& a, const char* who) {
  if (a.size() < 1)
    throw NonPositiveParameter(std::string(who) + ": empty parameter vector");
  for (long i = 0; i < a.size(); ++i)
    if (!std::isfinite(a[i]) || a[i] <= 0.0)
      throw NonPositiveParameter(std::string(who) + ": parameter " +
                                 std::to_string(i) +
                                 " must be finite and > 0");
}

// Marsaglia-Tsang rejection, valid for alpha >= 1.
double gamma_large_shape(double alpha, RngStream& rng) {
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_unit();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

Eigen::VectorXd prob_vector(const Eigen::VectorXd& a) {
  check_params(a, "prob_vector");
  return a / a.sum();
}

BeExpSample sample_be_exp(const Eigen::VectorXd& a, RngStream& rng) {
  check_params(a, "sample_be_exp");
  const long m = a.size();
  const Eigen::VectorXd p = a / a.sum();
  // One uniform picks the Bernoulli coordinate by CDF walk, then all M
  // exponentials are drawn (the picked one is zeroed, matching the
  // definition of the vector).
  const double u = rng.next_unit();
  int pick = static_cast<int>(m) - 1;
  double acc = 0.0;
  for (long i = 0; i < m; ++i) {
    acc += p[i];
    if (u <= acc) {
      pick = static_cast<int>(i);
      break;
    }
  }
  BeExpSample s;
  s.x.resize(m);
  for (long i = 0; i < m; ++i) s.x[i] = rng.next_exponential(a[i]);
  s.x[pick] = 0.0;
  s.zero_index = pick;
  return s;
}

double sample_gamma(double alpha, RngStream& rng) {
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw NonPositiveParameter("sample_gamma: shape must be finite and > 0");
  if (alpha >= 1.0) return gamma_large_shape(alpha, rng);
  return std::exp(sample_log_gamma(alpha, rng));
}

double sample_log_gamma(double alpha, RngStream& rng) {
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw NonPositiveParameter("sample_log_gamma: shape must be finite and > 0");
  if (alpha >= 1.0) return std::log(gamma_large_shape(alpha, rng));
  // W = U^(1/alpha) W' with W' ~ Gamma(alpha+1, 1): exact in law and free of
  // underflow for tiny shapes, where W itself would round to zero.
  const double boost = std::log(rng.next_unit()) / alpha;
  return boost + std::log(gamma_large_shape(alpha + 1.0, rng));
}

Eigen::VectorXd sample_log_dirichlet(const Eigen::VectorXd& a, RngStream& rng) {
  check_params(a, "sample_log_dirichlet");
  const long m = a.size();
  Eigen::VectorXd logw(m);
  for (long i = 0; i < m; ++i) logw[i] = sample_log_gamma(a[i], rng);
  const double lse = logsumexp(logw);
  return logw.array() - lse;
}

MinDecomposition min_decompose(const Eigen::VectorXd& values) {
  if (values.size() < 2)
    throw NonPositiveParameter("min_decompose: need at least 2 coordinates");
  int arg = 0;
  for (long i = 1; i < values.size(); ++i)
    if (values[i] < values[arg]) arg = static_cast<int>(i);
  for (long i = 0; i < values.size(); ++i)
    if (i != arg && values[i] == values[arg])
      throw TiedMinimum("min_decompose: tied minimum at " + std::to_string(i));
  MinDecomposition d;
  d.min_value = values[arg];
  d.argmin = arg;
  d.shifted = values.array() - values[arg];
  return d;
}

double logaddexp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double logsumexp(const Eigen::VectorXd& v) {
  const double hi = v.maxCoeff();
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  double s = 0.0;
  for (long i = 0; i < v.size(); ++i) s += std::exp(v[i] - hi);
  return hi + std::log(s);
}

}  // namespace befpp
