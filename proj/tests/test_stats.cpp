#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "befpp/errors.hpp"
#include "befpp/rng.hpp"
#include "befpp/stats.hpp"

using namespace befpp;

TEST_CASE("log_gamma at integer points and domain") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
}

TEST_CASE("log_gamma recurrence on [0.1, 50]") {
  for (double x = 0.1; x <= 50.0; x += 0.173) {
    const double lhs = log_gamma(x + 1.0);
    const double rhs = log_gamma(x) + std::log(x);
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(lhs)));
  }
}

TEST_CASE("incomplete beta: uniform case, closed form, symmetry") {
  for (double x : {0.0, 0.25, 0.5, 1.0})
    CHECK(regularized_incomplete_beta(1.0, 1.0, x) ==
          doctest::Approx(x).epsilon(1e-12));
  // Beta(2,3) CDF integrates 12 t (1-t)^2 to 12(x^2/2 - 2x^3/3 + x^4/4).
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.5) ==
        doctest::Approx(0.6875).epsilon(1e-10));
  for (double a : {0.3, 1.0, 2.5}) {
    for (double b : {0.7, 1.5, 4.0}) {
      for (double x = 0.0; x <= 1.0; x += 0.1) {
        const double s = regularized_incomplete_beta(a, b, x) +
                         regularized_incomplete_beta(b, a, 1.0 - x);
        CHECK(std::fabs(s - 1.0) <= 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("regularized gamma P and the chi-square quantile") {
  // P(1/2, x) is the chi-square(1) CDF at 2x; P(1, x) = 1 - e^-x.
  CHECK(regularized_gamma_p(1.0, 1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(regularized_gamma_p(2.5, 0.0) == 0.0);
  // Known 0.99 quantiles of the chi-square law.
  CHECK(chi_square_quantile(0.99, 1) == doctest::Approx(6.6349).epsilon(1e-3));
  CHECK(chi_square_quantile(0.99, 18) == doctest::Approx(34.805).epsilon(1e-3));
  CHECK(chi_square_quantile(0.99, 81) == doctest::Approx(113.51).epsilon(1e-3));
  CHECK(chi_square_quantile(0.95, 10) == doctest::Approx(18.307).epsilon(1e-3));
}

TEST_CASE("log-scale beta CDF keeps its deep tail for small parameters") {
  // Branch agreement around the crossover point.
  for (double t : {0.2, 0.5, 0.693, 0.694, 1.0, 3.0}) {
    const double lo = regularized_incomplete_beta(0.4, 0.1, -std::expm1(-t));
    const double hi = 1.0 - regularized_incomplete_beta(0.1, 0.4, std::exp(-t));
    CHECK(std::fabs(lo - hi) <= 1e-12);
    CHECK(std::fabs(beta_neg_log_cdf(0.1, 0.4, t) - lo) <= 1e-12);
  }
  // Beta(0.1, 0.4) keeps about 2% of its mass below u = 1e-16; a CDF
  // evaluated through 1 - e^-t alone would report 1 there.
  const double f = beta_neg_log_cdf(0.1, 0.4, 40.0);
  CHECK(f < 0.99);
  CHECK(f > 0.95);
  CHECK(beta_neg_log_cdf(0.1, 0.4, 0.0) == 0.0);
  CHECK(beta_neg_log_cdf(0.1, 0.4, 1e4) == doctest::Approx(1.0).epsilon(1e-12));

  // Exact inverse-CDF draws pass a KS against it.
  RngStream rng(42, make_stream_id(stream_tag::kTest, 9, 0));
  const long n = 20000;
  Eigen::VectorXd t(n);
  for (long i = 0; i < n; ++i)
    t[i] = -std::log(beta_quantile(0.1, 0.4, rng.next_unit()));
  const auto ks = ks_one_sample(
      t, [](double x) { return beta_neg_log_cdf(0.1, 0.4, x); },
      "beta_neg_log_null", 0.001);
  CHECK(ks.pass);
}

TEST_CASE("beta quantile inverts the CDF") {
  for (double p : {0.01, 0.3, 0.77, 0.999}) {
    const double x = beta_quantile(0.4, 2.0, p);
    CHECK(regularized_incomplete_beta(0.4, 2.0, x) ==
          doctest::Approx(p).epsilon(1e-8));
  }
}

TEST_CASE("one-sample KS accepts its own law and rejects a wrong rate") {
  RngStream rng(42, make_stream_id(stream_tag::kTest, 0, 0));
  const long n = 100000;
  Eigen::VectorXd x(n);
  for (long i = 0; i < n; ++i) x[i] = rng.next_exponential(1.0);
  const auto ok = ks_one_sample(
      x, [](double t) { return exponential_cdf(1.0, t); }, "ks_null");
  CHECK(ok.pass);
  CHECK(ok.statistic < 1.36 / std::sqrt(static_cast<double>(n)));

  Eigen::VectorXd y = x.head(10000);
  const auto bad = ks_one_sample(
      y, [](double t) { return exponential_cdf(2.0, t); }, "ks_wrong_rate");
  CHECK(!bad.pass);
  // The analytic sup distance between Exp(1) and Exp(2) is 1/4.
  CHECK(bad.statistic > 0.2);

  Eigen::VectorXd c = Eigen::VectorXd::Constant(500, 0.3);
  const auto deg = ks_one_sample(
      c, [](double t) { return exponential_cdf(1.0, t); }, "ks_constant");
  const double f = exponential_cdf(1.0, 0.3);
  CHECK(deg.statistic == doctest::Approx(std::max(f, 1.0 - f)).epsilon(1e-6));

  Eigen::VectorXd tiny(10);
  tiny.setConstant(1.0);
  CHECK_THROWS_AS(ks_one_sample(
                      tiny, [](double t) { return exponential_cdf(1.0, t); },
                      "too_few"),
                  TooFewSamples);
}

TEST_CASE("two-sample KS: same law passes, a shift fails") {
  RngStream rng(7, make_stream_id(stream_tag::kTest, 1, 0));
  const long n = 10000;
  Eigen::VectorXd a(n), b(n), c(n);
  for (long i = 0; i < n; ++i) {
    a[i] = rng.next_exponential(1.0);
    b[i] = rng.next_exponential(1.0);
    c[i] = b[i] + 0.5;
  }
  CHECK(ks_two_sample(a, b, "two_sample_null").pass);
  CHECK(!ks_two_sample(a, c, "two_sample_shift").pass);
}

TEST_CASE("atom test trivials") {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(1000);
  CHECK(atom_test(z, 1.0, "all_zero").pass);
  CHECK(atom_test(500, 1000, 0.5, "half").pass);
  CHECK(!atom_test(700, 1000, 0.5, "off").pass);
}

TEST_CASE("chi-square independence on independent uniform bins") {
  RngStream rng(11, make_stream_id(stream_tag::kTest, 2, 0));
  const long n = 100000;
  std::vector<int> a(n), b(n);
  for (long i = 0; i < n; ++i) {
    a[i] = static_cast<int>(rng.next_u64() % 10);
    b[i] = static_cast<int>(rng.next_u64() % 10);
  }
  CHECK(chi_square_independence(a, 10, b, 10, "chi2_null").pass);
  // A fully dependent pairing fails decisively.
  CHECK(!chi_square_independence(a, 10, a, 10, "chi2_dependent").pass);
  std::vector<int> empty_bin(n, 3);
  CHECK_THROWS_AS(chi_square_independence(a, 10, empty_bin, 10, "degenerate"),
                  DegenerateBins);
}

TEST_CASE("decile bins are balanced") {
  RngStream rng(3, make_stream_id(stream_tag::kTest, 3, 0));
  Eigen::VectorXd x(10000);
  for (long i = 0; i < x.size(); ++i) x[i] = rng.next_unit();
  const auto labels = decile_bins(x);
  std::vector<int> counts(10, 0);
  for (int l : labels) counts[l]++;
  for (int c : counts) CHECK(c == 1000);
}

TEST_CASE("report JSON line is stable") {
  StatReport r;
  r.name = "demo";
  r.statistic = 0.5;
  r.critical = 1.0;
  r.n = 10;
  r.pass = true;
  r.seed = 42;
  const std::string line = to_json_line(r);
  CHECK(line ==
        "{\"name\":\"demo\",\"statistic\":0.5,\"critical\":1.0,\"n\":10,"
        "\"m\":0,\"alpha\":0.0,\"pass\":true,\"seed\":42,\"stream\":0}");
}
