#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "befpp/environment.hpp"
#include "befpp/samplers.hpp"
#include "befpp/stats.hpp"

using namespace befpp;

TEST_CASE("be_exp environment on the 2-cycle is identically zero") {
  const WeightedDigraph g = builtin_graph("two-cycle");
  for (std::uint64_t s = 0; s < 50; ++s) {
    const BeExpEnvironment env = sample_be_env(g, 42, stream_tag::kTest, s);
    CHECK(env.w[0] == 0.0);
    CHECK(env.w[1] == 0.0);
  }
}

TEST_CASE("be_exp environment keeps one zero per vertex") {
  const WeightedDigraph g = builtin_graph("divfree4");
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const BeExpEnvironment env = sample_be_env(g, 7, stream_tag::kTest, s);
    for (int v = 0; v < g.vertex_count(); ++v) {
      int zeros = 0;
      for (int e : g.out_edges(v)) {
        if (env.w[e] == 0.0) ++zeros;
        CHECK(env.w[e] >= 0.0);
      }
      CHECK(zeros == 1);
    }
  }
}

TEST_CASE("layer-2 atom frequencies follow the probability vector") {
  auto [g, h] = make_layered_example(1.0, 2.0, 3.0);
  const int v = h.layer[2][0];
  const auto& ids = g.out_edges(v);
  REQUIRE(ids.size() == 3);
  const long n = 100000;
  Eigen::Vector3d counts = Eigen::Vector3d::Zero();
  for (long s = 0; s < n; ++s) {
    const BeExpEnvironment env = sample_be_env(g, 42, stream_tag::kTest, s);
    for (int j = 0; j < 3; ++j)
      if (env.w[ids[j]] == 0.0) counts[j] += 1.0;
  }
  const Eigen::Vector3d p(1.0 / 6, 1.0 / 3, 0.5);
  for (int j = 0; j < 3; ++j)
    CHECK(std::fabs(counts[j] / n - p[j]) <=
          3.0 * std::sqrt(p[j] * (1 - p[j]) / n));
}

TEST_CASE("dirichlet environment: degree-one vertex, normalization, uniform") {
  const WeightedDigraph two = builtin_graph("two-cycle");
  const DirichletEnvironment env0 =
      sample_dirichlet_env(two, 1.0, 42, stream_tag::kTest, 0);
  CHECK(env0.log_w[0] == 0.0);
  CHECK(env0.log_w[1] == 0.0);

  const WeightedDigraph g = builtin_graph("divfree4");
  const long n = 20000;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const DirichletEnvironment env =
        sample_dirichlet_env(g, 0.7, 9, stream_tag::kTest, s);
    for (int v = 0; v < g.vertex_count(); ++v) {
      Eigen::VectorXd lv(g.out_degree(v));
      for (int i = 0; i < g.out_degree(v); ++i)
        lv[i] = env.log_w[g.out_edges(v)[i]];
      CHECK(std::fabs(logsumexp(lv)) <= 1e-10);
    }
  }

  // A vertex with parameters eps*(a,a) has a Beta(eps a, eps a) coordinate;
  // eps*a = (1,1) makes it uniform.
  WeightedDigraph pair({"x", "y"},
                       {{0, 1, 2.0}, {0, 1, 2.0}, {1, 0, 1.0}});
  Eigen::VectorXd u(n);
  for (long s = 0; s < n; ++s) {
    const DirichletEnvironment env =
        sample_dirichlet_env(pair, 0.5, 11, stream_tag::kTest, s);
    u[s] = std::exp(env.log_w[0]);
  }
  const auto ks = ks_one_sample(
      u, [](double t) { return std::min(std::max(t, 0.0), 1.0); },
      "env_uniform_marginal", 0.05, 2.0);
  CHECK(ks.pass);

  CHECK_THROWS_AS(sample_dirichlet_env(g, 0.0, 1, stream_tag::kTest, 0),
                  NonPositiveParameter);
}

TEST_CASE("tiny epsilon concentrates every vertex") {
  const WeightedDigraph g = builtin_graph("divfree4");
  const double eps = 1e-3;
  // Analytic concentration level per vertex via the Beta marginals:
  // P(max > 1 - delta) = sum_i (1 - I_{1-delta}(eps a_i, eps(S - a_i))).
  const long n = 20000;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const Eigen::VectorXd a = eps * g.out_params(v);
    const double total = a.sum();
    double expected = 0.0;
    for (long i = 0; i < a.size(); ++i)
      expected +=
          1.0 - regularized_incomplete_beta(a[i], total - a[i], 1.0 - 1e-6);
    long conc = 0;
    for (long s = 0; s < n; ++s) {
      const DirichletEnvironment env =
          sample_dirichlet_env(g, eps, 13, stream_tag::kTest, s);
      double best = -1e300;
      for (int e : g.out_edges(v)) best = std::max(best, env.log_w[e]);
      if (std::exp(best) > 1.0 - 1e-6) ++conc;
    }
    const double freq = static_cast<double>(conc) / n;
    CHECK(std::fabs(freq - expected) <=
          4.0 * std::sqrt(expected * (1.0 - expected) / n) + 1e-4);
  }
}

TEST_CASE("phi transform basics and sign") {
  const WeightedDigraph two = builtin_graph("two-cycle");
  DirichletEnvironment env;
  env.epsilon = 0.5;
  env.log_w = Eigen::Vector2d(0.0, -2.0);
  const Eigen::VectorXd phi = phi_transform(env);
  CHECK(phi[0] == 0.0);
  CHECK(!std::signbit(phi[0]));
  CHECK(phi[1] == doctest::Approx(1.0));
  (void)two;
}

TEST_CASE("phi marginals approach the Be-Exp law as epsilon shrinks") {
  const WeightedDigraph g = builtin_graph("divfree4");
  const int v = 0;
  const Eigen::VectorXd a = g.out_params(v);
  const long n = 20000;
  double prev = 1e9;
  for (const double eps : {0.2, 0.1, 0.05, 0.02}) {
    Eigen::MatrixXd per_edge(n, g.edge_count());
    for (long s = 0; s < n; ++s) {
      const DirichletEnvironment env =
          sample_dirichlet_env(g, eps, 42, stream_tag::kTest, s);
      per_edge.row(s) = phi_transform(env).transpose();
    }
    BatteryOptions opt;
    opt.exact_atoms = false;
    opt.ks_allowance_per_rate = eps;
    opt.atom_allowance = 0.3 * eps;
    const auto rs = be_exp_battery(gather_columns(per_edge, g.out_edges(v)),
                                   a, opt, "phi_conv", 42);
    const double worst = battery_max_ks(rs);
    CHECK(worst < prev);
    prev = worst;
    for (const auto& r : rs) CHECK(r.pass);
  }
}

TEST_CASE("cross-vertex independence of the zero edge") {
  const WeightedDigraph g = builtin_graph("divfree4");
  const long n = 100000;
  std::vector<int> za(n), zb(n);
  for (long s = 0; s < n; ++s) {
    const BeExpEnvironment env = sample_be_env(g, 21, stream_tag::kTest, s);
    auto zero_at = [&](int v) {
      const auto& ids = g.out_edges(v);
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (env.w[ids[i]] == 0.0) return static_cast<int>(i);
      return -1;
    };
    za[s] = zero_at(0);
    zb[s] = zero_at(1);
  }
  CHECK(chi_square_independence(za, 3, zb, 3, "env_cross_vertex").pass);
}

TEST_CASE("environment generation is reproducible per vertex") {
  const WeightedDigraph g = builtin_graph("divfree4");
  const BeExpEnvironment e1 = sample_be_env(g, 5, stream_tag::kTest, 3);
  const BeExpEnvironment e2 = sample_be_env(g, 5, stream_tag::kTest, 3);
  for (int e = 0; e < g.edge_count(); ++e) CHECK(e1.w[e] == e2.w[e]);
  const BeExpEnvironment e3 = sample_be_env(g, 5, stream_tag::kTest, 4);
  bool differs = false;
  for (int e = 0; e < g.edge_count(); ++e)
    if (e1.w[e] != e3.w[e]) differs = true;
  CHECK(differs);
}

TEST_CASE("environment CSV carries the law header and one row per edge") {
  const WeightedDigraph g = builtin_graph("two-cycle");
  Eigen::VectorXd w(2);
  w << 0.25, 0.0;
  const std::string csv = environment_csv(g, w, "be-exp", "a=graph");
  CHECK(csv.find("# law=be-exp a=graph\n") == 0);
  CHECK(csv.find("vertex,edge,value\n") != std::string::npos);
  CHECK(csv.find("x,0,0.25\n") != std::string::npos);
  CHECK(csv.find("y,1,0\n") != std::string::npos);
}
