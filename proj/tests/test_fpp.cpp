#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "befpp/environment.hpp"
#include "befpp/fpp.hpp"
#include "befpp/samplers.hpp"

using namespace befpp;

namespace {

WeightedDigraph random_graph(int n, int extra, RngStream& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.next_u64() % (i + 1)]);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    edges.push_back({order[i], order[(i + 1) % n], 0.2 + rng.next_unit()});
  for (int k = 0; k < extra; ++k) {
    const int t = static_cast<int>(rng.next_u64() % n);
    int h = static_cast<int>(rng.next_u64() % n);
    if (h == t) h = (h + 1) % n;
    edges.push_back({t, h, 0.2 + rng.next_unit()});
  }
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  return WeightedDigraph(names, edges);
}

}  // namespace

TEST_CASE("two parallel routes pick the lighter one with a witness") {
  WeightedDigraph g({"x", "m1", "m2", "y"}, {{0, 1, 1.0},
                                             {1, 3, 1.0},
                                             {0, 2, 1.0},
                                             {2, 3, 1.0},
                                             {3, 0, 1.0}});
  Eigen::VectorXd w(5);
  w << 0.3, 0.1, 0.2, 0.4, 0.9;
  PassageTimeQuery q;
  q.source = 0;
  q.target = 3;
  const PassageTimeResult r = first_passage(g, w, q);
  CHECK(r.reachable);
  CHECK(r.value == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(r.witness.vertices == std::vector<int>{0, 1, 3});
  CHECK(path_weight(g, w, r.witness) == doctest::Approx(r.value).epsilon(1e-12));
}

TEST_CASE("T(x,x) is zero through the empty path") {
  const WeightedDigraph g = builtin_graph("tri-chords");
  Eigen::VectorXd w = Eigen::VectorXd::Constant(g.edge_count(), 0.5);
  PassageTimeQuery q;
  q.source = 1;
  q.target = 1;
  const PassageTimeResult r = first_passage(g, w, q);
  CHECK(r.value == 0.0);
  CHECK(r.witness.vertices == std::vector<int>{1});
  CHECK(r.witness.length() == 0);
}

TEST_CASE("solver equals the simple-path oracle on random graphs") {
  RngStream rng(42, make_stream_id(stream_tag::kTest, 30, 0));
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 5);
    const WeightedDigraph g = random_graph(n, 2 * n, rng);
    const BeExpEnvironment env =
        sample_be_env(g, 42, stream_tag::kTest, 1000 + rep);
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        PassageTimeQuery q;
        q.source = s;
        q.target = t;
        const PassageTimeResult fast = first_passage(g, env.w, q);
        const PassageTimeResult slow = brute_force_passage(g, env.w, q);
        REQUIRE(fast.reachable == slow.reachable);
        CHECK(std::fabs(fast.value - slow.value) <= 1e-12);
        CHECK(path_weight(g, env.w, fast.witness) ==
              doctest::Approx(fast.value).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("constraints: vacuous first set, invalid sets, forbidden vertices") {
  const WeightedDigraph g = builtin_graph("tri-chords");
  Eigen::VectorXd w = Eigen::VectorXd::Constant(g.edge_count(), 0.1);
  PassageTimeQuery q;
  q.source = 0;
  q.target = 2;
  q.allowed_first = std::vector<int>{};
  const PassageTimeResult r = first_passage(g, w, q);
  CHECK(!r.reachable);
  CHECK(std::isinf(r.value));
  const PassageTimeResult ro = brute_force_passage(g, w, q);
  CHECK(!ro.reachable);

  PassageTimeQuery bad;
  bad.source = 0;
  bad.target = 2;
  bad.allowed_first = std::vector<int>{1};  // edge 1 leaves vertex 1, not 0
  CHECK_THROWS_AS(first_passage(g, w, bad), InvalidConstraint);

  // Forbidding the only intermediate vertex cuts the route.
  WeightedDigraph line({"a", "b", "c"}, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
  Eigen::VectorXd lw = Eigen::VectorXd::Constant(3, 0.5);
  PassageTimeQuery fq;
  fq.source = 0;
  fq.target = 2;
  fq.forbid_intermediate = {1};
  CHECK(!first_passage(line, lw, fq).reachable);
  CHECK(!brute_force_passage(line, lw, fq).reachable);
}

TEST_CASE("oracle guard rejects large graphs unless raised") {
  auto [g, h] = make_layered_example(1.0, 1.0, 1.0);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(g.edge_count(), 0.1);
  PassageTimeQuery q;
  q.source = h.x11;
  q.target = h.y;
  CHECK_THROWS_AS(brute_force_passage(g, w, q), GraphTooLarge);
  CHECK(brute_force_passage(g, w, q, g.vertex_count()).reachable);
}

TEST_CASE("raising one environment weight never lowers a passage time") {
  RngStream rng(43, make_stream_id(stream_tag::kTest, 31, 0));
  for (int rep = 0; rep < 10; ++rep) {
    const WeightedDigraph g = random_graph(5, 6, rng);
    const BeExpEnvironment env =
        sample_be_env(g, 7, stream_tag::kTest, 2000 + rep);
    PassageTimeQuery q;
    q.source = 0;
    q.target = 3;
    const double base = first_passage(g, env.w, q).value;
    for (int e = 0; e < g.edge_count(); ++e) {
      Eigen::VectorXd bumped = env.w;
      bumped[e] += 0.37;
      CHECK(first_passage(g, bumped, q).value >= base - 1e-12);
    }
  }
}

TEST_CASE("hand-folded deterministic return time on the layered graph") {
  auto [g, h] = make_layered_example(1.0, 2.0, 3.0);
  // One zero per vertex, lined up along
  // x1_1 -> x2_2 -> x3_3 -> x4_1 -> x5_2 -> x6_1 -> x7_2; everything else
  // costs 1, except the two exits of x7_2 (0.25 to x1_1, 0.6 to y) and the
  // forced zero at y. Cheapest admissible loop follows the zero chain and
  // pays min(0.25, 0.6 + 0) = 0.25 at the end.
  Eigen::VectorXd w = Eigen::VectorXd::Constant(g.edge_count(), 1.0);
  auto set_out = [&](int v, int target, double value) {
    for (int e : g.out_edges(v))
      if (g.edge(e).head == target) w[e] = value;
  };
  set_out(h.x11, h.layer[2][1], 0.0);
  set_out(h.layer[2][1], h.layer[3][2], 0.0);
  set_out(h.layer[3][2], h.layer[4][0], 0.0);
  set_out(h.layer[4][0], h.layer[5][1], 0.0);
  set_out(h.layer[5][1], h.layer[6][0], 0.0);
  set_out(h.layer[6][0], h.layer[7][1], 0.0);
  set_out(h.layer[7][1], h.x11, 0.25);
  set_out(h.layer[7][1], h.y, 0.6);
  set_out(h.y, h.x11, 0.0);

  const PassageTimeResult r = constrained_return_time(g, h, w);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r.witness.vertices.front() == h.x11);
  CHECK(r.witness.vertices.back() == h.x11);
  const PassageTimeResult oracle = brute_force_passage(
      g, w, constrained_return_query(h), g.vertex_count());
  CHECK(oracle.value == doctest::Approx(r.value).epsilon(1e-15));
}

TEST_CASE("constrained return time agrees with the oracle on sampled envs") {
  auto [g, h] = make_layered_example(1.0, 2.0, 3.0);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const BeExpEnvironment env = sample_be_env(g, 42, stream_tag::kTest, s);
    const PassageTimeResult fast = constrained_return_time(g, h, env.w);
    const PassageTimeResult slow = brute_force_passage(
        g, env.w, constrained_return_query(h), g.vertex_count());
    CHECK(std::fabs(fast.value - slow.value) <= 1e-12);
  }
}

TEST_CASE("the return path never leaves through y") {
  auto [g, h] = make_layered_example(1.0, 2.0, 3.0);
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const BeExpEnvironment env = sample_be_env(g, 11, stream_tag::kTest, s);
    const PassageTimeResult r = constrained_return_time(g, h, env.w);
    REQUIRE(r.reachable);
    CHECK(r.witness.edge_ids.front() != h.x11_to_y);
    CHECK(g.edge(r.witness.edge_ids.front()).head != h.y);
  }
}

TEST_CASE("dual formula arithmetic and equality with the dual solver") {
  auto [g, h] = make_layered_example(1.0, 2.0, 3.0);
  const WeightedDigraph dual = dual_graph(g);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(g.edge_count(), 9.0);
  w[h.layer7_to_x11[0]] = 1.0;
  w[h.layer7_to_x11[1]] = 2.0;
  w[h.layer7_to_x11[2]] = 3.0;
  w[h.y_to_x11] = 0.5;
  w[h.layer7_to_y[0]] = 0.1;
  w[h.layer7_to_y[1]] = 4.0;
  w[h.layer7_to_y[2]] = 5.0;
  CHECK(dual_return_formula(w, h) == doctest::Approx(0.6).epsilon(1e-15));

  const PassageTimeQuery dq = dual_return_query(dual, h);
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const BeExpEnvironment env = sample_be_env(dual, 42, stream_tag::kTest, s);
    const double formula = dual_return_formula(env.w, h);
    const PassageTimeResult solver = first_passage(dual, env.w, dq);
    CHECK(std::fabs(formula - solver.value) <= 1e-12);
  }
}

TEST_CASE("CSV and witness serialization") {
  CHECK(passage_csv_header() == "sample,query,value\n");
  CHECK(passage_csv_row(3, "tc", 0.5) == "3,tc,0.5\n");
  const WeightedDigraph g = builtin_graph("two-cycle");
  const std::string j = witness_json(g, 1, "demo", Path{{0, 1, 0}, {0, 1}});
  CHECK(j ==
        R"({"sample":1,"query":"demo","vertices":["x","y","x"]})");
}
