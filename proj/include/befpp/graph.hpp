#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "befpp/errors.hpp"
#include "befpp/rng.hpp"

namespace befpp {

struct Edge {
  int tail = -1;
  int head = -1;
  double weight = 0.0;
};

/// Finite strongly connected directed multigraph with positive edge weights.
/// Vertex and edge order is insertion order and is stable: the i-th entry of
/// out_edges(x) is a fixed position, used to index environment vectors.
class WeightedDigraph {
 public:
  WeightedDigraph(std::vector<std::string> vertex_names,
                  std::vector<Edge> edges);

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& name(int v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }
  int index_of(const std::string& name) const;

  /// Outgoing edge ids of x, ascending (the environment index order).
  const std::vector<int>& out_edges(int v) const { return out_[v]; }
  /// Incoming edge ids of x, ascending.
  const std::vector<int>& in_edges(int v) const { return in_[v]; }
  int out_degree(int v) const { return static_cast<int>(out_[v].size()); }

  /// Edge weights of out_edges(v), in that order.
  Eigen::VectorXd out_params(int v) const;
  /// Edge weights of in_edges(v), in that order (the dual-vertex parameters).
  Eigen::VectorXd in_params(int v) const;
  /// All edge weights by edge id.
  Eigen::VectorXd weights() const;

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

/// div(theta)(x) = sum of theta over incoming edges minus outgoing ones.
Eigen::VectorXd divergence(const WeightedDigraph& g,
                           const Eigen::VectorXd& theta);
Eigen::VectorXd divergence(const WeightedDigraph& g);
bool is_divergence_free(const WeightedDigraph& g, double tol);

/// Reverses every edge, keeping edge ids: dual edge e is the reversal of
/// primal edge e and carries the same weight. dual(dual(g)) == g edge for
/// edge.
WeightedDigraph dual_graph(const WeightedDigraph& g);

struct Path {
  std::vector<int> vertices;  // x_0 .. x_n
  std::vector<int> edge_ids;  // size n, edge i goes x_i -> x_{i+1}
  bool closed() const {
    return !vertices.empty() && vertices.front() == vertices.back();
  }
  int length() const { return static_cast<int>(edge_ids.size()); }
};

void validate_path(const WeightedDigraph& g, const Path& p);
double path_weight(const WeightedDigraph& g,
                   const Eigen::VectorXd& edge_values, const Path& p);

/// All simple paths x -> y with at most max_len edges (no repeated vertex,
/// except x itself when x == y, in which case closed simple paths are
/// produced and the trivial path (x) is included for max_len >= 0).
std::vector<Path> enumerate_simple_paths(const WeightedDigraph& g, int x,
                                         int y, int max_len);

/// Fundamental cycle of a spanning tree: non-tree edge plus the tree path
/// closing it, as (edge id, +-1) pairs. Signed sums over these vanish for
/// any gradient edge function.
struct SignedCycle {
  std::vector<std::pair<int, int>> edges;  // (edge id, sign)
};
std::vector<SignedCycle> fundamental_cycles(const WeightedDigraph& g);

/// Random directed closed walk: a few random steps, then a shortest edge
/// path back to the start. Length <= walk_steps + vertex_count.
Path random_closed_walk(const WeightedDigraph& g, RngStream& rng,
                        int walk_steps);

//
// Builders and serialization.
//

/// Named handles into the seven-layer return-time example graph.
struct LayeredHandles {
  int x11 = -1;
  int y = -1;
  /// layer(i, k): vertex k (0-based) of layer i, for i in 2..7.
  std::array<std::array<int, 3>, 8> layer{};
  std::array<int, 3> x11_to_layer2{};  // edge ids
  std::array<int, 3> layer7_to_x11{};
  std::array<int, 3> layer7_to_y{};
  int x11_to_y = -1;
  int y_to_x11 = -1;
};

/// Builds the 20-vertex layered example: a source x^1_1, six layers of
/// width 3, and a shortcut vertex y, with divergence-free weights derived
/// from (a1, a2, a3). Layer-to-layer weights equal a_j out of layer 2 and
/// 3*a_k*a_j/(a1+a2+a3) deeper in; all layer-to-layer weights equal 1 when
/// a1 = a2 = a3 = 1.
std::pair<WeightedDigraph, LayeredHandles> make_layered_example(double a1,
                                                                double a2,
                                                                double a3);

/// Builtins: "two-cycle", "triangle", "tri-chords" (divergence-free,
/// 3 vertices), "divfree4" (divergence-free, 4 vertices, mixed degrees).
WeightedDigraph builtin_graph(const std::string& name);

WeightedDigraph read_graph_json(std::istream& in);
WeightedDigraph read_graph_json_file(const std::string& path);
std::string write_graph_json(const WeightedDigraph& g);

}  // namespace befpp
