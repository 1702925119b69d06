#include "befpp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <sstream>

namespace befpp {

namespace {

void check_weight(double w, const std::string& what) {
  if (!std::isfinite(w) || w <= 0.0)
    throw NonPositiveWeight("edge weight must be finite and > 0: " + what);
}

// Forward/backward reachability from vertex 0; strong connectivity needs
// both to cover everything.
std::vector<bool> reach(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<bool> seen(adj.size(), false);
  std::deque<int> q{start};
  seen[start] = true;
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        q.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

WeightedDigraph::WeightedDigraph(std::vector<std::string> vertex_names,
                                 std::vector<Edge> edges)
    : names_(std::move(vertex_names)), edges_(std::move(edges)) {
  const int n = static_cast<int>(names_.size());
  if (n == 0) throw GraphFormatError("graph needs at least one vertex");
  {
    std::map<std::string, int> seen;
    for (int v = 0; v < n; ++v)
      if (!seen.emplace(names_[v], v).second)
        throw GraphFormatError("duplicate vertex id: " + names_[v]);
  }
  out_.assign(n, {});
  in_.assign(n, {});
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const Edge& ed = edges_[e];
    if (ed.tail < 0 || ed.tail >= n || ed.head < 0 || ed.head >= n)
      throw GraphFormatError("edge endpoint out of range at edge " +
                             std::to_string(e));
    check_weight(ed.weight, names_[ed.tail] + "->" + names_[ed.head]);
    out_[ed.tail].push_back(e);
    in_[ed.head].push_back(e);
  }
  for (int v = 0; v < n; ++v)
    if (out_[v].empty())
      throw NotStronglyConnected("vertex " + names_[v] + " has no outgoing edge");

  std::vector<std::vector<int>> fwd(n), bwd(n);
  for (const Edge& ed : edges_) {
    fwd[ed.tail].push_back(ed.head);
    bwd[ed.head].push_back(ed.tail);
  }
  const std::vector<bool> down = reach(fwd, 0);
  const std::vector<bool> up = reach(bwd, 0);
  for (int v = 0; v < n; ++v) {
    if (!down[v])
      throw NotStronglyConnected("no path from " + names_[0] + " to " +
                                 names_[v]);
    if (!up[v])
      throw NotStronglyConnected("no path from " + names_[v] + " to " +
                                 names_[0]);
  }
}

int WeightedDigraph::index_of(const std::string& name) const {
  for (int v = 0; v < vertex_count(); ++v)
    if (names_[v] == name) return v;
  throw GraphFormatError("unknown vertex id: " + name);
}

Eigen::VectorXd WeightedDigraph::out_params(int v) const {
  Eigen::VectorXd a(out_[v].size());
  for (std::size_t i = 0; i < out_[v].size(); ++i)
    a[static_cast<long>(i)] = edges_[out_[v][i]].weight;
  return a;
}

Eigen::VectorXd WeightedDigraph::in_params(int v) const {
  Eigen::VectorXd a(in_[v].size());
  for (std::size_t i = 0; i < in_[v].size(); ++i)
    a[static_cast<long>(i)] = edges_[in_[v][i]].weight;
  return a;
}

Eigen::VectorXd WeightedDigraph::weights() const {
  Eigen::VectorXd w(edges_.size());
  for (int e = 0; e < edge_count(); ++e) w[e] = edges_[e].weight;
  return w;
}

Eigen::VectorXd divergence(const WeightedDigraph& g,
                           const Eigen::VectorXd& theta) {
  if (theta.size() != g.edge_count())
    throw InvalidPath("divergence: theta size does not match edge count");
  Eigen::VectorXd d = Eigen::VectorXd::Zero(g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    d[g.edge(e).head] += theta[e];
    d[g.edge(e).tail] -= theta[e];
  }
  return d;
}

Eigen::VectorXd divergence(const WeightedDigraph& g) {
  return divergence(g, g.weights());
}

bool is_divergence_free(const WeightedDigraph& g, double tol) {
  return divergence(g).cwiseAbs().maxCoeff() <= tol;
}

WeightedDigraph dual_graph(const WeightedDigraph& g) {
  std::vector<Edge> rev(g.edges());
  for (Edge& e : rev) std::swap(e.tail, e.head);
  return WeightedDigraph(g.names(), std::move(rev));
}

void validate_path(const WeightedDigraph& g, const Path& p) {
  if (p.vertices.empty()) throw InvalidPath("path has no vertices");
  if (p.edge_ids.size() + 1 != p.vertices.size())
    throw InvalidPath("path edge/vertex count mismatch");
  for (std::size_t i = 0; i < p.edge_ids.size(); ++i) {
    const int e = p.edge_ids[i];
    if (e < 0 || e >= g.edge_count()) throw InvalidPath("edge id out of range");
    if (g.edge(e).tail != p.vertices[i] || g.edge(e).head != p.vertices[i + 1])
      throw InvalidPath("edge " + std::to_string(e) +
                        " does not connect consecutive path vertices");
  }
}

double path_weight(const WeightedDigraph& g, const Eigen::VectorXd& edge_values,
                   const Path& p) {
  validate_path(g, p);
  if (edge_values.size() != g.edge_count())
    throw InvalidPath("edge value vector size mismatch");
  double s = 0.0;
  for (int e : p.edge_ids) s += edge_values[e];
  return s;
}

std::vector<Path> enumerate_simple_paths(const WeightedDigraph& g, int x,
                                         int y, int max_len) {
  std::vector<Path> result;
  if (x == y) result.push_back(Path{{x}, {}});
  std::vector<bool> visited(g.vertex_count(), false);
  Path current;
  current.vertices.push_back(x);
  visited[x] = true;

  // Iterative DFS over outgoing edge ids; y==x is re-enterable only as the
  // final vertex.
  std::function<void()> dfs = [&]() {
    const int v = current.vertices.back();
    if (current.length() >= max_len) return;
    for (int e : g.out_edges(v)) {
      const int w = g.edge(e).head;
      if (w == y) {
        current.vertices.push_back(w);
        current.edge_ids.push_back(e);
        result.push_back(current);
        current.vertices.pop_back();
        current.edge_ids.pop_back();
        continue;  // simple paths cannot pass through y
      }
      if (visited[w]) continue;
      visited[w] = true;
      current.vertices.push_back(w);
      current.edge_ids.push_back(e);
      dfs();
      current.vertices.pop_back();
      current.edge_ids.pop_back();
      visited[w] = false;
    }
  };
  dfs();
  return result;
}

std::vector<SignedCycle> fundamental_cycles(const WeightedDigraph& g) {
  const int n = g.vertex_count();
  // BFS spanning tree of the underlying undirected graph.
  std::vector<int> parent_edge(n, -1), parent(n, -1), depth(n, 0);
  std::vector<bool> in_tree_edge(g.edge_count(), false);
  std::vector<bool> seen(n, false);
  std::deque<int> q{0};
  seen[0] = true;
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (int e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.edge(e);
      int other = -1;
      if (ed.tail == v) other = ed.head;
      if (ed.head == v) other = ed.tail;
      if (other < 0 || seen[other]) continue;
      seen[other] = true;
      parent[other] = v;
      parent_edge[other] = e;
      depth[other] = depth[v] + 1;
      in_tree_edge[e] = true;
      q.push_back(other);
    }
  }

  // Tree step from child c toward the root, as (edge id, sign) with sign +1
  // when the edge points child -> parent.
  auto up_step = [&](int c) {
    const int e = parent_edge[c];
    const int sign = (g.edge(e).tail == c) ? +1 : -1;
    return std::make_pair(e, sign);
  };

  std::vector<SignedCycle> cycles;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (in_tree_edge[e]) continue;
    const Edge& ed = g.edge(e);
    if (ed.tail == ed.head) {
      cycles.push_back(SignedCycle{{{e, +1}}});
      continue;
    }
    // Cycle: e from tail to head, then climb head and tail to their meet.
    SignedCycle c;
    c.edges.push_back({e, +1});
    int u = ed.head, v = ed.tail;
    std::vector<std::pair<int, int>> from_v;  // collected tail-side, reversed
    while (depth[u] > depth[v]) {
      c.edges.push_back(up_step(u));
      u = parent[u];
    }
    while (depth[v] > depth[u]) {
      auto [pe, sign] = up_step(v);
      from_v.push_back({pe, -sign});
      v = parent[v];
    }
    while (u != v) {
      c.edges.push_back(up_step(u));
      u = parent[u];
      auto [pe, sign] = up_step(v);
      from_v.push_back({pe, -sign});
      v = parent[v];
    }
    for (auto it = from_v.rbegin(); it != from_v.rend(); ++it)
      c.edges.push_back(*it);
    cycles.push_back(std::move(c));
  }
  return cycles;
}

Path random_closed_walk(const WeightedDigraph& g, RngStream& rng,
                        int walk_steps) {
  const int n = g.vertex_count();
  const int start = static_cast<int>(rng.next_u64() % n);
  Path p;
  p.vertices.push_back(start);
  int v = start;
  for (int s = 0; s < walk_steps; ++s) {
    const auto& out = g.out_edges(v);
    const int e = out[static_cast<std::size_t>(rng.next_u64() % out.size())];
    p.edge_ids.push_back(e);
    v = g.edge(e).head;
    p.vertices.push_back(v);
  }
  if (v == start) return p;
  // Shortest edge path back to the start (BFS, deterministic order).
  std::vector<int> via_edge(n, -1);
  std::vector<bool> seen(n, false);
  std::deque<int> q{v};
  seen[v] = true;
  while (!q.empty() && !seen[start]) {
    const int u = q.front();
    q.pop_front();
    for (int e : g.out_edges(u)) {
      const int w = g.edge(e).head;
      if (!seen[w]) {
        seen[w] = true;
        via_edge[w] = e;
        q.push_back(w);
      }
    }
  }
  std::vector<int> back;
  for (int u = start; u != v; u = g.edge(via_edge[u]).tail)
    back.push_back(via_edge[u]);
  for (auto it = back.rbegin(); it != back.rend(); ++it) {
    p.edge_ids.push_back(*it);
    p.vertices.push_back(g.edge(*it).head);
  }
  return p;
}

std::pair<WeightedDigraph, LayeredHandles> make_layered_example(double a1,
                                                                double a2,
                                                                double a3) {
  for (double a : {a1, a2, a3})
    if (!std::isfinite(a) || a <= 0.0)
      throw NonPositiveWeight("layered example parameters must be positive");
  const double aa[3] = {a1, a2, a3};
  const double s = a1 + a2 + a3;

  LayeredHandles h;
  std::vector<std::string> names;
  names.push_back("x1_1");
  h.x11 = 0;
  for (int i = 2; i <= 7; ++i) {
    for (int k = 0; k < 3; ++k) {
      h.layer[i][k] = static_cast<int>(names.size());
      names.push_back("x" + std::to_string(i) + "_" + std::to_string(k + 1));
    }
  }
  h.y = static_cast<int>(names.size());
  names.push_back("y");

  std::vector<Edge> edges;
  auto add = [&](int t, int hd, double w) {
    edges.push_back(Edge{t, hd, w});
    return static_cast<int>(edges.size()) - 1;
  };

  for (int k = 0; k < 3; ++k)
    h.x11_to_layer2[k] = add(h.x11, h.layer[2][k], s);
  // Out of layer 2 the weight into the j-th vertex is a_j; deeper layers
  // scale it by the tail throughput 3*a_k/s so every vertex stays balanced
  // (in-weight 3*a_j equals out-weight). For a1=a2=a3 every layer-to-layer
  // weight reduces to a_j.
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) add(h.layer[2][k], h.layer[3][j], aa[j]);
  for (int i = 3; i <= 6; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        add(h.layer[i][k], h.layer[i + 1][j], 3.0 * aa[k] * aa[j] / s);
  for (int k = 0; k < 3; ++k)
    h.layer7_to_x11[k] = add(h.layer[7][k], h.x11, 1.5 * aa[k]);
  for (int k = 0; k < 3; ++k)
    h.layer7_to_y[k] = add(h.layer[7][k], h.y, 1.5 * aa[k]);
  h.x11_to_y = add(h.x11, h.y, 0.5 * s);
  h.y_to_x11 = add(h.y, h.x11, 2.0 * s);

  return {WeightedDigraph(std::move(names), std::move(edges)), h};
}

WeightedDigraph builtin_graph(const std::string& name) {
  if (name == "two-cycle") {
    return WeightedDigraph({"x", "y"}, {{0, 1, 1.0}, {1, 0, 1.0}});
  }
  if (name == "triangle") {
    return WeightedDigraph({"x", "y", "z"},
                           {{0, 1, 1.0}, {1, 2, 2.0}, {2, 0, 3.0}});
  }
  if (name == "tri-chords") {
    // Superposition of the two directed triangles; divergence-free.
    return WeightedDigraph({"x", "y", "z"}, {{0, 1, 0.5},
                                             {1, 2, 0.5},
                                             {2, 0, 0.5},
                                             {0, 2, 0.25},
                                             {2, 1, 0.25},
                                             {1, 0, 0.25}});
  }
  if (name == "divfree4") {
    // Three overlaid directed cycles (0123)@0.5, (0213)@0.3, (031)@0.2;
    // divergence-free with mixed out-degrees 3/3/2/2.
    return WeightedDigraph({"v0", "v1", "v2", "v3"}, {{0, 1, 0.5},
                                                      {0, 2, 0.3},
                                                      {0, 3, 0.2},
                                                      {1, 2, 0.5},
                                                      {1, 3, 0.3},
                                                      {1, 0, 0.2},
                                                      {2, 3, 0.5},
                                                      {2, 1, 0.3},
                                                      {3, 0, 0.8},
                                                      {3, 1, 0.2}});
  }
  if (name == "layered") return make_layered_example(1.0, 2.0, 3.0).first;
  throw ConfigError("unknown builtin graph: " + name);
}

WeightedDigraph read_graph_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw GraphFormatError(std::string("graph JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw GraphFormatError("graph JSON needs 'vertices' and 'edges'");
  std::vector<std::string> names;
  std::map<std::string, int> index;
  for (const auto& v : j["vertices"]) {
    std::string id;
    if (v.is_string())
      id = v.get<std::string>();
    else if (v.is_number_integer())
      id = std::to_string(v.get<long long>());
    else
      throw GraphFormatError("vertex ids must be strings or integers");
    if (!index.emplace(id, static_cast<int>(names.size())).second)
      throw GraphFormatError("duplicate vertex id: " + id);
    names.push_back(id);
  }
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_object() || !e.contains("tail") || !e.contains("head") ||
        !e.contains("weight"))
      throw GraphFormatError("each edge needs tail, head, weight");
    auto vid = [&](const nlohmann::json& x) -> int {
      std::string id;
      if (x.is_string())
        id = x.get<std::string>();
      else if (x.is_number_integer())
        id = std::to_string(x.get<long long>());
      else
        throw GraphFormatError("edge endpoints must be vertex ids");
      auto it = index.find(id);
      if (it == index.end())
        throw GraphFormatError("edge references unknown vertex: " + id);
      return it->second;
    };
    if (!e["weight"].is_number())
      throw NonPositiveWeight("edge weight must be a finite number > 0");
    const double w = e["weight"].get<double>();
    edges.push_back(Edge{vid(e["tail"]), vid(e["head"]), w});
    check_weight(w, "edge " + std::to_string(edges.size() - 1));
  }
  return WeightedDigraph(std::move(names), std::move(edges));
}

WeightedDigraph read_graph_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file: " + path);
  return read_graph_json(in);
}

std::string write_graph_json(const WeightedDigraph& g) {
  nlohmann::ordered_json j;
  j["vertices"] = g.names();
  j["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges()) {
    nlohmann::ordered_json je;
    je["tail"] = g.name(e.tail);
    je["head"] = g.name(e.head);
    je["weight"] = e.weight;
    j["edges"].push_back(je);
  }
  return j.dump(2) + "\n";
}

}  // namespace befpp
