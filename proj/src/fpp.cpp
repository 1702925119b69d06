#include "befpp/fpp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <queue>
#include <set>

namespace befpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_weights(const WeightedDigraph& g, const Eigen::VectorXd& w) {
  if (w.size() != g.edge_count())
    throw InvalidPath("environment weight vector size mismatch");
  for (long e = 0; e < w.size(); ++e)
    if (!(w[e] >= 0.0) || !std::isfinite(w[e]))
      throw DomainError("environment weights must be finite and >= 0");
}

struct DijkstraOut {
  std::vector<double> dist;
  std::vector<int> parent_edge;
};

// Plain Dijkstra from `start` over vertices outside `blocked`; zero weights
// are fine (nonnegative costs keep the label-setting argument intact).
DijkstraOut dijkstra(const WeightedDigraph& g, const Eigen::VectorXd& w,
                     int start, const std::vector<bool>& blocked) {
  const int n = g.vertex_count();
  DijkstraOut out;
  out.dist.assign(n, kInf);
  out.parent_edge.assign(n, -1);
  if (blocked[start]) return out;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  out.dist[start] = 0.0;
  pq.push({0.0, start});
  std::vector<bool> done(n, false);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = true;
    for (int e : g.out_edges(u)) {
      const int v = g.edge(e).head;
      if (blocked[v] || done[v]) continue;
      const double nd = d + w[e];
      if (nd < out.dist[v]) {
        out.dist[v] = nd;
        out.parent_edge[v] = e;
        pq.push({nd, v});
      }
    }
  }
  return out;
}

Path extract_path(const WeightedDigraph& g, const DijkstraOut& dj, int start,
                  int end) {
  std::vector<int> edges;
  for (int v = end; v != start; v = g.edge(dj.parent_edge[v]).tail)
    edges.push_back(dj.parent_edge[v]);
  Path p;
  p.vertices.push_back(start);
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    p.edge_ids.push_back(*it);
    p.vertices.push_back(g.edge(*it).head);
  }
  return p;
}

void validate_query(const WeightedDigraph& g, const PassageTimeQuery& q) {
  if (q.source < 0 || q.source >= g.vertex_count() || q.target < 0 ||
      q.target >= g.vertex_count())
    throw InvalidConstraint("query endpoints out of range");
  if (q.allowed_first) {
    for (int e : *q.allowed_first)
      if (e < 0 || e >= g.edge_count() || g.edge(e).tail != q.source)
        throw InvalidConstraint("allowed first edge must leave the source");
  }
  if (q.allowed_last) {
    for (int e : *q.allowed_last)
      if (e < 0 || e >= g.edge_count() || g.edge(e).head != q.target)
        throw InvalidConstraint("allowed last edge must enter the target");
  }
  for (int v : q.forbid_intermediate)
    if (v < 0 || v >= g.vertex_count())
      throw InvalidConstraint("forbidden vertex out of range");
}

}  // namespace

PassageTimeResult first_passage(const WeightedDigraph& g,
                                const Eigen::VectorXd& env_weights,
                                const PassageTimeQuery& query) {
  check_weights(g, env_weights);
  validate_query(g, query);
  PassageTimeResult res;

  if (!query.constrained()) {
    if (query.source == query.target) {
      res.value = 0.0;
      res.witness = Path{{query.source}, {}};
      res.reachable = true;
      return res;
    }
    std::vector<bool> blocked(g.vertex_count(), false);
    const DijkstraOut dj = dijkstra(g, env_weights, query.source, blocked);
    if (dj.dist[query.target] == kInf) return res;
    res.value = dj.dist[query.target];
    res.witness = extract_path(g, dj, query.source, query.target);
    res.reachable = true;
    return res;
  }

  const std::vector<int> firsts =
      query.allowed_first ? *query.allowed_first : g.out_edges(query.source);
  const std::vector<int> lasts =
      query.allowed_last ? *query.allowed_last : g.in_edges(query.target);
  std::vector<bool> blocked(g.vertex_count(), false);
  for (int v : query.forbid_intermediate) blocked[v] = true;

  for (int f : firsts) {
    const int h = g.edge(f).head;
    // Single-edge path: the edge has to qualify as first and last at once.
    if (h == query.target) {
      if (std::find(lasts.begin(), lasts.end(), f) != lasts.end()) {
        const double val = env_weights[f];
        if (val < res.value) {
          res.value = val;
          res.witness = Path{{query.source, query.target}, {f}};
          res.reachable = true;
        }
      }
    }
    if (blocked[h]) continue;
    const DijkstraOut dj = dijkstra(g, env_weights, h, blocked);
    for (int l : lasts) {
      if (l == f) continue;  // a two-part path uses distinct first/last edges
      const int t = g.edge(l).tail;
      if (blocked[t] || dj.dist[t] == kInf) continue;
      const double val = env_weights[f] + dj.dist[t] + env_weights[l];
      if (val < res.value) {
        res.value = val;
        Path mid = extract_path(g, dj, h, t);
        Path full;
        full.vertices.push_back(query.source);
        full.edge_ids.push_back(f);
        full.vertices.insert(full.vertices.end(), mid.vertices.begin(),
                             mid.vertices.end());
        full.edge_ids.insert(full.edge_ids.end(), mid.edge_ids.begin(),
                             mid.edge_ids.end());
        full.edge_ids.push_back(l);
        full.vertices.push_back(query.target);
        res.witness = full;
        res.reachable = true;
      }
    }
  }
  return res;
}

PassageTimeResult brute_force_passage(const WeightedDigraph& g,
                                      const Eigen::VectorXd& env_weights,
                                      const PassageTimeQuery& query,
                                      int max_vertices) {
  if (g.vertex_count() > max_vertices)
    throw GraphTooLarge("brute_force_passage: " +
                        std::to_string(g.vertex_count()) + " vertices > " +
                        std::to_string(max_vertices));
  check_weights(g, env_weights);
  validate_query(g, query);

  const std::set<int> firsts(query.allowed_first
                                 ? query.allowed_first->begin()
                                 : g.out_edges(query.source).begin(),
                             query.allowed_first
                                 ? query.allowed_first->end()
                                 : g.out_edges(query.source).end());
  const std::set<int> lasts(query.allowed_last
                                ? query.allowed_last->begin()
                                : g.in_edges(query.target).begin(),
                            query.allowed_last
                                ? query.allowed_last->end()
                                : g.in_edges(query.target).end());
  const std::set<int> forbid(query.forbid_intermediate.begin(),
                             query.forbid_intermediate.end());

  PassageTimeResult res;
  const auto paths = enumerate_simple_paths(g, query.source, query.target,
                                            g.vertex_count() + 1);
  for (const Path& p : paths) {
    if (p.length() == 0) {
      if (!query.constrained()) {
        res.value = 0.0;
        res.witness = p;
        res.reachable = true;
      }
      continue;
    }
    if (!firsts.count(p.edge_ids.front())) continue;
    if (!lasts.count(p.edge_ids.back())) continue;
    bool ok = true;
    for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i)
      if (forbid.count(p.vertices[i])) ok = false;
    if (!ok) continue;
    const double val = path_weight(g, env_weights, p);
    if (val < res.value) {
      res.value = val;
      res.witness = p;
      res.reachable = true;
    }
  }
  return res;
}

PassageTimeQuery constrained_return_query(const LayeredHandles& h) {
  PassageTimeQuery q;
  q.source = h.x11;
  q.target = h.x11;
  q.allowed_first = std::vector<int>(h.x11_to_layer2.begin(),
                                     h.x11_to_layer2.end());
  std::vector<int> lasts(h.layer7_to_x11.begin(), h.layer7_to_x11.end());
  lasts.push_back(h.y_to_x11);
  q.allowed_last = lasts;
  q.forbid_intermediate = {h.x11};
  return q;
}

PassageTimeResult constrained_return_time(const WeightedDigraph& g,
                                          const LayeredHandles& h,
                                          const Eigen::VectorXd& env_weights) {
  return first_passage(g, env_weights, constrained_return_query(h));
}

PassageTimeQuery dual_return_query(const WeightedDigraph& dual,
                                   const LayeredHandles& h) {
  // Dual edge ids coincide with primal ids; exits through layer 7 or y are
  // the reversed entries, and the way back in is through layer 2.
  PassageTimeQuery q;
  q.source = h.x11;
  q.target = h.x11;
  std::vector<int> firsts(h.layer7_to_x11.begin(), h.layer7_to_x11.end());
  firsts.push_back(h.y_to_x11);
  q.allowed_first = firsts;
  q.allowed_last = std::vector<int>(h.x11_to_layer2.begin(),
                                    h.x11_to_layer2.end());
  q.forbid_intermediate = {h.x11};
  (void)dual;
  return q;
}

double dual_return_formula(const Eigen::VectorXd& dual_env_weights,
                           const LayeredHandles& h) {
  double best = kInf;
  for (int k = 0; k < 3; ++k)
    best = std::min(best, dual_env_weights[h.layer7_to_x11[k]]);
  const double via_y = dual_env_weights[h.y_to_x11];
  for (int k = 0; k < 3; ++k)
    best = std::min(best, via_y + dual_env_weights[h.layer7_to_y[k]]);
  return best;
}

std::string passage_csv_header() { return "sample,query,value\n"; }

std::string passage_csv_row(long sample_id, const std::string& query_name,
                            double value) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%ld,%s,%.17g\n", sample_id,
                query_name.c_str(), value);
  return buf;
}

std::string witness_json(const WeightedDigraph& g, long sample_id,
                         const std::string& query_name, const Path& witness) {
  nlohmann::ordered_json j;
  j["sample"] = sample_id;
  j["query"] = query_name;
  j["vertices"] = nlohmann::ordered_json::array();
  for (int v : witness.vertices) j["vertices"].push_back(g.name(v));
  return j.dump();
}

}  // namespace befpp
