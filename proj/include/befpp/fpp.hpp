#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "befpp/environment.hpp"
#include "befpp/graph.hpp"

namespace befpp {

/// First-passage query. Unset constraint fields mean "unconstrained".
/// allowed_first must be outgoing edges of source, allowed_last incoming
/// edges of target; forbid_intermediate lists vertices the path may not
/// visit strictly between its endpoints.
struct PassageTimeQuery {
  int source = -1;
  int target = -1;
  std::optional<std::vector<int>> allowed_first;
  std::optional<std::vector<int>> allowed_last;
  std::vector<int> forbid_intermediate;
  bool constrained() const {
    return allowed_first.has_value() || allowed_last.has_value() ||
           !forbid_intermediate.empty();
  }
};

/// `value` is +infinity and `reachable` false when no admissible path
/// exists (constraints can disconnect; plain queries on a strongly
/// connected graph cannot). The witness attains `value` exactly.
struct PassageTimeResult {
  double value = std::numeric_limits<double>::infinity();
  Path witness;
  bool reachable = false;
};

/// Exact minimum over admissible paths by Dijkstra (weights >= 0, zero
/// weights and zero cycles included). Constrained queries decompose as
/// allowed first edge + interior Dijkstra avoiding the forbidden set +
/// allowed last edge. T(x,x) with no constraints is 0 by the empty-path
/// convention.
PassageTimeResult first_passage(const WeightedDigraph& g,
                                const Eigen::VectorXd& env_weights,
                                const PassageTimeQuery& query);

/// Exhaustive minimum over admissible simple paths (an optimal path is
/// always simple for nonnegative weights). Guarded: more than max_vertices
/// vertices raises GraphTooLarge.
PassageTimeResult brute_force_passage(const WeightedDigraph& g,
                                      const Eigen::VectorXd& env_weights,
                                      const PassageTimeQuery& query,
                                      int max_vertices = 10);

/// The constrained return time of the layered example: leave x^1_1 into
/// layer 2, come back through layer 7 or y, never touching x^1_1 in
/// between.
PassageTimeQuery constrained_return_query(const LayeredHandles& h);
PassageTimeResult constrained_return_time(const WeightedDigraph& g,
                                          const LayeredHandles& h,
                                          const Eigen::VectorXd& env_weights);

/// The matching query on the dual graph: leave x^1_1 through layer 7 or y,
/// re-enter through layer 2.
PassageTimeQuery dual_return_query(const WeightedDigraph& dual,
                                   const LayeredHandles& h);

/// Closed form for the dual return time: min over the three direct layer-7
/// entries and the three detours through y. Evaluates on an environment of
/// the dual graph (edge ids shared with the primal).
double dual_return_formula(const Eigen::VectorXd& dual_env_weights,
                           const LayeredHandles& h);

std::string passage_csv_header();
std::string passage_csv_row(long sample_id, const std::string& query_name,
                            double value);
std::string witness_json(const WeightedDigraph& g, long sample_id,
                         const std::string& query_name, const Path& witness);

}  // namespace befpp
