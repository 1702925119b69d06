#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "befpp/graph.hpp"
#include "befpp/rng.hpp"

namespace befpp {

/// Per-edge nonnegative passage weights: at each vertex the outgoing vector
/// is one Be-Exp draw (exactly one zero), independent across vertices.
struct BeExpEnvironment {
  Eigen::VectorXd w;  // indexed by edge id
};

/// Per-edge log transition probabilities: at each vertex the outgoing vector
/// is one Dirichlet(epsilon * a_x) draw, stored in log space (the log values
/// are the source of truth; probabilities are derived views).
struct DirichletEnvironment {
  Eigen::VectorXd log_w;  // indexed by edge id, logsumexp == 0 per vertex
  double epsilon = 0.0;
};

/// One Be-Exp environment. Per-vertex streams are derived from
/// (seed, tag, sample, vertex), so generation order does not matter.
BeExpEnvironment sample_be_env(const WeightedDigraph& g, std::uint64_t seed,
                               std::uint64_t tag, std::uint64_t sample);

DirichletEnvironment sample_dirichlet_env(const WeightedDigraph& g,
                                          double epsilon, std::uint64_t seed,
                                          std::uint64_t tag,
                                          std::uint64_t sample);

/// phi(x, e) = -epsilon * log w(x, e); entries are >= 0 and finite.
Eigen::VectorXd phi_transform(const DirichletEnvironment& env);

/// Per-vertex views: rows are samples, columns follow out_edges(v) /
/// in_edges(v) order.
Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& per_edge_rows,
                               const std::vector<int>& edge_ids);

/// Audit dump: "# law=<law> <params>" header then vertex,edge,value rows.
std::string environment_csv(const WeightedDigraph& g,
                            const Eigen::VectorXd& values,
                            const std::string& law,
                            const std::string& params);

}  // namespace befpp
