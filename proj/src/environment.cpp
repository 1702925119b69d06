#include "befpp/environment.hpp"

#include <cmath>
#include <cstdio>

#include "befpp/samplers.hpp"

namespace befpp {

BeExpEnvironment sample_be_env(const WeightedDigraph& g, std::uint64_t seed,
                               std::uint64_t tag, std::uint64_t sample) {
  BeExpEnvironment env;
  env.w.resize(g.edge_count());
  for (int v = 0; v < g.vertex_count(); ++v) {
    RngStream rng(seed, make_stream_id(tag, sample, static_cast<std::uint64_t>(v)));
    const BeExpSample s = sample_be_exp(g.out_params(v), rng);
    const auto& ids = g.out_edges(v);
    for (std::size_t i = 0; i < ids.size(); ++i)
      env.w[ids[i]] = s.x[static_cast<long>(i)];
  }
  return env;
}

DirichletEnvironment sample_dirichlet_env(const WeightedDigraph& g,
                                          double epsilon, std::uint64_t seed,
                                          std::uint64_t tag,
                                          std::uint64_t sample) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    throw NonPositiveParameter("sample_dirichlet_env: epsilon must be > 0");
  DirichletEnvironment env;
  env.epsilon = epsilon;
  env.log_w.resize(g.edge_count());
  for (int v = 0; v < g.vertex_count(); ++v) {
    RngStream rng(seed, make_stream_id(tag, sample, static_cast<std::uint64_t>(v)));
    const Eigen::VectorXd logu =
        sample_log_dirichlet(epsilon * g.out_params(v), rng);
    const auto& ids = g.out_edges(v);
    for (std::size_t i = 0; i < ids.size(); ++i)
      env.log_w[ids[i]] = logu[static_cast<long>(i)];
  }
  return env;
}

Eigen::VectorXd phi_transform(const DirichletEnvironment& env) {
  Eigen::VectorXd phi = -env.epsilon * env.log_w;
  // log w == 0 at degree-one vertices gives -0.0; normalize the sign.
  for (long e = 0; e < phi.size(); ++e)
    if (phi[e] == 0.0) phi[e] = 0.0;
  return phi;
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& per_edge_rows,
                               const std::vector<int>& edge_ids) {
  Eigen::MatrixXd out(per_edge_rows.rows(), edge_ids.size());
  for (std::size_t i = 0; i < edge_ids.size(); ++i)
    out.col(static_cast<long>(i)) = per_edge_rows.col(edge_ids[i]);
  return out;
}

std::string environment_csv(const WeightedDigraph& g,
                            const Eigen::VectorXd& values,
                            const std::string& law,
                            const std::string& params) {
  std::string out = "# law=" + law + " " + params + "\n";
  out += "vertex,edge,value\n";
  char buf[64];
  for (int e = 0; e < g.edge_count(); ++e) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[e]);
    out += g.name(g.edge(e).tail) + "," + std::to_string(e) + "," + buf + "\n";
  }
  return out;
}

}  // namespace befpp
