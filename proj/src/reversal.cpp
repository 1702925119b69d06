#include "befpp/reversal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "befpp/samplers.hpp"

namespace befpp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kResidualTol = 1e-10;

// Transition log-probabilities, parallel edges merged.
Eigen::MatrixXd log_transition_matrix(const WeightedDigraph& g,
                                      const DirichletEnvironment& env) {
  const int n = g.vertex_count();
  Eigen::MatrixXd logp = Eigen::MatrixXd::Constant(n, n, kNegInf);
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    logp(ed.tail, ed.head) = logaddexp(logp(ed.tail, ed.head), env.log_w[e]);
  }
  return logp;
}

double stationary_residual(const WeightedDigraph& g,
                           const DirichletEnvironment& env,
                           const Eigen::VectorXd& pi) {
  const int n = g.vertex_count();
  Eigen::VectorXd flow = Eigen::VectorXd::Zero(n);
  for (int e = 0; e < g.edge_count(); ++e)
    flow[g.edge(e).head] += pi[g.edge(e).tail] * std::exp(env.log_w[e]);
  double r = (flow - pi).cwiseAbs().maxCoeff();
  return std::max(r, std::fabs(pi.sum() - 1.0));
}

}  // namespace

StationaryDistribution stationary_distribution(const WeightedDigraph& g,
                                               const DirichletEnvironment& env) {
  if (env.log_w.size() != g.edge_count())
    throw InconsistentStationaryInput("environment size mismatch");
  const int n = g.vertex_count();

  // State-elimination Gaussian elimination (GTH), run on log-probabilities.
  // Every update is an addition, multiplication or division of positive
  // quantities, which in log space becomes logaddexp and +/-; no
  // subtraction ever happens, so each component keeps full relative
  // accuracy however small the probabilities get.
  Eigen::MatrixXd L = log_transition_matrix(g, env);
  for (int k = n - 1; k >= 1; --k) {
    Eigen::VectorXd exits(k);
    for (int j = 0; j < k; ++j) exits[j] = L(k, j);
    const double s = logsumexp(exits);
    if (s == kNegInf || !std::isfinite(s))
      throw SingularSystem("numerically reducible chain at state " +
                           g.name(k));
    for (int i = 0; i < k; ++i) L(i, k) -= s;
    for (int i = 0; i < k; ++i) {
      if (L(i, k) == kNegInf) continue;
      for (int j = 0; j < k; ++j) {
        if (j == i || L(k, j) == kNegInf) continue;
        L(i, j) = logaddexp(L(i, j), L(i, k) + L(k, j));
      }
    }
  }
  Eigen::VectorXd logpi(n);
  logpi[0] = 0.0;
  for (int k = 1; k < n; ++k) {
    Eigen::VectorXd terms(k);
    for (int i = 0; i < k; ++i) terms[i] = logpi[i] + L(i, k);
    logpi[k] = logsumexp(terms);
  }
  logpi.array() -= logsumexp(logpi);

  StationaryDistribution st;
  st.log_pi = logpi;
  st.pi = logpi.array().exp();
  for (int v = 0; v < n; ++v)
    if (!std::isfinite(logpi[v]))
      throw SingularSystem("stationary mass vanished at " + g.name(v));
  st.residual = stationary_residual(g, env, st.pi);
  if (!(st.residual <= kResidualTol))
    throw SingularSystem("stationary solve residual " +
                         std::to_string(st.residual));
  return st;
}

DirichletEnvironment reverse_environment(const WeightedDigraph& g,
                                         const DirichletEnvironment& env,
                                         const StationaryDistribution& st) {
  if (env.log_w.size() != g.edge_count() ||
      st.log_pi.size() != g.vertex_count())
    throw InconsistentStationaryInput("size mismatch");
  if (!(stationary_residual(g, env, st.pi) <= kResidualTol))
    throw InconsistentStationaryInput(
        "stationary input does not solve this environment");

  DirichletEnvironment rev;
  rev.epsilon = env.epsilon;
  rev.log_w.resize(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    rev.log_w[e] = st.log_pi[ed.tail] - st.log_pi[ed.head] + env.log_w[e];
  }
  // Stationarity makes each dual vertex sum to one; verify it.
  for (int y = 0; y < g.vertex_count(); ++y) {
    const auto& ids = g.in_edges(y);
    Eigen::VectorXd vals(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
      vals[static_cast<long>(i)] = rev.log_w[ids[i]];
    if (std::fabs(logsumexp(vals)) > kResidualTol)
      throw InconsistentStationaryInput(
          "reversed environment does not normalize at " + g.name(y));
  }
  return rev;
}

CouplingTriple build_coupling(const WeightedDigraph& g, double epsilon,
                              std::uint64_t seed, std::uint64_t sample) {
  CouplingTriple c;
  c.epsilon = epsilon;
  c.env = sample_dirichlet_env(g, epsilon, seed, stream_tag::kCoupling, sample);
  c.stationary = stationary_distribution(g, c.env);
  c.env_rev = reverse_environment(g, c.env, c.stationary);
  c.phi = phi_transform(c.env);
  c.phi_check = -epsilon * c.env_rev.log_w;
  c.upsilon.resize(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    c.upsilon[e] =
        epsilon * (c.stationary.log_pi[ed.head] - c.stationary.log_pi[ed.tail]);
  }
  const double total = g.weights().sum();
  c.weights_divergence_free = is_divergence_free(g, 1e-12 * total);
  return c;
}

StatReport closed_loop_check(const Eigen::VectorXd& edge_function,
                             const WeightedDigraph& g,
                             const std::vector<Path>& loops,
                             const std::string& name, double tol_scale) {
  const double scale =
      edge_function.size() ? edge_function.cwiseAbs().maxCoeff() : 0.0;
  double worst = 0.0;
  double worst_tol = 0.0;
  bool pass = true;
  for (const Path& loop : loops) {
    validate_path(g, loop);
    if (!loop.closed())
      throw NotClosed("closed_loop_check: loop does not return to its start");
    double s = 0.0;
    for (int e : loop.edge_ids) s += edge_function[e];
    const double tol = tol_scale * loop.length() * scale;
    if (std::fabs(s) > tol) pass = false;
    if (std::fabs(s) >= worst) {
      worst = std::fabs(s);
      worst_tol = tol;
    }
  }
  StatReport r;
  r.name = name;
  r.statistic = worst;
  r.critical = worst_tol;
  r.n = static_cast<long>(loops.size());
  r.pass = pass;
  return r;
}

StatReport cycle_basis_check(const Eigen::VectorXd& edge_function,
                             const WeightedDigraph& g,
                             const std::vector<SignedCycle>& basis,
                             const std::string& name, double tol_scale) {
  const double scale =
      edge_function.size() ? edge_function.cwiseAbs().maxCoeff() : 0.0;
  double worst = 0.0;
  double worst_tol = 0.0;
  bool pass = true;
  for (const SignedCycle& c : basis) {
    double s = 0.0;
    for (auto [e, sign] : c.edges) s += sign * edge_function[e];
    const double tol = tol_scale * static_cast<double>(c.edges.size()) * scale;
    if (std::fabs(s) > tol) pass = false;
    if (std::fabs(s) >= worst) {
      worst = std::fabs(s);
      worst_tol = tol;
    }
  }
  StatReport r;
  r.name = name;
  r.statistic = worst;
  r.critical = worst_tol;
  r.n = static_cast<long>(basis.size());
  r.pass = pass;
  return r;
}

std::vector<StatReport> theorem1_distributional_check(
    const WeightedDigraph& g, const std::vector<double>& epsilon_list,
    std::uint64_t seed, const Theorem1Options& opt) {
  if (epsilon_list.empty())
    throw ConfigError("theorem1 check: empty epsilon list");
  for (std::size_t i = 0; i + 1 < epsilon_list.size(); ++i)
    if (!(epsilon_list[i] > epsilon_list[i + 1]))
      throw ConfigError("theorem1 check: epsilon list must be decreasing");

  const long n = opt.n_samples;
  const int ne = g.edge_count();
  std::vector<StatReport> reports;
  std::vector<double> primal_trend, dual_trend;

  for (std::size_t ei = 0; ei < epsilon_list.size(); ++ei) {
    const double eps = epsilon_list[ei];
    const bool strict = (ei + 1 == epsilon_list.size());
    Eigen::MatrixXd phi(n, ne), phic(n, ne);
    {
      std::vector<std::thread> pool;
      const int workers = std::max(1, opt.workers);
      const std::uint64_t base = static_cast<std::uint64_t>(ei) * n;
      auto task = [&](long lo, long hi) {
        for (long s = lo; s < hi; ++s) {
          const CouplingTriple c = build_coupling(g, eps, seed, base + s);
          phi.row(s) = c.phi.transpose();
          phic.row(s) = c.phi_check.transpose();
        }
      };
      if (workers == 1) {
        task(0, n);
      } else {
        const long chunk = (n + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
          const long lo = w * chunk;
          const long hi = std::min(n, lo + chunk);
          if (lo < hi) pool.emplace_back(task, lo, hi);
        }
        for (auto& t : pool) t.join();
      }
    }

    BatteryOptions bopt;
    bopt.exact_atoms = false;
    bopt.ks_slack = opt.ks_slack;
    bopt.ks_allowance_per_rate = strict ? 0.0 : opt.ks_allowance_per_rate * eps;
    bopt.atom_allowance = strict ? 0.0 : opt.atom_allowance_per_eps * eps;

    char tagbuf[64];
    std::snprintf(tagbuf, sizeof(tagbuf), "eps=%g", eps);
    double pmax = 0.0, dmax = 0.0;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (g.out_degree(v) >= 2) {
        const auto rs = be_exp_battery(
            gather_columns(phi, g.out_edges(v)), g.out_params(v), bopt,
            "theorem1/" + std::string(tagbuf) + "/primal/" + g.name(v), seed);
        pmax = std::max(pmax, battery_max_ks(rs));
        reports.insert(reports.end(), rs.begin(), rs.end());
      }
      if (g.in_edges(v).size() >= 2) {
        const auto rs = be_exp_battery(
            gather_columns(phic, g.in_edges(v)), g.in_params(v), bopt,
            "theorem1/" + std::string(tagbuf) + "/dual/" + g.name(v), seed);
        dmax = std::max(dmax, battery_max_ks(rs));
        reports.insert(reports.end(), rs.begin(), rs.end());
      }
    }
    primal_trend.push_back(pmax);
    dual_trend.push_back(dmax);
  }

  if (epsilon_list.size() >= 2) {
    auto trend_report = [&](const std::vector<double>& t, const char* which) {
      StatReport r;
      r.name = std::string("theorem1/trend/") + which;
      double worst_ratio = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (!(t[i + 1] < t[i])) ok = false;
        worst_ratio = std::max(worst_ratio, t[i + 1] / std::max(t[i], 1e-300));
      }
      r.statistic = worst_ratio;  // < 1 means strictly decreasing everywhere
      r.critical = 1.0;
      r.n = static_cast<long>(t.size());
      r.pass = ok;
      r.seed = seed;
      return r;
    };
    reports.push_back(trend_report(primal_trend, "primal"));
    reports.push_back(trend_report(dual_trend, "dual"));
  }
  return reports;
}

std::vector<StatReport> reversed_beta_marginal_check(const WeightedDigraph& g,
                                                     double epsilon, long n,
                                                     std::uint64_t seed,
                                                     int workers,
                                                     double alpha) {
  const int ne = g.edge_count();
  Eigen::MatrixXd logw(n, ne);
  {
    auto task = [&](long lo, long hi) {
      for (long s = lo; s < hi; ++s) {
        const CouplingTriple c = build_coupling(g, epsilon, seed,
                                                0x40000000ULL + s);
        logw.row(s) = c.env_rev.log_w.transpose();
      }
    };
    workers = std::max(1, workers);
    if (workers == 1) {
      task(0, n);
    } else {
      std::vector<std::thread> pool;
      const long chunk = (n + workers - 1) / workers;
      for (int w = 0; w < workers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(n, lo + chunk);
        if (lo < hi) pool.emplace_back(task, lo, hi);
      }
      for (auto& t : pool) t.join();
    }
  }

  std::vector<StatReport> reports;
  for (int y = 0; y < g.vertex_count(); ++y) {
    const auto& ids = g.in_edges(y);
    if (ids.size() < 2) continue;
    const Eigen::VectorXd a_y = epsilon * g.in_params(y);
    const double total = a_y.sum();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const double a = a_y[static_cast<long>(i)];
      const double b = total - a;
      // The comparison runs on the negative log of the coordinate, or of
      // its complement when the complementary parameter is the smaller
      // one: a Beta(a, b) coordinate keeps (1e-16)^min(a,b)-sized mass
      // within one ulp of 1, which the log of w_rev (a sum of O(1) logs)
      // cannot resolve, while the complement 1 - w_rev = sum of the other
      // coordinates comes out of logsumexp with full relative accuracy
      // and follows the swapped Beta(b, a) law.
      const bool direct = b >= a;
      Eigen::VectorXd t(n);
      if (direct) {
        t = -logw.col(ids[i]);
      } else {
        Eigen::VectorXd others(ids.size() - 1);
        for (long s = 0; s < n; ++s) {
          long k = 0;
          for (std::size_t j = 0; j < ids.size(); ++j)
            if (j != i) others[k++] = logw(s, ids[j]);
          t[s] = -logsumexp(others);
        }
      }
      const double pa = direct ? a : b;
      const double pb = direct ? b : a;
      StatReport r = ks_one_sample(
          t, [pa, pb](double x) { return beta_neg_log_cdf(pa, pb, x); },
          "beta_marginal/" + g.name(y) + "/edge" + std::to_string(ids[i]) +
              (direct ? "" : "/complement"),
          alpha);
      r.seed = seed;
      reports.push_back(r);
    }
  }
  return reports;
}

std::string coupling_csv_header() {
  return "tail,head,phi,phi_check,upsilon,epsilon,sample\n";
}

std::string coupling_csv_rows(const WeightedDigraph& g,
                              const CouplingTriple& c, long sample_id) {
  std::string out;
  char buf[256];
  for (int e = 0; e < g.edge_count(); ++e) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g,%.17g,%ld\n",
                  g.name(g.edge(e).tail).c_str(),
                  g.name(g.edge(e).head).c_str(), c.phi[e], c.phi_check[e],
                  c.upsilon[e], c.epsilon, sample_id);
    out += buf;
  }
  return out;
}

}  // namespace befpp
