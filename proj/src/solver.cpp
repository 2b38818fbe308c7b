#include "spnperf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spnperf {

namespace {

// Aggregated off-diagonal generator entries; self-loops cancel out of Q.
struct SparseGenerator {
  // incoming[j] = (i, q_ij) for i != j
  std::vector<std::vector<std::pair<std::size_t, double>>> incoming;
  std::vector<double> exit_rate;  // -q_jj
};

SparseGenerator sparse_generator(const Ctmc& ctmc) {
  const auto n = ctmc.size();
  SparseGenerator g{std::vector<std::vector<std::pair<std::size_t, double>>>(n),
                    std::vector<double>(n, 0.0)};
  for (const auto& e : ctmc.edges) {
    if (e.source == e.target) continue;
    g.exit_rate[e.source] += e.rate;
    auto& in = g.incoming[e.target];
    auto it = std::find_if(in.begin(), in.end(), [&](auto& p) { return p.first == e.source; });
    if (it == in.end())
      in.emplace_back(e.source, e.rate);
    else
      it->second += e.rate;
  }
  return g;
}

std::vector<char> reach_from_zero(std::size_t n,
                                  const std::vector<std::vector<std::size_t>>& adjacency) {
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (auto t : adjacency[s])
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
  }
  return seen;
}

std::vector<double> solve_gth(const Ctmc& ctmc) {
  const auto n = ctmc.size();
  if (n == 1) return {1.0};
  std::vector<double> a(n * n, 0.0);
  auto q = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (const auto& e : ctmc.edges)
    if (e.source != e.target) q(e.source, e.target) += e.rate;

  std::vector<std::size_t> active;
  for (std::size_t k = n - 1; k >= 1; --k) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += q(k, j);
    if (!(s > 0.0))
      throw structure_error("state reduction hit a state with no path back", {k});
    active.clear();
    for (std::size_t i = 0; i < k; ++i) {
      if (q(i, k) != 0.0) {
        q(i, k) /= s;
        active.push_back(i);
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      const double qkj = q(k, j);
      if (qkj == 0.0) continue;
      for (auto i : active) q(i, j) += q(i, k) * qkj;
    }
  }

  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < j; ++i) acc += pi[i] * q(i, j);
    pi[j] = acc;
  }
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (auto& v : pi) v /= total;
  return pi;
}

void normalise(std::vector<double>& pi) {
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (auto& v : pi) v /= total;
}

std::vector<double> solve_gauss_seidel(const Ctmc& ctmc, const SolverOptions& opt,
                                       std::size_t& iterations, double& residual) {
  const auto n = ctmc.size();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  iterations = 0;
  residual = balance_residual(ctmc, pi);
  if (n == 1) return pi;
  const auto g = sparse_generator(ctmc);
  while (residual > opt.tolerance) {
    if (iterations >= opt.max_iterations)
      throw convergence_error("Gauss-Seidel did not converge in " +
                                  std::to_string(opt.max_iterations) +
                                  " sweeps (residual " + std::to_string(residual) + ")",
                              residual);
    for (std::size_t j = 0; j < n; ++j) {
      double inflow = 0.0;
      for (const auto& [i, r] : g.incoming[j]) inflow += pi[i] * r;
      pi[j] = inflow / g.exit_rate[j];
    }
    normalise(pi);
    ++iterations;
    residual = balance_residual(ctmc, pi);
  }
  return pi;
}

}  // namespace

void require_irreducible(const Ctmc& ctmc) {
  const auto n = ctmc.size();
  if (n == 0) throw structure_error("empty chain", {});
  if (!ctmc.deadlock_states.empty()) {
    std::vector<std::size_t> sample(
        ctmc.deadlock_states.begin(),
        ctmc.deadlock_states.begin() + std::min<std::size_t>(ctmc.deadlock_states.size(), 10));
    std::string msg = "chain has " + std::to_string(ctmc.deadlock_states.size()) +
                      " deadlock state(s), first: " + std::to_string(sample.front());
    throw structure_error(msg, std::move(sample));
  }
  std::vector<std::vector<std::size_t>> fwd(n), bwd(n);
  for (const auto& e : ctmc.edges) {
    fwd[e.source].push_back(e.target);
    bwd[e.target].push_back(e.source);
  }
  const auto reached = reach_from_zero(n, fwd);
  const auto coreached = reach_from_zero(n, bwd);
  std::vector<std::size_t> bad;
  std::size_t bad_count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (reached[s] && coreached[s]) continue;
    ++bad_count;
    if (bad.size() < 10) bad.push_back(s);
  }
  if (bad_count > 0) {
    const std::string msg = "chain is reducible: " + std::to_string(bad_count) +
                            " state(s) outside the initial state's strongly connected "
                            "component, first: " + std::to_string(bad.front());
    throw structure_error(msg, std::move(bad));
  }
}

double balance_residual(const Ctmc& ctmc, const std::vector<double>& pi) {
  std::vector<double> r(ctmc.size(), 0.0);
  for (const auto& e : ctmc.edges) {
    if (e.source == e.target) continue;
    const double flow = pi[e.source] * e.rate;
    r[e.target] += flow;
    r[e.source] -= flow;
  }
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  return worst;
}

StationaryDistribution steady_state(const Ctmc& ctmc, const SolverOptions& options) {
  if (!(options.tolerance > 0.0)) throw domain_error("solver tolerance must be positive");
  require_irreducible(ctmc);
  SolveMethod method = options.method;
  if (method == SolveMethod::automatic)
    method = ctmc.size() <= options.direct_limit ? SolveMethod::direct : SolveMethod::iterative;

  StationaryDistribution out;
  out.method_used = method;
  if (method == SolveMethod::direct) {
    out.probabilities = solve_gth(ctmc);
    out.residual = balance_residual(ctmc, out.probabilities);
    if (out.residual > options.tolerance)
      throw convergence_error("direct solve residual " + std::to_string(out.residual) +
                                  " exceeds tolerance",
                              out.residual);
  } else {
    out.probabilities = solve_gauss_seidel(ctmc, options, out.iterations, out.residual);
  }
  return out;
}

namespace {

void check_matches(const Ctmc& ctmc, const StationaryDistribution& dist) {
  if (dist.size() != ctmc.size())
    throw dimension_error("distribution has " + std::to_string(dist.size()) +
                          " entries, chain has " + std::to_string(ctmc.size()) + " states");
}

}  // namespace

double transition_throughput(const Ctmc& ctmc, const StationaryDistribution& dist,
                             std::size_t transition) {
  check_matches(ctmc, dist);
  if (transition >= ctmc.net.num_transitions())
    throw lookup_error("transition index " + std::to_string(transition) + " out of range");
  double x = 0.0;
  for (const auto& e : ctmc.edges)
    if (e.transition == transition) x += dist[e.source] * e.rate;
  return x;
}

double transition_throughput(const Ctmc& ctmc, const StationaryDistribution& dist,
                             std::string_view transition) {
  return transition_throughput(ctmc, dist, ctmc.net.transition_index(transition));
}

double mean_token_count(const Ctmc& ctmc, const StationaryDistribution& dist, std::size_t place) {
  check_matches(ctmc, dist);
  if (place >= ctmc.net.num_places())
    throw lookup_error("place index " + std::to_string(place) + " out of range");
  double l = 0.0;
  for (std::size_t s = 0; s < ctmc.size(); ++s) l += dist[s] * ctmc.states[s][place];
  return l;
}

double mean_token_count(const Ctmc& ctmc, const StationaryDistribution& dist,
                        std::string_view place) {
  return mean_token_count(ctmc, dist, ctmc.net.place_index(place));
}

double state_predicate_probability(const Ctmc& ctmc, const StationaryDistribution& dist,
                                   const std::function<bool(const Marking&)>& predicate) {
  check_matches(ctmc, dist);
  double p = 0.0;
  for (std::size_t s = 0; s < ctmc.size(); ++s)
    if (predicate(ctmc.states[s])) p += dist[s];
  return p;
}

std::optional<double> response_time_little(double population, double throughput) {
  if (population < 0.0 || throughput < 0.0 || std::isnan(population) || std::isnan(throughput))
    throw domain_error("Little's law needs non-negative population and throughput");
  if (throughput == 0.0) {
    if (population == 0.0) return 0.0;
    return std::nullopt;
  }
  return population / throughput;
}

MetricsReport basic_metrics(const Ctmc& ctmc, const StationaryDistribution& dist) {
  check_matches(ctmc, dist);
  MetricsReport r;
  std::vector<double> x(ctmc.net.num_transitions(), 0.0);
  for (const auto& e : ctmc.edges) x[e.transition] += dist[e.source] * e.rate;
  for (std::size_t t = 0; t < x.size(); ++t)
    r.transition_throughputs[ctmc.net.transition(t).name] = x[t];
  for (std::size_t p = 0; p < ctmc.net.num_places(); ++p)
    r.mean_tokens[ctmc.net.place(p).name] = mean_token_count(ctmc, dist, p);
  r.state_count = ctmc.size();
  r.residual = dist.residual;
  return r;
}

const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::automatic:
      return "auto";
    case SolveMethod::direct:
      return "direct";
    case SolveMethod::iterative:
      return "iterative";
  }
  return "?";
}

std::optional<SolveMethod> parse_solve_method(std::string_view s) {
  if (s == "auto") return SolveMethod::automatic;
  if (s == "direct") return SolveMethod::direct;
  if (s == "iterative") return SolveMethod::iterative;
  return std::nullopt;
}

}  // namespace spnperf
