#include "spnperf/simulator.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <future>
#include <limits>

namespace spnperf {

RunMetrics simulate_run(const SpnNet& net, double horizon, double warmup, std::uint64_t seed) {
  require_valid(net);
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw domain_error("horizon must be positive and finite");
  if (!(warmup >= 0.0) || !(warmup < horizon))
    throw domain_error("warmup must lie in [0, horizon)");

  ExpSampler rng(seed);
  RunMetrics out;
  out.firing_counts.assign(net.num_transitions(), 0);
  std::vector<double> area(net.num_places(), 0.0);

  // Areas are settled lazily, per place, when its count changes.
  Marking m = net.initial_marking();
  std::vector<double> since(net.num_places(), warmup);
  double now = 0.0;
  auto settle = [&](std::size_t p, double to) {
    if (to > since[p]) {
      area[p] += m[p] * (to - since[p]);
      since[p] = to;
    }
  };

  double end = horizon;
  while (true) {
    const auto enabled = enabled_transitions(net, m);
    if (enabled.empty()) {
      out.deadlocked = true;
      out.deadlock_time = now;
      end = std::max(now, warmup);
      break;
    }
    double best = std::numeric_limits<double>::infinity();
    std::size_t winner = enabled.front();
    for (auto t : enabled) {
      const double d = rng.exponential(detail::rate_unchecked(net, m, t));
      if (d < best) {
        best = d;
        winner = t;
      }
    }
    const double next = now + best;
    if (next > horizon) break;
    now = next;
    Marking after = detail::fire_unchecked(net, m, winner);
    for (std::size_t p = 0; p < area.size(); ++p)
      if (after[p] != m[p]) settle(p, now);
    m = std::move(after);
    ++out.events;
    if (now >= warmup) ++out.firing_counts[winner];
  }
  for (std::size_t p = 0; p < area.size(); ++p) settle(p, end);

  out.observed_time = end - warmup;
  out.mean_tokens.resize(area.size(), 0.0);
  if (out.observed_time > 0.0)
    for (std::size_t p = 0; p < area.size(); ++p) out.mean_tokens[p] = area[p] / out.observed_time;
  return out;
}

std::string MetricDefinition::key() const {
  return (kind == Kind::mean_tokens ? "mean_tokens:" : "throughput:") + name;
}

std::vector<MetricDefinition> all_metrics(const SpnNet& net) {
  std::vector<MetricDefinition> out;
  for (const auto& p : net.places()) out.push_back({MetricDefinition::Kind::mean_tokens, p.name});
  for (const auto& t : net.transitions())
    out.push_back({MetricDefinition::Kind::throughput, t.name});
  return out;
}

double t_quantile_975(int degrees_of_freedom) {
  if (degrees_of_freedom < 1) throw domain_error("t quantile needs at least 1 degree of freedom");
  boost::math::students_t dist(static_cast<double>(degrees_of_freedom));
  return boost::math::quantile(dist, 0.975);
}

SimulationEstimate estimate_metrics(const SpnNet& net, const std::vector<MetricDefinition>& metrics,
                                    double horizon, double warmup, int replications,
                                    std::uint64_t base_seed) {
  if (replications < 2) throw domain_error("at least 2 replications are required");
  require_valid(net);
  std::vector<std::size_t> index;
  for (const auto& d : metrics)
    index.push_back(d.kind == MetricDefinition::Kind::mean_tokens ? net.place_index(d.name)
                                                                  : net.transition_index(d.name));

  std::vector<std::future<RunMetrics>> runs;
  runs.reserve(replications);
  for (int r = 0; r < replications; ++r)
    runs.push_back(std::async(std::launch::async, [&net, horizon, warmup, base_seed, r] {
      return simulate_run(net, horizon, warmup, base_seed + static_cast<std::uint64_t>(r));
    }));
  std::vector<RunMetrics> results;
  results.reserve(replications);
  for (auto& f : runs) results.push_back(f.get());

  SimulationEstimate est;
  for (const auto& r : results)
    if (r.deadlocked) ++est.deadlocked_replications;

  const double t = t_quantile_975(replications - 1);
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    std::vector<double> samples;
    samples.reserve(results.size());
    for (const auto& r : results) {
      if (metrics[k].kind == MetricDefinition::Kind::mean_tokens)
        samples.push_back(r.mean_tokens[index[k]]);
      else
        samples.push_back(r.observed_time > 0.0
                              ? static_cast<double>(r.firing_counts[index[k]]) / r.observed_time
                              : 0.0);
    }
    if (std::all_of(samples.begin(), samples.end(),
                    [&](double v) { return v == samples.front(); })) {
      est.metrics[metrics[k].key()] = {samples.front(), 0.0, replications};
      continue;
    }
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(samples.size() - 1);
    est.metrics[metrics[k].key()] = {
        mean, t * std::sqrt(var / static_cast<double>(samples.size())), replications};
  }
  return est;
}

}  // namespace spnperf
