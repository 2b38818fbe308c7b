#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "spnperf/net.hpp"

namespace spnperf {

// Exponential variates from a 64-bit Mersenne Twister. std::mt19937_64's
// output sequence is fixed by the standard; the uniform and exponential
// transforms are done here rather than through <random> distributions,
// whose algorithms are implementation-defined.
class ExpSampler {
 public:
  explicit ExpSampler(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0, 1], 53 bits.
  double uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }
  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

struct RunMetrics {
  std::vector<std::uint64_t> firing_counts;  // per transition, after warmup
  std::vector<double> mean_tokens;           // time-weighted, per place, after warmup
  double observed_time = 0.0;                // length of the statistics window
  std::uint64_t events = 0;                  // all firings including warmup
  bool deadlocked = false;
  double deadlock_time = 0.0;

  bool operator==(const RunMetrics&) const = default;
};

// One trajectory of the exponential race: at each marking every enabled
// transition draws a fresh delay with rate_at() and the smallest fires.
// Statistics cover [warmup, horizon], or [warmup, deadlock time] when the
// run gets stuck.
RunMetrics simulate_run(const SpnNet& net, double horizon, double warmup, std::uint64_t seed);

struct MetricDefinition {
  enum class Kind { mean_tokens, throughput } kind;
  std::string name;  // place or transition name

  std::string key() const;
};

// Mean tokens of every place and throughput of every transition.
std::vector<MetricDefinition> all_metrics(const SpnNet& net);

struct Estimate {
  double mean = 0.0;
  double half_width_95 = 0.0;
  int replications = 0;
};

struct SimulationEstimate {
  std::map<std::string, Estimate> metrics;  // keyed by MetricDefinition::key()
  int deadlocked_replications = 0;

  bool flagged() const { return deadlocked_replications > 0; }
};

// Replication r uses seed base_seed + r. Replications run concurrently;
// results do not depend on scheduling.
SimulationEstimate estimate_metrics(const SpnNet& net, const std::vector<MetricDefinition>& metrics,
                                    double horizon, double warmup, int replications,
                                    std::uint64_t base_seed);

// Two-sided 95% Student-t quantile with the given degrees of freedom.
double t_quantile_975(int degrees_of_freedom);

}  // namespace spnperf
