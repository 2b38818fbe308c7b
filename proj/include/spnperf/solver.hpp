#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spnperf/reachability.hpp"

namespace spnperf {

enum class SolveMethod { automatic, direct, iterative };

struct SolverOptions {
  SolveMethod method = SolveMethod::automatic;
  double tolerance = 1e-12;
  std::size_t max_iterations = 100'000;
  // Largest chain handed to the dense direct solver under SolveMethod::automatic.
  std::size_t direct_limit = 2'000;
};

struct StationaryDistribution {
  std::vector<double> probabilities;
  // max_j |(pi Q)_j| of the returned vector.
  double residual = 0.0;
  std::size_t iterations = 0;
  SolveMethod method_used = SolveMethod::direct;

  std::size_t size() const { return probabilities.size(); }
  double operator[](std::size_t s) const { return probabilities[s]; }
};

// Throws structure_error if the chain has deadlocks or is not strongly
// connected. Called by steady_state().
void require_irreducible(const Ctmc& ctmc);

// Solves pi Q = 0, sum(pi) = 1.
//
// direct: Grassmann-Taksar-Heyman state reduction on the dense generator.
//   Subtraction-free, so even probabilities far below machine epsilon
//   relative to the largest entry come out with small relative error.
// iterative: Gauss-Seidel sweeps over incoming rates, renormalised after
//   every sweep, stopping once the residual drops to options.tolerance.
StationaryDistribution steady_state(const Ctmc& ctmc, const SolverOptions& options = {});

// ||pi Q||_inf computed from the edge list.
double balance_residual(const Ctmc& ctmc, const std::vector<double>& pi);

double transition_throughput(const Ctmc& ctmc, const StationaryDistribution& dist,
                             std::string_view transition);
double transition_throughput(const Ctmc& ctmc, const StationaryDistribution& dist,
                             std::size_t transition);

double mean_token_count(const Ctmc& ctmc, const StationaryDistribution& dist,
                        std::string_view place);
double mean_token_count(const Ctmc& ctmc, const StationaryDistribution& dist, std::size_t place);

double state_predicate_probability(const Ctmc& ctmc, const StationaryDistribution& dist,
                                   const std::function<bool(const Marking&)>& predicate);

// Little's law R = L / X. nullopt marks an undefined response time
// (population queued but nothing ever flows); 0/0 is an empty system, 0.
std::optional<double> response_time_little(double population, double throughput);

struct MetricsReport {
  std::map<std::string, double> transition_throughputs;
  std::map<std::string, double> mean_tokens;
  // nullopt = undefined (zero throughput with non-zero population).
  std::map<std::string, std::optional<double>> response_times;
  std::size_t state_count = 0;
  double residual = 0.0;
};

// Throughput of every transition and mean marking of every place.
MetricsReport basic_metrics(const Ctmc& ctmc, const StationaryDistribution& dist);

const char* to_string(SolveMethod m);
std::optional<SolveMethod> parse_solve_method(std::string_view s);

}  // namespace spnperf
