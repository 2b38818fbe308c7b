#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spnperf/pubsub.hpp"
#include "spnperf/solver.hpp"

namespace spnperf::monitor {

// Captured load at one instant.
struct WorkloadSnapshot {
  double timestamp = 0.0;
  int n_publishers = 1;
  int n_subscribers = 1;
  int n_events = 1;

  bool operator==(const WorkloadSnapshot&) const = default;
};

enum class Action { grow_network_buffers, grow_broker_memory, lower_qos_level };

std::string_view to_string(Action a);
std::optional<Action> parse_action(std::string_view s);

struct MonitorPolicy {
  double max_accept_publication_rt = std::numeric_limits<double>::infinity();
  double max_notification_rt = std::numeric_limits<double>::infinity();
  std::vector<Action> action_order{Action::grow_network_buffers, Action::grow_broker_memory,
                                   Action::lower_qos_level};
  double step = 2.0;
  bool qos_reduction_allowed = false;
  int network_buffer_cap = 64;
  int broker_memory_cap = 64;
  int max_actions_per_snapshot = 10;
};

// Checks the policy's own invariants and its caps against params.
// Throws validation_error.
void validate_policy(const MonitorPolicy& policy, const pubsub::PubSubParams& params);

struct EvaluationOptions {
  std::size_t max_states = kDefaultMaxStates;
  SolverOptions solver{};
};

// Build, explore, solve, and report the pub/sub model for params.
MetricsReport evaluate(const pubsub::PubSubParams& params, const EvaluationOptions& options = {});

// Names of the violated thresholds ("accept_publication_response_time",
// "notification_response_time"), each with ":undefined" appended when the
// metric itself is undefined.
std::vector<std::string> detect_degradation(const MetricsReport& report,
                                            const MonitorPolicy& policy);

std::optional<Action> next_action(const pubsub::PubSubParams& params, const MonitorPolicy& policy,
                                  std::span<const Action> history);

// Params after one action under the policy's step rule and caps.
pubsub::PubSubParams apply_action(const pubsub::PubSubParams& params, const MonitorPolicy& policy,
                                  Action action);

enum class Outcome { compliant, exhausted_actions, evaluation_failed };
std::string_view to_string(Outcome o);

struct HeadlineTimes {
  std::optional<double> accept_publication;
  std::optional<double> notification;

  bool operator==(const HeadlineTimes&) const = default;
};

struct DecisionRecord {
  double timestamp = 0.0;
  std::optional<HeadlineTimes> before;  // absent if the first evaluation failed
  std::optional<HeadlineTimes> after;
  std::vector<Action> actions;
  Outcome outcome = Outcome::compliant;
  std::string failure;                 // cause, for evaluation_failed
  pubsub::PubSubParams params_after;   // configuration carried forward

  bool operator==(const DecisionRecord&) const = default;
};

std::vector<DecisionRecord> run_loop(std::span<const WorkloadSnapshot> trace,
                                     const pubsub::PubSubParams& initial,
                                     const MonitorPolicy& policy,
                                     const EvaluationOptions& options = {});

}  // namespace spnperf::monitor
