#include "spnperf/monitor.hpp"

#include <algorithm>
#include <cmath>

namespace spnperf::monitor {

using pubsub::PubSubParams;

std::string_view to_string(Action a) {
  switch (a) {
    case Action::grow_network_buffers: return "grow_network_buffers";
    case Action::grow_broker_memory: return "grow_broker_memory";
    case Action::lower_qos_level: return "lower_qos_level";
  }
  return "?";
}

std::optional<Action> parse_action(std::string_view s) {
  for (auto a : {Action::grow_network_buffers, Action::grow_broker_memory, Action::lower_qos_level})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::compliant: return "compliant";
    case Outcome::exhausted_actions: return "exhausted_actions";
    case Outcome::evaluation_failed: return "evaluation_failed";
  }
  return "?";
}

void validate_policy(const MonitorPolicy& policy, const PubSubParams& params) {
  std::vector<std::string> v;
  if (policy.action_order.empty()) v.push_back("action_order is empty");
  if (!(policy.step >= 1.0) || !std::isfinite(policy.step)) v.push_back("step must be >= 1");
  if (policy.max_actions_per_snapshot < 0) v.push_back("max_actions_per_snapshot must be >= 0");
  if (!(policy.max_accept_publication_rt >= 0.0))
    v.push_back("accept publication threshold must be non-negative");
  if (!(policy.max_notification_rt >= 0.0))
    v.push_back("notification threshold must be non-negative");
  if (policy.network_buffer_cap < std::max(params.net_recv_buffer, params.net_send_buffer))
    v.push_back("network buffer cap below current buffer size");
  if (policy.broker_memory_cap < params.broker_memory)
    v.push_back("broker memory cap below current memory");
  if (!v.empty()) {
    const std::string msg = "invalid monitor policy: " + v.front();
    throw validation_error(msg, std::move(v));
  }
}

MetricsReport evaluate(const PubSubParams& params, const EvaluationOptions& options) {
  const Ctmc ctmc = explore(pubsub::build_pubsub_net(params), options.max_states);
  const auto dist = steady_state(ctmc, options.solver);
  return pubsub::headline_metrics(ctmc, dist);
}

std::vector<std::string> detect_degradation(const MetricsReport& report,
                                            const MonitorPolicy& policy) {
  std::vector<std::string> out;
  const std::pair<std::string_view, double> checks[] = {
      {pubsub::kAcceptPublicationRt, policy.max_accept_publication_rt},
      {pubsub::kNotificationRt, policy.max_notification_rt},
  };
  for (const auto& [name, threshold] : checks) {
    const auto it = report.response_times.find(std::string(name));
    if (it == report.response_times.end() || !it->second)
      out.push_back(std::string(name) + ":undefined");
    else if (*it->second > threshold)
      out.push_back(std::string(name));
  }
  return out;
}

namespace {

bool available(const PubSubParams& p, const MonitorPolicy& policy, Action a) {
  switch (a) {
    case Action::grow_network_buffers:
      return p.net_recv_buffer < policy.network_buffer_cap ||
             p.net_send_buffer < policy.network_buffer_cap;
    case Action::grow_broker_memory:
      return p.broker_memory < policy.broker_memory_cap;
    case Action::lower_qos_level:
      return policy.qos_reduction_allowed && p.qos_level > 0;
  }
  return false;
}

int grow(int value, double step, int cap) {
  const double scaled = std::floor(static_cast<double>(value) * step);
  const int next = scaled >= cap ? cap : std::max(value + 1, static_cast<int>(scaled));
  return std::min(next, cap);
}

HeadlineTimes headline(const MetricsReport& r) {
  return {r.response_times.at(std::string(pubsub::kAcceptPublicationRt)),
          r.response_times.at(std::string(pubsub::kNotificationRt))};
}

}  // namespace

std::optional<Action> next_action(const PubSubParams& params, const MonitorPolicy& policy,
                                  std::span<const Action> history) {
  if (static_cast<int>(history.size()) >= policy.max_actions_per_snapshot) return std::nullopt;
  for (auto a : policy.action_order)
    if (available(params, policy, a)) return a;
  return std::nullopt;
}

PubSubParams apply_action(const PubSubParams& params, const MonitorPolicy& policy, Action action) {
  PubSubParams p = params;
  switch (action) {
    case Action::grow_network_buffers:
      p.net_recv_buffer = std::max(p.net_recv_buffer,
                                   grow(p.net_recv_buffer, policy.step, policy.network_buffer_cap));
      p.net_send_buffer = std::max(p.net_send_buffer,
                                   grow(p.net_send_buffer, policy.step, policy.network_buffer_cap));
      break;
    case Action::grow_broker_memory:
      p.broker_memory =
          std::max(p.broker_memory, grow(p.broker_memory, policy.step, policy.broker_memory_cap));
      break;
    case Action::lower_qos_level:
      if (p.qos_level > 0) --p.qos_level;
      break;
  }
  return p;
}

std::vector<DecisionRecord> run_loop(std::span<const WorkloadSnapshot> trace,
                                     const PubSubParams& initial, const MonitorPolicy& policy,
                                     const EvaluationOptions& options) {
  pubsub::require_valid(initial);
  validate_policy(policy, initial);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& s = trace[i];
    if (s.n_publishers < 1 || s.n_subscribers < 1 || s.n_events < 1)
      throw validation_error("snapshot " + std::to_string(i) + " has a non-positive population");
    if (i > 0 && !(s.timestamp > trace[i - 1].timestamp))
      throw validation_error("snapshot " + std::to_string(i) + " timestamp is not increasing");
  }

  std::vector<DecisionRecord> records;
  PubSubParams carried = initial;
  for (const auto& snap : trace) {
    PubSubParams params = carried;
    params.n_publishers = snap.n_publishers;
    params.n_subscribers = snap.n_subscribers;
    params.n_events = snap.n_events;

    DecisionRecord rec;
    rec.timestamp = snap.timestamp;
    try {
      MetricsReport report = evaluate(params, options);
      rec.before = headline(report);
      auto violations = detect_degradation(report, policy);
      while (!violations.empty()) {
        const auto action = next_action(params, policy, rec.actions);
        if (!action) break;
        params = apply_action(params, policy, *action);
        rec.actions.push_back(*action);
        report = evaluate(params, options);
        violations = detect_degradation(report, policy);
      }
      rec.after = headline(report);
      rec.outcome = violations.empty() ? Outcome::compliant : Outcome::exhausted_actions;
      carried = params;
    } catch (const spn_error& e) {
      rec.outcome = Outcome::evaluation_failed;
      rec.failure = e.what();
      carried.n_publishers = snap.n_publishers;
      carried.n_subscribers = snap.n_subscribers;
      carried.n_events = snap.n_events;
    }
    rec.params_after = carried;
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace spnperf::monitor
