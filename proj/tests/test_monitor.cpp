#include <doctest.h>

#include <algorithm>

#include "spnperf/monitor.hpp"

using namespace spnperf;
using namespace spnperf::monitor;
using pubsub::PubSubParams;

namespace {

// Default calibration evaluated once with both network buffers at 1 and at
// 10 (accept, notification):
//   buffers = 1:  2.92388352001, 3.88127363334
//   buffers = 10: 2.6723095833,  3.58662920497
// The thresholds sit between the two.
constexpr double kAcceptThreshold = 2.8;
constexpr double kNotificationThreshold = 3.7;

MetricsReport report_with(std::optional<double> accept, std::optional<double> notif) {
  MetricsReport r;
  r.response_times[std::string(pubsub::kAcceptPublicationRt)] = accept;
  r.response_times[std::string(pubsub::kNotificationRt)] = notif;
  return r;
}

MonitorPolicy degraded_buffer_policy() {
  MonitorPolicy p;
  p.max_accept_publication_rt = kAcceptThreshold;
  p.max_notification_rt = kNotificationThreshold;
  return p;
}

const WorkloadSnapshot kDefaultLoad{0.0, 2, 2, 3};

}  // namespace

TEST_CASE("evaluate") {
  const auto r = evaluate(PubSubParams{});
  CHECK(r.state_count == 1260);
  CHECK(*r.response_times.at(std::string(pubsub::kAcceptPublicationRt)) ==
        doctest::Approx(2.92388352001).epsilon(1e-10));
  CHECK(*r.response_times.at(std::string(pubsub::kNotificationRt)) ==
        doctest::Approx(3.88127363334).epsilon(1e-10));

  EvaluationOptions tight;
  tight.max_states = 100;
  CHECK_THROWS_AS(evaluate(PubSubParams{}, tight), explosion_error);

  const auto doubled = evaluate(PubSubParams{}.scaled_rates(2.0));
  for (auto key : {pubsub::kAcceptPublicationRt, pubsub::kNotificationRt}) {
    const std::string k(key);
    CHECK(*doubled.response_times.at(k) ==
          doctest::Approx(*r.response_times.at(k) / 2.0).epsilon(1e-10));
  }
}

TEST_CASE("detect_degradation") {
  MonitorPolicy p;
  p.max_accept_publication_rt = 7.0;
  p.max_notification_rt = 10.0;
  CHECK(detect_degradation(report_with(5.0, 6.0), p).empty());
  CHECK(detect_degradation(report_with(7.0, 10.0), p).empty());
  CHECK(detect_degradation(report_with(8.50740309, 9.06444339), p) ==
        std::vector<std::string>{"accept_publication_response_time"});
  CHECK(detect_degradation(report_with(5.0, std::nullopt), p) ==
        std::vector<std::string>{"notification_response_time:undefined"});
}

TEST_CASE("next_action") {
  MonitorPolicy policy;
  policy.network_buffer_cap = 4;
  policy.broker_memory_cap = 4;
  PubSubParams p;
  CHECK(next_action(p, policy, {}) == Action::grow_network_buffers);

  p.net_recv_buffer = p.net_send_buffer = 4;
  CHECK(next_action(p, policy, {}) == Action::grow_broker_memory);

  p.broker_memory = 4;
  CHECK_FALSE(next_action(p, policy, {}).has_value());

  policy.qos_reduction_allowed = true;
  CHECK(next_action(p, policy, {}) == Action::lower_qos_level);
  p.qos_level = 0;
  CHECK_FALSE(next_action(p, policy, {}).has_value());

  p.broker_memory = 1;
  policy.max_actions_per_snapshot = 2;
  const std::vector<Action> two{Action::grow_network_buffers, Action::grow_broker_memory};
  CHECK_FALSE(next_action(p, policy, two).has_value());
}

TEST_CASE("apply_action step rule") {
  MonitorPolicy policy;
  policy.network_buffer_cap = 5;
  PubSubParams p;
  p = apply_action(p, policy, Action::grow_network_buffers);
  CHECK(p.net_recv_buffer == 2);
  p = apply_action(p, policy, Action::grow_network_buffers);
  CHECK(p.net_recv_buffer == 4);
  p = apply_action(p, policy, Action::grow_network_buffers);
  CHECK(p.net_recv_buffer == 5);
  CHECK(p.net_send_buffer == 5);

  policy.step = 1.0;
  CHECK(apply_action(PubSubParams{}, policy, Action::grow_broker_memory).broker_memory == 3);

  PubSubParams q;
  q.qos_level = 2;
  CHECK(apply_action(q, policy, Action::lower_qos_level).qos_level == 1);
}

TEST_CASE("run_loop") {
  const std::vector<WorkloadSnapshot> one{kDefaultLoad};

  SUBCASE("degraded buffers are remediated") {
    const auto recs = run_loop(one, PubSubParams{}, degraded_buffer_policy());
    REQUIRE(recs.size() == 1);
    const auto& r = recs[0];
    CHECK(r.outcome == Outcome::compliant);
    CHECK(std::count(r.actions.begin(), r.actions.end(), Action::grow_network_buffers) >= 1);
    CHECK(r.actions.size() <= 10);
    CHECK(*r.after->accept_publication <= kAcceptThreshold);
    CHECK(*r.after->notification <= kNotificationThreshold);
    CHECK(*r.before->accept_publication > kAcceptThreshold);
    CHECK(r.params_after.net_recv_buffer > 1);
  }
  SUBCASE("infinite thresholds need no action") {
    const std::vector<WorkloadSnapshot> trace{{0.0, 2, 2, 3}, {1.0, 1, 2, 2}, {2.0, 2, 1, 3}};
    for (const auto& r : run_loop(trace, PubSubParams{}, MonitorPolicy{})) {
      CHECK(r.outcome == Outcome::compliant);
      CHECK(r.actions.empty());
    }
  }
  SUBCASE("zero thresholds with caps at current values exhaust the actions") {
    MonitorPolicy policy;
    policy.max_accept_publication_rt = 0.0;
    policy.max_notification_rt = 0.0;
    policy.network_buffer_cap = 1;
    policy.broker_memory_cap = 2;
    const auto recs = run_loop(one, PubSubParams{}, policy);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].outcome == Outcome::exhausted_actions);
    CHECK(recs[0].actions.empty());
  }
  SUBCASE("optimisations persist across snapshots") {
    const std::vector<WorkloadSnapshot> trace{{0.0, 2, 2, 3}, {5.0, 2, 2, 3}};
    const auto recs = run_loop(trace, PubSubParams{}, degraded_buffer_policy());
    REQUIRE(recs.size() == 2);
    CHECK_FALSE(recs[0].actions.empty());
    CHECK(recs[1].actions.empty());
    CHECK(recs[1].outcome == Outcome::compliant);
    CHECK(recs[1].params_after == recs[0].params_after);
  }
  SUBCASE("evaluation failures are recorded and skipped") {
    EvaluationOptions tight;
    tight.max_states = 200;
    const std::vector<WorkloadSnapshot> trace{{0.0, 2, 2, 3}, {1.0, 1, 1, 1}};
    const auto recs = run_loop(trace, PubSubParams{}, MonitorPolicy{}, tight);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].outcome == Outcome::evaluation_failed);
    CHECK_FALSE(recs[0].failure.empty());
    CHECK(recs[1].outcome == Outcome::compliant);
  }
  SUBCASE("invalid traces and policies are rejected") {
    const std::vector<WorkloadSnapshot> backwards{{1.0, 2, 2, 3}, {1.0, 2, 2, 3}};
    CHECK_THROWS_AS(run_loop(backwards, PubSubParams{}, MonitorPolicy{}), validation_error);
    const std::vector<WorkloadSnapshot> empty_pop{{1.0, 0, 2, 3}};
    CHECK_THROWS_AS(run_loop(empty_pop, PubSubParams{}, MonitorPolicy{}), validation_error);
    MonitorPolicy low_cap;
    low_cap.broker_memory_cap = 1;
    CHECK_THROWS_AS(run_loop(one, PubSubParams{}, low_cap), validation_error);
    MonitorPolicy no_actions;
    no_actions.action_order.clear();
    CHECK_THROWS_AS(run_loop(one, PubSubParams{}, no_actions), validation_error);
  }
}

TEST_CASE("run_loop properties") {
  const std::vector<WorkloadSnapshot> trace{
      {0.0, 2, 2, 3}, {1.0, 2, 2, 4}, {2.0, 1, 2, 2}, {3.0, 2, 1, 3}};
  MonitorPolicy policy;
  policy.max_accept_publication_rt = 2.0;
  policy.max_notification_rt = 3.0;
  policy.qos_reduction_allowed = true;
  policy.network_buffer_cap = 4;
  policy.broker_memory_cap = 4;

  const auto first = run_loop(trace, PubSubParams{}, policy);
  CHECK(first == run_loop(trace, PubSubParams{}, policy));

  PubSubParams prev{};
  for (const auto& r : first) {
    CHECK(static_cast<int>(r.actions.size()) <= policy.max_actions_per_snapshot);
    CHECK(r.params_after.net_recv_buffer >= prev.net_recv_buffer);
    CHECK(r.params_after.net_send_buffer >= prev.net_send_buffer);
    CHECK(r.params_after.broker_memory >= prev.broker_memory);
    CHECK(r.params_after.qos_level <= prev.qos_level);
    if (r.outcome == Outcome::compliant) {
      CHECK(*r.after->accept_publication <= policy.max_accept_publication_rt);
      CHECK(*r.after->notification <= policy.max_notification_rt);
    }
    prev = r.params_after;
  }
}
