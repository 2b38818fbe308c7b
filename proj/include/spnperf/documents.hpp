#pragma once

// JSON document formats used by the command-line tool.
//
//   net document     {"places": [{"name", "initial"}],
//                     "transitions": [{"name", "rate", "priority", "semantics"}],
//                     "arcs": [{"place", "transition", "kind", "weight"}]}
//   params document  {"populations": {...}, "factors": {...}, "rates": {...}, "qos_level"}
//   policy document  {"thresholds": {...}, "action_order": [...], "step",
//                     "qos_reduction_allowed", "caps": {...}, "max_actions_per_snapshot"}
//   workload trace   JSON Lines, one {"t", "publishers", "subscribers", "events"} per line
//
// Unknown keys are rejected everywhere. Parse failures throw validation_error.

#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spnperf/monitor.hpp"
#include "spnperf/net.hpp"
#include "spnperf/pubsub.hpp"
#include "spnperf/simulator.hpp"
#include "spnperf/solver.hpp"

namespace spnperf::documents {

using nlohmann::json;

json net_to_json(const SpnNet& net);
SpnNet net_from_json(const json& doc);

json params_to_json(const pubsub::PubSubParams& params);
pubsub::PubSubParams params_from_json(const json& doc);

monitor::MonitorPolicy policy_from_json(const json& doc);
json policy_to_json(const monitor::MonitorPolicy& policy);

std::vector<monitor::WorkloadSnapshot> trace_from_jsonl(std::istream& in);

json metrics_to_json(const MetricsReport& report);
json decision_to_json(const monitor::DecisionRecord& record);

// Whole-document parse with a validation_error on malformed JSON.
json parse_json(const std::string& text, const std::string& source);

}  // namespace spnperf::documents
