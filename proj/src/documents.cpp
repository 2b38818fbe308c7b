#include "spnperf/documents.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <map>
#include <set>

namespace spnperf::documents {

using pubsub::PubSubParams;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw validation_error(msg); }

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where + ": expected a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail(where + ": unknown key '" + key + "'");
  }
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (v.is_number_integer()) {
    const auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
      fail(where + "." + key + ": out of range");
    return static_cast<int>(x);
  }
  fail(where + "." + key + ": expected an integer");
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number()) fail(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail(where + ": missing '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_string()) fail(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

const char* semantics_name(ServerSemantics s) {
  return s == ServerSemantics::single_server ? "single_server" : "infinite_server";
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(source + ": malformed JSON: " + e.what());
  }
}

json net_to_json(const SpnNet& net) {
  json places = json::array();
  for (const auto& p : net.places()) places.push_back({{"name", p.name}, {"initial", p.initial_tokens}});
  json transitions = json::array();
  for (const auto& t : net.transitions())
    transitions.push_back({{"name", t.name},
                           {"rate", t.rate},
                           {"priority", t.priority},
                           {"semantics", semantics_name(t.semantics)}});
  json arcs = json::array();
  for (std::size_t t = 0; t < net.num_transitions(); ++t) {
    for (std::size_t p = 0; p < net.num_places(); ++p) {
      const std::pair<const char*, int> kinds[] = {
          {"pre", net.pre().at(p, t)}, {"post", net.post().at(p, t)}, {"inhibitor", net.inh().at(p, t)}};
      for (const auto& [kind, w] : kinds)
        if (w != 0)
          arcs.push_back({{"place", net.place(p).name},
                          {"transition", net.transition(t).name},
                          {"kind", kind},
                          {"weight", w}});
    }
  }
  return {{"places", places}, {"transitions", transitions}, {"arcs", arcs}};
}

SpnNet net_from_json(const json& doc) {
  require_object(doc, "net");
  reject_unknown(doc, {"places", "transitions", "arcs"}, "net");
  for (const char* key : {"places", "transitions"})
    if (!doc.contains(key) || !doc.at(key).is_array()) fail(std::string("net: '") + key + "' must be an array");

  std::vector<PlaceSpec> places;
  std::map<std::string, std::size_t> place_ix;
  for (const auto& p : doc.at("places")) {
    require_object(p, "place");
    reject_unknown(p, {"name", "initial"}, "place");
    PlaceSpec spec{get_string(p, "name", "place"), p.contains("initial") ? get_int(p, "initial", "place") : 0};
    place_ix.try_emplace(spec.name, places.size());
    places.push_back(std::move(spec));
  }
  std::vector<TransitionSpec> transitions;
  std::map<std::string, std::size_t> trans_ix;
  for (const auto& t : doc.at("transitions")) {
    require_object(t, "transition");
    reject_unknown(t, {"name", "rate", "priority", "semantics"}, "transition");
    TransitionSpec spec;
    spec.name = get_string(t, "name", "transition");
    const std::string where = "transition '" + spec.name + "'";
    if (!t.contains("rate")) fail(where + ": missing 'rate'");
    spec.rate = get_number(t, "rate", where);
    if (t.contains("priority")) spec.priority = get_int(t, "priority", where);
    if (t.contains("semantics")) {
      const auto s = get_string(t, "semantics", where);
      if (s == "single_server")
        spec.semantics = ServerSemantics::single_server;
      else if (s == "infinite_server")
        spec.semantics = ServerSemantics::infinite_server;
      else
        fail(where + ": unknown semantics '" + s + "'");
    }
    trans_ix.try_emplace(spec.name, transitions.size());
    transitions.push_back(std::move(spec));
  }

  ArcMatrix pre(places.size(), transitions.size());
  ArcMatrix post(places.size(), transitions.size());
  ArcMatrix inh(places.size(), transitions.size());
  if (doc.contains("arcs")) {
    if (!doc.at("arcs").is_array()) fail("net: 'arcs' must be an array");
    for (const auto& a : doc.at("arcs")) {
      require_object(a, "arc");
      reject_unknown(a, {"place", "transition", "kind", "weight"}, "arc");
      const auto pname = get_string(a, "place", "arc");
      const auto tname = get_string(a, "transition", "arc");
      const auto kind = get_string(a, "kind", "arc");
      const int w = a.contains("weight") ? get_int(a, "weight", "arc") : 1;
      const auto pi = place_ix.find(pname);
      if (pi == place_ix.end()) fail("arc: unknown place '" + pname + "'");
      const auto ti = trans_ix.find(tname);
      if (ti == trans_ix.end()) fail("arc: unknown transition '" + tname + "'");
      if (w < 0) fail("arc (" + pname + ", " + tname + "): negative weight");
      const auto p = pi->second, t = ti->second;
      if (kind == "pre") {
        pre.set(p, t, pre.at(p, t) + w);
      } else if (kind == "post") {
        post.set(p, t, post.at(p, t) + w);
      } else if (kind == "inhibitor") {
        if (inh.at(p, t) != 0) fail("arc (" + pname + ", " + tname + "): duplicate inhibitor arc");
        inh.set(p, t, w);
      } else {
        fail("arc (" + pname + ", " + tname + "): unknown kind '" + kind + "'");
      }
    }
  }
  return SpnNet(std::move(places), std::move(transitions), std::move(pre), std::move(post),
                std::move(inh));
}

namespace {

struct IntField {
  const char* name;
  int PubSubParams::*field;
};
struct RateField {
  const char* name;
  double PubSubParams::*field;
};

constexpr IntField kPopulationFields[] = {
    {"n_publishers", &PubSubParams::n_publishers},
    {"n_subscribers", &PubSubParams::n_subscribers},
    {"n_topics", &PubSubParams::n_topics},
    {"n_events", &PubSubParams::n_events},
};
constexpr IntField kFactorFields[] = {
    {"broker_capacity", &PubSubParams::broker_capacity},
    {"broker_memory", &PubSubParams::broker_memory},
    {"net_recv_buffer", &PubSubParams::net_recv_buffer},
    {"net_send_buffer", &PubSubParams::net_send_buffer},
    {"received_event_capacity", &PubSubParams::received_event_capacity},
};
constexpr RateField kRateFields[] = {
    {"r_connect_pub", &PubSubParams::r_connect_pub},
    {"r_connect_sub", &PubSubParams::r_connect_sub},
    {"r_accept_conn", &PubSubParams::r_accept_conn},
    {"r_disconnect_pub", &PubSubParams::r_disconnect_pub},
    {"r_disconnect_sub", &PubSubParams::r_disconnect_sub},
    {"r_subscribe", &PubSubParams::r_subscribe},
    {"r_unsubscribe", &PubSubParams::r_unsubscribe},
    {"r_publish", &PubSubParams::r_publish},
    {"r_accept_pub", &PubSubParams::r_accept_pub},
    {"r_pub_qos", &PubSubParams::r_pub_qos},
    {"r_notify", &PubSubParams::r_notify},
    {"r_consume", &PubSubParams::r_consume},
};

template <typename Fields>
void read_int_section(const json& doc, const char* section, const Fields& fields, PubSubParams& p) {
  if (!doc.contains(section)) return;
  const auto& s = doc.at(section);
  require_object(s, section);
  for (const auto& [key, _] : s.items()) {
    bool known = false;
    for (const auto& f : fields)
      if (key == f.name) {
        p.*(f.field) = get_int(s, key, section);
        known = true;
      }
    if (!known) fail(std::string(section) + ": unknown key '" + key + "'");
  }
}

}  // namespace

json params_to_json(const PubSubParams& p) {
  json pops, factors, rates;
  for (const auto& f : kPopulationFields) pops[f.name] = p.*(f.field);
  for (const auto& f : kFactorFields) factors[f.name] = p.*(f.field);
  for (const auto& f : kRateFields) rates[f.name] = p.*(f.field);
  return {{"populations", pops}, {"factors", factors}, {"rates", rates}, {"qos_level", p.qos_level}};
}

PubSubParams params_from_json(const json& doc) {
  require_object(doc, "params");
  reject_unknown(doc, {"populations", "factors", "rates", "qos_level"}, "params");
  PubSubParams p;
  read_int_section(doc, "populations", kPopulationFields, p);
  read_int_section(doc, "factors", kFactorFields, p);
  if (doc.contains("rates")) {
    const auto& s = doc.at("rates");
    require_object(s, "rates");
    for (const auto& [key, _] : s.items()) {
      bool known = false;
      for (const auto& f : kRateFields)
        if (key == f.name) {
          p.*(f.field) = get_number(s, key, "rates");
          known = true;
        }
      if (!known) fail("rates: unknown key '" + key + "'");
    }
  }
  if (doc.contains("qos_level")) p.qos_level = get_int(doc, "qos_level", "params");
  pubsub::require_valid(p);
  return p;
}

namespace {

double threshold_from(const json& t, const char* key) {
  if (!t.contains(key) || t.at(key).is_null()) return std::numeric_limits<double>::infinity();
  return get_number(t, key, "thresholds");
}

}  // namespace

monitor::MonitorPolicy policy_from_json(const json& doc) {
  require_object(doc, "policy");
  reject_unknown(doc,
                 {"thresholds", "action_order", "step", "qos_reduction_allowed", "caps",
                  "max_actions_per_snapshot"},
                 "policy");
  monitor::MonitorPolicy policy;
  if (doc.contains("thresholds")) {
    const auto& t = doc.at("thresholds");
    require_object(t, "thresholds");
    reject_unknown(t, {"accept_publication_response_time", "notification_response_time"},
                   "thresholds");
    policy.max_accept_publication_rt = threshold_from(t, "accept_publication_response_time");
    policy.max_notification_rt = threshold_from(t, "notification_response_time");
  }
  if (doc.contains("action_order")) {
    const auto& a = doc.at("action_order");
    if (!a.is_array()) fail("policy.action_order: expected an array");
    policy.action_order.clear();
    for (const auto& item : a) {
      if (!item.is_string()) fail("policy.action_order: expected action names");
      const auto act = monitor::parse_action(item.get<std::string>());
      if (!act) fail("policy.action_order: unknown action '" + item.get<std::string>() + "'");
      policy.action_order.push_back(*act);
    }
  }
  if (doc.contains("step")) policy.step = get_number(doc, "step", "policy");
  if (doc.contains("qos_reduction_allowed")) {
    if (!doc.at("qos_reduction_allowed").is_boolean())
      fail("policy.qos_reduction_allowed: expected a boolean");
    policy.qos_reduction_allowed = doc.at("qos_reduction_allowed").get<bool>();
  }
  if (doc.contains("caps")) {
    const auto& c = doc.at("caps");
    require_object(c, "caps");
    reject_unknown(c, {"network_buffers", "broker_memory"}, "caps");
    if (c.contains("network_buffers")) policy.network_buffer_cap = get_int(c, "network_buffers", "caps");
    if (c.contains("broker_memory")) policy.broker_memory_cap = get_int(c, "broker_memory", "caps");
  }
  if (doc.contains("max_actions_per_snapshot"))
    policy.max_actions_per_snapshot = get_int(doc, "max_actions_per_snapshot", "policy");
  return policy;
}

namespace {

json threshold_json(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

}  // namespace

json policy_to_json(const monitor::MonitorPolicy& policy) {
  json order = json::array();
  for (auto a : policy.action_order) order.push_back(std::string(monitor::to_string(a)));
  return {{"thresholds",
           {{"accept_publication_response_time", threshold_json(policy.max_accept_publication_rt)},
            {"notification_response_time", threshold_json(policy.max_notification_rt)}}},
          {"action_order", order},
          {"step", policy.step},
          {"qos_reduction_allowed", policy.qos_reduction_allowed},
          {"caps",
           {{"network_buffers", policy.network_buffer_cap},
            {"broker_memory", policy.broker_memory_cap}}},
          {"max_actions_per_snapshot", policy.max_actions_per_snapshot}};
}

std::vector<monitor::WorkloadSnapshot> trace_from_jsonl(std::istream& in) {
  std::vector<monitor::WorkloadSnapshot> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "trace line " + std::to_string(lineno);
    const json j = parse_json(line, where);
    require_object(j, where);
    reject_unknown(j, {"t", "publishers", "subscribers", "events"}, where);
    for (const char* key : {"t", "publishers", "subscribers", "events"})
      if (!j.contains(key)) fail(where + ": missing '" + key + "'");
    out.push_back({get_number(j, "t", where), get_int(j, "publishers", where),
                   get_int(j, "subscribers", where), get_int(j, "events", where)});
  }
  return out;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json headline_json(const std::optional<monitor::HeadlineTimes>& h) {
  if (!h) return nullptr;
  return {{std::string(pubsub::kAcceptPublicationRt), optional_number(h->accept_publication)},
          {std::string(pubsub::kNotificationRt), optional_number(h->notification)}};
}

}  // namespace

json metrics_to_json(const MetricsReport& report) {
  json rt = json::object();
  for (const auto& [name, v] : report.response_times) rt[name] = optional_number(v);
  return {{"state_count", report.state_count},
          {"residual", report.residual},
          {"transition_throughputs", report.transition_throughputs},
          {"mean_tokens", report.mean_tokens},
          {"response_times", rt}};
}

json decision_to_json(const monitor::DecisionRecord& r) {
  json actions = json::array();
  for (auto a : r.actions) actions.push_back(std::string(monitor::to_string(a)));
  json out = {{"t", r.timestamp},
              {"before", headline_json(r.before)},
              {"after", headline_json(r.after)},
              {"actions", actions},
              {"outcome", std::string(monitor::to_string(r.outcome))},
              {"params", params_to_json(r.params_after)}};
  if (!r.failure.empty()) out["failure"] = r.failure;
  return out;
}

}  // namespace spnperf::documents
