#include "spnperf/pubsub.hpp"

#include <cmath>
#include <string>

namespace spnperf::pubsub {

const std::array<std::string_view, kNumPlaces> kPlaceNames{
    "PublishersIdle",       "PubConnecting",     "PublishersConnected",  "SubscribersIdle",
    "SubConnecting",        "SubscribersConnected", "Subscribed",        "BrokerCapacity",
    "Topics",               "EventToPublish",    "PubRequest",           "PubAccepted",
    "PublishedEvent",       "SubQoSProcessing",  "BrokerMemory",         "NetworkReceiveBuffer",
    "NetworkSendBuffer",    "ReceivedEventCapacity",
};

const std::array<std::string_view, kNumTransitions> kTransitionNames{
    "connectPub", "acceptPubConn", "disconnectPub", "connectSub",       "acceptSubConn",
    "disconnectSub", "subscribe",  "unsubscribe",   "publish",          "acceptPub",
    "pubQoSProcessing", "notify",  "consume",
};

PubSubParams PubSubParams::scaled_rates(double k) const {
  PubSubParams p = *this;
  for (double* r : {&p.r_connect_pub, &p.r_connect_sub, &p.r_accept_conn, &p.r_disconnect_pub,
                    &p.r_disconnect_sub, &p.r_subscribe, &p.r_unsubscribe, &p.r_publish,
                    &p.r_accept_pub, &p.r_pub_qos, &p.r_notify, &p.r_consume})
    *r *= k;
  return p;
}

std::vector<std::string> validate_params(const PubSubParams& p) {
  std::vector<std::string> out;
  const std::pair<const char*, int> ints[] = {
      {"n_publishers", p.n_publishers},
      {"n_subscribers", p.n_subscribers},
      {"n_topics", p.n_topics},
      {"n_events", p.n_events},
      {"broker_capacity", p.broker_capacity},
      {"broker_memory", p.broker_memory},
      {"net_recv_buffer", p.net_recv_buffer},
      {"net_send_buffer", p.net_send_buffer},
      {"received_event_capacity", p.received_event_capacity},
  };
  for (const auto& [name, v] : ints)
    if (v < 1) out.push_back(std::string(name) + " must be >= 1 (got " + std::to_string(v) + ")");
  const std::pair<const char*, double> rates[] = {
      {"r_connect_pub", p.r_connect_pub},       {"r_connect_sub", p.r_connect_sub},
      {"r_accept_conn", p.r_accept_conn},       {"r_disconnect_pub", p.r_disconnect_pub},
      {"r_disconnect_sub", p.r_disconnect_sub}, {"r_subscribe", p.r_subscribe},
      {"r_unsubscribe", p.r_unsubscribe},       {"r_publish", p.r_publish},
      {"r_accept_pub", p.r_accept_pub},         {"r_pub_qos", p.r_pub_qos},
      {"r_notify", p.r_notify},                 {"r_consume", p.r_consume},
  };
  for (const auto& [name, v] : rates)
    if (!(v > 0.0) || !std::isfinite(v))
      out.push_back(std::string(name) + " must be a positive finite rate");
  if (p.qos_level < 0 || p.qos_level > 2)
    out.push_back("qos_level must be 0, 1 or 2 (got " + std::to_string(p.qos_level) + ")");
  return out;
}

void require_valid(const PubSubParams& params) {
  auto v = validate_params(params);
  if (!v.empty()) {
    std::string msg = "invalid pub/sub parameters: " + v.front();
    throw validation_error(msg, std::move(v));
  }
}

SpnNet build_pubsub_net(const PubSubParams& p) {
  require_valid(p);
  NetBuilder b;
  const int initial[kNumPlaces] = {
      p.n_publishers, 0, 0, p.n_subscribers, 0, 0, 0, p.broker_capacity, p.n_topics,
      p.n_events,     0, 0, 0, 0,             p.broker_memory, p.net_recv_buffer,
      p.net_send_buffer, p.received_event_capacity,
  };
  for (std::size_t i = 0; i < kNumPlaces; ++i) b.add_place(std::string(kPlaceNames[i]), initial[i]);

  constexpr auto inf = ServerSemantics::infinite_server;
  constexpr auto single = ServerSemantics::single_server;
  b.add_transition("connectPub", p.r_connect_pub, 0, inf);
  b.add_transition("acceptPubConn", p.r_accept_conn, 0, single);
  b.add_transition("disconnectPub", p.r_disconnect_pub, 0, single);
  b.add_transition("connectSub", p.r_connect_sub, 0, inf);
  b.add_transition("acceptSubConn", p.r_accept_conn, 0, single);
  b.add_transition("disconnectSub", p.r_disconnect_sub, 0, single);
  b.add_transition("subscribe", p.r_subscribe, 0, inf);
  b.add_transition("unsubscribe", p.r_unsubscribe, 0, single);
  b.add_transition("publish", p.r_publish, 0, inf);
  b.add_transition("acceptPub", p.r_accept_pub, 0, single);
  b.add_transition("pubQoSProcessing", p.effective_pub_qos_rate(), 0, single);
  b.add_transition("notify", p.r_notify, 0, single);
  b.add_transition("consume", p.r_consume, 0, single);

  // connection / disconnection
  b.pre("PublishersIdle", "connectPub").post("PubConnecting", "connectPub");
  b.pre("PubConnecting", "acceptPubConn").pre("BrokerCapacity", "acceptPubConn");
  b.post("PublishersConnected", "acceptPubConn");
  b.pre("PublishersConnected", "disconnectPub");
  b.post("PublishersIdle", "disconnectPub").post("BrokerCapacity", "disconnectPub");
  b.pre("SubscribersIdle", "connectSub").post("SubConnecting", "connectSub");
  b.pre("SubConnecting", "acceptSubConn").pre("BrokerCapacity", "acceptSubConn");
  b.post("SubscribersConnected", "acceptSubConn");
  b.pre("SubscribersConnected", "disconnectSub");
  b.post("SubscribersIdle", "disconnectSub").post("BrokerCapacity", "disconnectSub");

  // subscription; Topics only gates
  b.pre("SubscribersConnected", "subscribe").pre("Topics", "subscribe");
  b.post("Subscribed", "subscribe").post("Topics", "subscribe");
  b.pre("Subscribed", "unsubscribe").post("SubscribersConnected", "unsubscribe");

  // publication
  b.pre("PublishersConnected", "publish").pre("EventToPublish", "publish");
  b.post("PublishersConnected", "publish").post("PubRequest", "publish");
  b.pre("PubRequest", "acceptPub").pre("BrokerMemory", "acceptPub");
  b.pre("NetworkReceiveBuffer", "acceptPub").post("PubAccepted", "acceptPub");
  b.pre("PubAccepted", "pubQoSProcessing");
  b.post("PublishedEvent", "pubQoSProcessing").post("NetworkReceiveBuffer", "pubQoSProcessing");

  // notification; Subscribed only gates
  b.pre("PublishedEvent", "notify").pre("NetworkSendBuffer", "notify");
  b.pre("ReceivedEventCapacity", "notify").pre("Subscribed", "notify");
  b.post("SubQoSProcessing", "notify").post("Subscribed", "notify");
  b.pre("SubQoSProcessing", "consume");
  b.post("EventToPublish", "consume").post("NetworkSendBuffer", "consume");
  b.post("BrokerMemory", "consume").post("ReceivedEventCapacity", "consume");

  return b.build();
}

std::vector<PlaceInvariant> p_invariants(const PubSubParams& p) {
  auto make = [](std::string label, std::initializer_list<Place> places, long long expected) {
    PlaceInvariant inv{std::move(label), std::vector<int>(kNumPlaces, 0), expected};
    for (auto pl : places) inv.weights[index(pl)] = 1;
    return inv;
  };
  using P = Place;
  return {
      make("publishers", {P::PublishersIdle, P::PubConnecting, P::PublishersConnected},
           p.n_publishers),
      make("subscribers",
           {P::SubscribersIdle, P::SubConnecting, P::SubscribersConnected, P::Subscribed},
           p.n_subscribers),
      make("broker_capacity",
           {P::BrokerCapacity, P::PublishersConnected, P::SubscribersConnected, P::Subscribed},
           p.broker_capacity),
      make("events",
           {P::EventToPublish, P::PubRequest, P::PubAccepted, P::PublishedEvent,
            P::SubQoSProcessing},
           p.n_events),
      make("net_recv_buffer", {P::NetworkReceiveBuffer, P::PubAccepted}, p.net_recv_buffer),
      make("net_send_buffer", {P::NetworkSendBuffer, P::SubQoSProcessing}, p.net_send_buffer),
      make("broker_memory",
           {P::BrokerMemory, P::PubAccepted, P::PublishedEvent, P::SubQoSProcessing},
           p.broker_memory),
      make("received_event_capacity", {P::ReceivedEventCapacity, P::SubQoSProcessing},
           p.received_event_capacity),
      make("topics", {P::Topics}, p.n_topics),
  };
}

MetricsReport headline_metrics(const Ctmc& ctmc, const StationaryDistribution& dist) {
  MetricsReport r = basic_metrics(ctmc, dist);
  const auto tokens = [&](Place p) { return r.mean_tokens.at(std::string(kPlaceNames[index(p)])); };
  const auto flow = [&](Transition t) {
    return r.transition_throughputs.at(std::string(kTransitionNames[index(t)]));
  };
  r.response_times[std::string(kAcceptPublicationRt)] = response_time_little(
      tokens(Place::PubRequest) + tokens(Place::PubAccepted), flow(Transition::publish));
  r.response_times[std::string(kNotificationRt)] =
      response_time_little(tokens(Place::PubRequest) + tokens(Place::PubAccepted) +
                               tokens(Place::PublishedEvent) + tokens(Place::SubQoSProcessing),
                           flow(Transition::publish));
  r.response_times[std::string(kNotificationDeliveryRt)] =
      response_time_little(tokens(Place::PublishedEvent) + tokens(Place::SubQoSProcessing),
                           flow(Transition::pubQoSProcessing));
  return r;
}

std::optional<Factor> parse_factor(std::string_view name) {
  if (name == "net_recv_buffer") return Factor::net_recv_buffer;
  if (name == "net_send_buffer") return Factor::net_send_buffer;
  if (name == "network_buffer" || name == "network_buffers") return Factor::network_buffers;
  if (name == "broker_memory") return Factor::broker_memory;
  if (name == "broker_capacity") return Factor::broker_capacity;
  if (name == "received_event_capacity") return Factor::received_event_capacity;
  if (name == "r_pub_qos") return Factor::r_pub_qos;
  return std::nullopt;
}

std::string_view to_string(Factor f) {
  switch (f) {
    case Factor::net_recv_buffer: return "net_recv_buffer";
    case Factor::net_send_buffer: return "net_send_buffer";
    case Factor::network_buffers: return "network_buffer";
    case Factor::broker_memory: return "broker_memory";
    case Factor::broker_capacity: return "broker_capacity";
    case Factor::received_event_capacity: return "received_event_capacity";
    case Factor::r_pub_qos: return "r_pub_qos";
  }
  return "?";
}

bool is_integer_factor(Factor f) { return f != Factor::r_pub_qos; }

double get_factor(const PubSubParams& p, Factor f) {
  switch (f) {
    case Factor::net_recv_buffer:
    case Factor::network_buffers: return p.net_recv_buffer;
    case Factor::net_send_buffer: return p.net_send_buffer;
    case Factor::broker_memory: return p.broker_memory;
    case Factor::broker_capacity: return p.broker_capacity;
    case Factor::received_event_capacity: return p.received_event_capacity;
    case Factor::r_pub_qos: return p.r_pub_qos;
  }
  return 0.0;
}

PubSubParams set_factor(const PubSubParams& params, Factor f, double value) {
  if (!std::isfinite(value) || !(value > 0.0))
    throw domain_error(std::string(to_string(f)) + " must be positive, got " +
                       std::to_string(value));
  PubSubParams p = params;
  if (f == Factor::r_pub_qos) {
    p.r_pub_qos = value;
    return p;
  }
  if (value != std::floor(value) || value > 1e9)
    throw domain_error(std::string(to_string(f)) + " must be a positive integer, got " +
                       std::to_string(value));
  const int v = static_cast<int>(value);
  switch (f) {
    case Factor::net_recv_buffer: p.net_recv_buffer = v; break;
    case Factor::net_send_buffer: p.net_send_buffer = v; break;
    case Factor::network_buffers:
      p.net_recv_buffer = v;
      p.net_send_buffer = v;
      break;
    case Factor::broker_memory: p.broker_memory = v; break;
    case Factor::broker_capacity: p.broker_capacity = v; break;
    case Factor::received_event_capacity: p.received_event_capacity = v; break;
    case Factor::r_pub_qos: break;
  }
  return p;
}

}  // namespace spnperf::pubsub
