#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "spnperf/net.hpp"
#include "spnperf/reachability.hpp"
#include "spnperf/solver.hpp"

namespace spnperf::pubsub {

// Places of the composed publish/subscribe net, in net order.
enum class Place : std::size_t {
  PublishersIdle,
  PubConnecting,
  PublishersConnected,
  SubscribersIdle,
  SubConnecting,
  SubscribersConnected,
  Subscribed,
  BrokerCapacity,
  Topics,
  EventToPublish,
  PubRequest,
  PubAccepted,
  PublishedEvent,
  SubQoSProcessing,
  BrokerMemory,
  NetworkReceiveBuffer,
  NetworkSendBuffer,
  ReceivedEventCapacity,
};

enum class Transition : std::size_t {
  connectPub,
  acceptPubConn,
  disconnectPub,
  connectSub,
  acceptSubConn,
  disconnectSub,
  subscribe,
  unsubscribe,
  publish,
  acceptPub,
  pubQoSProcessing,
  notify,
  consume,
};

inline constexpr std::size_t kNumPlaces = 18;
inline constexpr std::size_t kNumTransitions = 13;

extern const std::array<std::string_view, kNumPlaces> kPlaceNames;
extern const std::array<std::string_view, kNumTransitions> kTransitionNames;

constexpr std::size_t index(Place p) { return static_cast<std::size_t>(p); }
constexpr std::size_t index(Transition t) { return static_cast<std::size_t>(t); }

inline constexpr std::string_view kAcceptPublicationRt = "accept_publication_response_time";
inline constexpr std::string_view kNotificationRt = "notification_response_time";
inline constexpr std::string_view kNotificationDeliveryRt = "notification_delivery_time";

// QoS level 0/1/2 scales the publication QoS processing rate by 4, 1, 0.5.
inline constexpr std::array<double, 3> kQosRateMultiplier{4.0, 1.0, 0.5};

struct PubSubParams {
  // populations
  int n_publishers = 2;
  int n_subscribers = 2;
  int n_topics = 1;
  int n_events = 3;
  // influencing factors
  int broker_capacity = 4;
  int broker_memory = 2;
  int net_recv_buffer = 1;
  int net_send_buffer = 1;
  int received_event_capacity = 2;
  // rates per time unit
  double r_connect_pub = 1.0;
  double r_connect_sub = 1.0;
  double r_accept_conn = 5.0;
  double r_disconnect_pub = 0.1;
  double r_disconnect_sub = 0.1;
  double r_subscribe = 1.0;
  double r_unsubscribe = 0.1;
  double r_publish = 2.0;
  double r_accept_pub = 4.0;
  double r_pub_qos = 1.0;
  double r_notify = 4.0;
  double r_consume = 2.0;
  // The effective pubQoSProcessing rate is r_pub_qos * kQosRateMultiplier[qos_level].
  int qos_level = 1;

  double effective_pub_qos_rate() const { return r_pub_qos * kQosRateMultiplier.at(qos_level); }
  // Copy with every rate multiplied by k.
  PubSubParams scaled_rates(double k) const;

  bool operator==(const PubSubParams&) const = default;
};

// Violations as text; empty means valid.
std::vector<std::string> validate_params(const PubSubParams& params);
// Throws validation_error.
void require_valid(const PubSubParams& params);

SpnNet build_pubsub_net(const PubSubParams& params);

struct PlaceInvariant {
  std::string label;
  std::vector<int> weights;  // one per place
  long long expected;
};

std::vector<PlaceInvariant> p_invariants(const PubSubParams& params);

// Throughputs and mean tokens of every node plus Little's-law response times:
//   accept publication    = (PubRequest + PubAccepted) / X(publish)
//     issuance of a publication until its QoS processing completes
//   notification          = (PubRequest + PubAccepted + PublishedEvent
//                            + SubQoSProcessing) / X(publish)
//     issuance of a publication until a subscriber has consumed it
//   notification delivery = (PublishedEvent + SubQoSProcessing) / X(pubQoSProcessing)
//     the broker-to-subscriber leg alone
MetricsReport headline_metrics(const Ctmc& ctmc, const StationaryDistribution& dist);

enum class Factor {
  net_recv_buffer,
  net_send_buffer,
  network_buffers,  // both network buffers together
  broker_memory,
  broker_capacity,
  received_event_capacity,
  r_pub_qos,
};

std::optional<Factor> parse_factor(std::string_view name);
std::string_view to_string(Factor f);
bool is_integer_factor(Factor f);

// Reads the factor; for network_buffers the receive buffer.
double get_factor(const PubSubParams& params, Factor f);

// Copy of params with one factor replaced. Integer factors require an
// integral value >= 1; r_pub_qos a positive finite rate. domain_error otherwise.
PubSubParams set_factor(const PubSubParams& params, Factor f, double value);

}  // namespace spnperf::pubsub
