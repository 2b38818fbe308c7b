#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spnperf/errors.hpp"

namespace spnperf {

enum class ServerSemantics { single_server, infinite_server };

struct PlaceSpec {
  std::string name;
  int initial_tokens = 0;

  bool operator==(const PlaceSpec&) const = default;
};

struct TransitionSpec {
  std::string name;
  double rate = 1.0;
  int priority = 0;
  ServerSemantics semantics = ServerSemantics::single_server;

  bool operator==(const TransitionSpec&) const = default;
};

// Dense (place x transition) matrix of non-negative integer arc weights.
class ArcMatrix {
 public:
  ArcMatrix() = default;
  ArcMatrix(std::size_t places, std::size_t transitions)
      : places_(places), transitions_(transitions), w_(places * transitions, 0) {}

  std::size_t places() const { return places_; }
  std::size_t transitions() const { return transitions_; }

  int at(std::size_t p, std::size_t t) const { return w_[p * transitions_ + t]; }
  void set(std::size_t p, std::size_t t, int w) { w_[p * transitions_ + t] = w; }

  bool operator==(const ArcMatrix&) const = default;

 private:
  std::size_t places_ = 0;
  std::size_t transitions_ = 0;
  std::vector<int> w_;
};

class Marking {
 public:
  Marking() = default;
  explicit Marking(std::vector<int> tokens) : tokens_(std::move(tokens)) {}
  Marking(std::initializer_list<int> tokens) : tokens_(tokens) {}

  std::size_t size() const { return tokens_.size(); }
  int operator[](std::size_t p) const { return tokens_[p]; }
  const std::vector<int>& tokens() const { return tokens_; }

  bool operator==(const Marking&) const = default;
  auto operator<=>(const Marking&) const = default;

 private:
  std::vector<int> tokens_;
};

struct MarkingHash {
  std::size_t operator()(const Marking& m) const noexcept {
    // FNV-1a over the token vector.
    std::uint64_t h = 1469598103934665603ULL;
    for (int v : m.tokens()) {
      h ^= static_cast<std::uint32_t>(v);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// Immutable stochastic Petri net: places, exponentially timed transitions,
// and the Pre/Post/Inh arc-weight matrices. An inhibitor weight of 0 means
// no inhibitor arc; otherwise the transition is disabled once the place
// holds at least that many tokens.
//
// Construction does not validate; call validate_net() before analysis.
class SpnNet {
 public:
  SpnNet(std::vector<PlaceSpec> places, std::vector<TransitionSpec> transitions,
         ArcMatrix pre, ArcMatrix post, ArcMatrix inh);

  std::size_t num_places() const { return places_.size(); }
  std::size_t num_transitions() const { return transitions_.size(); }

  const std::vector<PlaceSpec>& places() const { return places_; }
  const std::vector<TransitionSpec>& transitions() const { return transitions_; }
  const PlaceSpec& place(std::size_t p) const { return places_[p]; }
  const TransitionSpec& transition(std::size_t t) const { return transitions_[t]; }

  const ArcMatrix& pre() const { return pre_; }
  const ArcMatrix& post() const { return post_; }
  const ArcMatrix& inh() const { return inh_; }

  Marking initial_marking() const;

  std::optional<std::size_t> find_place(std::string_view name) const;
  std::optional<std::size_t> find_transition(std::string_view name) const;
  // Throwing variants (lookup_error).
  std::size_t place_index(std::string_view name) const;
  std::size_t transition_index(std::string_view name) const;

  // Copy of this net with a different initial marking.
  SpnNet with_initial_marking(const Marking& m) const;
  // Copy of this net with every rate multiplied by k.
  SpnNet with_scaled_rates(double k) const;

  bool operator==(const SpnNet& o) const {
    return places_ == o.places_ && transitions_ == o.transitions_ &&
           pre_ == o.pre_ && post_ == o.post_ && inh_ == o.inh_;
  }

 private:
  std::vector<PlaceSpec> places_;
  std::vector<TransitionSpec> transitions_;
  ArcMatrix pre_;
  ArcMatrix post_;
  ArcMatrix inh_;
};

// Incremental construction by name. Arcs may be added in any order;
// repeated pre/post arcs on the same pair accumulate.
class NetBuilder {
 public:
  std::size_t add_place(std::string name, int initial_tokens = 0);
  std::size_t add_transition(std::string name, double rate, int priority = 0,
                             ServerSemantics semantics = ServerSemantics::single_server);
  NetBuilder& pre(std::string_view place, std::string_view transition, int weight = 1);
  NetBuilder& post(std::string_view place, std::string_view transition, int weight = 1);
  NetBuilder& inhibitor(std::string_view place, std::string_view transition, int threshold);

  SpnNet build() const;

 private:
  struct Arc {
    std::size_t place;
    std::size_t transition;
    int weight;
    enum Kind { pre, post, inh } kind;
  };
  std::size_t place_of(std::string_view name) const;
  std::size_t transition_of(std::string_view name) const;

  std::vector<PlaceSpec> places_;
  std::vector<TransitionSpec> transitions_;
  std::vector<Arc> arcs_;
};

// Every violated SpnNet invariant, one human-readable line each. Empty means ok.
std::vector<std::string> validate_net(const SpnNet& net);

// Throws validation_error carrying the violations when the net is invalid.
void require_valid(const SpnNet& net);

// Transitions with enough input tokens and no active inhibitor arc.
std::vector<std::size_t> marking_enabled_transitions(const SpnNet& net, const Marking& m);

// Marking-enabled transitions restricted to the highest priority present.
std::vector<std::size_t> enabled_transitions(const SpnNet& net, const Marking& m);

bool is_enabled(const SpnNet& net, const Marking& m, std::size_t t);

Marking fire(const SpnNet& net, const Marking& m, std::size_t t);

// Effective exponential rate of t in m: the base rate for single-server,
// base rate times the enabling degree for infinite-server.
double rate_at(const SpnNet& net, const Marking& m, std::size_t t);

namespace detail {
// Skip the enabling check; callers guarantee t is enabled in m.
Marking fire_unchecked(const SpnNet& net, const Marking& m, std::size_t t);
double rate_unchecked(const SpnNet& net, const Marking& m, std::size_t t);
}  // namespace detail

}  // namespace spnperf
