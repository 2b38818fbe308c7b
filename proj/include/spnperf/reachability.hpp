#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "spnperf/net.hpp"

namespace spnperf {

inline constexpr std::size_t kDefaultMaxStates = 1'000'000;

struct CtmcEdge {
  std::size_t source;
  std::size_t target;
  double rate;
  std::size_t transition;

  bool operator==(const CtmcEdge&) const = default;
};

// Reachability graph of a bounded net labelled with exponential rates.
// State 0 is the initial marking; states are numbered in first-seen
// breadth-first order. Parallel edges are kept, one per transition.
struct Ctmc {
  SpnNet net;
  std::vector<Marking> states;
  std::vector<CtmcEdge> edges;
  std::vector<std::size_t> deadlock_states;

  std::size_t size() const { return states.size(); }
};

// Throws validation_error for an invalid net and explosion_error once more
// than max_states markings have been discovered.
Ctmc explore(const SpnNet& net, std::size_t max_states = kDefaultMaxStates);

// Index of the first state whose weighted token sum differs from expected,
// or nullopt when the invariant holds everywhere.
std::optional<std::size_t> check_place_invariant(const Ctmc& ctmc, const std::vector<int>& weights,
                                                 long long expected);

}  // namespace spnperf
