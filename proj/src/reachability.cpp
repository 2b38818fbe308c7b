#include "spnperf/reachability.hpp"

#include <unordered_map>

namespace spnperf {

Ctmc explore(const SpnNet& net, std::size_t max_states) {
  require_valid(net);
  Ctmc out{net, {}, {}, {}};
  std::unordered_map<Marking, std::size_t, MarkingHash> index;

  auto intern = [&](Marking m) -> std::size_t {
    auto [it, inserted] = index.try_emplace(m, out.states.size());
    if (inserted) {
      out.states.push_back(std::move(m));
      if (out.states.size() > max_states)
        throw explosion_error("state space exceeds max_states=" + std::to_string(max_states) +
                                  " (reached " + std::to_string(out.states.size()) + ")",
                              out.states.size());
    }
    return it->second;
  };

  intern(net.initial_marking());
  // The states vector doubles as the BFS queue.
  for (std::size_t s = 0; s < out.states.size(); ++s) {
    const auto enabled = enabled_transitions(net, out.states[s]);
    if (enabled.empty()) {
      out.deadlock_states.push_back(s);
      continue;
    }
    for (auto t : enabled) {
      const double rate = detail::rate_unchecked(net, out.states[s], t);
      Marking next = detail::fire_unchecked(net, out.states[s], t);
      const std::size_t target = intern(std::move(next));
      out.edges.push_back({s, target, rate, t});
    }
  }
  return out;
}

std::optional<std::size_t> check_place_invariant(const Ctmc& ctmc, const std::vector<int>& weights,
                                                 long long expected) {
  if (weights.size() != ctmc.net.num_places())
    throw dimension_error("invariant has " + std::to_string(weights.size()) +
                          " weights, net has " + std::to_string(ctmc.net.num_places()) +
                          " places");
  for (std::size_t s = 0; s < ctmc.states.size(); ++s) {
    long long sum = 0;
    for (std::size_t p = 0; p < weights.size(); ++p)
      sum += static_cast<long long>(weights[p]) * ctmc.states[s][p];
    if (sum != expected) return s;
  }
  return std::nullopt;
}

}  // namespace spnperf
