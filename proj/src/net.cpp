#include "spnperf/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace spnperf {

SpnNet::SpnNet(std::vector<PlaceSpec> places, std::vector<TransitionSpec> transitions,
               ArcMatrix pre, ArcMatrix post, ArcMatrix inh)
    : places_(std::move(places)),
      transitions_(std::move(transitions)),
      pre_(std::move(pre)),
      post_(std::move(post)),
      inh_(std::move(inh)) {}

Marking SpnNet::initial_marking() const {
  std::vector<int> tokens;
  tokens.reserve(places_.size());
  for (const auto& p : places_) tokens.push_back(p.initial_tokens);
  return Marking(std::move(tokens));
}

std::optional<std::size_t> SpnNet::find_place(std::string_view name) const {
  for (std::size_t i = 0; i < places_.size(); ++i)
    if (places_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> SpnNet::find_transition(std::string_view name) const {
  for (std::size_t i = 0; i < transitions_.size(); ++i)
    if (transitions_[i].name == name) return i;
  return std::nullopt;
}

std::size_t SpnNet::place_index(std::string_view name) const {
  if (auto i = find_place(name)) return *i;
  throw lookup_error("unknown place '" + std::string(name) + "'");
}

std::size_t SpnNet::transition_index(std::string_view name) const {
  if (auto i = find_transition(name)) return *i;
  throw lookup_error("unknown transition '" + std::string(name) + "'");
}

SpnNet SpnNet::with_initial_marking(const Marking& m) const {
  if (m.size() != places_.size())
    throw dimension_error("initial marking has " + std::to_string(m.size()) +
                          " entries, net has " + std::to_string(places_.size()) + " places");
  auto places = places_;
  for (std::size_t p = 0; p < places.size(); ++p) places[p].initial_tokens = m[p];
  return SpnNet(std::move(places), transitions_, pre_, post_, inh_);
}

SpnNet SpnNet::with_scaled_rates(double k) const {
  auto transitions = transitions_;
  for (auto& t : transitions) t.rate *= k;
  return SpnNet(places_, std::move(transitions), pre_, post_, inh_);
}

std::size_t NetBuilder::add_place(std::string name, int initial_tokens) {
  places_.push_back({std::move(name), initial_tokens});
  return places_.size() - 1;
}

std::size_t NetBuilder::add_transition(std::string name, double rate, int priority,
                                       ServerSemantics semantics) {
  transitions_.push_back({std::move(name), rate, priority, semantics});
  return transitions_.size() - 1;
}

std::size_t NetBuilder::place_of(std::string_view name) const {
  for (std::size_t i = 0; i < places_.size(); ++i)
    if (places_[i].name == name) return i;
  throw lookup_error("unknown place '" + std::string(name) + "'");
}

std::size_t NetBuilder::transition_of(std::string_view name) const {
  for (std::size_t i = 0; i < transitions_.size(); ++i)
    if (transitions_[i].name == name) return i;
  throw lookup_error("unknown transition '" + std::string(name) + "'");
}

NetBuilder& NetBuilder::pre(std::string_view place, std::string_view transition, int weight) {
  arcs_.push_back({place_of(place), transition_of(transition), weight, Arc::pre});
  return *this;
}

NetBuilder& NetBuilder::post(std::string_view place, std::string_view transition, int weight) {
  arcs_.push_back({place_of(place), transition_of(transition), weight, Arc::post});
  return *this;
}

NetBuilder& NetBuilder::inhibitor(std::string_view place, std::string_view transition,
                                  int threshold) {
  arcs_.push_back({place_of(place), transition_of(transition), threshold, Arc::inh});
  return *this;
}

SpnNet NetBuilder::build() const {
  ArcMatrix pre(places_.size(), transitions_.size());
  ArcMatrix post(places_.size(), transitions_.size());
  ArcMatrix inh(places_.size(), transitions_.size());
  for (const auto& a : arcs_) {
    switch (a.kind) {
      case Arc::pre:
        pre.set(a.place, a.transition, pre.at(a.place, a.transition) + a.weight);
        break;
      case Arc::post:
        post.set(a.place, a.transition, post.at(a.place, a.transition) + a.weight);
        break;
      case Arc::inh:
        inh.set(a.place, a.transition, a.weight);
        break;
    }
  }
  return SpnNet(places_, transitions_, std::move(pre), std::move(post), std::move(inh));
}

std::vector<std::string> validate_net(const SpnNet& net) {
  std::vector<std::string> out;
  const auto np = net.num_places();
  const auto nt = net.num_transitions();
  if (np == 0) out.push_back("net has no places");
  if (nt == 0) out.push_back("net has no transitions");

  std::set<std::string> seen;
  for (std::size_t p = 0; p < np; ++p) {
    const auto& pl = net.place(p);
    if (!seen.insert(pl.name).second)
      out.push_back("duplicate name: place " + std::to_string(p) + " '" + pl.name + "'");
    if (pl.initial_tokens < 0)
      out.push_back("negative initial marking: place '" + pl.name + "'");
  }
  seen.clear();
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tr = net.transition(t);
    if (!seen.insert(tr.name).second)
      out.push_back("duplicate name: transition " + std::to_string(t) + " '" + tr.name + "'");
    if (!std::isfinite(tr.rate))
      out.push_back("non-finite rate: transition '" + tr.name + "'");
    else if (tr.rate <= 0.0)
      out.push_back("non-positive rate: transition '" + tr.name + "'");
    if (tr.priority < 0)
      out.push_back("negative priority: transition '" + tr.name + "'");
  }

  const std::pair<const char*, const ArcMatrix*> mats[] = {
      {"pre", &net.pre()}, {"post", &net.post()}, {"inh", &net.inh()}};
  for (const auto& [label, mat] : mats) {
    if (mat->places() != np || mat->transitions() != nt) {
      out.push_back(std::string("dimension mismatch: ") + label + " is " +
                    std::to_string(mat->places()) + "x" + std::to_string(mat->transitions()) +
                    ", expected " + std::to_string(np) + "x" + std::to_string(nt));
      continue;
    }
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t t = 0; t < nt; ++t)
        if (mat->at(p, t) < 0)
          out.push_back(std::string("negative weight: ") + label + "(" + net.place(p).name +
                        ", " + net.transition(t).name + ")");
  }
  return out;
}

void require_valid(const SpnNet& net) {
  auto v = validate_net(net);
  if (v.empty()) return;
  std::string msg = "invalid net: " + v.front();
  if (v.size() > 1) msg += " (+" + std::to_string(v.size() - 1) + " more)";
  throw validation_error(msg, std::move(v));
}

namespace {

void check_dims(const SpnNet& net, const Marking& m) {
  if (m.size() != net.num_places())
    throw dimension_error("marking has " + std::to_string(m.size()) + " entries, net has " +
                          std::to_string(net.num_places()) + " places");
}

bool marking_enables(const SpnNet& net, const Marking& m, std::size_t t) {
  for (std::size_t p = 0; p < net.num_places(); ++p) {
    if (m[p] < net.pre().at(p, t)) return false;
    const int h = net.inh().at(p, t);
    if (h > 0 && m[p] >= h) return false;
  }
  return true;
}

}  // namespace

std::vector<std::size_t> marking_enabled_transitions(const SpnNet& net, const Marking& m) {
  check_dims(net, m);
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < net.num_transitions(); ++t)
    if (marking_enables(net, m, t)) out.push_back(t);
  return out;
}

std::vector<std::size_t> enabled_transitions(const SpnNet& net, const Marking& m) {
  auto candidates = marking_enabled_transitions(net, m);
  if (candidates.empty()) return candidates;
  int top = std::numeric_limits<int>::min();
  for (auto t : candidates) top = std::max(top, net.transition(t).priority);
  std::erase_if(candidates, [&](std::size_t t) { return net.transition(t).priority != top; });
  return candidates;
}

bool is_enabled(const SpnNet& net, const Marking& m, std::size_t t) {
  if (t >= net.num_transitions()) return false;
  auto en = enabled_transitions(net, m);
  return std::find(en.begin(), en.end(), t) != en.end();
}

namespace {

void require_enabled(const SpnNet& net, const Marking& m, std::size_t t) {
  check_dims(net, m);
  if (t >= net.num_transitions())
    throw enabling_error("transition index " + std::to_string(t) + " out of range");
  if (!is_enabled(net, m, t))
    throw enabling_error("transition '" + net.transition(t).name + "' is not enabled");
}

}  // namespace

Marking fire(const SpnNet& net, const Marking& m, std::size_t t) {
  require_enabled(net, m, t);
  return detail::fire_unchecked(net, m, t);
}

double rate_at(const SpnNet& net, const Marking& m, std::size_t t) {
  require_enabled(net, m, t);
  return detail::rate_unchecked(net, m, t);
}

namespace detail {

Marking fire_unchecked(const SpnNet& net, const Marking& m, std::size_t t) {
  std::vector<int> next = m.tokens();
  for (std::size_t p = 0; p < next.size(); ++p) {
    next[p] += net.post().at(p, t) - net.pre().at(p, t);
    if (next[p] < 0)
      throw enabling_error("firing '" + net.transition(t).name + "' drives place '" +
                           net.place(p).name + "' negative");
  }
  return Marking(std::move(next));
}

double rate_unchecked(const SpnNet& net, const Marking& m, std::size_t t) {
  const auto& tr = net.transition(t);
  if (tr.semantics == ServerSemantics::single_server) return tr.rate;
  int degree = std::numeric_limits<int>::max();
  for (std::size_t p = 0; p < net.num_places(); ++p) {
    const int w = net.pre().at(p, t);
    if (w > 0) degree = std::min(degree, m[p] / w);
  }
  // No input places: treat as a single enabling.
  if (degree == std::numeric_limits<int>::max()) degree = 1;
  return tr.rate * degree;
}

}  // namespace detail

}  // namespace spnperf
