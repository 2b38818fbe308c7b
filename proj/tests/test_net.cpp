#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "spnperf/net.hpp"

using namespace spnperf;

namespace {

SpnNet self_loop(double rate = 1.0, int tokens = 1) {
  NetBuilder b;
  b.add_place("p", tokens);
  b.add_transition("t", rate);
  b.pre("p", "t").post("p", "t");
  return b.build();
}

bool has_violation(const SpnNet& net, const std::string& needle) {
  const auto v = validate_net(net);
  return std::any_of(v.begin(), v.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("validate_net") {
  CHECK(validate_net(self_loop()).empty());
  CHECK(has_violation(self_loop(0.0), "non-positive rate"));
  CHECK(has_violation(self_loop(-2.0), "non-positive rate"));
  CHECK(has_violation(self_loop(std::numeric_limits<double>::infinity()), "non-finite rate"));

  NetBuilder dup;
  dup.add_place("a", 1);
  dup.add_place("a", 0);
  dup.add_transition("t", 1.0);
  CHECK(has_violation(dup.build(), "duplicate name"));

  NetBuilder dup_t;
  dup_t.add_place("a", 1);
  dup_t.add_transition("t", 1.0);
  dup_t.add_transition("t", 2.0);
  CHECK(has_violation(dup_t.build(), "duplicate name"));

  CHECK(has_violation(SpnNet({}, {}, {}, {}, {}), "no places"));
  CHECK(has_violation(SpnNet({}, {}, {}, {}, {}), "no transitions"));

  SpnNet bad_dims({{"p", 1}}, {{"t", 1.0}}, ArcMatrix(1, 1), ArcMatrix(2, 1), ArcMatrix(1, 1));
  CHECK(has_violation(bad_dims, "dimension mismatch"));

  CHECK_THROWS_AS(require_valid(self_loop(0.0)), validation_error);
}

TEST_CASE("enabled_transitions") {
  SUBCASE("insufficient tokens") {
    CHECK(enabled_transitions(self_loop(1.0, 0), Marking{0}).empty());
  }
  SUBCASE("self-loop with one token") {
    CHECK(enabled_transitions(self_loop(), Marking{1}) == std::vector<std::size_t>{0});
  }
  SUBCASE("priority masking keeps only the highest level") {
    NetBuilder b;
    b.add_place("p", 1);
    b.add_transition("hi", 1.0, 2);
    b.add_transition("lo", 1.0, 1);
    b.pre("p", "hi").pre("p", "lo");
    const auto net = b.build();
    CHECK(marking_enabled_transitions(net, Marking{1}).size() == 2);
    CHECK(enabled_transitions(net, Marking{1}) == std::vector<std::size_t>{0});
  }
  SUBCASE("inhibitor threshold") {
    NetBuilder b;
    b.add_place("p", 1);
    b.add_place("guard", 0);
    b.add_transition("t", 1.0);
    b.pre("p", "t").inhibitor("guard", "t", 2);
    const auto net = b.build();
    CHECK(enabled_transitions(net, Marking{1, 0}).size() == 1);
    CHECK(enabled_transitions(net, Marking{1, 1}).size() == 1);
    CHECK(enabled_transitions(net, Marking{1, 2}).empty());
    CHECK(enabled_transitions(net, Marking{1, 5}).empty());
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(enabled_transitions(self_loop(), Marking{1, 0}), dimension_error);
  }
}

TEST_CASE("fire") {
  NetBuilder b;
  b.add_place("a", 1);
  b.add_place("b", 0);
  b.add_transition("move", 1.0);
  b.add_transition("pair", 1.0);
  b.pre("a", "move").post("b", "move");
  b.pre("a", "pair", 2).post("b", "pair");
  const auto net = b.build();

  CHECK(fire(net, Marking{1, 0}, 0) == Marking{0, 1});
  CHECK(fire(self_loop(), Marking{1}, 0) == Marking{1});
  CHECK(fire(net, Marking{2, 0}, 1) == Marking{0, 1});
  CHECK_THROWS_AS(fire(net, Marking{1, 0}, 1), enabling_error);
  CHECK_THROWS_AS(fire(net, Marking{0, 0}, 0), enabling_error);
  CHECK_THROWS_AS(fire(net, Marking{1, 0}, 7), enabling_error);
}

TEST_CASE("rate_at") {
  CHECK(rate_at(self_loop(3.0, 1), Marking{1}, 0) == 3.0);
  CHECK(rate_at(self_loop(3.0, 4), Marking{4}, 0) == 3.0);

  auto infinite = [](int weight) {
    NetBuilder b;
    b.add_place("p", 0);
    b.add_transition("t", 2.0, 0, ServerSemantics::infinite_server);
    b.pre("p", "t", weight);
    return b.build();
  };
  CHECK(rate_at(infinite(1), Marking{3}, 0) == 6.0);
  CHECK(rate_at(infinite(2), Marking{5}, 0) == 4.0);
  CHECK_THROWS_AS(rate_at(infinite(2), Marking{1}, 0), enabling_error);
}

TEST_CASE("firing properties over random nets") {
  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    const auto net = testing::random_conservative_net(seed);
    REQUIRE(validate_net(net).empty());
    const auto states = testing::naive_reachable_set(net);
    for (const auto& tokens : states) {
      const Marking m(tokens);
      const auto enabled = enabled_transitions(net, m);
      const auto marking_enabled = marking_enabled_transitions(net, m);
      CHECK(std::includes(marking_enabled.begin(), marking_enabled.end(), enabled.begin(),
                          enabled.end()));
      for (auto t : enabled) {
        CHECK(net.transition(t).priority == net.transition(enabled.front()).priority);
        const auto next = fire(net, m, t);
        for (std::size_t p = 0; p < next.size(); ++p) CHECK(next[p] >= 0);
        if (net.transition(t).semantics == ServerSemantics::single_server)
          CHECK(rate_at(net, m, t) == net.transition(t).rate);
        else
          CHECK(rate_at(net, m, t) >= net.transition(t).rate);
      }
    }
  }
}
