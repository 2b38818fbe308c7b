#include <doctest.h>

#include <cstdlib>

#include "oracles.hpp"
#include "spnperf/documents.hpp"
#include "test_support.hpp"

using namespace spnperf;
using spnperf::testing::run_cli;
using spnperf::testing::TempDir;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

const char* kDegradedPolicy = R"({
  "thresholds": {"accept_publication_response_time": 2.8, "notification_response_time": 3.7}
})";

}  // namespace

TEST_CASE("analyze") {
  TempDir dir;
  const auto params = dir.write("params.json", "{}");

  auto r = run_cli({"analyze", params});
  REQUIRE(r.code == 0);
  const auto j = documents::json::parse(r.out);
  CHECK(j["state_count"] == 1260);
  CHECK(j["response_times"]["accept_publication_response_time"].is_number());
  CHECK(j["response_times"]["notification_response_time"].is_number());

  const auto bad_net = dir.write("bad.json", R"({
    "places": [{"name": "p", "initial": 1}],
    "transitions": [{"name": "stuck", "rate": 0}],
    "arcs": [{"place": "p", "transition": "stuck", "kind": "pre"},
             {"place": "p", "transition": "stuck", "kind": "post"}]})");
  r = run_cli({"analyze", bad_net});
  CHECK(r.code == 2);
  CHECK(r.err.find("stuck") != std::string::npos);

  r = run_cli({"analyze", params, "--max-states", "100"});
  CHECK(r.code == 3);

  CHECK(run_cli({"analyze", dir.write("broken.json", "{")}).code == 2);
  CHECK(run_cli({"analyze", "/nonexistent/params.json"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"analyze", params, "--method", "magic"}).code == 2);
}

TEST_CASE("analyze a plain net") {
  TempDir dir;
  const auto net = dir.write("mm1k.json", documents::net_to_json(testing::mm1k_net(1.0, 2.0, 5)).dump());
  const auto r = run_cli({"analyze", net, "--method", "iterative"});
  REQUIRE(r.code == 0);
  const auto j = documents::json::parse(r.out);
  CHECK(j["state_count"] == 6);
  const auto pi = testing::mm1k_closed_form(1.0, 2.0, 5);
  CHECK(j["transition_throughputs"]["serve"].get<double>() ==
        doctest::Approx(2.0 * (1.0 - pi[0])).epsilon(1e-9));
}

TEST_CASE("sweep") {
  TempDir dir;
  const auto params = dir.write("params.json", "{}");

  auto r = run_cli({"sweep", params, "--factor", "network_buffer", "--values", "10,1"});
  REQUIRE(r.code == 0);
  auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "factor,accept_publication_rt,notification_rt,states,residual");
  const auto lo = split_csv(rows[1]), hi = split_csv(rows[2]);
  CHECK(lo[0] == "1");
  CHECK(hi[0] == "10");
  CHECK(std::stod(hi[1]) < std::stod(lo[1]));
  CHECK(std::stod(hi[2]) < std::stod(lo[2]));

  r = run_cli({"sweep", params, "--factor", "r_pub_qos", "--values", "0.25,0.5,1,2,4,8"});
  REQUIRE(r.code == 0);
  rows = lines_of(r.out);
  REQUIRE(rows.size() == 7);
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(std::stod(split_csv(rows[i])[1]) < std::stod(split_csv(rows[i - 1])[1]));
    CHECK(std::stod(split_csv(rows[i])[2]) < std::stod(split_csv(rows[i - 1])[2]));
  }

  r = run_cli({"sweep", params, "--factor", "broker_memory"});
  CHECK(r.code == 0);
  CHECK(lines_of(r.out).size() == 1);

  CHECK(run_cli({"sweep", params, "--factor", "colour", "--values", "1"}).code == 2);
  CHECK(run_cli({"sweep", params, "--factor", "broker_memory", "--values", "0"}).code == 2);
  CHECK(run_cli({"sweep", params, "--factor", "broker_memory", "--values", "1.5"}).code == 2);
}

TEST_CASE("simulate") {
  TempDir dir;
  const auto net = dir.write("mm12.json", documents::net_to_json(testing::mm1k_net(1.0, 2.0, 2)).dump());

  CHECK(run_cli({"simulate", net, "--replications", "1"}).code == 2);
  CHECK(run_cli({"simulate", net, "--horizon", "10", "--warmup", "10"}).code == 2);

  const std::vector<std::string> args{"simulate", net, "--horizon", "2000", "--seed", "7"};
  const auto a = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(run_cli(args).out == a.out);

  const auto j = documents::json::parse(a.out);
  CHECK(j["analytic_available"] == true);
  CHECK(j["replications"] == 30);
  CHECK(j["warmup"].get<double>() == 200.0);
  const auto& q = j["metrics"]["mean_tokens:Queue"];
  CHECK(q["inside_ci"] == true);

  const auto other = run_cli({"simulate", net, "--horizon", "2000", "--seed", "8"});
  CHECK(other.out != a.out);
}

TEST_CASE("monitor") {
  TempDir dir;
  const auto params = dir.write("params.json", "{}");
  const auto policy = dir.write("policy.json", kDegradedPolicy);

  const auto empty = dir.write("empty.jsonl", "");
  auto r = run_cli({"monitor", empty, params, policy});
  CHECK(r.code == 0);
  CHECK(r.out.empty());

  const auto trace = dir.write("trace.jsonl",
                               "{\"t\": 0, \"publishers\": 2, \"subscribers\": 2, \"events\": 3}\n");
  r = run_cli({"monitor", trace, params, policy});
  REQUIRE(r.code == 0);
  auto recs = lines_of(r.out);
  REQUIRE(recs.size() == 1);
  auto j = documents::json::parse(recs[0]);
  CHECK(j["outcome"] == "compliant");
  CHECK(j["actions"][0] == "grow_network_buffers");

  const auto stuck = dir.write("stuck.json", R"({
    "thresholds": {"accept_publication_response_time": 0, "notification_response_time": 0},
    "caps": {"network_buffers": 1, "broker_memory": 2}})");
  r = run_cli({"monitor", trace, params, stuck});
  REQUIRE(r.code == 0);
  j = documents::json::parse(lines_of(r.out).at(0));
  CHECK(j["outcome"] == "exhausted_actions");

  const auto backwards = dir.write("back.jsonl",
                                   "{\"t\": 1, \"publishers\": 2, \"subscribers\": 2, \"events\": 3}\n"
                                   "{\"t\": 0, \"publishers\": 2, \"subscribers\": 2, \"events\": 3}\n");
  CHECK(run_cli({"monitor", backwards, params, policy}).code == 2);
}

TEST_CASE("export-net round-trips") {
  TempDir dir;
  const auto params = dir.write("params.json", R"({"factors": {"broker_memory": 3}})");
  const auto r = run_cli({"export-net", params});
  REQUIRE(r.code == 0);
  pubsub::PubSubParams p;
  p.broker_memory = 3;
  CHECK(documents::net_from_json(documents::json::parse(r.out)) == pubsub::build_pubsub_net(p));
}
