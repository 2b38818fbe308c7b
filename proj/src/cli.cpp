#include "spnperf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include <CLI11.hpp>

#include "spnperf/documents.hpp"
#include "spnperf/monitor.hpp"
#include "spnperf/pubsub.hpp"
#include "spnperf/reachability.hpp"
#include "spnperf/simulator.hpp"
#include "spnperf/solver.hpp"

namespace spnperf::cli {

namespace {

using documents::json;

struct AnalysisFlags {
  std::size_t max_states = kDefaultMaxStates;
  double tolerance = 1e-12;
  std::string method = "auto";

  monitor::EvaluationOptions options() const {
    monitor::EvaluationOptions o;
    o.max_states = max_states;
    o.solver.tolerance = tolerance;
    auto m = parse_solve_method(method);
    if (!m) throw validation_error("unknown solve method '" + method + "'");
    o.solver.method = *m;
    return o;
  }
};

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f) {
  cmd->add_option("--max-states", f.max_states, "Abort exploration beyond this many markings")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance", f.tolerance, "Steady-state residual tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--method", f.method, "Steady-state method")
      ->check(CLI::IsMember({"auto", "direct", "iterative"}));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A model input is either a net document or a pub/sub parameter document.
struct ModelInput {
  SpnNet net;
  bool is_pubsub = false;
  pubsub::PubSubParams params{};
};

ModelInput load_model(const std::string& path) {
  const json doc = documents::parse_json(read_file(path), path);
  if (doc.is_object() && doc.contains("places")) {
    SpnNet net = documents::net_from_json(doc);
    spnperf::require_valid(net);
    return {std::move(net), false, {}};
  }
  auto params = documents::params_from_json(doc);
  return {pubsub::build_pubsub_net(params), true, params};
}

MetricsReport analyze_net(const ModelInput& model, const monitor::EvaluationOptions& opt) {
  const Ctmc ctmc = explore(model.net, opt.max_states);
  const auto dist = steady_state(ctmc, opt.solver);
  return model.is_pubsub ? pubsub::headline_metrics(ctmc, dist) : basic_metrics(ctmc, dist);
}

std::string format_number(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string format_rt(const std::optional<double>& v) {
  return v ? format_number("%.12g", *v) : std::string("undefined");
}

int cmd_analyze(const std::string& input, const AnalysisFlags& flags, std::ostream& out) {
  const auto opt = flags.options();
  const auto model = load_model(input);
  out << documents::metrics_to_json(analyze_net(model, opt)).dump(2) << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& params_path, const std::string& factor_name,
              std::vector<double> values, const AnalysisFlags& flags, std::ostream& out) {
  const auto factor = pubsub::parse_factor(factor_name);
  if (!factor) throw validation_error("unknown factor '" + factor_name + "'");
  const auto opt = flags.options();
  const auto base = documents::params_from_json(documents::parse_json(read_file(params_path), params_path));
  std::sort(values.begin(), values.end());

  std::vector<pubsub::PubSubParams> points;
  for (double v : values) points.push_back(pubsub::set_factor(base, *factor, v));

  std::vector<std::future<MetricsReport>> jobs;
  for (const auto& p : points)
    jobs.push_back(std::async(std::launch::async, [p, opt] { return monitor::evaluate(p, opt); }));
  std::vector<MetricsReport> reports;
  for (auto& j : jobs) reports.push_back(j.get());

  out << "factor,accept_publication_rt,notification_rt,states,residual\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& r = reports[i];
    out << format_number("%.10g", values[i]) << ","
        << format_rt(r.response_times.at(std::string(pubsub::kAcceptPublicationRt))) << ","
        << format_rt(r.response_times.at(std::string(pubsub::kNotificationRt))) << ","
        << r.state_count << "," << format_number("%.3e", r.residual) << "\n";
  }
  return kExitOk;
}

struct SimulateFlags {
  double horizon = 5000.0;
  std::optional<double> warmup;
  int replications = 30;
  std::uint64_t seed = 1;
};

int cmd_simulate(const std::string& input, const SimulateFlags& sim, const AnalysisFlags& flags,
                 std::ostream& out, std::ostream& err) {
  if (sim.replications < 2) throw validation_error("--replications must be at least 2");
  if (!(sim.horizon > 0.0)) throw validation_error("--horizon must be positive");
  const double warmup = sim.warmup.value_or(0.1 * sim.horizon);
  if (!(warmup >= 0.0 && warmup < sim.horizon))
    throw validation_error("--warmup must lie in [0, horizon)");
  const auto opt = flags.options();
  const auto model = load_model(input);

  const auto est = estimate_metrics(model.net, all_metrics(model.net), sim.horizon, warmup,
                                    sim.replications, sim.seed);

  std::optional<MetricsReport> analytic;
  std::string analytic_error;
  try {
    analytic = analyze_net(model, opt);
  } catch (const spn_error& e) {
    analytic_error = e.what();
    err << "analytic solution unavailable: " << e.what() << "\n";
  }

  json metrics = json::object();
  for (const auto& [key, e] : est.metrics) {
    json m = {{"mean", e.mean}, {"half_width_95", e.half_width_95}, {"replications", e.replications}};
    if (analytic) {
      const auto colon = key.find(':');
      const auto kind = key.substr(0, colon);
      const auto name = key.substr(colon + 1);
      const double a = kind == "mean_tokens" ? analytic->mean_tokens.at(name)
                                             : analytic->transition_throughputs.at(name);
      m["analytic"] = a;
      m["inside_ci"] = std::abs(a - e.mean) <= e.half_width_95 + 1e-12 * std::max(1.0, std::abs(a));
    }
    metrics[key] = m;
  }
  json doc = {{"horizon", sim.horizon},
              {"warmup", warmup},
              {"replications", sim.replications},
              {"seed", sim.seed},
              {"deadlocked_replications", est.deadlocked_replications},
              {"flagged", est.flagged()},
              {"analytic_available", analytic.has_value()},
              {"metrics", metrics}};
  if (!analytic) doc["analytic_error"] = analytic_error;
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_monitor(const std::string& trace_path, const std::string& params_path,
                const std::string& policy_path, const AnalysisFlags& flags, std::ostream& out) {
  const auto opt = flags.options();
  std::ifstream trace_in(trace_path);
  if (!trace_in) throw validation_error("cannot read '" + trace_path + "'");
  const auto trace = documents::trace_from_jsonl(trace_in);
  const auto params =
      documents::params_from_json(documents::parse_json(read_file(params_path), params_path));
  const auto policy =
      documents::policy_from_json(documents::parse_json(read_file(policy_path), policy_path));
  for (const auto& rec : monitor::run_loop(trace, params, policy, opt))
    out << documents::decision_to_json(rec).dump() << "\n";
  return kExitOk;
}

int cmd_export_net(const std::string& params_path, std::ostream& out) {
  const auto params =
      documents::params_from_json(documents::parse_json(read_file(params_path), params_path));
  out << documents::net_to_json(pubsub::build_pubsub_net(params)).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic Petri net performance analysis of publish/subscribe platforms",
               "spnperf"};
  app.require_subcommand(1);

  AnalysisFlags flags;

  std::string analyze_input;
  auto* analyze = app.add_subcommand("analyze", "Steady-state metrics of a net or pub/sub params file");
  analyze->add_option("input", analyze_input, "Net document or pub/sub params document")->required();
  add_analysis_flags(analyze, flags);

  std::string sweep_params, sweep_factor;
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Response times across values of one factor (CSV)");
  sweep->add_option("params", sweep_params, "Pub/sub params document")->required();
  sweep->add_option("--factor", sweep_factor,
                    "network_buffer, net_recv_buffer, net_send_buffer, broker_memory, "
                    "broker_capacity, received_event_capacity or r_pub_qos")
      ->required();
  sweep->add_option("--values", sweep_values, "Comma-separated factor values")->delimiter(',');
  add_analysis_flags(sweep, flags);

  std::string sim_input;
  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Replicated simulation with 95% intervals");
  simulate->add_option("input", sim_input, "Net document or pub/sub params document")->required();
  simulate->add_option("--horizon", sim.horizon, "Simulated time per replication");
  simulate->add_option("--warmup", sim.warmup, "Discarded initial period (default 10% of horizon)");
  simulate->add_option("--replications", sim.replications, "Independent replications (>= 2)");
  simulate->add_option("--seed", sim.seed, "Seed of the first replication");
  add_analysis_flags(simulate, flags);

  std::string mon_trace, mon_params, mon_policy;
  auto* mon = app.add_subcommand("monitor", "Run the self-optimisation loop over a workload trace");
  mon->add_option("trace", mon_trace, "Workload trace (JSON Lines)")->required();
  mon->add_option("params", mon_params, "Initial pub/sub params document")->required();
  mon->add_option("policy", mon_policy, "Monitor policy document")->required();
  add_analysis_flags(mon, flags);

  std::string export_params;
  auto* exporter = app.add_subcommand("export-net", "Write the pub/sub net as a net document");
  exporter->add_option("params", export_params, "Pub/sub params document")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_input, flags, out);
    if (*sweep) return cmd_sweep(sweep_params, sweep_factor, sweep_values, flags, out);
    if (*simulate) return cmd_simulate(sim_input, sim, flags, out, err);
    if (*mon) return cmd_monitor(mon_trace, mon_params, mon_policy, flags, out);
    if (*exporter) return cmd_export_net(export_params, out);
  } catch (const validation_error& e) {
    err << "error: " << e.what() << "\n";
    for (std::size_t i = 1; i < e.violations().size(); ++i) err << "  " << e.violations()[i] << "\n";
    return kExitInvalidInput;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const lookup_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const spn_error& e) {
    err << "analysis failed: " << e.what() << "\n";
    return kExitAnalysisFailed;
  }
  return kExitInvalidInput;
}

}  // namespace spnperf::cli
