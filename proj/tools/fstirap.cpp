// fstirap: command-line driver for the photoassociative STIRAP models.
//
//   fstirap simulate|oracle|average|optimize|sweep|estimate
//           --config PATH --out DIR [--set key=value ...] [--force]
//
// A config name without a file on disk is looked up among the shipped
// presets. Failures print {"error": {...}} on stderr and exit nonzero.

#include "fstirap/config.hpp"
#include "fstirap/dynamics.hpp"
#include "fstirap/ensemble.hpp"
#include "fstirap/optimizer.hpp"
#include "fstirap/report.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fstirap;

namespace {

#ifndef FSTIRAP_PRESET_DIR
#define FSTIRAP_PRESET_DIR "presets"
#endif

struct Failure {
  std::string kind;
  std::string message;
  std::string path;
  int code;
};

int report_failure(const Failure& f) {
  json err = {{"kind", f.kind}, {"message", f.message}};
  if (!f.path.empty()) err["path"] = f.path;
  std::cerr << json{{"error", err}}.dump() << std::endl;
  return f.code;
}

fs::path resolve_config(const std::string& name) {
  if (fs::exists(name)) return name;
  for (const fs::path& dir : {fs::path(FSTIRAP_PRESET_DIR), fs::path("presets")}) {
    fs::path p = dir / (name + ".json");
    if (fs::exists(p)) return p;
  }
  throw ConfigError("", "config '" + name + "' is neither a file nor a preset");
}

RunConfig read_config(const std::string& name, const std::vector<std::string>& overrides) {
  const fs::path path = resolve_config(name);
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON in ") + path.string() + ": " + e.what());
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc);
}

class Output {
 public:
  Output(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {}

  // Refuses to clobber any of `files` unless forced.
  void prepare(const std::vector<std::string>& files) const {
    fs::create_directories(dir_);
    if (force_) return;
    for (const auto& f : files)
      if (fs::exists(dir_ / f))
        throw Failure{"output", (dir_ / f).string() + " exists; pass --force to overwrite", "", 3};
  }

  void write(const std::string& file, const std::string& content) const {
    std::ofstream out(dir_ / file, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{"output", "cannot write " + (dir_ / file).string(), "", 1};
    out << content;
  }

  void write_json(const std::string& file, const json& doc) const { write(file, doc.dump(2) + "\n"); }

  void write_series(const std::string& file, const TimeSeries& ts) const {
    std::ostringstream os;
    write_timeseries_csv(os, ts);
    write(file, os.str());
  }

 private:
  fs::path dir_;
  bool force_;
};

void append(std::vector<std::string>& into, const std::vector<std::string>& more) {
  into.insert(into.end(), more.begin(), more.end());
}

int run_simulate(const RunConfig& cfg, const Output& out, bool oracle) {
  out.prepare({"timeseries.csv", "summary.json"});
  std::vector<std::string> warnings;
  TimeSeries ts = oracle ? full_model_oracle(cfg.scenario) : integrate(cfg.scenario);
  append(warnings, ts.warnings);
  json results = dynamics_results(cfg, ts);
  if (oracle && cfg.scenario.regime != Regime::full_oracle) {
    const TimeSeries reduced = integrate(cfg.scenario);
    results["reduced_efficiency"] = reduced.efficiency();
    append(warnings, reduced.warnings);
  }
  out.write_series("timeseries.csv", ts);
  out.write_json("summary.json", summary_document(oracle ? "oracle" : "simulate", cfg, results, warnings));
  return 0;
}

const EnsembleBlock& need_ensemble(const RunConfig& cfg) {
  if (!cfg.ensemble) throw ConfigError("ensemble", "this command needs an ensemble block");
  return *cfg.ensemble;
}

json average_json(const AverageResult& avg) {
  json nodes = json::array();
  for (std::size_t i = 0; i < avg.energies.size(); ++i)
    nodes.push_back({{"energy_uK", avg.energies[i] / kMicroKelvin}, {"efficiency", avg.values[i]}});
  json r = {{"p_avg", avg.p_avg}, {"n_nodes", avg.n_nodes}, {"converged", avg.converged}, {"nodes", nodes}};
  r["p_avg_refined"] = std::isnan(avg.p_avg_refined) ? json(nullptr) : json(avg.p_avg_refined);
  return r;
}

int run_average(const RunConfig& cfg, const Output& out) {
  const auto& eb = need_ensemble(cfg);
  out.prepare({"summary.json"});
  const auto avg = average_efficiency(eb.spec, cfg.scenario, eb.nodes, true);
  json results = average_json(avg);
  results["temperature_K"] = eb.spec.temperature;
  out.write_json("summary.json", summary_document("average", cfg, results, avg.warnings));
  return 0;
}

int run_optimize(const RunConfig& cfg, const Output& out) {
  if (!cfg.optimize) throw ConfigError("optimize", "this command needs an optimize block");
  out.prepare({"timeseries.csv", "summary.json"});
  const auto problem = cfg.problem();
  const auto res = optimize(problem);
  json trace = json::array();
  for (const auto& t : res.trace) trace.push_back({t.index, t.value, t.best});
  json results = {{"best_value", res.best_value},
                  {"best_params", res.best_params},
                  {"evaluations", res.evaluations},
                  {"trace", trace},
                  {"failures", res.failures}};
  RunConfig best = cfg;
  best.scenario = apply_params(cfg.scenario, res.best_params);
  const TimeSeries ts = integrate(best.scenario);
  results["best_run"] = dynamics_results(best, ts);
  std::vector<std::string> warnings = ts.warnings;
  if (!res.failures.empty())
    warnings.push_back(std::to_string(res.failures.size()) + " objective evaluations failed");
  out.write_series("timeseries.csv", ts);
  out.write_json("summary.json", summary_document("optimize", cfg, results, warnings));
  return 0;
}

int run_sweep(const RunConfig& cfg, const Output& out) {
  if (!cfg.sweep) throw ConfigError("sweep", "this command needs a sweep block");
  out.prepare({"sweep.csv", "summary.json"});
  const auto pts = sweep(cfg.scenario, cfg.sweep->param, cfg.sweep->values);
  json points = json::array();
  std::ostringstream csv;
  csv << "value,efficiency,ok\n";
  std::vector<std::string> warnings;
  for (const auto& p : pts) {
    json item = {{"value", p.value}, {"efficiency", p.efficiency}, {"ok", p.ok}};
    if (!p.ok) {
      item["error"] = p.error;
      warnings.push_back("sweep point " + std::to_string(p.value) + ": " + p.error);
    }
    points.push_back(item);
    char line[96];
    std::snprintf(line, sizeof line, "%.17g,%.17g,%d\n", p.value, p.efficiency, p.ok ? 1 : 0);
    csv << line;
  }
  json results = {{"param", cfg.sweep->param}, {"points", points}};
  out.write("sweep.csv", csv.str());
  out.write_json("summary.json", summary_document("sweep", cfg, results, warnings));
  return 0;
}

int run_estimate(const RunConfig& cfg, const Output& out) {
  const auto& eb = need_ensemble(cfg);
  out.prepare({"summary.json"});
  json results;
  std::vector<std::string> warnings;
  double p_avg;
  if (eb.p_avg) {
    p_avg = *eb.p_avg;
    results["p_avg_source"] = "config";
  } else {
    const auto avg = average_efficiency(eb.spec, cfg.scenario, eb.nodes, false);
    p_avg = avg.p_avg;
    append(warnings, avg.warnings);
    results["p_avg_source"] = "computed";
  }
  const double tau = eb.tau_tr.value_or(overlap_time(cfg.scenario.pulses, cfg.overlap_threshold));
  const double f = fraction_per_pulse_pair(eb.spec, p_avg, tau);
  results["p_avg"] = p_avg;
  results["tau_tr_s"] = tau;
  results["f"] = f;
  if (f > 0.0) {
    const auto train = pulse_train_estimate(eb.spec, f, eb.cycle_time, eb.residual);
    results["n_pairs"] = train.n_pairs;
    results["total_time_s"] = train.total_time;
    results["production_rate_per_s"] = train.production_rate;
  } else {
    results["n_pairs"] = nullptr;
    results["total_time_s"] = nullptr;
    results["production_rate_per_s"] = nullptr;
    warnings.push_back("zero transfer probability: no pulse train estimate");
  }
  out.write_json("summary.json", summary_document("estimate", cfg, results, warnings));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photoassociative STIRAP near a Feshbach resonance"};
  app.set_version_flag("--version", std::string(FSTIRAP_VERSION));
  app.require_subcommand(1);

  std::string config, out_dir;
  std::vector<std::string> overrides;
  bool force = false;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "integrate the reduced model of the configured regime"},
      {"oracle", "integrate the discretized-continuum model"},
      {"average", "thermally average the transfer probability"},
      {"optimize", "maximize the efficiency over the configured free parameters"},
      {"sweep", "scan one parameter over the configured grid"},
      {"estimate", "photoassociated fraction, pulse-train length and production rate"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "scenario file or preset name")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--set", overrides, "override a config field, key.path=value");
    sub->add_flag("--force", force, "overwrite existing outputs");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_failure({"usage", e.what(), "", 2});
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = read_config(config, overrides);
    const Output out(out_dir, force);
    if (command == "simulate") return run_simulate(cfg, out, false);
    if (command == "oracle") return run_simulate(cfg, out, true);
    if (command == "average") return run_average(cfg, out);
    if (command == "optimize") return run_optimize(cfg, out);
    if (command == "sweep") return run_sweep(cfg, out);
    if (command == "estimate") return run_estimate(cfg, out);
    return report_failure({"usage", "unknown command " + command, "", 2});
  } catch (const Failure& f) {
    return report_failure(f);
  } catch (const ConfigError& e) {
    return report_failure({"config", e.what(), e.path(), 2});
  } catch (const IntegrationError& e) {
    std::ostringstream msg;
    msg << e.what();
    return report_failure({"integration", msg.str(), "", 1});
  } catch (const std::invalid_argument& e) {
    return report_failure({"invalid_argument", e.what(), "", 2});
  } catch (const std::exception& e) {
    return report_failure({"runtime", e.what(), "", 1});
  }
}
