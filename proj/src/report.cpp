#include "fstirap/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <ostream>

namespace fstirap {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::vector<std::string> timeseries_columns(bool with_continuum) {
  std::vector<std::string> cols{"t_s",  "re_c1", "im_c1",   "re_c2",       "im_c2",
                                "pop1", "pop2",  "omega_s", "pump_display"};
  if (with_continuum) cols.push_back("continuum_pop");
  return cols;
}

void write_timeseries_csv(std::ostream& os, const TimeSeries& ts) {
  const bool cont = !ts.continuum_population.empty();
  const auto cols = timeseries_columns(cont);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    const auto& s = ts.states[i];
    os << fmt(ts.times[i]) << ',' << fmt(s.c1.real()) << ',' << fmt(s.c1.imag()) << ','
       << fmt(s.c2.real()) << ',' << fmt(s.c2.imag()) << ',' << fmt(ts.populations[i].first) << ','
       << fmt(ts.populations[i].second) << ',' << fmt(ts.pulses_sampled[i].omega_s) << ','
       << fmt(ts.pulses_sampled[i].pump_display);
    if (cont) os << ',' << fmt(ts.continuum_population[i]);
    os << '\n';
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json summary_document(const std::string& command, const RunConfig& cfg, json results,
                      const std::vector<std::string>& warnings) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool_version"] = FSTIRAP_VERSION;
  doc["command"] = command;
  doc["timestamp"] = utc_timestamp();
  doc["config"] = serialize_config(cfg);
  doc["results"] = std::move(results);
  doc["warnings"] = warnings;
  return doc;
}

json dynamics_results(const RunConfig& cfg, const TimeSeries& ts) {
  const auto& fin = ts.final_state();
  double max_pop2 = 0.0;
  for (const auto& p : ts.populations) max_pop2 = std::max(max_pop2, p.second);
  json r;
  r["efficiency"] = fin.pop1();
  r["final"] = {{"pop1", fin.pop1()},
                {"pop2", fin.pop2()},
                {"c1", {fin.c1.real(), fin.c1.imag()}},
                {"c2", {fin.c2.real(), fin.c2.imag()}}};
  r["max_pop2"] = max_pop2;
  r["intensities_W_cm2"] = {{"stokes", nullable(cfg.stokes_intensity())},
                            {"pump", nullable(cfg.pump_intensity())}};
  r["overlap_time_s"] = overlap_time(cfg.scenario.pulses, cfg.overlap_threshold);
  const auto [t0, t1] = cfg.scenario.window();
  r["window_s"] = {t0, t1};
  r["collision_time_s"] = cfg.scenario.wavepacket.t0;
  r["steps"] = {{"accepted", ts.stats.accepted},
                {"rejected", ts.stats.rejected},
                {"rhs_evaluations", ts.stats.rhs_evaluations}};
  if (!ts.continuum_population.empty())
    r["final_continuum_population"] = ts.continuum_population.back();
  return r;
}

}  // namespace fstirap
