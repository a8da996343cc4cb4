#pragma once

// Output artifacts: the time-series CSV and the summary JSON document.
//
// timeseries.csv columns, in order:
//   t_s, re_c1, im_c1, re_c2, im_c2, pop1, pop2, omega_s, pump_display
// plus continuum_pop for the oracle. Numbers are printed with %.17g.

#include "fstirap/config.hpp"
#include "fstirap/dynamics.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fstirap {

inline constexpr const char* kSchemaVersion = "1.0";

std::vector<std::string> timeseries_columns(bool with_continuum);

void write_timeseries_csv(std::ostream& os, const TimeSeries& ts);

/// Envelope of summary.json: schema_version, tool_version, command,
/// timestamp (UTC, ISO 8601), config echo, results and warnings.
nlohmann::json summary_document(const std::string& command, const RunConfig& cfg,
                                nlohmann::json results, const std::vector<std::string>& warnings);

/// Results block for simulate/oracle runs.
nlohmann::json dynamics_results(const RunConfig& cfg, const TimeSeries& ts);

std::string utc_timestamp();

}  // namespace fstirap
