#pragma once

// Deterministic text emission: trajectory and table CSV plus flat JSON
// sidecars. Every floating-point value goes through the shortest round-trip
// formatter (std::to_chars, never more than 17 significant digits), so a rerun
// with identical inputs produces byte-identical files. Data files carry no
// timestamps; run metadata belongs in the JSON sidecar.

#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <tfe/ivp.hpp>

namespace tfe::textio {

// shortest decimal string that parses back to exactly x
std::string fmt(double x);

// Trajectory CSV: header y,f,f1,f2, one row per accepted node, plus one row
// per event interleaved at its location with the event's name in a 5th column.
void write_trajectory_csv(std::ostream& os, const Trajectory<3>& traj,
                          const std::map<int, std::string>& event_names = {});

// Same schema, but node rows are count+1 uniform dense-output samples over
// [t_lo, t_hi] (defaulting to the full span). Event rows inside the window
// are kept.
void write_trajectory_csv_resampled(std::ostream& os, const Trajectory<3>& traj, int count,
                                    const std::map<int, std::string>& event_names = {},
                                    double t_lo = 0.0, double t_hi = 0.0,
                                    bool use_window = false);

void write_table_csv(std::ostream& os, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

// Relative paths land under $TFE_OUT_DIR when that variable is set.
std::string resolve_out(const std::string& path);

// ofstream at the resolved location, parent directories created; throws
// std::runtime_error when the file cannot be opened.
std::ofstream open_out(const std::string& path);

// One flat JSON object, keys kept in insertion order. Non-finite numbers are
// emitted as quoted strings so the file stays parseable.
class FlatJson {
 public:
  void put(const std::string& key, double v);
  void put(const std::string& key, const std::string& v);
  void put(const std::string& key, const char* v);
  void put(const std::string& key, bool v);
  void put(const std::string& key, int v);
  void put(const std::string& key, std::int64_t v);
  void put(const std::string& key, std::uint64_t v);
  std::string dump() const;

 private:
  std::vector<std::pair<std::string, std::string>> items_;  // key -> rendered value
};

}  // namespace tfe::textio
