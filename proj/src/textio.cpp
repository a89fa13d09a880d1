#include <tfe/textio.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>

namespace tfe::textio {

std::string fmt(double x) {
  std::array<char, 64> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return std::string(buf.data(), end);
}

namespace {

std::string event_label(const std::map<int, std::string>& names, int id) {
  auto it = names.find(id);
  return it != names.end() ? it->second : std::to_string(id);
}

void emit_event_row(std::ostream& os, const EventRecord<3>& ev,
                    const std::map<int, std::string>& names) {
  os << fmt(ev.t) << ',' << fmt(ev.y[0]) << ',' << fmt(ev.y[1]) << ',' << fmt(ev.y[2]) << ','
     << event_label(names, ev.id) << '\n';
}

void emit_node_row(std::ostream& os, double t, const State<3>& y) {
  os << fmt(t) << ',' << fmt(y[0]) << ',' << fmt(y[1]) << ',' << fmt(y[2]) << '\n';
}

// Events are already ordered along the run; interleave them with node rows so
// the file reads in integration order even for decreasing t.
void emit_merged(std::ostream& os, const std::vector<double>& ts,
                 const std::vector<State<3>>& ys, const Trajectory<3>& traj,
                 const std::map<int, std::string>& names, double t_first, double t_last) {
  const double dir = t_last >= t_first ? 1.0 : -1.0;
  std::size_t e = 0;
  while (e < traj.events.size() && (traj.events[e].t - t_first) * dir < 0) ++e;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    while (e < traj.events.size() && (traj.events[e].t - ts[i]) * dir < 0)
      emit_event_row(os, traj.events[e++], names);
    emit_node_row(os, ts[i], ys[i]);
    while (e < traj.events.size() && traj.events[e].t == ts[i])
      emit_event_row(os, traj.events[e++], names);
  }
  while (e < traj.events.size() && (traj.events[e].t - t_last) * dir <= 0)
    emit_event_row(os, traj.events[e++], names);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory<3>& traj,
                          const std::map<int, std::string>& event_names) {
  os << "y,f,f1,f2\n";
  if (traj.t.empty()) return;
  emit_merged(os, traj.t, traj.y, traj, event_names, traj.t.front(), traj.t.back());
}

void write_trajectory_csv_resampled(std::ostream& os, const Trajectory<3>& traj, int count,
                                    const std::map<int, std::string>& event_names, double t_lo,
                                    double t_hi, bool use_window) {
  os << "y,f,f1,f2\n";
  if (traj.t.size() < 2 || count < 1) return;
  const double a = use_window ? t_lo : traj.t.front();
  const double b = use_window ? t_hi : traj.t.back();
  std::vector<double> ts(static_cast<std::size_t>(count) + 1);
  std::vector<State<3>> ys(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    // exact endpoints; dense_eval rejects points outside the span
    ts[i] = i == 0 ? a : (i == ts.size() - 1 ? b : a + (b - a) * static_cast<double>(i) / count);
    ys[i] = dense_eval(traj, ts[i]);
  }
  emit_merged(os, ts, ys, traj, event_names, a, b);
}

void write_table_csv(std::ostream& os, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

std::string resolve_out(const std::string& path) {
  const char* dir = std::getenv("TFE_OUT_DIR");
  if (!dir || !*dir) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path resolved(resolve_out(path));
  if (resolved.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(resolved.parent_path(), ec);
  }
  std::ofstream os(resolved, std::ios::binary);  // binary: no platform newline games
  if (!os) throw std::runtime_error("cannot open output file: " + resolved.string());
  return os;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char hex[8];
          std::snprintf(hex, sizeof(hex), "\\u%04x", c);
          out += hex;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

void FlatJson::put(const std::string& key, double v) {
  items_.emplace_back(key, std::isfinite(v) ? fmt(v) : '"' + fmt(v) + '"');
}
void FlatJson::put(const std::string& key, const std::string& v) {
  items_.emplace_back(key, '"' + json_escape(v) + '"');
}
void FlatJson::put(const std::string& key, const char* v) { put(key, std::string(v)); }
void FlatJson::put(const std::string& key, bool v) {
  items_.emplace_back(key, v ? "true" : "false");
}
void FlatJson::put(const std::string& key, int v) { items_.emplace_back(key, std::to_string(v)); }
void FlatJson::put(const std::string& key, std::int64_t v) {
  items_.emplace_back(key, std::to_string(v));
}
void FlatJson::put(const std::string& key, std::uint64_t v) {
  items_.emplace_back(key, std::to_string(v));
}

std::string FlatJson::dump() const {
  std::string out = "{\n";
  for (std::size_t i = 0; i < items_.size(); ++i) {
    out += "  \"" + json_escape(items_[i].first) + "\": " + items_[i].second;
    out += i + 1 < items_.size() ? ",\n" : "\n";
  }
  out += "}\n";
  return out;
}

}  // namespace tfe::textio
