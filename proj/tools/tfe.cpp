// Command-line front end: one subcommand per experiment, deterministic CSV and
// flat JSON sidecar output. Exit codes: 0 success, 1 computation error,
// 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tfe/errors.hpp>
#include <tfe/expansion.hpp>
#include <tfe/ivp.hpp>
#include <tfe/oscillation.hpp>
#include <tfe/profile.hpp>
#include <tfe/scan.hpp>
#include <tfe/special.hpp>
#include <tfe/textio.hpp>

namespace {

using tfe::textio::FlatJson;
using tfe::textio::fmt;

void echo_integrator(FlatJson& j, const tfe::IntegratorConfig& cfg) {
  j.put("rtol", cfg.rtol);
  j.put("atol", cfg.atol);
  j.put("h_init", cfg.h_init);
  j.put("h_min", cfg.h_min);
  j.put("max_steps", static_cast<std::uint64_t>(cfg.max_steps));
}

void echo_profile(FlatJson& j, const tfe::ProfileProblem& p) {
  j.put("n", p.n);
  j.put("eps", p.eps);
  j.put("y_max", p.y_max);
  j.put("blowup_f", p.blowup_f);
  j.put("undershoot_margin", p.undershoot_margin);
  j.put("slope_cap", p.slope_cap);
  j.put("zero_resolution", p.zero_resolution);
}

void echo_traj_counters(FlatJson& j, const tfe::Trajectory<3>& t) {
  j.put("accepted_steps", static_cast<std::uint64_t>(t.n_accepted));
  j.put("rejected_steps", static_cast<std::uint64_t>(t.n_rejected));
  j.put("rhs_evaluations", static_cast<std::uint64_t>(t.n_rhs));
  j.put("status", tfe::ivp_status_name(t.status));
}

void write_sidecar(const std::string& out, const FlatJson& meta) {
  auto os = tfe::textio::open_out(out + ".json");
  os << meta.dump();
}

void note_written(const std::string& out) {
  std::cout << "wrote " << tfe::textio::resolve_out(out) << "\n";
  std::cout << "wrote " << tfe::textio::resolve_out(out + ".json") << "\n";
}

void emit_trajectory(const std::string& out, const tfe::Trajectory<3>& traj, int resample,
                     const std::map<int, std::string>& names, const FlatJson& meta) {
  auto os = tfe::textio::open_out(out);
  if (resample > 0)
    tfe::textio::write_trajectory_csv_resampled(os, traj, resample, names);
  else
    tfe::textio::write_trajectory_csv(os, traj, names);
  os.close();
  write_sidecar(out, meta);
  note_written(out);
}

void emit_table(const std::string& out, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows, const FlatJson& meta) {
  auto os = tfe::textio::open_out(out);
  tfe::textio::write_table_csv(os, header, rows);
  os.close();
  write_sidecar(out, meta);
  note_written(out);
}

std::string out_line(const char* key, double v) { return std::string(key) + " = " + fmt(v); }

// ---------------------------------------------------------------- options --

struct ProfileOpts {
  tfe::ProfileProblem p;
  tfe::IntegratorConfig cfg;
};

void add_profile_flags(CLI::App* c, ProfileOpts& o) {
  c->add_option("--eps", o.p.eps, "regularization width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--ymax", o.p.y_max, "integration horizon")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--blowup", o.p.blowup_f, "overshoot threshold on f")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--eta", o.p.undershoot_margin, "undershoot margin below zero")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--slope-cap", o.p.slope_cap, "overshoot threshold on f'")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--zero-res", o.p.zero_resolution, "dust floor for sign-change reporting")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--rtol", o.cfg.rtol, "relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--atol", o.cfg.atol, "absolute tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

struct OscOpts {
  tfe::OscProblem p;
  tfe::IntegratorConfig cfg;
};

void add_osc_flags(CLI::App* c, OscOpts& o) {
  c->add_option("--eps", o.p.eps, "regularization width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--s-transient", o.p.s_transient, "burn-in discarded before classification")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--s-observe", o.p.s_observe, "observation window")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--rtol", o.cfg.rtol, "relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--atol", o.cfg.atol, "absolute tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void configure(CLI::App* c, std::string& config_path) {
  // later command-line flags override earlier config-file tokens
  c->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c->add_option("--config", config_path, "read options from a key=value file (flags win)");
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// one `key=value` per line, # comments; rendered as --key value token pairs
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("--config: cannot read " + path);
  std::vector<std::string> toks;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw std::runtime_error("--config: " + where + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error("--config: " + where + ": expected key=value");
    if (key == "config") throw std::runtime_error("--config: " + where + ": cannot nest");
    toks.push_back("--" + key);
    toks.push_back(value);
  }
  return toks;
}

// Config precedence is defaults < file < flags: the file's tokens are spliced
// in right after the subcommand name, so every explicit flag lands later and,
// with the take-last policy, wins.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::size_t sub = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!args[i].empty() && args[i][0] != '-') {
      sub = i;
      break;
    }
  }
  if (sub == args.size()) return args;
  std::string path;
  for (std::size_t i = sub + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const std::vector<std::string> toks = config_tokens(path);
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, toks.begin(), toks.end());
  return args;
}

// ------------------------------------------------------------ subcommands --

struct ShootArgs {
  ProfileOpts po;
  double mu = -0.5;
  std::string out;
  int resample = 0;
};

void run_shoot(const ShootArgs& a) {
  const tfe::ShootResult r = tfe::shoot(a.po.p, a.mu, a.po.cfg);
  std::cout << out_line("n", a.po.p.n) << "\n"
            << out_line("mu", a.mu) << "\n"
            << "outcome = " << tfe::shot_outcome_name(r.outcome) << "\n"
            << "status = " << tfe::ivp_status_name(r.traj.status) << "\n"
            << "zeros = " << r.zeros.size() << "\n";
  if (!r.zeros.empty()) std::cout << out_line("first_zero", r.zeros.front()) << "\n";
  std::cout << out_line("closest_y", r.closest_y) << "\n"
            << out_line("closest_abs_f", r.closest_abs_f) << "\n";
  if (r.interface_estimate)
    std::cout << out_line("interface_estimate", *r.interface_estimate) << "\n";
  std::cout << "accepted_steps = " << r.traj.n_accepted << "\n";
  if (a.out.empty()) return;

  FlatJson meta;
  meta.put("subcommand", "shoot");
  echo_profile(meta, a.po.p);
  meta.put("mu", a.mu);
  echo_integrator(meta, a.po.cfg);
  meta.put("resample", a.resample);
  meta.put("out", a.out);
  meta.put("outcome", tfe::shot_outcome_name(r.outcome));
  meta.put("zero_count", static_cast<std::uint64_t>(r.zeros.size()));
  if (!r.zeros.empty()) meta.put("first_zero", r.zeros.front());
  meta.put("closest_y", r.closest_y);
  meta.put("closest_abs_f", r.closest_abs_f);
  if (r.interface_estimate) meta.put("interface_estimate", *r.interface_estimate);
  echo_traj_counters(meta, r.traj);
  emit_trajectory(a.out, r.traj, a.resample, tfe::shot_event_names(), meta);
}

struct FindMuArgs {
  ProfileOpts po;
  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();
  double tol = 1e-12;
  double window = 0.5;
  std::string out;
  int resample = 0;
};

void run_findmu(const FindMuArgs& a) {
  auto [lo, hi] = tfe::default_mu_bracket(a.po.p.n);
  if (!std::isnan(a.lo)) lo = a.lo;
  if (!std::isnan(a.hi)) hi = a.hi;
  const tfe::CriticalShoot cs = tfe::find_mu(a.po.p, lo, hi, a.tol, a.po.cfg, a.window);
  std::cout << out_line("n", a.po.p.n) << "\n"
            << "bracket = [" << fmt(lo) << ", " << fmt(hi) << "]\n"
            << out_line("mu_star", cs.mu_star) << "\n"
            << out_line("bracket_width", cs.bracket_width) << "\n"
            << out_line("y0", cs.y0) << "\n"
            << "zeros_near_interface = " << cs.zeros_near_interface.size() << "\n";
  for (double z : cs.zeros_near_interface) std::cout << out_line("zero", z) << "\n";
  if (a.out.empty()) return;

  // the overshoot-side shot regrows past the closest approach, so its
  // trajectory shows the interface region without the terminal plunge
  const tfe::ShootResult& side = cs.result_low.outcome == tfe::ShotOutcome::Overshoot
                                     ? cs.result_low
                                     : cs.result_high;
  FlatJson meta;
  meta.put("subcommand", "findmu");
  echo_profile(meta, a.po.p);
  meta.put("mu_lo", lo);
  meta.put("mu_hi", hi);
  meta.put("mu_tol", a.tol);
  meta.put("window", a.window);
  echo_integrator(meta, a.po.cfg);
  meta.put("resample", a.resample);
  meta.put("out", a.out);
  meta.put("mu_star", cs.mu_star);
  meta.put("bracket_width", cs.bracket_width);
  meta.put("y0", cs.y0);
  meta.put("zero_count", static_cast<std::uint64_t>(cs.zeros_near_interface.size()));
  meta.put("csv_side_mu", side.mu);
  echo_traj_counters(meta, side.traj);
  emit_trajectory(a.out, side.traj, a.resample, tfe::shot_event_names(), meta);
}

struct OscArgs {
  OscOpts oo;
  std::vector<double> init;  // empty: saddle-launch default
  std::string out;
  int resample = 0;
};

void run_osccmd(const OscArgs& a) {
  const tfe::Vec3 init = a.init.size() == 3 ? tfe::Vec3{a.init[0], a.init[1], a.init[2]}
                                            : tfe::default_osc_init(a.oo.p.n);
  const tfe::AttractorReport rep = tfe::classify_attractor(a.oo.p, init, a.oo.cfg);
  std::cout << out_line("n", a.oo.p.n) << "\n"
            << "init = (" << fmt(init[0]) << ", " << fmt(init[1]) << ", " << fmt(init[2])
            << ")\n"
            << "kind = " << tfe::attractor_kind_name(rep.kind) << "\n"
            << out_line("period", rep.period) << "\n"
            << out_line("amplitude", rep.amplitude) << "\n"
            << "sign_changing = " << (rep.sign_changing ? "true" : "false") << "\n"
            << out_line("equilibrium", rep.equilibrium) << "\n"
            << out_line("residual", rep.residual) << "\n"
            << "escaped = " << (rep.escaped ? "true" : "false") << "\n";
  if (a.out.empty()) return;

  const tfe::Trajectory<3> traj = tfe::run_osc(a.oo.p, init, a.oo.cfg);
  FlatJson meta;
  meta.put("subcommand", "osc");
  meta.put("n", a.oo.p.n);
  meta.put("eps", a.oo.p.eps);
  meta.put("s_transient", a.oo.p.s_transient);
  meta.put("s_observe", a.oo.p.s_observe);
  echo_integrator(meta, a.oo.cfg);
  meta.put("init_0", init[0]);
  meta.put("init_1", init[1]);
  meta.put("init_2", init[2]);
  meta.put("resample", a.resample);
  meta.put("out", a.out);
  meta.put("kind", tfe::attractor_kind_name(rep.kind));
  meta.put("period", rep.period);
  meta.put("amplitude", rep.amplitude);
  meta.put("sign_changing", rep.sign_changing);
  meta.put("equilibrium", rep.equilibrium);
  meta.put("residual", rep.residual);
  meta.put("escaped", rep.escaped);
  echo_traj_counters(meta, traj);
  emit_trajectory(a.out, traj, a.resample, tfe::osc_event_names(), meta);
}

struct NhArgs {
  OscOpts oo;
  double lo = 1.7;
  double hi = 1.8;
  double tol = 5e-3;
};

void run_nh(const NhArgs& a) {
  const double est = tfe::find_nh(a.lo, a.hi, a.tol, a.oo.p, a.oo.cfg);
  std::cout << "bracket = [" << fmt(a.lo) << ", " << fmt(a.hi) << "]\n"
            << out_line("tol", a.tol) << "\n"
            << out_line("n_h", est) << "\n";
}

struct CubicArgs {
  double n = 2.0;
  std::string out;
  int count = 600;
};

void run_cubic(const CubicArgs& a) {
  const double m = 3.0 / a.n;
  const tfe::LRoot lr = tfe::solve_l(a.n);
  std::cout << out_line("n", a.n) << "\n"
            << out_line("m", m) << "\n";
  try {
    std::cout << out_line("B0", tfe::b0(a.n)) << "\n";
  } catch (const tfe::NoEquilibrium&) {
    // no leading coefficient outside (3/2, 3); the root is still well defined
  }
  std::cout << out_line("l", lr.l) << "\n"
            << "window = (" << fmt(m) << ", " << fmt(1.0 + m) << ")\n"
            << "admissible = " << (lr.admissible ? "true" : "false") << "\n";
  if (a.out.empty()) return;

  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(a.count) + 1);
  for (int i = 0; i <= a.count; ++i) {
    const double l = 3.0 * static_cast<double>(i) / a.count;
    rows.push_back({fmt(l), fmt(tfe::hn(a.n, l))});
  }
  FlatJson meta;
  meta.put("subcommand", "cubic");
  meta.put("n", a.n);
  meta.put("count", a.count);
  meta.put("out", a.out);
  meta.put("l", lr.l);
  meta.put("admissible", lr.admissible);
  emit_table(a.out, {"l", "H"}, rows, meta);
}

struct ExpandArgs {
  double n = 2.0;
  double D = 0.0;
  double z_lo = 1e-6;
  double z_hi = 1e-2;
  int count = 200;
  std::string out;
};

void run_expand(const ExpandArgs& a) {
  const tfe::ExpansionParams ep = tfe::make_expansion(a.n, a.D);
  const double order = tfe::residual_order(ep, tfe::residual_z_grid());
  std::cout << out_line("n", ep.n) << "\n"
            << out_line("m", ep.m) << "\n"
            << out_line("B0", ep.B0) << "\n"
            << out_line("l", ep.l) << "\n"
            << out_line("D", ep.D) << "\n"
            << "admissible = " << (ep.admissible ? "true" : "false") << "\n"
            << out_line("residual_order", order) << "\n";
  if (a.out.empty()) return;

  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(a.count) + 1);
  const double lr = std::log(a.z_lo), hr = std::log(a.z_hi);
  for (int i = 0; i <= a.count; ++i) {
    const double z = std::exp(lr + (hr - lr) * static_cast<double>(i) / a.count);
    const tfe::SeriesJet jet = tfe::eval_expansion(ep, z);
    rows.push_back({fmt(z), fmt(jet.f), fmt(jet.f1), fmt(jet.f2)});
  }
  FlatJson meta;
  meta.put("subcommand", "expand");
  meta.put("n", ep.n);
  meta.put("D", ep.D);
  meta.put("z_lo", a.z_lo);
  meta.put("z_hi", a.z_hi);
  meta.put("count", a.count);
  meta.put("out", a.out);
  meta.put("l", ep.l);
  meta.put("B0", ep.B0);
  meta.put("admissible", ep.admissible);
  meta.put("residual_order", order);
  emit_table(a.out, {"z", "f", "f1", "f2"}, rows, meta);
}

struct BackshootArgs {
  double n = 2.0;
  double D = 0.0;
  double s0 = std::numeric_limits<double>::quiet_NaN();
  double delta = 1e-3;
  tfe::IntegratorConfig cfg;
  std::string out;
  int resample = 0;
};

void run_backshoot(const BackshootArgs& a) {
  tfe::BackshootState b;
  const bool oscillatory = !std::isnan(a.s0);
  if (oscillatory) {
    tfe::OscProblem op;
    op.n = a.n;
    const tfe::OrbitTable orbit = tfe::make_orbit(op, a.cfg);
    b = tfe::backshoot_oscillatory(a.n, a.s0, a.delta, orbit, a.cfg);
  } else {
    b = tfe::backshoot_positive(a.n, a.D, a.delta, a.cfg);
  }
  std::cout << out_line("n", a.n) << "\n"
            << "bundle = " << (oscillatory ? "oscillatory" : "positive") << "\n";
  if (oscillatory)
    std::cout << out_line("s0", a.s0) << "\n";
  else
    std::cout << out_line("D", a.D) << "\n";
  std::cout << out_line("delta", a.delta) << "\n"
            << "seed = (" << fmt(b.seed[0]) << ", " << fmt(b.seed[1]) << ", " << fmt(b.seed[2])
            << ")\n"
            << out_line("origin_f", b.origin[0]) << "\n"
            << out_line("origin_f1", b.origin[1]) << "\n"
            << out_line("origin_f2", b.origin[2]) << "\n";
  if (a.out.empty()) return;

  FlatJson meta;
  meta.put("subcommand", "backshoot");
  meta.put("n", a.n);
  meta.put("bundle", oscillatory ? "oscillatory" : "positive");
  if (oscillatory)
    meta.put("s0", a.s0);
  else
    meta.put("D", a.D);
  meta.put("delta", a.delta);
  echo_integrator(meta, a.cfg);
  meta.put("resample", a.resample);
  meta.put("out", a.out);
  meta.put("origin_f", b.origin[0]);
  meta.put("origin_f1", b.origin[1]);
  meta.put("origin_f2", b.origin[2]);
  echo_traj_counters(meta, b.traj);
  emit_trajectory(a.out, b.traj, a.resample, {}, meta);
}

struct ScanDArgs {
  double n = 2.0;
  double mag_min = 1e-2;
  double mag_max = 1e3;
  int count = 41;
  double delta = 1e-3;
  tfe::IntegratorConfig cfg;
  std::string out;
};

void run_scand(const ScanDArgs& a) {
  const std::vector<double> grid = tfe::d_grid(a.mag_min, a.mag_max, a.count);
  const tfe::ScanDResult res = tfe::scan_D(a.n, grid, a.delta, a.cfg);
  std::cout << out_line("n", a.n) << "\n"
            << "points = " << res.rows.size() << "\n"
            << out_line("min_abs_fp0", res.min_abs_fp0) << "\n"
            << out_line("min_abs_fp0_D", res.min_abs_fp0_D) << "\n"
            << "sign_change_brackets = " << res.brackets.size() << "\n";
  for (double d : res.refined) std::cout << out_line("refined_D", d) << "\n";
  if (a.out.empty()) return;

  std::vector<std::vector<std::string>> rows;
  rows.reserve(res.rows.size());
  for (const tfe::DRow& r : res.rows) rows.push_back({fmt(r.D), fmt(r.f0), fmt(r.fp0)});
  FlatJson meta;
  meta.put("subcommand", "scan-d");
  meta.put("n", a.n);
  meta.put("mag_min", a.mag_min);
  meta.put("mag_max", a.mag_max);
  meta.put("count", a.count);
  meta.put("delta", a.delta);
  echo_integrator(meta, a.cfg);
  meta.put("out", a.out);
  meta.put("min_abs_fp0", res.min_abs_fp0);
  meta.put("min_abs_fp0_D", res.min_abs_fp0_D);
  meta.put("bracket_count", static_cast<std::uint64_t>(res.brackets.size()));
  emit_table(a.out, {"D", "f0", "fp0"}, rows, meta);
}

struct ScanS0Args {
  double n = 1.7;
  double delta = 1e-3;
  int count = 64;
  tfe::IntegratorConfig cfg;
  std::string out;
};

void run_scans0(const ScanS0Args& a) {
  tfe::OscProblem op;
  op.n = a.n;
  const tfe::OrbitTable orbit = tfe::make_orbit(op, a.cfg);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(a.count));
  double best_s0 = 0.0, best_abs = std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.count; ++i) {
    const double s0 = orbit.period * static_cast<double>(i) / a.count;
    const tfe::BackshootState b = tfe::backshoot_oscillatory(a.n, s0, a.delta, orbit, a.cfg);
    rows.push_back({fmt(s0), fmt(b.origin[0]), fmt(b.origin[1])});
    if (std::abs(b.origin[1]) < best_abs) {
      best_abs = std::abs(b.origin[1]);
      best_s0 = s0;
    }
  }
  std::cout << out_line("n", a.n) << "\n"
            << out_line("period", orbit.period) << "\n"
            << "points = " << a.count << "\n"
            << out_line("best_s0", best_s0) << "\n"
            << out_line("best_abs_fp0", best_abs) << "\n";
  if (a.out.empty()) return;

  FlatJson meta;
  meta.put("subcommand", "scan-s0");
  meta.put("n", a.n);
  meta.put("delta", a.delta);
  meta.put("count", a.count);
  echo_integrator(meta, a.cfg);
  meta.put("out", a.out);
  meta.put("period", orbit.period);
  meta.put("best_s0", best_s0);
  meta.put("best_abs_fp0", best_abs);
  emit_table(a.out, {"s0", "f0", "fp0"}, rows, meta);
}

struct Log3Args {
  ProfileOpts po;
  double mu_tol = 1e-12;
  double z_lo = 0.0;  // 0: defaults scale with y0 inside the fit
  double z_hi = 0.0;
  int samples = 50;
  std::string out;
};

void run_log3(const Log3Args& a) {
  tfe::ProfileProblem p = a.po.p;
  p.n = 3.0;
  const auto [lo, hi] = tfe::default_mu_bracket(p.n);
  const tfe::CriticalShoot cs = tfe::find_mu(p, lo, hi, a.mu_tol, a.po.cfg);
  const tfe::ShootResult& side = cs.result_low.outcome == tfe::ShotOutcome::Overshoot
                                     ? cs.result_low
                                     : cs.result_high;
  const tfe::LogFit fit = tfe::logfit_n3(side, a.z_lo, a.z_hi, a.samples);
  const double reference = 3.0 / std::sqrt(2.0);
  std::cout << out_line("mu_star", cs.mu_star) << "\n"
            << out_line("y0", cs.y0) << "\n"
            << out_line("C", fit.C) << "\n"
            << out_line("p", fit.p) << "\n"
            << out_line("rms", fit.rms) << "\n"
            << "window = (" << fmt(fit.window.first) << ", " << fmt(fit.window.second) << ")\n"
            << out_line("reference_C", reference) << "\n";
  if (a.out.empty()) return;

  const double y0 = side.interface_estimate.value();
  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(a.samples));
  const double llo = std::log(fit.window.first), lhi = std::log(fit.window.second);
  for (int i = 0; i < a.samples; ++i) {
    const double z = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                        std::max(1, a.samples - 1));
    const double f = tfe::dense_eval(side.traj, y0 - z)[0];
    const double model = fit.C * z * std::pow(std::abs(std::log(z)), fit.p);
    rows.push_back({fmt(z), fmt(f), fmt(model)});
  }
  FlatJson meta;
  meta.put("subcommand", "log3");
  echo_profile(meta, p);
  meta.put("mu_tol", a.mu_tol);
  meta.put("samples", a.samples);
  echo_integrator(meta, a.po.cfg);
  meta.put("out", a.out);
  meta.put("mu_star", cs.mu_star);
  meta.put("y0", cs.y0);
  meta.put("C", fit.C);
  meta.put("p", fit.p);
  meta.put("rms", fit.rms);
  meta.put("window_lo", fit.window.first);
  meta.put("window_hi", fit.window.second);
  emit_table(a.out, {"z", "f", "fit"}, rows, meta);
}

struct NoExist4Args {
  ProfileOpts po;
  std::vector<double> grid;
  std::string out;
};

void run_noexist4(const NoExist4Args& a) {
  const std::vector<double> grid = a.grid.empty() ? tfe::default_n4_grid() : a.grid;
  const std::vector<tfe::N4Row> rows = tfe::nonexistence_scan_n4(grid, a.po.p, a.po.cfg);
  double min_f = std::numeric_limits<double>::infinity();
  double min_mu = 0.0;
  bool all_positive = true;
  for (const tfe::N4Row& r : rows) {
    if (r.min_f < min_f) {
      min_f = r.min_f;
      min_mu = r.mu;
    }
    if (!(r.min_f > 0.0)) all_positive = false;
  }
  std::cout << "points = " << rows.size() << "\n"
            << out_line("min_f", min_f) << "\n"
            << out_line("min_f_mu", min_mu) << "\n"
            << "all_positive = " << (all_positive ? "true" : "false") << "\n";
  if (a.out.empty()) return;

  std::vector<std::vector<std::string>> table;
  table.reserve(rows.size());
  for (const tfe::N4Row& r : rows)
    table.push_back({fmt(r.mu), fmt(r.min_f), tfe::shot_outcome_name(r.outcome)});
  FlatJson meta;
  meta.put("subcommand", "noexist4");
  tfe::ProfileProblem p = a.po.p;
  p.n = 4.0;
  echo_profile(meta, p);
  echo_integrator(meta, a.po.cfg);
  meta.put("out", a.out);
  meta.put("grid_points", static_cast<std::uint64_t>(grid.size()));
  meta.put("min_f", min_f);
  meta.put("min_f_mu", min_mu);
  meta.put("all_positive", all_positive);
  emit_table(a.out, {"mu", "min_f", "outcome"}, table, meta);
}

struct SweepArgs {
  std::vector<double> n_list{1.7, 1.75, 1.8, 1.9, 2.0};
  double mu_tol = 1e-10;
  double window = 0.5;
  double eps = 1e-11;
  tfe::IntegratorConfig cfg;
  std::string out;
};

struct SweepPoint {
  double n = 0.0;
  tfe::CriticalShoot cs;
  bool has_l = false;
  tfe::LRoot lr;
  tfe::AttractorReport rep;
};

void run_sweep(const SweepArgs& a) {
  const std::vector<SweepPoint> points = tfe::scan::parallel_map(a.n_list, [&](double n) {
    SweepPoint pt;
    pt.n = n;
    tfe::ProfileProblem p;
    p.n = n;
    p.eps = a.eps;
    const auto [lo, hi] = tfe::default_mu_bracket(n);
    pt.cs = tfe::find_mu(p, lo, hi, a.mu_tol, a.cfg, a.window);
    try {
      pt.lr = tfe::solve_l(n);
      pt.has_l = true;
    } catch (const std::exception&) {
      pt.has_l = false;
    }
    tfe::OscProblem op;
    op.n = n;
    op.eps = a.eps;
    pt.rep = tfe::classify_attractor(op, a.cfg);
    return pt;
  });

  std::vector<std::vector<std::string>> rows;
  rows.reserve(points.size());
  for (const SweepPoint& pt : points) {
    const bool periodic = pt.rep.kind == tfe::AttractorKind::Periodic;
    rows.push_back({fmt(pt.n), fmt(pt.cs.mu_star), fmt(pt.cs.y0),
                    std::to_string(pt.cs.zeros_near_interface.size()),
                    pt.cs.zeros_near_interface.empty()
                        ? std::string{}
                        : fmt(pt.cs.zeros_near_interface.front()),
                    pt.has_l ? fmt(pt.lr.l) : std::string{},
                    pt.has_l ? (pt.lr.admissible ? "true" : "false") : std::string{},
                    tfe::attractor_kind_name(pt.rep.kind),
                    periodic ? fmt(pt.rep.period) : std::string{}});
    std::cout << "n = " << fmt(pt.n) << "  mu_star = " << fmt(pt.cs.mu_star)
              << "  y0 = " << fmt(pt.cs.y0)
              << "  zeros = " << pt.cs.zeros_near_interface.size()
              << "  attractor = " << tfe::attractor_kind_name(pt.rep.kind) << "\n";
  }
  if (a.out.empty()) return;

  FlatJson meta;
  meta.put("subcommand", "sweep");
  meta.put("points", static_cast<std::uint64_t>(points.size()));
  meta.put("mu_tol", a.mu_tol);
  meta.put("window", a.window);
  meta.put("eps", a.eps);
  echo_integrator(meta, a.cfg);
  meta.put("out", a.out);
  emit_table(a.out,
             {"n", "mu_star", "y0", "zeros", "first_zero", "l", "admissible", "attractor",
              "period"},
             rows, meta);
}

struct ReproArgs {
  std::string out_dir = "figs";
  double mu_tol = 1e-12;
};

void run_reprofigs(const ReproArgs& a) {
  const tfe::IntegratorConfig cfg;
  FlatJson meta;
  meta.put("subcommand", "repro-figs");
  meta.put("out_dir", a.out_dir);
  meta.put("mu_tol", a.mu_tol);

  auto critical = [&](double n) {
    tfe::ProfileProblem p;
    p.n = n;
    const auto [lo, hi] = tfe::default_mu_bracket(n);
    return tfe::find_mu(p, lo, hi, a.mu_tol, cfg);
  };
  auto overshoot_side = [](const tfe::CriticalShoot& cs) -> const tfe::ShootResult& {
    return cs.result_low.outcome == tfe::ShotOutcome::Overshoot ? cs.result_low
                                                                : cs.result_high;
  };
  auto window_csv = [&](const std::string& name, const tfe::Trajectory<3>& traj, double lo,
                        double hi, int count) {
    lo = std::max(lo, traj.t.front());
    hi = std::min(hi, traj.t.back());
    auto os = tfe::textio::open_out(a.out_dir + "/" + name);
    tfe::textio::write_trajectory_csv_resampled(os, traj, count, tfe::shot_event_names(), lo,
                                                hi, true);
    os.close();
    std::cout << "wrote " << tfe::textio::resolve_out(a.out_dir + "/" + name) << "\n";
  };

  // near-interface oscillatory shot, n = 1.7
  {
    const tfe::CriticalShoot cs = critical(1.7);
    window_csv("fig01.csv", overshoot_side(cs).traj, cs.y0 - 0.25, cs.y0 + 0.05, 4000);
    meta.put("fig01_n", 1.7);
    meta.put("fig01_mu", cs.mu_star);
    meta.put("fig01_y0", cs.y0);
  }
  // n = 1.75 at the published second derivative, native steps with event rows
  {
    tfe::ProfileProblem p;
    p.n = 1.75;
    const double mu = -0.434097009;
    const tfe::ShootResult r = tfe::shoot(p, mu, cfg);
    auto os = tfe::textio::open_out(a.out_dir + "/fig02.csv");
    tfe::textio::write_trajectory_csv(os, r.traj, tfe::shot_event_names());
    os.close();
    std::cout << "wrote " << tfe::textio::resolve_out(a.out_dir + "/fig02.csv") << "\n";
    meta.put("fig02_n", 1.75);
    meta.put("fig02_mu", mu);
    if (!r.zeros.empty()) meta.put("fig02_first_zero", r.zeros.front());
  }
  // boundary exponent, non-oscillatory
  {
    const tfe::CriticalShoot cs = critical(1.75987);
    window_csv("fig03.csv", overshoot_side(cs).traj, cs.y0 - 0.17, cs.y0 + 0.02, 4000);
    meta.put("fig03_n", 1.75987);
    meta.put("fig03_mu", cs.mu_star);
    meta.put("fig03_y0", cs.y0);
  }
  // n = 1.8: near-interface view and the global profile
  {
    const tfe::CriticalShoot cs = critical(1.8);
    const tfe::Trajectory<3>& traj = overshoot_side(cs).traj;
    window_csv("fig04.csv", traj, cs.y0 - 0.25, cs.y0 + 0.02, 4000);
    window_csv("fig05.csv", traj, 0.0, cs.y0 + 0.02, 2000);
    meta.put("fig04_n", 1.8);
    meta.put("fig04_mu", cs.mu_star);
    meta.put("fig04_y0", cs.y0);
  }
  // n = 2 global profile
  {
    const tfe::CriticalShoot cs = critical(2.0);
    window_csv("fig06.csv", overshoot_side(cs).traj, 0.0, cs.y0 + 0.02, 2000);
    meta.put("fig06_n", 2.0);
    meta.put("fig06_mu", cs.mu_star);
    meta.put("fig06_y0", cs.y0);
  }
  // n = 3 global profile
  {
    const tfe::CriticalShoot cs = critical(3.0);
    window_csv("fig07.csv", overshoot_side(cs).traj, 0.0, cs.y0 + 0.01, 2000);
    meta.put("fig07_n", 3.0);
    meta.put("fig07_mu", cs.mu_star);
    meta.put("fig07_y0", cs.y0);
  }
  // n = 4 positivity scan
  {
    const std::vector<tfe::N4Row> rows = tfe::nonexistence_scan_n4(tfe::default_n4_grid());
    std::vector<std::vector<std::string>> table;
    for (const tfe::N4Row& r : rows)
      table.push_back({fmt(r.mu), fmt(r.min_f), tfe::shot_outcome_name(r.outcome)});
    auto os = tfe::textio::open_out(a.out_dir + "/fig08.csv");
    tfe::textio::write_table_csv(os, {"mu", "min_f", "outcome"}, table);
    os.close();
    std::cout << "wrote " << tfe::textio::resolve_out(a.out_dir + "/fig08.csv") << "\n";
    meta.put("fig08_n", 4.0);
  }
  // characteristic-cubic graphs
  const double cubic_ns[3] = {2.0, 1.8, 1.7};
  const char* cubic_names[3] = {"fig10.csv", "fig11.csv", "fig12.csv"};
  for (int i = 0; i < 3; ++i) {
    std::vector<std::vector<std::string>> table;
    for (int j = 0; j <= 600; ++j) {
      const double l = 3.0 * j / 600.0;
      table.push_back({fmt(l), fmt(tfe::hn(cubic_ns[i], l))});
    }
    auto os = tfe::textio::open_out(a.out_dir + "/" + cubic_names[i]);
    tfe::textio::write_table_csv(os, {"l", "H"}, table);
    os.close();
    std::cout << "wrote " << tfe::textio::resolve_out(a.out_dir + "/" + cubic_names[i])
              << "\n";
    const std::string stem(cubic_names[i], 5);
    meta.put(stem + "_n", cubic_ns[i]);
    meta.put(stem + "_l", tfe::solve_l(cubic_ns[i]).l);
  }

  auto js = tfe::textio::open_out(a.out_dir + "/figs.json");
  js << meta.dump();
  std::cout << "wrote " << tfe::textio::resolve_out(a.out_dir + "/figs.json") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar profile toolkit for the fourth-order thin film equation"};
  app.require_subcommand(1);
  std::string config_path;

  ShootArgs shoot_args;
  CLI::App* shoot_cmd = app.add_subcommand("shoot", "single shot from the origin");
  configure(shoot_cmd, config_path);
  shoot_cmd->add_option("--n", shoot_args.po.p.n, "mobility exponent")->required();
  shoot_cmd->add_option("--mu", shoot_args.mu, "second derivative at the origin")
      ->capture_default_str();
  add_profile_flags(shoot_cmd, shoot_args.po);
  shoot_cmd->add_option("--out", shoot_args.out, "trajectory CSV path");
  shoot_cmd->add_option("--resample", shoot_args.resample, "uniform rows instead of steps")
      ->check(CLI::PositiveNumber);

  FindMuArgs findmu_args;
  CLI::App* findmu_cmd = app.add_subcommand("findmu", "bisect mu to the critical shot");
  configure(findmu_cmd, config_path);
  findmu_cmd->add_option("--n", findmu_args.po.p.n, "mobility exponent")->required();
  findmu_cmd->add_option("--lo", findmu_args.lo, "bracket low end");
  findmu_cmd->add_option("--hi", findmu_args.hi, "bracket high end");
  findmu_cmd->add_option("--tol", findmu_args.tol, "bracket width target")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  findmu_cmd->add_option("--window", findmu_args.window, "zero-reporting window above y0")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_profile_flags(findmu_cmd, findmu_args.po);
  findmu_cmd->add_option("--out", findmu_args.out, "overshoot-side trajectory CSV path");
  findmu_cmd->add_option("--resample", findmu_args.resample, "uniform rows instead of steps")
      ->check(CLI::PositiveNumber);

  OscArgs osc_args;
  CLI::App* osc_cmd = app.add_subcommand("osc", "classify the oscillatory-component attractor");
  configure(osc_cmd, config_path);
  osc_cmd->add_option("--n", osc_args.oo.p.n, "mobility exponent")->required();
  add_osc_flags(osc_cmd, osc_args.oo);
  osc_cmd->add_option("--init", osc_args.init, "start state phi,phi',phi''")
      ->expected(3)
      ->delimiter(',');
  osc_cmd->add_option("--out", osc_args.out, "trajectory CSV path");
  osc_cmd->add_option("--resample", osc_args.resample, "uniform rows instead of steps")
      ->check(CLI::PositiveNumber);

  NhArgs nh_args;
  CLI::App* nh_cmd = app.add_subcommand("nh", "bisect for the heteroclinic exponent");
  configure(nh_cmd, config_path);
  nh_cmd->add_option("--lo", nh_args.lo, "bracket low end")->capture_default_str();
  nh_cmd->add_option("--hi", nh_args.hi, "bracket high end")->capture_default_str();
  nh_cmd->add_option("--tol", nh_args.tol, "bracket width target")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_osc_flags(nh_cmd, nh_args.oo);

  CubicArgs cubic_args;
  CLI::App* cubic_cmd = app.add_subcommand("cubic", "characteristic cubic root and window");
  configure(cubic_cmd, config_path);
  cubic_cmd->add_option("--n", cubic_args.n, "mobility exponent")->required();
  cubic_cmd->add_option("--out", cubic_args.out, "graph table CSV path");
  cubic_cmd->add_option("--count", cubic_args.count, "graph sample count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ExpandArgs expand_args;
  CLI::App* expand_cmd = app.add_subcommand("expand", "interface expansion series");
  configure(expand_cmd, config_path);
  expand_cmd->add_option("--n", expand_args.n, "mobility exponent")->required();
  expand_cmd->add_option("--d", expand_args.D, "bundle parameter D")->capture_default_str();
  expand_cmd->add_option("--z-lo", expand_args.z_lo, "table lower z")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  expand_cmd->add_option("--z-hi", expand_args.z_hi, "table upper z")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  expand_cmd->add_option("--count", expand_args.count, "table rows")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  expand_cmd->add_option("--out", expand_args.out, "series table CSV path");

  BackshootArgs backshoot_args;
  CLI::App* backshoot_cmd =
      app.add_subcommand("backshoot", "integrate a bundle from the interface to the origin");
  configure(backshoot_cmd, config_path);
  backshoot_cmd->add_option("--n", backshoot_args.n, "mobility exponent")->required();
  backshoot_cmd->add_option("--d", backshoot_args.D, "positive-bundle parameter D")
      ->capture_default_str();
  backshoot_cmd->add_option("--s0", backshoot_args.s0,
                            "oscillatory-bundle phase (switches bundle)");
  backshoot_cmd->add_option("--delta", backshoot_args.delta, "seed offset from the interface")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  backshoot_cmd->add_option("--rtol", backshoot_args.cfg.rtol, "relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  backshoot_cmd->add_option("--atol", backshoot_args.cfg.atol, "absolute tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  backshoot_cmd->add_option("--out", backshoot_args.out, "trajectory CSV path");
  backshoot_cmd
      ->add_option("--resample", backshoot_args.resample, "uniform rows instead of steps")
      ->check(CLI::PositiveNumber);

  ScanDArgs scand_args;
  CLI::App* scand_cmd = app.add_subcommand("scan-d", "scan the positive bundle over D");
  configure(scand_cmd, config_path);
  scand_cmd->add_option("--n", scand_args.n, "mobility exponent")->required();
  scand_cmd->add_option("--mag-min", scand_args.mag_min, "smallest |D|")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scand_cmd->add_option("--mag-max", scand_args.mag_max, "largest |D|")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scand_cmd->add_option("--count", scand_args.count, "grid points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scand_cmd->add_option("--delta", scand_args.delta, "seed offset from the interface")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scand_cmd->add_option("--rtol", scand_args.cfg.rtol, "relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scand_cmd->add_option("--atol", scand_args.cfg.atol, "absolute tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scand_cmd->add_option("--out", scand_args.out, "scan table CSV path");

  ScanS0Args scans0_args;
  CLI::App* scans0_cmd = app.add_subcommand("scan-s0", "scan the oscillatory bundle over phase");
  configure(scans0_cmd, config_path);
  scans0_cmd->add_option("--n", scans0_args.n, "mobility exponent")->required();
  scans0_cmd->add_option("--delta", scans0_args.delta, "seed offset from the interface")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scans0_cmd->add_option("--count", scans0_args.count, "phases per period")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scans0_cmd->add_option("--rtol", scans0_args.cfg.rtol, "relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scans0_cmd->add_option("--atol", scans0_args.cfg.atol, "absolute tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scans0_cmd->add_option("--out", scans0_args.out, "scan table CSV path");

  Log3Args log3_args;
  CLI::App* log3_cmd = app.add_subcommand("log3", "fit the n=3 logarithmic contact law");
  configure(log3_cmd, config_path);
  log3_cmd->add_option("--mu-tol", log3_args.mu_tol, "critical-shot bracket target")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  log3_cmd->add_option("--z-lo", log3_args.z_lo, "fit window lower z (0: 1e-4*y0)");
  log3_cmd->add_option("--z-hi", log3_args.z_hi, "fit window upper z (0: 1e-2*y0)");
  log3_cmd->add_option("--samples", log3_args.samples, "fit sample count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_profile_flags(log3_cmd, log3_args.po);
  log3_cmd->add_option("--out", log3_args.out, "fit table CSV path");

  NoExist4Args noexist4_args;
  CLI::App* noexist4_cmd = app.add_subcommand("noexist4", "positivity scan at n=4");
  configure(noexist4_cmd, config_path);
  noexist4_cmd->add_option("--grid", noexist4_args.grid, "mu grid (comma separated)")
      ->delimiter(',');
  add_profile_flags(noexist4_cmd, noexist4_args.po);
  noexist4_cmd->add_option("--out", noexist4_args.out, "scan table CSV path");

  SweepArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "critical-shot summary over a list of n");
  configure(sweep_cmd, config_path);
  sweep_cmd->add_option("--n-list", sweep_args.n_list, "exponents (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--mu-tol", sweep_args.mu_tol, "bracket width target")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--window", sweep_args.window, "zero-reporting window above y0")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--eps", sweep_args.eps, "regularization width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--rtol", sweep_args.cfg.rtol, "relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--atol", sweep_args.cfg.atol, "absolute tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_args.out, "summary table CSV path");

  ReproArgs repro_args;
  CLI::App* repro_cmd = app.add_subcommand("repro-figs", "emit every figure's data series");
  configure(repro_cmd, config_path);
  repro_cmd->add_option("--out-dir", repro_args.out_dir, "target directory")
      ->capture_default_str();
  repro_cmd->add_option("--mu-tol", repro_args.mu_tol, "critical-shot bracket target")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::function<void()> action;
  shoot_cmd->callback([&] { action = [&] { run_shoot(shoot_args); }; });
  findmu_cmd->callback([&] { action = [&] { run_findmu(findmu_args); }; });
  osc_cmd->callback([&] { action = [&] { run_osccmd(osc_args); }; });
  nh_cmd->callback([&] { action = [&] { run_nh(nh_args); }; });
  cubic_cmd->callback([&] { action = [&] { run_cubic(cubic_args); }; });
  expand_cmd->callback([&] { action = [&] { run_expand(expand_args); }; });
  backshoot_cmd->callback([&] { action = [&] { run_backshoot(backshoot_args); }; });
  scand_cmd->callback([&] { action = [&] { run_scand(scand_args); }; });
  scans0_cmd->callback([&] { action = [&] { run_scans0(scans0_args); }; });
  log3_cmd->callback([&] { action = [&] { run_log3(log3_args); }; });
  noexist4_cmd->callback([&] { action = [&] { run_noexist4(noexist4_args); }; });
  sweep_cmd->callback([&] { action = [&] { run_sweep(sweep_args); }; });
  repro_cmd->callback([&] { action = [&] { run_reprofigs(repro_args); }; });

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (action) action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
