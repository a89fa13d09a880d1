#include "tfe/profile.hpp"

#include <algorithm>
#include <cmath>

#include "tfe/errors.hpp"

namespace tfe {

namespace {

constexpr int kZeroEvent = 1;
constexpr int kBlowEvent = 2;
constexpr int kUnderEvent = 3;
constexpr int kSlopeEvent = 4;
constexpr int kTurnEvent = 5;

// The regularized quotient spikes in a band of width ~eps/|f'| around each
// f = 0 crossing. Resolving the band needs steps far below the span-scaled
// default floor, so substitute an absolute one when the caller left it unset.
IntegratorConfig profile_cfg(IntegratorConfig cfg) {
  if (cfg.h_min <= 0.0) cfg.h_min = 1e-15;
  return cfg;
}

double max_abs_f_between(const Trajectory<3>& traj, double a, double b) {
  if (!(b > a)) return 0.0;
  double best = 0.0;
  const int samples = 128;
  for (int i = 0; i <= samples; ++i) {
    double y = a + (b - a) * i / samples;
    best = std::max(best, std::abs(dense_eval(traj, y)[0]));
  }
  return best;
}

}  // namespace

void ProfileProblem::validate() const {
  if (!(n > 0.0)) throw OutOfRange("ProfileProblem: n must be positive");
  if (!(eps > 0.0)) throw OutOfRange("ProfileProblem: eps must be positive");
  if (!(y_max > 0.0)) throw OutOfRange("ProfileProblem: y_max must be positive");
  if (!(blowup_f > 1.0)) throw OutOfRange("ProfileProblem: blowup_f must exceed 1");
  if (!(undershoot_margin > 0.0)) throw OutOfRange("ProfileProblem: undershoot_margin must be positive");
  if (!(slope_cap > 0.0)) throw OutOfRange("ProfileProblem: slope_cap must be positive");
  if (!(zero_resolution > 0.0)) throw OutOfRange("ProfileProblem: zero_resolution must be positive");
}

const char* shot_outcome_name(ShotOutcome o) {
  switch (o) {
    case ShotOutcome::Overshoot: return "Overshoot";
    case ShotOutcome::Undershoot: return "Undershoot";
    case ShotOutcome::Indeterminate: return "Indeterminate";
  }
  return "?";
}

Vec3 profile_rhs(double n, double eps, const Vec3& state, double y) {
  const double f = state[0];
  const double w = std::pow(eps * eps + f * f, -0.5 * n);
  return {state[1], state[2], y * f * w};
}

ShootResult shoot_from(const ProfileProblem& p, const Vec3& init, const IntegratorConfig& cfg) {
  p.validate();

  const double n = p.n;
  const double eps = p.eps;
  const double scale = 1.0 / (4.0 + n);

  auto rhs = [n, eps, scale](double y, const Vec3& s) -> Vec3 {
    Vec3 d = profile_rhs(n, eps, s, y);
    d[2] *= scale;
    return d;
  };

  std::vector<EventSpec<3>> events;
  events.push_back({[](double, const Vec3& s) { return s[0]; }, Direction::Any, false, kZeroEvent, {}});
  events.push_back({[bf = p.blowup_f](double, const Vec3& s) { return s[0] - bf; },
                    Direction::Rising, true, kBlowEvent, {}});
  events.push_back({[eta = p.undershoot_margin](double, const Vec3& s) { return s[0] + eta; },
                    Direction::Falling, true, kUnderEvent, {}});
  events.push_back({[cap = p.slope_cap](double, const Vec3& s) { return s[1] - cap; },
                    Direction::Rising, true, kSlopeEvent,
                    [](double, const Vec3& s) { return s[0] > 1.0; }});
  events.push_back({[](double, const Vec3& s) { return s[1]; }, Direction::Any, false, kTurnEvent, {}});

  ShootResult r;
  r.mu = init[2];
  r.traj = integrate_core(rhs, 0.0, init, p.y_max, events, profile_cfg(cfg));

  switch (r.traj.status) {
    case IvpStatus::Ok:
      r.outcome = ShotOutcome::Indeterminate;
      break;
    case IvpStatus::TerminalEvent:
      r.outcome = (r.traj.terminal_event == kUnderEvent) ? ShotOutcome::Undershoot
                                                         : ShotOutcome::Overshoot;
      break;
    case IvpStatus::StepUnderflow:
      // Map a stalled step to the side the trajectory was on when it stalled.
      r.outcome = (r.traj.y.back()[0] <= 0.0) ? ShotOutcome::Undershoot : ShotOutcome::Overshoot;
      break;
    default:
      throw IvpError(r.traj.status, r.traj.t.back(), "shoot: integration failed");
  }

  for (const auto& ev : r.traj.events) {
    if (ev.id != kZeroEvent) continue;
    if (!r.zeros.empty() && !(ev.t > r.zeros.back())) continue;
    r.zeros.push_back(ev.t);
  }

  bool have_turn = false;
  for (const auto& ev : r.traj.events) {
    if (ev.id != kTurnEvent || !(ev.t > 0.0)) continue;
    double a = std::abs(ev.y[0]);
    if (!have_turn || a < r.closest_abs_f) {
      r.closest_y = ev.t;
      r.closest_abs_f = a;
      have_turn = true;
    }
  }
  if (!have_turn) {
    // No turning point: fall back to the node closest to the axis.
    r.closest_y = 0.0;
    r.closest_abs_f = std::abs(r.traj.y.front()[0]);
    for (std::size_t i = 1; i < r.traj.t.size(); ++i) {
      double a = std::abs(r.traj.y[i][0]);
      if (r.traj.t[i] > 0.0 && a < r.closest_abs_f) {
        r.closest_y = r.traj.t[i];
        r.closest_abs_f = a;
      }
    }
  }
  if (r.closest_y > 0.0 && r.closest_abs_f < 0.5) r.interface_estimate = r.closest_y;
  return r;
}

ShootResult shoot(const ProfileProblem& p, double mu, const IntegratorConfig& cfg) {
  return shoot_from(p, {1.0, 0.0, mu}, cfg);
}

ShotOutcome classify(const ShootResult& r) { return r.outcome; }

CriticalShoot find_mu(const ProfileProblem& p, double mu_lo, double mu_hi, double mu_tol,
                      const IntegratorConfig& cfg, double window) {
  p.validate();
  if (!(mu_lo < mu_hi)) throw BracketInvalid("find_mu: mu_lo must be below mu_hi");
  if (!(mu_tol > 0.0)) throw BracketInvalid("find_mu: mu_tol must be positive");

  ShootResult r_lo = shoot(p, mu_lo, cfg);
  ShootResult r_hi = shoot(p, mu_hi, cfg);
  if (r_lo.outcome == ShotOutcome::Indeterminate || r_hi.outcome == ShotOutcome::Indeterminate)
    throw BracketInvalid("find_mu: endpoint shot is Indeterminate");
  if (r_lo.outcome == r_hi.outcome)
    throw BracketInvalid("find_mu: same classification at both bracket ends");

  double lo = mu_lo, hi = mu_hi;
  while (hi - lo > mu_tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket already at floating-point resolution
    ShootResult r_mid = shoot(p, mid, cfg);
    if (r_mid.outcome == ShotOutcome::Indeterminate)
      throw ToleranceStall(mid, "find_mu: Indeterminate shot blocks bracket refinement");
    if (r_mid.outcome == r_lo.outcome) {
      lo = mid;
      r_lo = std::move(r_mid);
    } else {
      hi = mid;
      r_hi = std::move(r_mid);
    }
  }

  CriticalShoot out;
  out.mu_low = lo;
  out.mu_high = hi;
  out.mu_star = 0.5 * (lo + hi);
  out.bracket_width = hi - lo;
  const ShootResult& best = (r_lo.closest_abs_f <= r_hi.closest_abs_f) ? r_lo : r_hi;
  out.y0 = best.closest_y;
  // Microscopy reads the Overshoot-side shot: it regrows past the closest
  // approach, so its zero list carries only genuine oscillation, not the
  // terminal plunge through -undershoot_margin.
  const ShootResult& osc_side = (r_lo.outcome == ShotOutcome::Overshoot) ? r_lo : r_hi;
  out.zeros_near_interface = sign_changes_near_interface(osc_side, window, p.zero_resolution);
  out.result_low = std::move(r_lo);
  out.result_high = std::move(r_hi);
  return out;
}

std::vector<double> sign_changes_near_interface(const ShootResult& r, double window,
                                                double resolution) {
  std::vector<double> out;
  if (!r.interface_estimate) return out;
  const double y0 = *r.interface_estimate;
  const double w_lo = y0 - window;

  for (std::size_t i = 0; i < r.zeros.size(); ++i) {
    const double yz = r.zeros[i];
    if (yz < w_lo || yz > y0) continue;
    const double left = (i > 0) ? r.zeros[i - 1] : r.traj.t.front();
    const double right = (i + 1 < r.zeros.size()) ? r.zeros[i + 1] : r.traj.t.back();
    if (max_abs_f_between(r.traj, left, yz) > resolution &&
        max_abs_f_between(r.traj, yz, right) > resolution)
      out.push_back(yz);
  }
  return out;
}

std::pair<double, double> default_mu_bracket(double n) {
  return (n <= 2.2) ? std::pair<double, double>{-1.0, 0.0}
                    : std::pair<double, double>{-10.0, 0.0};
}

const std::map<int, std::string>& shot_event_names() {
  static const std::map<int, std::string> names{{kZeroEvent, "zero"},
                                                {kBlowEvent, "blowup"},
                                                {kUnderEvent, "undershoot"},
                                                {kSlopeEvent, "slope"},
                                                {kTurnEvent, "turn"}};
  return names;
}

}  // namespace tfe
