#include <tfe/oscillation.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace tfe {

namespace {

constexpr int kMaxEvent = 1;     // phi' falling through 0: local maximum of phi
constexpr int kMinEvent = 2;     // phi' rising through 0: local minimum
constexpr int kEscapeEvent = 9;  // |phi| reached 1e6: no bounded attractor on this run

void require_equilibrium_range(double n) {
  if (!(n > 1.5 && n < 3.0))
    throw NoEquilibrium("nonzero constant solutions need n in (3/2, 3), got " +
                        std::to_string(n));
}

EventSpec<3> escape_guard() {
  EventSpec<3> guard;
  guard.g = [](double, const Vec3& s) { return std::abs(s[0]) - 1e6; };
  guard.direction = Direction::Rising;
  guard.terminal = true;
  guard.id = kEscapeEvent;
  return guard;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Each sign crossing of phi squeezes the regularized term through a spike of
// width ~eps/|phi'| ~ 1e-11, which wants steps near 1e-12; the span-scaled
// default floor (1e-14 * span) sits above that on these long runs, so default
// to an absolute floor instead when the caller didn't pick one.
IntegratorConfig osc_cfg(IntegratorConfig cfg) {
  if (cfg.h_min == 0.0) cfg.h_min = 1e-15;
  return cfg;
}

}  // namespace

Vec3 osc_rhs(const OscProblem& p, const Vec3& s) {
  const double phi = s[0];
  const double sing = phi * std::pow(p.eps * p.eps + phi * phi, -p.n / 2.0);
  return {s[1], s[2], -(p.c2() * s[2] + p.c1() * s[1] + p.c0() * phi + sing)};
}

double equilibrium_value(double n) {
  require_equilibrium_range(n);
  const double m = 3.0 / n;
  return std::pow(-1.0 / (m * (m - 1.0) * (m - 2.0)), 1.0 / n);
}

double saddle_unstable_rate(double n) {
  require_equilibrium_range(n);
  // characteristic polynomial of the linearization at +B0:
  //   P(lambda) = lambda^3 + c2 lambda^2 + c1 lambda + n*c0,   n*c0 < 0,
  // so P has exactly one positive real root
  const OscProblem p{.n = n};
  auto P = [&](double lam) {
    return ((lam + p.c2()) * lam + p.c1()) * lam + n * p.c0();
  };
  double lo = 0.0, hi = 8.0;
  if (!(P(lo) < 0.0 && P(hi) > 0.0))
    throw RootBracketFailed("no unstable-rate bracket at n=" + std::to_string(n));
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (P(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Vec3 default_osc_init(double n) {
  if (n > 1.5 && n < 3.0) {
    // start on the unstable manifold of the +equilibrium, pointing inward; the
    // eigenvector of the companion-form linearization at rate L is (1, L, L^2).
    // A generic offset such as 1.1*B0 lands outside the periodic orbit's basin
    // and gets ejected along this same eigendirection even when the orbit exists.
    const double B = equilibrium_value(n);
    const double L = saddle_unstable_rate(n);
    const double d = -1e-5 * B;
    return {B + d, d * L, d * L * L};
  }
  return {1.0, 0.0, 0.0};
}

Trajectory<3> run_osc(const OscProblem& p, const Vec3& init, const IntegratorConfig& cfg) {
  return integrate_with_events([&p](double, const Vec3& s) { return osc_rhs(p, s); }, 0.0, init,
                               p.s_transient + p.s_observe, {escape_guard()}, osc_cfg(cfg));
}

AttractorReport classify_attractor(const OscProblem& p, const IntegratorConfig& cfg) {
  return classify_attractor(p, default_osc_init(p.n), cfg);
}

AttractorReport classify_attractor(const OscProblem& p, const Vec3& init,
                                   const IntegratorConfig& cfg) {
  EventSpec<3> maxima;
  maxima.g = [](double, const Vec3& s) { return s[1]; };
  maxima.direction = Direction::Falling;
  maxima.id = kMaxEvent;
  EventSpec<3> minima = maxima;
  minima.direction = Direction::Rising;
  minima.id = kMinEvent;

  const double s_end = p.s_transient + p.s_observe;
  const auto traj =
      integrate_with_events([&p](double, const Vec3& s) { return osc_rhs(p, s); }, 0.0, init,
                            s_end, {maxima, minima, escape_guard()}, osc_cfg(cfg));

  AttractorReport rep;
  rep.s_observe_used = p.s_observe;

  if (traj.terminal_event == kEscapeEvent) {
    rep.kind = AttractorKind::Indeterminate;
    rep.escaped = true;
    rep.residual = std::abs(traj.y.back()[0]);
    return rep;
  }

  std::vector<double> max_t, max_v, min_v;
  for (const auto& ev : traj.events) {
    if (ev.t < p.s_transient) continue;
    if (ev.id == kMaxEvent) {
      max_t.push_back(ev.t);
      max_v.push_back(ev.y[0]);
    } else if (ev.id == kMinEvent) {
      min_v.push_back(ev.y[0]);
    }
  }

  double tail_lo = std::numeric_limits<double>::infinity();
  double tail_hi = -tail_lo;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    if (traj.t[i] < p.s_transient) continue;
    tail_lo = std::min(tail_lo, traj.y[i][0]);
    tail_hi = std::max(tail_hi, traj.y[i][0]);
  }
  rep.sign_changing = tail_lo < 0.0 && tail_hi > 0.0;

  if (max_t.size() >= 8) {
    std::vector<double> gaps(max_t.size() - 1);
    for (std::size_t i = 0; i + 1 < max_t.size(); ++i) gaps[i] = max_t[i + 1] - max_t[i];
    const double T = mean(gaps);
    double drift_T = 0.0;
    for (double g : gaps) drift_T = std::max(drift_T, std::abs(g - T) / T);
    const double mv = mean(max_v);
    double drift_A = 0.0;
    for (double v : max_v)
      drift_A = std::max(drift_A, std::abs(v - mv) / std::max(std::abs(mv), 1e-30));
    if (drift_T < 0.01 && drift_A < 0.01 && rep.sign_changing) {
      rep.kind = AttractorKind::Periodic;
      rep.period = T;
      rep.amplitude = (min_v.empty() ? tail_hi - tail_lo : mv - mean(min_v));
      rep.residual = std::max(drift_T, drift_A);
      return rep;
    }
  }

  // equilibrium: the final quarter of the observation window sits in a tight tube
  {
    const double q0 = p.s_transient + 0.75 * p.s_observe;
    const int samples = 101;
    double c = 0.0;
    for (int i = 0; i < samples; ++i)
      c += dense_eval(traj, q0 + (s_end - q0) * i / (samples - 1.0))[0];
    c /= samples;
    double dev = 0.0;
    for (int i = 0; i < samples; ++i)
      dev = std::max(dev, std::abs(dense_eval(traj, q0 + (s_end - q0) * i / (samples - 1.0))[0] - c));
    if (dev < 1e-6 * std::max(1.0, std::abs(c))) {
      rep.kind = AttractorKind::Equilibrium;
      rep.equilibrium = c;
      rep.residual = dev;
      return rep;
    }
  }

  rep.kind = AttractorKind::Indeterminate;
  rep.residual = std::abs(traj.y.back()[0]);
  return rep;
}

namespace {

// classify with a patience protocol: a non-escaping Indeterminate is retried
// with doubled observation window, up to three doublings
AttractorReport classify_with_retries(OscProblem q, const IntegratorConfig& cfg) {
  for (int attempt = 0;; ++attempt) {
    AttractorReport rep = classify_attractor(q, cfg);
    if (rep.kind != AttractorKind::Indeterminate || rep.escaped || attempt >= 3) return rep;
    q.s_observe *= 2.0;
  }
}

}  // namespace

double find_nh(double n_lo, double n_hi, double n_tol, const OscProblem& tmpl,
               const IntegratorConfig& cfg) {
  if (!(n_lo < n_hi) || !(n_tol > 0))
    throw BracketInvalid("find_nh needs n_lo < n_hi and n_tol > 0");
  auto at = [&](double n) {
    OscProblem q = tmpl;
    q.n = n;
    return classify_with_retries(q, cfg);
  };

  const AttractorReport lo_rep = at(n_lo);
  if (lo_rep.kind == AttractorKind::Indeterminate && !lo_rep.escaped)
    throw PersistentIndeterminate(n_lo, "lower bracket endpoint stayed Indeterminate");
  if (lo_rep.kind != AttractorKind::Periodic)
    throw BracketInvalid("find_nh: no periodic orbit at the lower endpoint");
  const AttractorReport hi_rep = at(n_hi);
  if (hi_rep.kind == AttractorKind::Indeterminate && !hi_rep.escaped)
    throw PersistentIndeterminate(n_hi, "upper bracket endpoint stayed Indeterminate");
  if (hi_rep.kind == AttractorKind::Periodic)
    throw BracketInvalid("find_nh: still periodic at the upper endpoint");

  double lo = n_lo, hi = n_hi;
  while (hi - lo > n_tol) {
    const double mid = 0.5 * (lo + hi);
    const AttractorReport rep = at(mid);
    if (rep.kind == AttractorKind::Periodic) {
      lo = mid;
    } else if (rep.kind == AttractorKind::Equilibrium || rep.escaped) {
      hi = mid;
    } else {
      // neither a surviving orbit nor a clear departure after three window
      // doublings: call this point the boundary rather than guessing a side
      return mid;
    }
  }
  return 0.5 * (lo + hi);
}

OrbitTable make_orbit(const OscProblem& p, const IntegratorConfig& cfg) {
  // 1. burn in toward the attractor
  OscProblem burn = p;
  burn.s_observe = 0.0;
  Trajectory<3> warm = run_osc(burn, default_osc_init(p.n), cfg);
  if (warm.terminal_event == kEscapeEvent)
    throw OrbitMissing("flow escapes at n=" + std::to_string(p.n) + "; no periodic orbit");

  // 2. locate consecutive maxima of phi on the converged flow
  EventSpec<3> maxima;
  maxima.g = [](double, const Vec3& s) { return s[1]; };
  maxima.direction = Direction::Falling;
  maxima.id = kMaxEvent;
  const auto probe =
      integrate_with_events([&p](double, const Vec3& s) { return osc_rhs(p, s); }, 0.0,
                            warm.y.back(), p.s_observe, {maxima, escape_guard()}, osc_cfg(cfg));
  if (probe.terminal_event == kEscapeEvent || probe.events.size() < 2)
    throw OrbitMissing("no repeated maxima found at n=" + std::to_string(p.n));

  const auto& a = probe.events[probe.events.size() - 2];
  const auto& b = probe.events[probe.events.size() - 1];

  // 3. tabulate exactly one period starting at a maximum
  OrbitTable orbit;
  orbit.period = b.t - a.t;
  orbit.traj = integrate([&p](double, const Vec3& s) { return osc_rhs(p, s); }, 0.0, a.y,
                         orbit.period, osc_cfg(cfg));
  return orbit;
}

const std::map<int, std::string>& osc_event_names() {
  static const std::map<int, std::string> names{
      {kMaxEvent, "max"}, {kMinEvent, "min"}, {kEscapeEvent, "escape"}};
  return names;
}

}  // namespace tfe
