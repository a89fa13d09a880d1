#pragma once

// Adaptive explicit Runge-Kutta integration: Dormand-Prince 4(5) embedded pair
// with FSAL, PI step control, free quartic dense output, and event location by
// dense-output bisection. Engine for every other module.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfe {

template <std::size_t N>
using State = std::array<double, N>;

using Vec3 = State<3>;

struct IntegratorConfig {
  double rtol = 1e-12;
  double atol = 1e-12;
  double h_init = 0.0;            // 0: pick automatically from the scale of rhs
  double h_min = 0.0;             // 0: 1e-14 * |t_end - t0|
  std::uint64_t max_steps = 50'000'000;
};

enum class IvpStatus {
  Ok,
  TerminalEvent,
  StepUnderflow,        // required step below h_min: singularity / blow-up signal
  BudgetExceeded,
  NonFinite,
  RootRefinementFailed,
  OutOfSpan,
};

inline const char* ivp_status_name(IvpStatus s) {
  switch (s) {
    case IvpStatus::Ok: return "Ok";
    case IvpStatus::TerminalEvent: return "TerminalEvent";
    case IvpStatus::StepUnderflow: return "StepUnderflow";
    case IvpStatus::BudgetExceeded: return "BudgetExceeded";
    case IvpStatus::NonFinite: return "NonFinite";
    case IvpStatus::RootRefinementFailed: return "RootRefinementFailed";
    case IvpStatus::OutOfSpan: return "OutOfSpan";
  }
  return "?";
}

struct IvpError : std::runtime_error {
  IvpStatus status;
  double t;
  IvpError(IvpStatus s, double at, const std::string& what)
      : std::runtime_error(what), status(s), t(at) {}
};

enum class Direction { Rising, Falling, Any };

template <std::size_t N>
struct EventSpec {
  std::function<double(double, const State<N>&)> g;
  Direction direction = Direction::Any;
  bool terminal = false;
  int id = 0;
  // optional gate: the crossing only counts when armed() holds at both step ends
  std::function<bool(double, const State<N>&)> armed;
};

template <std::size_t N>
struct EventRecord {
  double t;
  State<N> y;
  int id;
};

// y(t0 + theta*h) = y0 + h*(c[0]*theta + c[1]*theta^2 + c[2]*theta^3 + c[3]*theta^4)
template <std::size_t N>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  State<N> y0{};
  std::array<State<N>, 4> c{};

  State<N> eval(double t) const {
    const double th = (t - t0) / h;
    State<N> out;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = y0[i] + h * (th * (c[0][i] + th * (c[1][i] + th * (c[2][i] + th * c[3][i]))));
    return out;
  }
  State<N> eval_derivative(double t) const {
    const double th = (t - t0) / h;
    State<N> out;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = c[0][i] + th * (2 * c[1][i] + th * (3 * c[2][i] + th * 4 * c[3][i]));
    return out;
  }
};

template <std::size_t N>
struct Trajectory {
  std::vector<double> t;
  std::vector<State<N>> y;
  std::vector<DenseSegment<N>> segments;   // segments[i] spans [t[i], t[i+1]]
  std::vector<EventRecord<N>> events;
  int terminal_event = -1;                 // id of the event that stopped the run, else -1
  IvpStatus status = IvpStatus::Ok;
  std::uint64_t n_accepted = 0;
  std::uint64_t n_rejected = 0;
  std::uint64_t n_rhs = 0;

  double t_begin() const { return t.front(); }
  double t_end() const { return t.back(); }
};

namespace detail {

// Dormand-Prince tableau (the classic ode45 pair).
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_b5[7] = {35.0 / 384,      0.0,         500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784,  11.0 / 84,   0.0};
inline constexpr double dp_b4[7] = {5179.0 / 57600,  0.0,         7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
// Shampine's quartic interpolant: row sums per stage reproduce dp_b5.
inline constexpr double dp_bi[7][4] = {
    {1.0, -183.0 / 64, 37.0 / 12, -145.0 / 128},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 1500.0 / 371, -1000.0 / 159, 1000.0 / 371},
    {0.0, -125.0 / 32, 125.0 / 12, -375.0 / 64},
    {0.0, 9477.0 / 3392, -729.0 / 106, 25515.0 / 6784},
    {0.0, -11.0 / 7, 11.0 / 3, -55.0 / 28},
    {0.0, 3.0 / 2, -4.0, 5.0 / 2},
};

template <std::size_t N>
bool finite(const State<N>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace detail

template <std::size_t N, class RHS>
Trajectory<N> integrate_core(RHS&& rhs, double t0, const State<N>& y0, double t_end,
                             const std::vector<EventSpec<N>>& events, const IntegratorConfig& cfg) {
  using detail::dp_a;
  using detail::dp_b4;
  using detail::dp_b5;
  using detail::dp_bi;
  using detail::dp_c;

  Trajectory<N> traj;
  const double span = t_end - t0;
  const double dir = span > 0 ? 1.0 : -1.0;
  const double h_min = cfg.h_min > 0 ? cfg.h_min : 1e-14 * std::abs(span);

  double t = t0;
  State<N> y = y0;
  std::array<State<N>, 7> k;

  if (!detail::finite(y)) {
    traj.status = IvpStatus::NonFinite;
    return traj;
  }
  k[0] = rhs(t, y);
  ++traj.n_rhs;
  if (!detail::finite(k[0])) {
    traj.status = IvpStatus::NonFinite;
    return traj;
  }

  // initial step: Hairer-style heuristic unless the caller fixed one
  double h;
  if (cfg.h_init != 0.0) {
    h = dir * std::min(std::abs(cfg.h_init), std::abs(span));
  } else {
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = cfg.atol + cfg.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k[0][i] / sc) * (k[0][i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(span));
    State<N> y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h0 * k[0][i];
    State<N> f1 = rhs(t + dir * h0, y1);
    ++traj.n_rhs;
    double d2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = cfg.atol + cfg.rtol * std::abs(y[i]);
      d2 += ((f1[i] - k[0][i]) / sc) * ((f1[i] - k[0][i]) / sc);
    }
    d2 = std::sqrt(d2 / N) / h0;
    const double dm = std::max(d1, d2);
    double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : std::max(1e-6, h0 * 1e-3);
    h = dir * std::min({100 * h0, h1, std::abs(span)});
  }

  traj.t.push_back(t);
  traj.y.push_back(y);

  std::vector<double> g_prev(events.size());
  std::vector<bool> armed_prev(events.size(), true);
  for (std::size_t e = 0; e < events.size(); ++e) {
    g_prev[e] = events[e].g(t, y);
    if (events[e].armed) armed_prev[e] = events[e].armed(t, y);
  }

  double facold = 1e-4;
  bool last_rejected = false;
  bool last_nonfinite = false;
  bool done = false;

  while (!done) {
    if (traj.n_accepted + traj.n_rejected >= cfg.max_steps) {
      traj.status = IvpStatus::BudgetExceeded;
      return traj;
    }
    if (std::abs(h) < h_min) {
      // at the floor: a persistent non-finite rhs is reported as such, not as underflow
      traj.status = last_nonfinite ? IvpStatus::NonFinite : IvpStatus::StepUnderflow;
      return traj;
    }
    if ((t + h - t_end) * dir >= 0) {
      h = t_end - t;
      done = true;
    }

    // stages (k[0] is FSAL from the previous step)
    bool bad = false;
    State<N> work;
    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0;
        for (int j = 0; j < s; ++j) acc += dp_a[s][j] * k[j][i];
        work[i] = y[i] + h * acc;
      }
      k[s] = rhs(t + dp_c[s] * h, work);
      ++traj.n_rhs;
      if (!detail::finite(k[s])) {
        bad = true;
        break;
      }
    }
    // with the FSAL pair, `work` after stage 7 is y_new (a[6][*] equals b5)
    State<N> y_new = work;

    double err = 0.0;
    if (!bad && detail::finite(y_new)) {
      for (std::size_t i = 0; i < N; ++i) {
        double de = 0;
        for (int s = 0; s < 7; ++s) de += (dp_b5[s] - dp_b4[s]) * k[s][i];
        const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        const double q = h * de / sc;
        err += q * q;
      }
      err = std::sqrt(err / N);
    } else {
      err = std::numeric_limits<double>::infinity();
    }

    if (!(err <= 1.0)) {
      // rejected
      ++traj.n_rejected;
      done = false;
      const double fac =
          std::isfinite(err) ? std::max(0.2, std::min(1.0, 0.9 * std::pow(err, -0.2))) : 0.2;
      h *= fac;
      last_rejected = true;
      last_nonfinite = bad || !detail::finite(y_new);
      continue;
    }

    // accepted: build the dense segment
    DenseSegment<N> seg;
    seg.t0 = t;
    seg.h = h;
    seg.y0 = y;
    for (int j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0;
        for (int s = 0; s < 7; ++s) acc += dp_bi[s][j] * k[s][i];
        seg.c[j][i] = acc;
      }

    const double t_new = done ? t_end : t + h;

    // event scan over [t, t_new]
    struct Hit {
      double theta;
      std::size_t idx;
    };
    std::vector<Hit> hits;
    std::vector<double> g_new(events.size());
    std::vector<bool> armed_new(events.size(), true);
    for (std::size_t e = 0; e < events.size(); ++e) {
      g_new[e] = events[e].g(t_new, y_new);
      if (events[e].armed) armed_new[e] = events[e].armed(t_new, y_new);
      if (!armed_prev[e] || !armed_new[e]) continue;
      const double ga = g_prev[e], gb = g_new[e];
      bool cross = false;
      switch (events[e].direction) {
        case Direction::Rising: cross = ga < 0 && gb >= 0; break;
        case Direction::Falling: cross = ga > 0 && gb <= 0; break;
        case Direction::Any: cross = (ga < 0 && gb >= 0) || (ga > 0 && gb <= 0); break;
      }
      if (!cross) continue;
      // bisection on theta in [0,1]; keep the endpoint past the crossing
      double a = 0.0, b = 1.0;
      if (gb == 0.0) {
        hits.push_back({1.0, e});
        continue;
      }
      const double sa = ga < 0 ? -1.0 : 1.0;
      int it = 0;
      for (; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double tm = t + mid * h;
        const State<N> ym = seg.eval(tm);
        const double gm = events[e].g(tm, ym);
        if (gm == 0.0) {
          b = mid;
          break;
        }
        if ((gm < 0 ? -1.0 : 1.0) == sa)
          a = mid;
        else
          b = mid;
        const double tol_t = std::max(cfg.atol, cfg.rtol * std::abs(t + b * h));
        if ((b - a) * std::abs(h) <= std::max(tol_t, 4 * std::numeric_limits<double>::epsilon() * std::abs(t_new)))
          break;
      }
      hits.push_back({b, e});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.theta < y.theta; });

    bool terminated = false;
    double t_cut = t_new;
    State<N> y_cut = y_new;
    for (const Hit& hit : hits) {
      const double te = t + hit.theta * h;
      const State<N> ye = hit.theta >= 1.0 ? y_new : seg.eval(te);
      traj.events.push_back({te, ye, events[hit.idx].id});
      if (events[hit.idx].terminal) {
        terminated = true;
        t_cut = te;
        y_cut = ye;
        traj.terminal_event = events[hit.idx].id;
        break;
      }
    }

    ++traj.n_accepted;
    traj.segments.push_back(seg);
    traj.t.push_back(terminated ? t_cut : t_new);
    traj.y.push_back(terminated ? y_cut : y_new);

    if (terminated) {
      traj.status = IvpStatus::TerminalEvent;
      return traj;
    }
    if (done) {
      traj.status = IvpStatus::Ok;
      return traj;
    }

    t = t_new;
    y = y_new;
    k[0] = k[6];  // FSAL
    g_prev = g_new;
    armed_prev = armed_new;
    last_nonfinite = false;

    // PI controller: safety 0.9, growth clamp [0.2, 5.0]
    double fac;
    if (err == 0.0) {
      fac = 5.0;
    } else {
      fac = 0.9 * std::pow(err, -0.2) * std::pow(facold, 0.08);
      fac = std::min(5.0, std::max(0.2, fac));
    }
    if (last_rejected) fac = std::min(fac, 1.0);
    last_rejected = false;
    facold = std::max(err, 1e-4);
    h *= fac;
  }
  traj.status = IvpStatus::Ok;
  return traj;
}

template <std::size_t N, class RHS>
Trajectory<N> integrate_with_events(RHS&& rhs, double t0, const State<N>& y0, double t_end,
                                    const std::vector<EventSpec<N>>& events,
                                    const IntegratorConfig& cfg = {}) {
  Trajectory<N> traj = integrate_core(std::forward<RHS>(rhs), t0, y0, t_end, events, cfg);
  switch (traj.status) {
    case IvpStatus::Ok:
    case IvpStatus::TerminalEvent:
      return traj;
    default:
      throw IvpError(traj.status, traj.t.empty() ? t0 : traj.t.back(),
                     std::string("integration failed: ") + ivp_status_name(traj.status));
  }
}

template <std::size_t N, class RHS>
Trajectory<N> integrate(RHS&& rhs, double t0, const State<N>& y0, double t_end,
                        const IntegratorConfig& cfg = {}) {
  return integrate_with_events(std::forward<RHS>(rhs), t0, y0, t_end, {}, cfg);
}

template <std::size_t N>
State<N> dense_eval(const Trajectory<N>& traj, double t) {
  if (traj.t.size() < 2) {
    if (!traj.t.empty() && t == traj.t.front()) return traj.y.front();
    throw IvpError(IvpStatus::OutOfSpan, t, "dense_eval: empty trajectory");
  }
  const double dir = traj.t.back() > traj.t.front() ? 1.0 : -1.0;
  if ((t - traj.t.front()) * dir < 0 || (t - traj.t.back()) * dir > 0)
    throw IvpError(IvpStatus::OutOfSpan, t, "dense_eval: t outside trajectory span");
  // nodes are exact
  auto cmp = [dir](double a, double b) { return (a - b) * dir < 0; };
  auto it = std::lower_bound(traj.t.begin(), traj.t.end(), t, cmp);
  if (it != traj.t.end() && *it == t) return traj.y[static_cast<std::size_t>(it - traj.t.begin())];
  const std::size_t i = static_cast<std::size_t>(it - traj.t.begin()) - 1;
  return traj.segments[std::min(i, traj.segments.size() - 1)].eval(t);
}

}  // namespace tfe
