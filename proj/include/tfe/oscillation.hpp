#pragma once

// The autonomous oscillatory-component ODE near the interface:
//
//   phi''' + 3(m-1) phi'' + (3m^2-6m+2) phi' + m(m-1)(m-2) phi + phi/|phi|^n = 0
//
// with m = 3/n and the singular last term regularized as phi*(eps^2+phi^2)^(-n/2).
// This module classifies its attractor (sign-changing periodic orbit vs constant
// equilibrium) and bisects in n for the exponent where the orbit disappears.

#include <cmath>
#include <map>
#include <string>

#include <tfe/errors.hpp>
#include <tfe/ivp.hpp>

namespace tfe {

struct OscProblem {
  double n = 2.0;
  double eps = 1e-11;
  double s_transient = 200.0;  // burn-in discarded before classification
  double s_observe = 400.0;    // observation window

  double m() const { return 3.0 / n; }
  // coefficients of the linear part, recomputed from n so they can never drift
  double c2() const { return 3.0 * (m() - 1.0); }
  double c1() const {
    const double mm = m();
    return 3.0 * mm * mm - 6.0 * mm + 2.0;
  }
  double c0() const {
    const double mm = m();
    return mm * (mm - 1.0) * (mm - 2.0);
  }
};

enum class AttractorKind { Periodic, Equilibrium, Indeterminate };

inline const char* attractor_kind_name(AttractorKind k) {
  switch (k) {
    case AttractorKind::Periodic: return "Periodic";
    case AttractorKind::Equilibrium: return "Equilibrium";
    case AttractorKind::Indeterminate: return "Indeterminate";
  }
  return "?";
}

struct AttractorReport {
  AttractorKind kind = AttractorKind::Indeterminate;
  double period = 0.0;          // mean max-to-max spacing (Periodic)
  double amplitude = 0.0;       // peak-to-peak over the tail (Periodic)
  bool sign_changing = false;
  double equilibrium = 0.0;     // constant reached (Equilibrium)
  double residual = 0.0;        // drift (Periodic), tube radius (Equilibrium), |phi| at end otherwise
  bool escaped = false;         // hit the |phi| escape guard: no bounded attractor seen
  double s_observe_used = 0.0;
};

// One period of a converged orbit, tabulated with dense interpolation so other
// modules can evaluate phi(s) at arbitrary phase.  s=0 sits at a maximum of phi.
struct OrbitTable {
  double period = 0.0;
  Trajectory<3> traj;  // spans [0, period]

  bool valid() const { return period > 0.0 && traj.t.size() > 1; }
  Vec3 eval(double s) const {
    double u = std::fmod(s, period);
    if (u < 0) u += period;
    return dense_eval(traj, u);
  }
};

Vec3 osc_rhs(const OscProblem& p, const Vec3& state);

// nonzero constant solution: |phi|^n = -1/(m(m-1)(m-2)), only for n in (3/2,3)
double equilibrium_value(double n);

// growth rate of the unstable mode at the +equilibrium (it is a saddle for all
// n in (3/2,3): one positive eigenvalue, so generic nearby data get ejected)
double saddle_unstable_rate(double n);

// default launch state: for n in (3/2,3), nudged off the +equilibrium along its
// unstable eigenvector toward the interior; a finite offset like 1.1*B0 starts
// outside the periodic orbit's basin and escapes even when the orbit exists.
// Outside (3/2,3) there is no equilibrium and (1,0,0) works fine.
Vec3 default_osc_init(double n);

// integrate [0, s_transient + s_observe] with an |phi|=1e6 escape guard
Trajectory<3> run_osc(const OscProblem& p, const Vec3& init, const IntegratorConfig& cfg = {});

AttractorReport classify_attractor(const OscProblem& p, const IntegratorConfig& cfg = {});
AttractorReport classify_attractor(const OscProblem& p, const Vec3& init,
                                   const IntegratorConfig& cfg = {});

// bisect the Periodic / non-Periodic boundary in n; tmpl supplies eps and the
// time windows; midpoints that stay Indeterminate without escaping are retried
// with doubled s_observe (3x) and then accepted as the boundary
double find_nh(double n_lo, double n_hi, double n_tol, const OscProblem& tmpl,
               const IntegratorConfig& cfg = {});

// converge to the orbit, then tabulate exactly one period starting at a maximum
OrbitTable make_orbit(const OscProblem& p, const IntegratorConfig& cfg = {});

// names of the oscillation run's event channels, keyed by EventRecord id
const std::map<int, std::string>& osc_event_names();

}  // namespace tfe
