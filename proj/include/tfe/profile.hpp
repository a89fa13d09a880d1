#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tfe/ivp.hpp"

namespace tfe {

// One-parameter shooting for the similarity profile: integrate from y = 0 with
// f(0) = 1, f'(0) = 0 and vary mu = f''(0) until the trajectory lands on the
// interface instead of blowing up or plunging negative.

struct ProfileProblem {
  double n = 2.0;                  // mobility exponent
  double eps = 1e-11;              // regularization of the |f|^{-n} quotient
  double y_max = 80.0;             // horizon; shots without a terminal event are Indeterminate
  double blowup_f = 1e3;           // f rising through this => Overshoot
  double undershoot_margin = 1e-3; // f falling through -margin => Undershoot
  double slope_cap = 1e3;          // f' rising through this while f > 1 => Overshoot
  double zero_resolution = 1e-7;   // default dust floor for sign-change reporting

  void validate() const;  // throws OutOfRange when a field is out of its domain
};

enum class ShotOutcome { Overshoot, Undershoot, Indeterminate };

const char* shot_outcome_name(ShotOutcome o);

struct ShootResult {
  ShotOutcome outcome = ShotOutcome::Indeterminate;
  double mu = 0.0;
  Trajectory<3> traj;
  std::vector<double> zeros;            // y positions of f = 0 crossings, increasing
  double closest_y = 0.0;               // turning point with minimal |f|
  double closest_abs_f = 0.0;
  std::optional<double> interface_estimate;  // closest_y when the shot actually dips
};

struct CriticalShoot {
  double mu_star = 0.0;
  double bracket_width = 0.0;
  double mu_low = 0.0;
  double mu_high = 0.0;
  double y0 = 0.0;
  std::vector<double> zeros_near_interface;  // dust-filtered zeros in [y0 - window, y0]
  ShootResult result_low;
  ShootResult result_high;
};

// Raw right-hand side quotient: (f', f'', y f (eps^2 + f^2)^{-n/2}).
Vec3 profile_rhs(double n, double eps, const Vec3& state, double y);

// Integrate a shot from a caller-supplied state at y = 0. The integrated form
// carries the mass normalization, f''' = y f (eps^2 + f^2)^{-n/2} / (4 + n),
// so reported mu and y0 refer to unit-height, unit-mass-scaled profiles.
ShootResult shoot_from(const ProfileProblem& p, const Vec3& init, const IntegratorConfig& cfg = {});

// Standard shot: init (1, 0, mu).
ShootResult shoot(const ProfileProblem& p, double mu, const IntegratorConfig& cfg = {});

ShotOutcome classify(const ShootResult& r);

// Bisect mu between an Overshoot and an Undershoot shot until the bracket is
// narrower than mu_tol. Throws BracketInvalid when the endpoints do not
// disagree, ToleranceStall when an interior shot comes back Indeterminate.
CriticalShoot find_mu(const ProfileProblem& p, double mu_lo, double mu_hi, double mu_tol,
                      const IntegratorConfig& cfg = {}, double window = 0.5);

// Zeros inside [y0 - window, y0] whose |f| excursion exceeds `resolution` on
// both sides of the crossing. Returns empty when no interface estimate exists.
std::vector<double> sign_changes_near_interface(const ShootResult& r, double window,
                                                double resolution);

// {mu_lo, mu_hi} defaults wide enough for the exponents this toolkit targets.
std::pair<double, double> default_mu_bracket(double n);

// names of the shot event channels, keyed by EventRecord id
const std::map<int, std::string>& shot_event_names();

}  // namespace tfe
