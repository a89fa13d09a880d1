#pragma once

#include <utility>
#include <vector>

#include "tfe/ivp.hpp"
#include "tfe/profile.hpp"

namespace tfe {

// Special-exponent diagnostics: the logarithmically corrected linear contact
// at n=3 and the positivity scan at n=4.

struct LogFit {
  double C = 0.0;                       // exponentiated intercept
  double p = 0.0;                       // slope in ln|ln z|
  std::pair<double, double> window{0.0, 0.0};  // z range actually fitted
  double rms = 0.0;                     // residual of the linear fit, never hidden
};

// Least-squares of ln(f/z) against ln|ln z| over the given samples.
LogFit logfit_samples(const std::vector<double>& z, const std::vector<double>& f);

// Fit the near-interface tail of a critical n=3 shot, modeling
// f ~ C * z * |ln z|^p with z = y0 - y. The window defaults to
// (1e-4, 1e-2) * y0; below that the regularization contaminates f.
LogFit logfit_n3(const ShootResult& shot, double z_min = 0.0, double z_max = 0.0,
                 int samples = 50);

struct N4Row {
  double mu = 0.0;
  double min_f = 0.0;  // minimum of f before the terminal event
  ShotOutcome outcome = ShotOutcome::Indeterminate;
};

// Shoot at n=4 for each mu and record how close f comes to zero. Every row of
// the reference grid stays strictly positive: no finite interface exists.
std::vector<N4Row> nonexistence_scan_n4(const std::vector<double>& mu_list,
                                        const ProfileProblem& tmpl = {},
                                        const IntegratorConfig& cfg = {});

std::vector<double> default_n4_grid();

}  // namespace tfe
