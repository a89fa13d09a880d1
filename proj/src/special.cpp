#include "tfe/special.hpp"

#include <algorithm>
#include <cmath>

#include "tfe/errors.hpp"
#include "tfe/scan.hpp"

namespace tfe {

LogFit logfit_samples(const std::vector<double>& z, const std::vector<double>& f) {
  if (z.size() != f.size()) throw FitFailed("logfit: z and f sizes differ");

  std::vector<double> xs, ys;
  xs.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > 0.0) || !(z[i] < 1.0) || !(f[i] > 0.0)) continue;
    xs.push_back(std::log(std::abs(std::log(z[i]))));
    ys.push_back(std::log(f[i] / z[i]));
  }
  if (xs.size() < 3) throw FitFailed("logfit: fewer than 3 usable samples");

  const double x_lo = *std::min_element(xs.begin(), xs.end());
  const double x_hi = *std::max_element(xs.begin(), xs.end());
  if (x_hi - x_lo < 0.05)
    throw WindowTooClose("logfit: ln|ln z| spans less than 0.05 across the window");

  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = m * sxx - sx * sx;
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;

  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (slope * xs[i] + intercept);
    ss += r * r;
  }

  LogFit out;
  out.C = std::exp(intercept);
  out.p = slope;
  out.window = {*std::min_element(z.begin(), z.end()), *std::max_element(z.begin(), z.end())};
  out.rms = std::sqrt(ss / m);
  return out;
}

LogFit logfit_n3(const ShootResult& shot, double z_min, double z_max, int samples) {
  if (!shot.interface_estimate) throw FitFailed("logfit_n3: shot has no interface estimate");
  const double y0 = *shot.interface_estimate;
  if (z_min <= 0.0) z_min = 1e-4 * y0;
  if (z_max <= 0.0) z_max = 1e-2 * y0;
  if (!(z_min < z_max)) throw OutOfRange("logfit_n3: z_min must be below z_max");
  if (!(z_max < 0.2 * y0)) throw OutOfRange("logfit_n3: window must stay inside (0, 0.2*y0)");
  if (samples < 3) throw OutOfRange("logfit_n3: need at least 3 samples");

  std::vector<double> zs(samples), fs(samples);
  const double step = std::log(z_max / z_min) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    zs[i] = z_min * std::exp(step * i);
    fs[i] = dense_eval(shot.traj, y0 - zs[i])[0];
  }
  LogFit out = logfit_samples(zs, fs);
  out.window = {z_min, z_max};
  return out;
}

std::vector<N4Row> nonexistence_scan_n4(const std::vector<double>& mu_list,
                                        const ProfileProblem& tmpl, const IntegratorConfig& cfg) {
  ProfileProblem p = tmpl;
  p.n = 4.0;
  p.validate();

  return scan::parallel_map(mu_list, [&](double mu) {
    ShootResult r = shoot(p, mu, cfg);
    N4Row row;
    row.mu = mu;
    row.outcome = r.outcome;
    // minimum over turning points, refined against the node grid
    double lo = r.traj.y.front()[0];
    for (const auto& s : r.traj.y) lo = std::min(lo, s[0]);
    for (const auto& ev : r.traj.events) lo = std::min(lo, ev.y[0]);
    row.min_f = lo;
    return row;
  });
}

std::vector<double> default_n4_grid() { return {-2.0, -5.0, -10.0, -50.0, -100.0, -500.0, -1000.0}; }

}  // namespace tfe
