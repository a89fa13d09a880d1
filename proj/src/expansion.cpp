#include <tfe/expansion.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <tfe/scan.hpp>

namespace tfe {

namespace {

constexpr double kEps = 1e-11;

// m(m-1)(2-m) with m = 3/n: positive exactly on n in (3/2, 3)
double bundle_factor(double n) {
  const double m = 3.0 / n;
  return m * (m - 1.0) * (2.0 - m);
}

void require_range(double n) {
  if (!(n > 1.5 && n < 3.0))
    throw OutOfRange("exponent n must lie in (3/2, 3), got " + std::to_string(n));
}

Vec3 interface_rhs(double n, double z, const Vec3& s) {
  return {s[1], s[2], -(1.0 - z) * s[0] * std::pow(kEps * kEps + s[0] * s[0], -n / 2.0)};
}

}  // namespace

double b0(double n) {
  require_range(n);
  return std::pow(1.0 / bundle_factor(n), 1.0 / n);
}

double hn(double n, double l) {
  require_range(n);
  return l * (l - 1.0) * (l - 2.0) - (n - 1.0) * std::pow(bundle_factor(n), 2.0 / n);
}

LRoot solve_l(double n) {
  require_range(n);
  double lo = 2.0, hi = 4.0;
  double flo = hn(n, lo);
  double fhi = hn(n, hi);
  if (!(flo < 0.0 && fhi > 0.0))
    throw RootBracketFailed("H_n does not change sign on [2,4] for n=" + std::to_string(n));
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = hn(n, mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    (fm < 0.0 ? lo : hi) = mid;
  }
  LRoot r;
  r.l = 0.5 * (lo + hi);
  if (std::abs(hn(n, r.l)) > 1e-12)
    throw RootBracketFailed("H_n root refinement stalled for n=" + std::to_string(n));
  const double m = 3.0 / n;
  r.admissible = (m < r.l) && (r.l < 1.0 + m);
  return r;
}

ExpansionParams make_expansion(double n, double D) {
  ExpansionParams p;
  p.n = n;
  p.m = 3.0 / n;
  p.B0 = b0(n);
  const LRoot r = solve_l(n);
  p.l = r.l;
  p.admissible = r.admissible;
  p.D = D;
  return p;
}

SeriesJet eval_expansion(const ExpansionParams& p, double z) {
  if (!(z > 0.0)) throw NonPositiveZ("series is defined for z > 0, got z=" + std::to_string(z));
  const double m = p.m, l = p.l;
  const double tm = p.B0 * std::pow(z, m);
  const double tl = p.D * std::pow(z, l);
  SeriesJet j;
  j.f = tm + tl;
  j.f1 = (tm * m + tl * l) / z;
  j.f2 = (tm * m * (m - 1) + tl * l * (l - 1)) / (z * z);
  j.f3 = (tm * m * (m - 1) * (m - 2) + tl * l * (l - 1) * (l - 2)) / (z * z * z);
  return j;
}

double residual_order(const ExpansionParams& p, const std::vector<double>& z_grid) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (double z : z_grid) {
    const SeriesJet j = eval_expansion(p, z);
    if (!(j.f > 0.0)) continue;
    const double r = std::pow(j.f, p.n - 1.0) * j.f3 + (1.0 - z);
    if (r == 0.0 || !std::isfinite(r)) continue;
    const double x = std::log(z), y = std::log(std::abs(r));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 3) throw FitFailed("residual fit needs at least 3 usable grid points");
  const double det = used * sxx - sx * sx;
  if (det == 0.0) throw FitFailed("degenerate residual fit grid");
  return (used * sxy - sx * sy) / det;
}

std::vector<double> residual_z_grid(int count) {
  // log-spaced strictly inside (1e-6, 1e-2)
  std::vector<double> z(count);
  const double a = std::log(1e-6), b = std::log(1e-2);
  for (int i = 0; i < count; ++i)
    z[i] = std::exp(a + (b - a) * (i + 1) / static_cast<double>(count + 1));
  return z;
}

BackshootState backshoot_positive(double n, double D, double delta, const IntegratorConfig& cfg) {
  if (!(delta > 0.0 && delta < 0.5))
    throw OutOfRange("seed offset delta must lie in (0, 0.5), got " + std::to_string(delta));
  const ExpansionParams p = make_expansion(n, D);
  const SeriesJet j = eval_expansion(p, delta);
  if (std::abs(j.f) < 10 * kEps)
    throw SeedUnderflow("series height at z=delta is below 10*eps; move delta or D");
  BackshootState out;
  out.n = n;
  out.delta = delta;
  out.seed = {j.f, j.f1, j.f2};
  out.traj = integrate([n](double z, const Vec3& s) { return interface_rhs(n, z, s); }, delta,
                       out.seed, 1.0, cfg);
  const Vec3& e = out.traj.y.back();
  out.origin = {e[0], -e[1], e[2]};  // d/dy = -d/dz
  return out;
}

BackshootState backshoot_oscillatory(double n, double s0, double delta, const OrbitTable& orbit,
                                     const IntegratorConfig& cfg) {
  if (!orbit.valid()) throw OrbitMissing("oscillatory backshoot needs a tabulated periodic orbit");
  if (!(delta > 0.0 && delta < 0.5))
    throw OutOfRange("seed offset delta must lie in (0, 0.5), got " + std::to_string(delta));
  const double m = 3.0 / n;
  const Vec3 ph = orbit.eval(std::log(delta) + s0);
  // f = z^m phi(ln z + s0): chain rule through the orbit interpolation
  BackshootState out;
  out.n = n;
  out.delta = delta;
  out.s0 = s0;
  out.seed = {std::pow(delta, m) * ph[0],
              std::pow(delta, m - 1) * (m * ph[0] + ph[1]),
              std::pow(delta, m - 2) * (m * (m - 1) * ph[0] + (2 * m - 1) * ph[1] + ph[2])};
  out.traj = integrate([n](double z, const Vec3& s) { return interface_rhs(n, z, s); }, delta,
                       out.seed, 1.0, cfg);
  const Vec3& e = out.traj.y.back();
  out.origin = {e[0], -e[1], e[2]};
  return out;
}

ScanDResult scan_D(double n, const std::vector<double>& D_grid, double delta,
                   const IntegratorConfig& cfg) {
  ScanDResult res;
  res.rows = scan::parallel_map(D_grid, [&](double D) {
    const BackshootState bs = backshoot_positive(n, D, delta, cfg);
    return DRow{D, bs.origin[0], bs.origin[1]};
  });

  auto slope_at = [&](double D) { return backshoot_positive(n, D, delta, cfg).origin[1]; };

  res.min_abs_fp0 = std::numeric_limits<double>::infinity();
  for (const DRow& row : res.rows) {
    if (std::abs(row.fp0) < res.min_abs_fp0) {
      res.min_abs_fp0 = std::abs(row.fp0);
      res.min_abs_fp0_D = row.D;
    }
  }
  for (std::size_t i = 0; i + 1 < res.rows.size(); ++i) {
    double lo = res.rows[i].D, hi = res.rows[i + 1].D;
    double flo = res.rows[i].fp0, fhi = res.rows[i + 1].fp0;
    if (!(flo * fhi < 0.0)) continue;
    res.brackets.emplace_back(lo, hi);
    for (int it = 0; it < 100 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = slope_at(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
        fhi = fm;
      }
    }
    res.refined.push_back(0.5 * (lo + hi));
  }
  return res;
}

std::vector<double> d_grid(double mag_min, double mag_max, int count) {
  if (count < 3 || count % 2 == 0)
    throw OutOfRange("d_grid wants an odd count >= 3 so D=0 sits in the middle");
  const int side = (count - 1) / 2;
  std::vector<double> g(count);
  const double a = std::log(mag_min), b = std::log(mag_max);
  for (int i = 0; i < side; ++i) {
    const double mag = i == 0        ? mag_min
                       : i == side - 1 ? mag_max
                                       : std::exp(a + (b - a) * i / static_cast<double>(side - 1));
    g[side - 1 - i] = -mag;
    g[side + 1 + i] = mag;
  }
  g[side] = 0.0;
  return g;
}

InterfaceConditions interface_conditions(double n, double t, const Vec3& state, OdeFrame frame,
                                         double eps) {
  const double f = state[0];
  const double w = std::pow(eps * eps + f * f, -n / 2.0);
  const double f3 =
      frame == OdeFrame::Forward ? t * f * w / (4.0 + n) : -(1.0 - t) * f * w;
  InterfaceConditions c;
  c.height = f;
  c.slope = state[1];
  c.flux = std::pow(std::abs(f), n) * f3;
  return c;
}

}  // namespace tfe
