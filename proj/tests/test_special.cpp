#include <doctest.h>

#include <cmath>
#include <vector>

#include "tfe/errors.hpp"
#include "tfe/special.hpp"

using namespace tfe;

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> out(count);
  double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = lo * std::exp(step * i);
  return out;
}

// |f'| where the profile first passes down through height h, approaching the
// interface estimate from the left
double slope_at_height(const ShootResult& shot, double h) {
  double y0 = *shot.interface_estimate;
  double lo = 1e-12 * y0, hi = 0.1 * y0;
  for (int i = 0; i < 200; ++i) {
    double mid = std::sqrt(lo * hi);
    (dense_eval(shot.traj, y0 - mid)[0] > h ? hi : lo) = mid;
  }
  return std::abs(dense_eval(shot.traj, y0 - std::sqrt(lo * hi))[1]);
}

const CriticalShoot& critical_n3() {
  static const CriticalShoot c = [] {
    ProfileProblem p;
    p.n = 3.0;
    return find_mu(p, -10.0, 0.0, 1e-12);
  }();
  return c;
}

}  // namespace

TEST_SUITE("special") {

TEST_CASE("fit recovers exact log-corrected synthetic data") {
  auto z = log_grid(1e-4, 1e-2, 60);
  std::vector<double> f(z.size());

  for (std::size_t i = 0; i < z.size(); ++i)
    f[i] = 2.5 * z[i] * std::pow(std::abs(std::log(z[i])), 1.0 / 3.0);
  LogFit a = logfit_samples(z, f);
  CHECK(a.C == doctest::Approx(2.5).epsilon(1e-3));
  CHECK(a.p == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  CHECK(a.rms < 1e-10);

  for (std::size_t i = 0; i < z.size(); ++i)
    f[i] = 0.7 * z[i] * std::pow(std::abs(std::log(z[i])), -0.25);
  LogFit b = logfit_samples(z, f);
  CHECK(b.C == doctest::Approx(0.7).epsilon(1e-3));
  CHECK(b.p == doctest::Approx(-0.25).epsilon(1e-3));
  CHECK(b.window.first == doctest::Approx(1e-4));
  CHECK(b.window.second == doctest::Approx(1e-2));
}

TEST_CASE("fit input guards") {
  CHECK_THROWS_AS(logfit_samples({1e-3, 1e-2}, {1.0}), FitFailed);
  CHECK_THROWS_AS(logfit_samples({1e-3, -1.0, 2.0}, {1.0, 1.0, 1.0}), FitFailed);

  auto z = log_grid(1e-3, 1.02e-3, 10);  // ln|ln z| nearly constant
  std::vector<double> f(z.size(), 1e-3);
  CHECK_THROWS_AS(logfit_samples(z, f), WindowTooClose);
}

TEST_CASE("critical n=3 shot carries a log-corrected linear contact") {
  LogFit fit = logfit_n3(critical_n3().result_high);
  // amplitude lands near 3/sqrt(2) already on the default window
  CHECK(std::abs(fit.C - 2.12132) / 2.12132 < 0.2);
  CHECK(fit.C == doctest::Approx(2.426942).epsilon(1e-3));
  CHECK(std::abs(fit.p - (-0.121058)) < 5e-3);
  CHECK(fit.rms < 0.01);
  CHECK(fit.rms > 0.0);

  double y0 = critical_n3().y0;
  CHECK(fit.window.first == doctest::Approx(1e-4 * y0));
  CHECK(fit.window.second == doctest::Approx(1e-2 * y0));
}

TEST_CASE("fit window validation") {
  const ShootResult& shot = critical_n3().result_high;
  const double y0 = *shot.interface_estimate;
  CHECK_THROWS_AS(logfit_n3(shot, 1e-4 * y0, 0.3 * y0), OutOfRange);
  CHECK_THROWS_AS(logfit_n3(shot, 1e-2 * y0, 1e-4 * y0), OutOfRange);
  CHECK_THROWS_AS(logfit_n3(shot, 0, 0, 2), OutOfRange);

  ProfileProblem p;
  p.n = 3.0;
  ShootResult flat = shoot(p, 0.0);  // grows monotonically, no interface
  CHECK_THROWS_AS(logfit_n3(flat), FitFailed);
}

TEST_CASE("pre-asymptotic slope drifts away from 1/3 as the window shrinks") {
  // The log corrections converge so slowly that on any window reachable in
  // double precision the local slope is negative and keeps falling; only the
  // amplitude is already in range. Asserted as measured.
  const ShootResult& shot = critical_n3().result_high;
  const double y0 = *shot.interface_estimate;
  double prev = 1.0;
  for (double k : {1.0, 10.0, 100.0}) {
    LogFit fit = logfit_n3(shot, 1e-4 * y0 / k, 1e-2 * y0 / k);
    CHECK(fit.p < 0.0);
    CHECK(fit.p < prev);
    prev = fit.p;
  }
}

TEST_CASE("contact slope stays finite at n=3 but vanishes at n=2") {
  const ShootResult& n3 = critical_n3().result_high;
  for (double h : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
    CAPTURE(h);
    CHECK(slope_at_height(n3, h) > 1.0);
  }

  ProfileProblem p;
  p.n = 2.0;
  CriticalShoot c2 = find_mu(p, -1.0, 0.0, 1e-12);
  double s4 = slope_at_height(c2.result_high, 1e-4);
  double s7 = slope_at_height(c2.result_high, 1e-7);
  CHECK(s4 < 0.1);
  CHECK(s7 < 0.01);
  // cube-root height scaling of the n=2 touchdown
  CHECK(s7 / s4 == doctest::Approx(0.1).epsilon(0.25));
}

TEST_CASE("n=4 shots never reach the zero level") {
  auto rows = nonexistence_scan_n4(default_n4_grid());
  REQUIRE(rows.size() == default_n4_grid().size());
  for (const auto& r : rows) {
    CAPTURE(r.mu);
    CHECK(r.min_f > 0.0);
    CHECK(r.outcome == ShotOutcome::Overshoot);
  }
  CHECK(rows.front().mu == -2.0);
  CHECK(rows.front().min_f == doctest::Approx(1.947171e-2).epsilon(1e-4));
  CHECK(rows.back().mu == -1000.0);
  CHECK(rows.back().min_f == doctest::Approx(7.870357e-8).epsilon(1e-3));
}

TEST_CASE("n=4 positivity is robust to regularization and tolerance changes") {
  std::vector<double> grid{-2.0, -1000.0};
  auto base = nonexistence_scan_n4(grid);

  ProfileProblem tighter;
  tighter.eps = 5e-12;
  IntegratorConfig cfg;
  cfg.rtol = cfg.atol = 1e-13;
  auto refined = nonexistence_scan_n4(grid, tighter, cfg);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(refined[i].min_f > 0.0);
    CHECK(refined[i].min_f == doctest::Approx(base[i].min_f).epsilon(0.05));
  }
}

TEST_CASE("default scan grid spans the reported range") {
  auto g = default_n4_grid();
  REQUIRE(g.size() >= 4);
  CHECK(g.front() == -2.0);
  CHECK(g.back() == -1000.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] < g[i - 1]);
}

}  // TEST_SUITE
