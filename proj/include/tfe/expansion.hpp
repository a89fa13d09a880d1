#pragma once

// Interface-local analysis in the coordinate z = y0 - y with y0 scaled to 1,
// where the profile equation reads f^(n-1) f''' = -(1-z).  Covers the explicit
// leading-order solution B0*z^m (m = 3/n), the characteristic cubic H_n(l)
// selecting the perturbation exponent l, the one-parameter bundles
// f = B0*z^m + D*z^l (positive) and f = z^m*phi(ln z + s0) (oscillatory), and
// backward shooting from the interface to the origin.

#include <utility>
#include <vector>

#include <tfe/errors.hpp>
#include <tfe/ivp.hpp>
#include <tfe/oscillation.hpp>

namespace tfe {

struct ExpansionParams {
  double n = 0.0;
  double m = 0.0;   // 3/n
  double B0 = 0.0;
  double l = 0.0;
  double D = 0.0;
  bool admissible = false;  // m < l < 1 + m
};

// leading coefficient: B0^n * m(m-1)(2-m) = 1, defined for n in (3/2, 3)
double b0(double n);

// characteristic function H_n(l) = l(l-1)(l-2) - (n-1)*[m(m-1)(2-m)]^(2/n)
double hn(double n, double l);

struct LRoot {
  double l = 0.0;
  bool admissible = false;
};

// unique root of H_n on [2, 4], refined until |H_n(l)| <= 1e-12
LRoot solve_l(double n);

ExpansionParams make_expansion(double n, double D = 0.0);

struct SeriesJet {
  double f, f1, f2, f3;  // value and z-derivatives of B0*z^m + D*z^l
};

SeriesJet eval_expansion(const ExpansionParams& p, double z);

// least-squares slope of log|r| vs log z for r(z) = f^(n-1) f''' + (1 - z)
// evaluated on the two-term series; measures at which order the series
// satisfies the interface equation
double residual_order(const ExpansionParams& p, const std::vector<double>& z_grid);

// log-spaced default grid for residual_order, inside (1e-6, 1e-2)
std::vector<double> residual_z_grid(int count = 25);

struct BackshootState {
  double n = 0.0;
  double delta = 0.0;  // seed offset from the interface
  double s0 = 0.0;     // phase (oscillatory bundle only)
  Vec3 seed{};         // (f, f', f'') at z = delta, z-frame derivatives
  Vec3 origin{};       // (f, f', f'') at the origin, y-frame sign convention
  Trajectory<3> traj;  // the interface-local run from z = delta to z = 1
};

// seed the positive bundle at z = delta and integrate the regularized
// interface-frame ODE f''' = -(1-z) f (eps^2+f^2)^(-n/2) down to the origin
BackshootState backshoot_positive(double n, double D, double delta = 1e-3,
                                  const IntegratorConfig& cfg = {});

// same run seeded from the oscillatory bundle f = z^m phi(ln z + s0)
BackshootState backshoot_oscillatory(double n, double s0, double delta, const OrbitTable& orbit,
                                     const IntegratorConfig& cfg = {});

struct DRow {
  double D = 0.0;
  double f0 = 0.0;   // f at the origin
  double fp0 = 0.0;  // f' at the origin, y-frame
};

struct ScanDResult {
  std::vector<DRow> rows;
  std::vector<std::pair<double, double>> brackets;  // D intervals where fp0 changes sign
  std::vector<double> refined;                      // bisected D* per bracket
  double min_abs_fp0 = 0.0;
  double min_abs_fp0_D = 0.0;
};

ScanDResult scan_D(double n, const std::vector<double>& D_grid, double delta = 1e-3,
                   const IntegratorConfig& cfg = {});

// default D grid: symmetric in sign, log-spaced magnitudes, plus D = 0
std::vector<double> d_grid(double mag_min = 1e-2, double mag_max = 1e3, int count = 41);

struct InterfaceConditions {
  double height = 0.0;  // f
  double slope = 0.0;   // f'
  double flux = 0.0;    // |f|^n f'''
};

enum class OdeFrame {
  Forward,         // f''' = y f (eps^2+f^2)^(-n/2) / (4+n), origin-normalized
  InterfaceLocal,  // f''' = -(1-z) f (eps^2+f^2)^(-n/2), interface-normalized
};

// zero-height / zero-contact-angle / zero-flux check at an interface estimate
InterfaceConditions interface_conditions(double n, double t, const Vec3& state,
                                         OdeFrame frame = OdeFrame::Forward, double eps = 1e-11);

}  // namespace tfe
