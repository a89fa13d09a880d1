#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include <tfe/ivp.hpp>

using namespace tfe;

namespace {

State<1> expo(double, const State<1>& y) { return {y[0]}; }
State<2> harmonic(double, const State<2>& y) { return {y[1], -y[0]}; }

// endpoint error of y'=y on [0,1] at the given tolerance
double expo_error(double tol) {
  IntegratorConfig cfg;
  cfg.rtol = cfg.atol = tol;
  auto traj = integrate(expo, 0.0, State<1>{1.0}, 1.0, cfg);
  return std::abs(traj.y.back()[0] - std::exp(1.0));
}

}  // namespace

TEST_SUITE("ivp") {

TEST_CASE("exponential reaches e within 10*rtol") {
  IntegratorConfig cfg;
  auto traj = integrate(expo, 0.0, State<1>{1.0}, 1.0, cfg);
  CHECK(traj.status == IvpStatus::Ok);
  CHECK(traj.t.back() == 1.0);
  CHECK(std::abs(traj.y.back()[0] - std::exp(1.0)) <= 10 * cfg.rtol * std::exp(1.0));
}

TEST_CASE("cosine quadrature gives sin(pi)=0 within 100*atol") {
  IntegratorConfig cfg;
  auto traj = integrate([](double t, const State<1>&) { return State<1>{std::cos(t)}; }, 0.0,
                        State<1>{0.0}, std::numbers::pi, cfg);
  CHECK(std::abs(traj.y.back()[0]) <= 100 * cfg.atol);
}

TEST_CASE("harmonic oscillator returns to (1,0) after one period") {
  IntegratorConfig cfg;
  auto traj = integrate(harmonic, 0.0, State<2>{1.0, 0.0}, 2 * std::numbers::pi, cfg);
  CHECK(std::abs(traj.y.back()[0] - 1.0) <= 1e3 * cfg.rtol);
  CHECK(std::abs(traj.y.back()[1] - 0.0) <= 1e3 * cfg.rtol);
}

TEST_CASE("tighter tolerances shrink the exponential endpoint error") {
  // Embedded-pair theory: global error ~ tol^(4/5), so one halving buys about
  // 1.7x.  Check the trend over decades, each of which must buy well over 2x.
  const double e4 = expo_error(1e-6);
  const double e5 = expo_error(1e-7);
  const double e6 = expo_error(1e-8);
  const double e7 = expo_error(1e-9);
  CHECK(e4 / e5 >= 2.0);
  CHECK(e5 / e6 >= 2.0);
  CHECK(e6 / e7 >= 2.0);
}

TEST_CASE("linear crossing event at t=0.5") {
  EventSpec<1> ev;
  ev.g = [](double, const State<1>& y) { return y[0]; };
  ev.direction = Direction::Any;
  ev.id = 7;
  auto traj = integrate_with_events([](double, const State<1>&) { return State<1>{1.0}; }, 0.0,
                                    State<1>{-0.5}, 2.0, {ev}, {});
  REQUIRE(traj.events.size() == 1);
  CHECK(traj.events[0].id == 7);
  CHECK(std::abs(traj.events[0].t - 0.5) <= 1e-10);
}

TEST_CASE("sine falling zero at t=pi") {
  EventSpec<2> ev;
  ev.g = [](double, const State<2>& y) { return y[0]; };
  ev.direction = Direction::Falling;
  auto traj = integrate_with_events(harmonic, 0.0, State<2>{0.0, 1.0}, 4.0, {ev}, {});
  REQUIRE(traj.events.size() == 1);
  CHECK(std::abs(traj.events[0].t - std::numbers::pi) <= 1e-9);
}

TEST_CASE("rising direction ignores falling crossings") {
  EventSpec<2> ev;
  ev.g = [](double, const State<2>& y) { return y[0]; };
  ev.direction = Direction::Rising;
  auto traj = integrate_with_events(harmonic, 0.0, State<2>{0.0, 1.0}, 7.0, {ev}, {});
  // sin crosses zero falling at pi and rising at 2*pi
  REQUIRE(traj.events.size() == 1);
  CHECK(std::abs(traj.events[0].t - 2 * std::numbers::pi) <= 1e-9);
}

TEST_CASE("terminal event stops integration at the event time") {
  EventSpec<1> ev;
  ev.g = [](double, const State<1>& y) { return y[0] - 2.0; };
  ev.terminal = true;
  ev.id = 3;
  auto traj = integrate_with_events(expo, 0.0, State<1>{1.0}, 5.0, {ev}, {});
  CHECK(traj.status == IvpStatus::TerminalEvent);
  CHECK(traj.terminal_event == 3);
  CHECK(std::abs(traj.t.back() - std::log(2.0)) <= 1e-9);
  CHECK(std::abs(traj.y.back()[0] - 2.0) <= 1e-9);
}

TEST_CASE("thin-film profile shot has its first zero near y=2.6288") {
  const double n = 1.75, eps = 1e-11, mu = -0.434097009;
  auto rhs = [=](double y, const State<3>& s) {
    const double f = s[0];
    return State<3>{s[1], s[2], y * f * std::pow(eps * eps + f * f, -n / 2) / (4.0 + n)};
  };
  EventSpec<3> zero;
  zero.g = [](double, const State<3>& s) { return s[0]; };
  auto traj = integrate_with_events(rhs, 0.0, State<3>{1.0, 0.0, mu}, 3.0, {zero}, {});
  REQUIRE(!traj.events.empty());
  CHECK(std::abs(traj.events[0].t - 2.6288) <= 1e-3);
}

TEST_CASE("event times are bit-identical across reruns") {
  EventSpec<2> ev;
  ev.g = [](double, const State<2>& y) { return y[0]; };
  auto run = [&] { return integrate_with_events(harmonic, 0.0, State<2>{0.0, 1.0}, 20.0, {ev}, {}); };
  auto a = run();
  auto b = run();
  REQUIRE(a.events.size() == b.events.size());
  CHECK(a.events.size() >= 6);
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(std::memcmp(&a.events[i].t, &b.events[i].t, sizeof(double)) == 0);
  }
}

TEST_CASE("reversal returns to the initial state") {
  IntegratorConfig cfg;
  auto fwd = integrate(harmonic, 0.0, State<2>{1.0, 0.0}, 3.0, cfg);
  auto bwd = integrate(harmonic, 3.0, fwd.y.back(), 0.0, cfg);
  CHECK(bwd.t.back() == 0.0);
  for (int i = 0; i < 2; ++i) {
    const double bound = 1e3 * (cfg.atol + cfg.rtol * 1.0);
    CHECK(std::abs(bwd.y.back()[i] - (i == 0 ? 1.0 : 0.0)) <= bound);
  }
}

TEST_CASE("non-finite rhs aborts with NonFinite, never silently") {
  auto rhs = [](double, const State<1>& y) {
    return State<1>{y[0] > 2.0 ? std::numeric_limits<double>::quiet_NaN() : y[0]};
  };
  try {
    integrate(rhs, 0.0, State<1>{1.0}, 5.0, {});
    FAIL("expected IvpError");
  } catch (const IvpError& e) {
    CHECK(e.status == IvpStatus::NonFinite);
  }
}

TEST_CASE("step budget is enforced") {
  IntegratorConfig cfg;
  cfg.max_steps = 10;
  try {
    integrate(harmonic, 0.0, State<2>{1.0, 0.0}, 100.0, cfg);
    FAIL("expected IvpError");
  } catch (const IvpError& e) {
    CHECK(e.status == IvpStatus::BudgetExceeded);
  }
}

TEST_CASE("dense output: node evaluation is exact") {
  auto traj = integrate(harmonic, 0.0, State<2>{1.0, 0.0}, 5.0, {});
  REQUIRE(traj.t.size() > 3);
  const std::size_t i = traj.t.size() / 2;
  auto v = dense_eval(traj, traj.t[i]);
  CHECK(v[0] == traj.y[i][0]);
  CHECK(v[1] == traj.y[i][1]);
}

TEST_CASE("dense output: exponential midpoint within 1e3*rtol") {
  IntegratorConfig cfg;
  auto traj = integrate(expo, 0.0, State<1>{1.0}, 1.0, cfg);
  auto v = dense_eval(traj, 0.5);
  CHECK(std::abs(v[0] - std::exp(0.5)) <= 1e3 * cfg.rtol * std::exp(0.5));
}

TEST_CASE("dense output: linear solutions are interpolated exactly") {
  auto traj = integrate([](double, const State<1>&) { return State<1>{2.5}; }, 0.0, State<1>{0.25},
                        4.0, {});
  REQUIRE(traj.segments.size() >= 1);
  const auto& seg = traj.segments[0];
  const double tm = seg.t0 + 0.5 * seg.h;
  auto v = dense_eval(traj, tm);
  CHECK(std::abs(v[0] - (0.25 + 2.5 * tm)) <= 1e-13);
}

TEST_CASE("dense output: out-of-span evaluation is rejected") {
  auto traj = integrate(expo, 0.0, State<1>{1.0}, 1.0, {});
  CHECK_THROWS_AS((void)dense_eval(traj, 1.5), IvpError);
  CHECK_THROWS_AS((void)dense_eval(traj, -0.1), IvpError);
}

TEST_CASE("backward-in-time integration works") {
  auto traj = integrate(expo, 1.0, State<1>{std::exp(1.0)}, 0.0, {});
  CHECK(std::abs(traj.y.back()[0] - 1.0) <= 1e-9);
  auto v = dense_eval(traj, 0.5);
  CHECK(std::abs(v[0] - std::exp(0.5)) <= 1e-9);
}

}  // TEST_SUITE
