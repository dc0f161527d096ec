#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "srgeo/extremal.hpp"

using namespace srgeo;

namespace {

const Surface& flat() {
  static const Surface s(flat_chart());
  return s;
}
const Surface& sphere() {
  static const Surface s(sphere_chart());
  return s;
}

ExtremalState random_state(std::mt19937_64& rng, double xr) {
  std::uniform_real_distribution<double> x(-xr, xr), th(-std::numbers::pi, std::numbers::pi),
      p(-1.5, 1.5);
  return {x(rng), x(rng), th(rng), p(rng), p(rng), p(rng)};
}

double state_distance(const ExtremalState& a, const ExtremalState& b) {
  return std::max({std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2), std::abs(a.theta - b.theta)});
}

}  // namespace

TEST_CASE("switching values") {
  const OrthonormalFrame& f = flat().frame;
  Switching s = switching_values(f, {0, 0, 0, 1, 0, 0});
  CHECK(s.A == 1.0);
  CHECK(s.B == 0.0);
  s = switching_values(f, {0, 0, 0, 0, 1, 0});
  CHECK(s.A == 0.0);
  CHECK(s.B == 1.0);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const ExtremalState st = random_state(rng, 3);
    const Switching w = switching_values(f, st);
    CHECK(w.A * w.A + w.B * w.B == doctest::Approx(st.p1 * st.p1 + st.p2 * st.p2).epsilon(1e-14));
  }
}

TEST_CASE("extremal field examples") {
  State6 d = extremal_field(flat(), {0, 0, 0.4, 0, 0, 2.5});
  CHECK(d == State6{0, 0, 2.5, 0, 0, 0});
  d = extremal_field(flat(), {0, 0, 0, 1, 0, 0});
  CHECK(d == State6{1, 0, 0, 0, 0, 0});
  d = extremal_field(flat(), {0, 0, std::numbers::pi / 4, 0, 1, 0});
  CHECK(d[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d[2] == 0.0);
  CHECK(d[3] == 0.0);
  CHECK(d[4] == 0.0);
  CHECK(d[5] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK_THROWS_AS(extremal_field(sphere(), {1.6, 0, 0, 1, 0, 0}), DomainError);
}

TEST_CASE("hamiltonian value and speed") {
  CHECK(hamiltonian_value(flat().frame, {}) == 0.0);
  CHECK(hamiltonian_value(flat().frame, {0, 0, 0, 0, 1, 1}) == 0.5);
  const ControlValue u = controls(flat().frame, {0, 0, 0, 2, 0, 3});
  CHECK(u.u1 == 2.0);
  CHECK(u.u2 == 3.0);
}

TEST_CASE("constant initial state stays constant") {
  for (const Surface* s : {&flat(), &sphere()}) {
    const ExtremalState s0{0.2, 0.1, 0.3, 0, 0, 0};
    const Trajectory tr = integrate(*s, s0, {0, 5});
    for (const auto& st : tr.node_states()) CHECK(state_distance(st, s0) == 0.0);
    CHECK(arc_length(tr) == 0.0);
    const Trajectory alt = alt_integrate(*s, s0, {0, 5});
    CHECK(state_distance(alt.eval(5), s0) <= 1e-14);
  }
}

TEST_CASE("fiber curve") {
  const ExtremalState s0{0.5, -0.25, 0, 0, 0, 1};
  const Trajectory tr = integrate(flat(), s0, {0, 2 * std::numbers::pi});
  for (double t : {0.5, 1.0, 3.0, 6.0}) {
    const ExtremalState s = tr.eval(t);
    CHECK(s.theta == doctest::Approx(t).epsilon(1e-12));
    CHECK(s.x1 == 0.5);
    CHECK(s.x2 == -0.25);
  }
  CHECK(arc_length(tr) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-12));
  const Trajectory alt = alt_integrate(flat(), s0, {0, 3});
  CHECK(alt.eval(3).theta == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(alt.eval(3).x1 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("conservation, constant flat momenta, arc length") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Surface& surf = (i % 2 == 0) ? flat() : sphere();
    const ExtremalState s0 = random_state(rng, 0.3);
    const Trajectory tr = integrate(surf, s0, {0, 10}, 1e-10);
    CHECK(hamiltonian_drift(tr) <= 100 * 1e-10);
    const double span = tr.t_end() - tr.t_begin();
    CHECK(arc_length(tr) == doctest::Approx(speed(surf.frame, s0) * span).epsilon(1e-9));
    if (&surf == &flat()) {
      for (const auto& st : tr.node_states()) {
        CHECK(std::abs(st.p1 - s0.p1) <= 1e-8);
        CHECK(std::abs(st.p2 - s0.p2) <= 1e-8);
      }
    }
  }
}

TEST_CASE("time reversal returns to the initial state") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const Surface& surf = (i % 2 == 0) ? flat() : sphere();
    const ExtremalState s0 = random_state(rng, 0.2);
    const Trajectory fwd = integrate(surf, s0, {0, 3}, 1e-10);
    if (fwd.domain_exit()) continue;
    const Trajectory back = integrate(surf, fwd.eval(3), {3, 0}, 1e-10);
    const ExtremalState s1 = back.eval(0);
    const State6 a = s0.to_array(), b = s1.to_array();
    for (int k = 0; k < 6; ++k) CHECK(std::abs(a[k] - b[k]) <= 100 * 1e-10);
  }
}

TEST_CASE("integrate and alt_integrate agree") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const Surface& surf = (i % 2 == 0) ? flat() : sphere();
    const ExtremalState s0 = random_state(rng, 0.2);
    const Trajectory a = integrate(surf, s0, {0, 10});
    const Trajectory b = alt_integrate(surf, s0, {0, 10});
    const double t_end = std::min(a.t_end(), b.t_end());
    double worst = 0;
    for (int k = 0; k <= 200; ++k) {
      const double t = std::min(t_end, t_end * k / 200.0);
      worst = std::max(worst, state_distance(a.eval(t), b.eval(t)));
    }
    CHECK(worst <= 1e-7);
  }
}

TEST_CASE("sphere trajectory leaving the chart ends with a marker") {
  const Trajectory tr = integrate(sphere(), {0, 0, 0, 1, 0, 0}, {0, 10});
  REQUIRE(tr.domain_exit());
  CHECK(*tr.exit_time() == doctest::Approx(std::numbers::pi / 2 - 0.1).epsilon(1e-9));
  CHECK(tr.t_end() == *tr.exit_time());
}

TEST_CASE("non-immersion only on constant curves") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const ExtremalState s = random_state(rng, 0.5);
    const State6 d = extremal_field(flat(), s);
    if (std::max({std::abs(d[0]), std::abs(d[1]), std::abs(d[2])}) < 1e-13) {
      CHECK(switching_values(flat().frame, s).A == doctest::Approx(0).epsilon(1e-13));
    }
  }
  // A = 0 and phi = 0 with nonzero momenta: an equilibrium of the flow.
  const ExtremalState eq{0, 0, 0, 0, 1, 0};
  const Trajectory tr = integrate(flat(), eq, {0, 5});
  CHECK(state_distance(tr.eval(5), eq) == 0.0);
}

TEST_CASE("abnormal triviality") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> th(-3, 3), x(-1, 1);
  for (int i = 0; i < 100; ++i) {
    CHECK(abnormal_triviality_check(flat().frame, x(rng), x(rng), th(rng)));
    CHECK(abnormal_triviality_check(sphere().frame, x(rng), x(rng), th(rng)));
  }
  const OrthonormalFrame degenerate([](double, double) {
    FrameSample f;
    f.k = 1;
    f.l = 2;
    f.m = 0.5;
    f.n = 1;
    return f;
  });
  CHECK_THROWS_AS(abnormal_triviality_check(degenerate, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("tolerance and window validation") {
  CHECK_THROWS_AS(integrate(flat(), {}, {0, 1}, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(integrate(flat(), {}, {0, 1}, 1e-15), std::invalid_argument);
  CHECK_THROWS_AS(integrate(flat(), {}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(integrate(sphere(), {2, 0, 0, 0, 0, 0}, {0, 1}), DomainError);
}

TEST_CASE("second derivative of the state matches differences of the field") {
  const Trajectory tr = integrate(flat(), {0, 0, 0.2, 0.3, 1.0, 0.7}, {0, 4}, 1e-12);
  const double t = 1.7, h = 1e-4;
  const State6 dd = tr.second_derivative(t);
  const State6 fp = tr.derivative(t + h), fm = tr.derivative(t - h);
  for (int k = 0; k < 6; ++k) CHECK(dd[k] == doctest::Approx((fp[k] - fm[k]) / (2 * h)).epsilon(1e-6));
}
