#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "srgeo/pendulum.hpp"
#include "srgeo/singularity.hpp"

using namespace srgeo;
using N = NormalForm;

namespace {

const Surface& flat() {
  static const Surface s(flat_chart());
  return s;
}
const Surface& sphere() {
  static const Surface s(sphere_chart());
  return s;
}
const Surface& hyperbolic() {
  static const Surface s(hyperbolic_chart());
  return s;
}

std::size_t count(const EventReport& r, Projection p) {
  std::size_t n = 0;
  for (const auto& e : r.events) n += e.projection == p;
  return n;
}

// Sign changes of a sampled function of t on [0, t1].
template <class F>
std::size_t sign_changes(F&& f, double t1, int samples) {
  std::size_t n = 0;
  double prev = f(0.0);
  for (int k = 1; k <= samples; ++k) {
    const double v = f(t1 * k / samples);
    if ((v > 0) != (prev > 0) && v != 0.0 && prev != 0.0) ++n;
    prev = v;
  }
  return n;
}

}  // namespace

TEST_CASE("allowed pairs") {
  CHECK(ClassificationPair{N::I, N::I}.allowed());
  CHECK(ClassificationPair{N::II, N::III}.allowed());
  CHECK(ClassificationPair{N::III, N::II}.allowed());
  CHECK(ClassificationPair{N::III, N::III}.allowed());
  CHECK(ClassificationPair{N::III, N::IV}.allowed());
  CHECK(ClassificationPair{N::IV, N::III}.allowed());
  CHECK_FALSE(ClassificationPair{N::II, N::II}.allowed());
  CHECK_FALSE(ClassificationPair{N::IV, N::IV}.allowed());
  CHECK_FALSE(ClassificationPair{N::I, N::III}.allowed());
  CHECK_FALSE(ClassificationPair{N::II, N::IV}.allowed());
  CHECK(ClassificationPair{N::III, N::IV}.label() == "(III,IV)");
}

TEST_CASE("cusp determinant") {
  CurveJet standard;  // (t^2/2, t^3/3) at 0
  standard.d2 = {1, 0};
  standard.d3 = {0, 2};
  CHECK(cusp_delta(standard) == 2.0);
  CurveJet flat_cusp;  // (t^2, t^4) at 0
  flat_cusp.d2 = {2, 0};
  flat_cusp.d3 = {0, 0};
  CHECK(cusp_delta(flat_cusp) == 0.0);
  CHECK(classify_jet(standard, 1.0, 1e-12) == N::IV);
  CHECK(classify_jet(flat_cusp, 1.0, 1e-12) != N::IV);
  CurveJet immersion;
  immersion.d1 = {1, 0};
  CHECK(classify_jet(immersion, 1.0, 1e-12) == N::III);
  CHECK(classify_jet(CurveJet{}, 1.0, 1e-12) == N::II);

  const ExtremalState s{0, 0, 0, 0, 1, 1};
  CHECK(pi_delta_formula(flat(), s) == 2.0);
  const CurveJet jet = pi_jet(flat(), s, jet_step(flat(), s));
  CHECK(norm(jet.d1) == 0.0);
  CHECK(cusp_delta(jet) == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("pi classes") {
  CHECK(classify_pi(flat(), {0, 0, 0, 0, 0, 0}) == N::I);
  CHECK(classify_pi(flat(), {0, 0, 0, 0, 0, 1}) == N::II);
  CHECK(classify_pi(flat(), {0, 0, 0, 0, 1, 1}) == N::IV);
  CHECK(classify_pi(flat(), {0, 0, 0, 1, 0, 0}) == N::III);
  // Equilibrium with nonzero momenta is a constant curve.
  CHECK(classify_pi(flat(), {0, 0, 0, 0, 1, 0}) == N::I);
}

TEST_CASE("pi' classes") {
  CHECK(classify_pi_prime(flat(), {0, 0, 0, 0, 0, 0}) == N::I);
  CHECK(classify_pi_prime(flat(), {0, 0, 0, 1, 0, 0}) == N::II);
  CHECK(classify_pi_prime(flat(), {0, 0, std::numbers::pi / 4, 0, 1, 0}) == N::IV);
  CHECK(classify_pi_prime(flat(), {0, 0, 0, 0, 0, 1}) == N::III);
  // Sphere meridian through the origin: a straight geodesic lift.
  CHECK(classify_pi_prime(sphere(), {0.1, 0.3, 0, 1, 0, 0}) == N::II);
  // Sphere: a lift with phi = A W is a pi'-event, not theta' = 0.
  const ExtremalState s{0.4, 0.0, 1.0, 0.8, 0.6, 0.0};
  const double aw = switching_values(sphere().frame, s).A * geodesic_flow(sphere(), 0.4, 0, 1.0).W;
  ExtremalState q = s;
  q.phi = aw;
  CHECK(classify_pi_prime(sphere(), q) == N::IV);
  CHECK(classify_pi_prime(sphere(), s) == N::III);
}

TEST_CASE("pairs") {
  CHECK(classify_pair(flat(), {0, 0, 0, 0, 0, 0}) == ClassificationPair{N::I, N::I});
  CHECK(classify_pair(flat(), {0, 0, 0, 0, 0, 1}) == ClassificationPair{N::II, N::III});
  CHECK(classify_pair(flat(), {0, 0, 0, 0, 1, 1}) == ClassificationPair{N::IV, N::III});
  CHECK(classify_pair(flat(), {0, 0, 0, 1, 0, 0}) == ClassificationPair{N::III, N::II});
  CHECK(classify_pair(flat(), {0, 0, std::numbers::pi / 4, 0, 1, 0}) ==
        ClassificationPair{N::III, N::IV});
  CHECK(classify_pair(flat(), {0, 0, 0.3, 0.5, 1, 0.2}) == ClassificationPair{N::III, N::III});
}

TEST_CASE("pair closure on random states") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const Surface* surf : {&flat(), &sphere(), &hyperbolic()}) {
    for (int i = 0; i < 300; ++i) {
      const ExtremalState s{0.5 * u(rng), u(rng), 4 * u(rng), u(rng), u(rng), u(rng)};
      CHECK_NOTHROW(classify_pair(*surf, s));
    }
  }
}

TEST_CASE("events: straight line, fiber, constant") {
  const Trajectory line = integrate(flat(), {0, 0, 0, 1, 0, 0}, {0, 10});
  EventReport r = detect_events(line);
  CHECK(r.events.empty());
  CHECK(r.pi_prime_germ_global);
  CHECK(r.initial_pair == ClassificationPair{N::III, N::II});

  const Trajectory fiber = integrate(flat(), {0, 0, 0, 0, 0, 1}, {0, 10});
  r = detect_events(fiber);
  CHECK(r.events.empty());
  CHECK(r.pi_germ_global);
  CHECK(r.initial_pair == ClassificationPair{N::II, N::III});

  const Trajectory constant = integrate(flat(), {1, 1, 1, 0, 0, 0}, {0, 10});
  r = detect_events(constant);
  CHECK(r.events.empty());
  CHECK(r.initial_pair == ClassificationPair{N::I, N::I});
}

TEST_CASE("events: cusp at the initial time") {
  const Trajectory tr = integrate(flat(), {0, 0, 0, 0, 1, 1}, {0, 3});
  const EventReport r = detect_events(tr);
  REQUIRE_FALSE(r.events.empty());
  const SingularEvent& e = r.events.front();
  CHECK(e.t == 0.0);
  CHECK(e.projection == Projection::Pi);
  CHECK(e.clazz == N::IV);
  REQUIRE(e.delta.has_value());
  CHECK(*e.delta == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(*e.delta_formula == 2.0);
  CHECK(*e.kappa_c == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("events: flat libration alternates and matches closed-form zero counts") {
  const ExtremalState s0{0, 0, 0, 0, 1, 0.5};
  const double t1 = 20;
  const Trajectory tr = integrate(flat(), s0, {0, t1});
  const EventReport r = detect_events(tr);
  const std::size_t zeros_A =
      1 + sign_changes([&](double t) { return std::sin(closed_form_flat(s0, t).theta); }, t1, 20000);
  const std::size_t zeros_dtheta =
      sign_changes([&](double t) { return closed_form_flat(s0, t).theta_dot; }, t1, 20000);
  CHECK(count(r, Projection::Pi) == zeros_A);  // includes the cusp at t = 0
  CHECK(count(r, Projection::PiPrime) == zeros_dtheta);
  for (std::size_t i = 1; i < r.events.size(); ++i) {
    CHECK(r.events[i].projection != r.events[i - 1].projection);
    CHECK(r.events[i].t > r.events[i - 1].t);
  }
  for (const auto& e : r.events) {
    CHECK(e.refined_t_tol <= 1e-12);
    CHECK(e.clazz == N::IV);
    const double scale = r.scale;
    const Switching sw = switching_values(flat().frame, e.state);
    if (e.projection == Projection::Pi) {
      CHECK(std::abs(e.state.phi) > 1e-9 * scale);
      CHECK(std::abs(*e.delta - *e.delta_formula) <= 1e-5 * std::abs(*e.delta_formula));
      CHECK(*e.kappa_c == doctest::Approx(*e.kappa_c_formula).epsilon(1e-6));
      CHECK(norm(e.jet->d2) > 0.0);
    } else {
      CHECK(std::abs(sw.A) > 1e-9 * scale);
      // theta' = 0 forces theta'' = -AB != 0.
      CHECK(std::abs(sw.A * sw.B) > 1e-10 * scale * scale);
      CHECK((*e.delta > 0) == (*e.delta_formula > 0));
      CHECK(*e.delta == doctest::Approx(*e.delta_formula).epsilon(1e-4));
    }
  }
}

TEST_CASE("events on curved charts") {
  for (const Surface* surf : {&sphere(), &hyperbolic()}) {
    const Trajectory tr = integrate(*surf, {0.1, 0.2, 0.3, 0.2, 1.0, 0.6}, {0, 10});
    const EventReport r = detect_events(tr);
    INFO(surf->chart.name());
    CHECK(count(r, Projection::Pi) > 0);
    CHECK(count(r, Projection::PiPrime) > 0);
    for (const auto& e : r.events) {
      CHECK(e.clazz == N::IV);
      if (e.projection == Projection::Pi) {
        REQUIRE(e.delta.has_value());
        CHECK(std::abs(*e.delta - *e.delta_formula) <= 1e-4 * std::abs(*e.delta_formula));
        CHECK(*e.kappa_c == doctest::Approx(*e.kappa_c_formula).epsilon(1e-5));
      } else {
        // Cusp of pi' in a numeric leaf chart.
        REQUIRE(e.jet.has_value());
        CHECK(classify_jet(*e.jet, jet_step(*surf, e.state) * 100, 1e-7 * r.scale) == N::IV);
      }
    }
  }
}

TEST_CASE("curvature") {
  const CurvatureValue line = curvature(flat(), {0, 0, 0, 1, 0, 0});
  CHECK(line.formula == 0.0);
  CHECK(std::abs(line.jet) <= 1e-10);
  const CurvatureValue k = curvature(flat(), {0, 0, 0, 1, 0, 2});
  CHECK(k.formula == 2.0);
  CHECK(k.jet == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(k.validated);
  CHECK_FALSE(curvature(sphere(), {0.1, 0, 0, 1, 0, 2}).validated);
  CHECK_THROWS_AS(curvature(flat(), {0, 0, 0, 0, 1, 1}), std::domain_error);

  // Inflection: curvature changes sign across a theta' = 0 event.
  const Trajectory tr = integrate(flat(), {0, 0, 0, 0, 1, 0.5}, {0, 5});
  const EventReport r = detect_events(tr);
  for (const auto& e : r.events) {
    if (e.projection != Projection::PiPrime) continue;
    const double before = curvature(flat(), tr.eval(e.t - 0.05)).formula;
    const double after = curvature(flat(), tr.eval(e.t + 0.05)).formula;
    CHECK(before * after < 0);
  }

  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1, 1);
  int checked = 0;
  while (checked < 1000) {
    const ExtremalState s{u(rng), u(rng), 4 * u(rng), 1.5 * u(rng), 1.5 * u(rng), 1.5 * u(rng)};
    const Switching sw = switching_values(flat().frame, s);
    if (std::abs(sw.A) < 0.1 * momentum_scale(flat(), s) || std::abs(s.phi) < 1e-3) continue;
    const CurvatureValue c = curvature(flat(), s);
    REQUIRE(c.jet == doctest::Approx(c.formula).epsilon(1e-7));
    ++checked;
  }
}

TEST_CASE("cuspidal curvature") {
  CHECK(cuspidal_curvature_formula(flat(), {0, 0, 0, 0, 1, 1}) == doctest::Approx(2.0));
  CHECK(cuspidal_curvature_formula(flat(), {0, 0, 0, 0, 1, 4}) == doctest::Approx(4.0));
  CHECK(cuspidal_curvature_formula(flat(), {0, 0, 0, 0, 1, -4}) == doctest::Approx(-4.0));
  CHECK(cuspidal_curvature(flat(), {0, 0, 0, 0, 1, 1}) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(cuspidal_curvature(flat(), {0, 0, 0, 0, 1, 4}) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(cuspidal_curvature(flat(), {0, 0, 0, 0, 1, -1}) == doctest::Approx(-2.0).epsilon(1e-6));
  // 2 theta'^3 / (|theta'| |p|)^(5/2) with |p| = 2.
  const ExtremalState s{0, 0, 0, 0, 2, 1};
  CHECK(cuspidal_curvature_formula(flat(), s) == doctest::Approx(2.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(cuspidal_curvature(flat(), {0, 0, 0, 1, 0, 1}), std::domain_error);
}

TEST_CASE("zigzag report") {
  const ExtremalState lib{0, 0, 0.2, 0, 1, 0};
  const PendulumParams pp = reduce(flat().frame, lib);
  const double m = std::sin(0.2) * std::sin(0.2);
  const double period = 4 * complete_elliptic_k(m) / pp.omega;
  const Trajectory tr = integrate(flat(), lib, {0, 2 * period + 0.1});
  const ZigzagReport z = zigzag_report(tr);
  CHECK(z.applicable);
  CHECK(z.alternates);
  CHECK(z.cusp_count == 4);
  CHECK(z.directions_parallel);
  CHECK(z.max_cusp_angle <= 1e-6);

  const Trajectory rot = integrate(flat(), {0, 0, 0, 0, 1, 3}, {0, 10});
  const ZigzagReport zr = zigzag_report(rot);
  CHECK_FALSE(zr.applicable);
  for (const auto& e : zr.events) CHECK(e.projection == Projection::Pi);
  CHECK(zr.directions_parallel);
}
