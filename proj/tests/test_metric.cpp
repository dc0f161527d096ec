#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "srgeo/metric.hpp"

using namespace srgeo;

namespace {

// Christoffel symbols from central differences of the metric values only.
Christoffel christoffel_fd(const MetricChart& chart, double x1, double x2, double h) {
  auto g = [&](double a, double b) {
    const MetricSample s = chart.sample(a, b);
    return std::array<std::array<double, 2>, 2>{{{s.g11, s.g12}, {s.g12, s.g22}}};
  };
  std::array<std::array<std::array<double, 2>, 2>, 2> dg{};  // dg[l][i][j] = d_l g_ij
  for (int l = 0; l < 2; ++l) {
    const auto gp = l == 0 ? g(x1 + h, x2) : g(x1, x2 + h);
    const auto gm = l == 0 ? g(x1 - h, x2) : g(x1, x2 - h);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) dg[l][i][j] = (gp[i][j] - gm[i][j]) / (2 * h);
  }
  const auto g0 = g(x1, x2);
  const double det = g0[0][0] * g0[1][1] - g0[0][1] * g0[1][0];
  const double inv[2][2] = {{g0[1][1] / det, -g0[0][1] / det}, {-g0[1][0] / det, g0[0][0] / det}};
  Christoffel out{};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double acc = 0;
        for (int l = 0; l < 2; ++l) acc += inv[k][l] * (dg[j][l][i] + dg[i][l][j] - dg[l][i][j]);
        out[k][i][j] = 0.5 * acc;
      }
  return out;
}

double max_abs(const Christoffel& c) {
  double m = 0;
  for (auto& a : c)
    for (auto& b : a)
      for (double v : b) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("flat chart has vanishing Christoffel symbols") {
  const MetricChart flat = flat_chart();
  CHECK(max_abs(christoffel(flat, 3.0, -2.0)) == 0.0);
}

TEST_CASE("builtin charts have vanishing Christoffel symbols at the origin") {
  for (const char* name : {"flat", "sphere", "hyperbolic"}) {
    INFO(name);
    CHECK(max_abs(christoffel(builtin_chart(name), 0.0, 0.0)) <= 1e-12);
  }
}

TEST_CASE("sphere Christoffel symbols at x1 = 0.3") {
  const Christoffel c = christoffel(sphere_chart(), 0.3, 0.5);
  // g22 = cos^2 x1: Gamma^2_12 = (d1 g22) / (2 g22) = -tan x1; Gamma^1_22 = -(d1 g22)/2.
  CHECK(c[1][0][1] == doctest::Approx(-std::tan(0.3)).epsilon(1e-14));
  CHECK(c[1][1][0] == doctest::Approx(-std::tan(0.3)).epsilon(1e-14));
  CHECK(c[0][1][1] == doctest::Approx(std::cos(0.3) * std::sin(0.3)).epsilon(1e-14));
  CHECK(std::abs(c[0][0][0]) + std::abs(c[0][0][1]) + std::abs(c[1][0][0]) + std::abs(c[1][1][1]) ==
        0.0);
}

TEST_CASE("analytic Christoffel symbols agree with finite differences") {
  std::mt19937_64 rng(7);
  for (const char* name : {"sphere", "hyperbolic"}) {
    const MetricChart chart = builtin_chart(name);
    std::uniform_real_distribution<double> u1(-1.2, 1.2), u2(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
      const double x1 = u1(rng), x2 = u2(rng);
      const Christoffel a = christoffel(chart, x1, x2);
      const Christoffel b = christoffel_fd(chart, x1, x2, 1e-5);
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(a[k][i][j] - b[k][i][j]) <= 1e-6);
            CHECK(a[k][i][j] == a[k][j][i]);
          }
    }
  }
}

TEST_CASE("frame orthonormality at random points") {
  std::mt19937_64 rng(11);
  for (const char* name : {"flat", "sphere", "hyperbolic"}) {
    const MetricChart chart = builtin_chart(name);
    const OrthonormalFrame frame = frame_from_metric(chart);
    const Domain d = chart.domain();
    std::uniform_real_distribution<double> u1(std::max(d.x1_min, -5.0), std::min(d.x1_max, 5.0));
    std::uniform_real_distribution<double> u2(-10, 10);
    double worst = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const double x1 = u1(rng), x2 = u2(rng);
      const MetricSample g = chart.sample(x1, x2);
      const FrameSample f = frame.at(x1, x2);
      auto ip = [&](double a1, double a2, double b1, double b2) {
        return g.g11 * a1 * b1 + g.g12 * (a1 * b2 + a2 * b1) + g.g22 * a2 * b2;
      };
      worst = std::max({worst, std::abs(ip(f.k, f.l, f.k, f.l) - 1),
                        std::abs(ip(f.m, f.n, f.m, f.n) - 1), std::abs(ip(f.k, f.l, f.m, f.n))});
      REQUIRE(f.det() > 0);
    }
    INFO(name);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("Gram-Schmidt frame of a skew metric is orthonormal with chain-rule partials") {
  const MetricChart chart = expression_chart("1 + x1^2", "0.3*sin(x2)", "2 + cos(x1)*x2^2",
                                             Domain{-1, 1, -1, 1}, false);
  const OrthonormalFrame frame = frame_from_metric(chart);
  const double x1 = 0.4, x2 = -0.6, h = 1e-6;
  const MetricSample g = chart.sample(x1, x2);
  const FrameSample f = frame.at(x1, x2);
  auto ip = [&](double a1, double a2, double b1, double b2) {
    return g.g11 * a1 * b1 + g.g12 * (a1 * b2 + a2 * b1) + g.g22 * a2 * b2;
  };
  CHECK(ip(f.k, f.l, f.k, f.l) == doctest::Approx(1).epsilon(1e-14));
  CHECK(ip(f.m, f.n, f.m, f.n) == doctest::Approx(1).epsilon(1e-14));
  CHECK(std::abs(ip(f.k, f.l, f.m, f.n)) <= 1e-14);
  const FrameSample fp = frame.at(x1 + h, x2), fm = frame.at(x1 - h, x2);
  const FrameSample gp = frame.at(x1, x2 + h), gm = frame.at(x1, x2 - h);
  CHECK(f.dm[0] == doctest::Approx((fp.m - fm.m) / (2 * h)).epsilon(1e-7));
  CHECK(f.dn[0] == doctest::Approx((fp.n - fm.n) / (2 * h)).epsilon(1e-7));
  CHECK(f.dk[0] == doctest::Approx((fp.k - fm.k) / (2 * h)).epsilon(1e-7));
  CHECK(f.dm[1] == doctest::Approx((gp.m - gm.m) / (2 * h)).epsilon(1e-7));
  CHECK(f.dn[1] == doctest::Approx((gp.n - gm.n) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("frame of builtin charts") {
  const OrthonormalFrame flat = frame_from_metric(flat_chart());
  const FrameSample f = flat.at(2.0, 3.0);
  CHECK(f.k == 1.0);
  CHECK(f.l == 0.0);
  CHECK(f.m == 0.0);
  CHECK(f.n == 1.0);
  CHECK(f.dk == Gradient2{0, 0});
  CHECK(f.dn == Gradient2{0, 0});

  const OrthonormalFrame hyp = frame_from_metric(hyperbolic_chart());
  for (double x1 : {-2.0, 0.0, 0.7}) {
    const FrameSample s = hyp.at(x1, 1.0);
    CHECK(s.n == doctest::Approx(1.0 / std::cosh(x1)).epsilon(1e-15));
    const double h = 1e-6;
    CHECK(s.dn[0] == doctest::Approx((hyp.at(x1 + h, 1).n - hyp.at(x1 - h, 1).n) / (2 * h))
                         .epsilon(1e-8));
  }
  CHECK(std::abs(hyp.at(0.0, 5.0).dn[0]) <= 1e-15);

  const FrameSample o = frame_from_metric(sphere_chart()).at(0.0, 0.0);
  for (const Gradient2& d : {o.dk, o.dl, o.dm, o.dn}) {
    CHECK(std::abs(d[0]) <= 1e-15);
    CHECK(std::abs(d[1]) <= 1e-15);
  }
}

TEST_CASE("geodesic parallel validation") {
  for (const char* name : {"flat", "sphere", "hyperbolic"}) {
    const ParallelValidation r = validate_geodesic_parallel(builtin_chart(name));
    INFO(name);
    CHECK(r.passed);
    CHECK(r.g11_violation <= 1e-12);
    CHECK(r.g12_violation <= 1e-12);
    CHECK(r.g22_axis_violation <= 1e-12);
    CHECK(r.dg22_axis_violation <= 1e-12);
  }
  const ParallelValidation flat = validate_geodesic_parallel(flat_chart());
  CHECK(flat.g11_violation == 0.0);
  CHECK(flat.dg22_axis_violation == 0.0);

  const MetricChart bad = expression_chart("1", "0", "1 + x1", Domain{-0.5, 0.5, -1, 1}, true);
  const ParallelValidation r = validate_geodesic_parallel(bad);
  CHECK_FALSE(r.passed);
  CHECK(r.dg22_axis_violation == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("finite-difference fallback relaxes tolerance") {
  MetricComponent g22{[](double x1, double) { return std::cos(x1) * std::cos(x1); }, {}};
  const MetricChart chart("fd-sphere", ChartKind::Custom, Domain{-1, 1, -1, 1},
                          MetricComponent::constant(1), MetricComponent::constant(0), g22, true);
  CHECK_FALSE(chart.has_analytic_partials());
  CHECK(chart.tolerance() == 1e-6);
  const MetricSample s = chart.sample(0.3, 0.0);
  CHECK(s.dg22[0] == doctest::Approx(-std::sin(0.6)).epsilon(1e-8));
  CHECK(validate_geodesic_parallel(chart).passed);
}

TEST_CASE("errors") {
  const MetricChart sphere = sphere_chart();
  CHECK_THROWS_AS(sphere.checked_sample(1.6, 0.0), DomainError);
  CHECK_THROWS_AS(christoffel(sphere, 1.6, 0.0), DomainError);
  const MetricChart degenerate = expression_chart("1", "1", "1", Domain{-1, 1, -1, 1}, false);
  CHECK_THROWS_AS(degenerate.checked_sample(0.0, 0.0), DegenerateMetricError);
  CHECK_THROWS_AS(builtin_chart("torus"), std::invalid_argument);
}
