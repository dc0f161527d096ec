#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "srgeo/ode.hpp"

using namespace srgeo;

TEST_CASE("harmonic oscillator to tolerance, dense output between nodes") {
  auto f = [](double, const Vec<2>& y) { return Vec<2>{y[1], -y[0]}; };
  IntegratorOptions opts;
  opts.rtol = opts.atol = 1e-12;
  const auto sol = dormand_prince<2>(f, 0.0, Vec<2>{1.0, 0.0}, 20.0, opts);
  CHECK(sol.t_end() == 20.0);
  CHECK(sol.states().back()[0] == doctest::Approx(std::cos(20.0)).epsilon(1e-9));
  double worst = 0;
  for (int i = 0; i <= 4000; ++i) {
    const double t = 20.0 * i / 4000.0;
    const Vec<2> y = sol.eval(t);
    worst = std::max({worst, std::abs(y[0] - std::cos(t)), std::abs(y[1] + std::sin(t))});
  }
  CHECK(worst <= 1e-9);
  CHECK(sol.stats().steps == sol.steps().size());
  CHECK(sol.stats().tolerance == 1e-12);
}

TEST_CASE("eval at nodes returns the nodes exactly") {
  auto f = [](double t, const Vec<1>& y) { return Vec<1>{std::cos(t) * y[0]}; };
  const auto sol = dormand_prince<1>(f, 0.0, Vec<1>{1.0}, 5.0, IntegratorOptions{});
  for (std::size_t i = 0; i < sol.times().size(); ++i) {
    CHECK(sol.eval(sol.times()[i])[0] == sol.states()[i][0]);
  }
  CHECK_THROWS_AS(sol.eval(5.5), std::out_of_range);
}

TEST_CASE("backward integration") {
  auto f = [](double, const Vec<1>& y) { return Vec<1>{y[0]}; };
  const auto sol = dormand_prince<1>(f, 1.0, Vec<1>{1.0}, -2.0, IntegratorOptions{});
  CHECK(sol.direction() == -1.0);
  CHECK(sol.eval(-2.0)[0] == doctest::Approx(std::exp(-3.0)).epsilon(1e-9));
  CHECK(sol.eval(0.0)[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("stop predicate located by bisection") {
  auto f = [](double, const Vec<1>&) { return Vec<1>{1.0}; };
  auto stop = [](double, const Vec<1>& y) { return y[0] >= 0.7; };
  const auto sol = dormand_prince<1>(f, 0.0, Vec<1>{0.0}, 5.0, IntegratorOptions{}, stop);
  REQUIRE(sol.stop_time().has_value());
  CHECK(*sol.stop_time() == doctest::Approx(0.7).epsilon(1e-11));
  CHECK(sol.t_end() == *sol.stop_time());
  CHECK(sol.states().back()[0] >= 0.7);
}

TEST_CASE("step-size underflow raises") {
  auto f = [](double t, const Vec<1>&) { return Vec<1>{1.0 / (1.0 - t)}; };
  CHECK_THROWS_AS(dormand_prince<1>(f, 0.0, Vec<1>{0.0}, 2.0, IntegratorOptions{}),
                  IntegrationError);
}
