#include "srgeo/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "srgeo/expression.hpp"

namespace srgeo {

namespace {

Gradient2 central_gradient(const std::function<double(double, double)>& f, double x1,
                           double x2) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  const double h1 = base * std::max(1.0, std::abs(x1));
  const double h2 = base * std::max(1.0, std::abs(x2));
  return {(f(x1 + h1, x2) - f(x1 - h1, x2)) / (2.0 * h1),
          (f(x1, x2 + h2) - f(x1, x2 - h2)) / (2.0 * h2)};
}

Gradient2 component_gradient(const MetricComponent& c, double x1, double x2) {
  return c.gradient ? c.gradient(x1, x2) : central_gradient(c.value, x1, x2);
}

MetricComponent from_expression(const std::string& text) {
  const Expression e = Expression::parse(text);
  return {[e](double x1, double x2) { return e.value(x1, x2); },
          [e](double x1, double x2) { return e.gradient(x1, x2); }};
}

}  // namespace

MetricComponent MetricComponent::constant(double c) {
  return {[c](double, double) { return c; }, [](double, double) { return Gradient2{0.0, 0.0}; }};
}

MetricChart::MetricChart(std::string name, ChartKind kind, Domain domain, MetricComponent g11,
                         MetricComponent g12, MetricComponent g22, bool geodesic_parallel)
    : name_(std::move(name)),
      kind_(kind),
      domain_(domain),
      g11_(std::move(g11)),
      g12_(std::move(g12)),
      g22_(std::move(g22)),
      geodesic_parallel_(geodesic_parallel),
      analytic_(static_cast<bool>(g11_.gradient) && static_cast<bool>(g12_.gradient) &&
                static_cast<bool>(g22_.gradient)) {
  if (!g11_.value || !g12_.value || !g22_.value) {
    throw std::invalid_argument("MetricChart: every coefficient needs a value function");
  }
  if (!(domain_.x1_min < domain_.x1_max) || !(domain_.x2_min < domain_.x2_max)) {
    throw std::invalid_argument("MetricChart: empty domain");
  }
}

MetricSample MetricChart::sample(double x1, double x2) const {
  MetricSample s;
  s.g11 = g11_.value(x1, x2);
  s.g12 = g12_.value(x1, x2);
  s.g22 = g22_.value(x1, x2);
  s.dg11 = component_gradient(g11_, x1, x2);
  s.dg12 = component_gradient(g12_, x1, x2);
  s.dg22 = component_gradient(g22_, x1, x2);
  return s;
}

MetricSample MetricChart::checked_sample(double x1, double x2) const {
  if (!contains(x1, x2)) {
    throw DomainError("point (" + std::to_string(x1) + ", " + std::to_string(x2) +
                      ") outside chart '" + name_ + "'");
  }
  MetricSample s = sample(x1, x2);
  if (!(s.g11 > 0.0) || !(s.det() > 0.0)) {
    throw DegenerateMetricError("metric of chart '" + name_ + "' not positive definite at (" +
                                std::to_string(x1) + ", " + std::to_string(x2) + ")");
  }
  return s;
}

MetricChart flat_chart() {
  return MetricChart("flat", ChartKind::Flat, Domain{}, MetricComponent::constant(1.0),
                     MetricComponent::constant(0.0), MetricComponent::constant(1.0), true);
}

MetricChart sphere_chart() {
  const double lim = std::numbers::pi / 2 - 0.1;
  MetricComponent g22{[](double x1, double) { return std::cos(x1) * std::cos(x1); },
                      [](double x1, double) {
                        return Gradient2{-2.0 * std::cos(x1) * std::sin(x1), 0.0};
                      }};
  return MetricChart("sphere", ChartKind::Sphere, Domain{-lim, lim, -1e6, 1e6},
                     MetricComponent::constant(1.0), MetricComponent::constant(0.0),
                     std::move(g22), true);
}

MetricChart hyperbolic_chart() {
  MetricComponent g22{[](double x1, double) { return std::cosh(x1) * std::cosh(x1); },
                      [](double x1, double) {
                        return Gradient2{2.0 * std::cosh(x1) * std::sinh(x1), 0.0};
                      }};
  return MetricChart("hyperbolic", ChartKind::Hyperbolic, Domain{-8.0, 8.0, -1e6, 1e6},
                     MetricComponent::constant(1.0), MetricComponent::constant(0.0),
                     std::move(g22), true);
}

MetricChart builtin_chart(const std::string& name) {
  if (name == "flat") return flat_chart();
  if (name == "sphere") return sphere_chart();
  if (name == "hyperbolic") return hyperbolic_chart();
  throw std::invalid_argument("unknown builtin chart '" + name + "'");
}

MetricChart expression_chart(const std::string& g11, const std::string& g12,
                             const std::string& g22, Domain domain, bool geodesic_parallel) {
  return MetricChart("custom", ChartKind::Custom, domain, from_expression(g11),
                     from_expression(g12), from_expression(g22), geodesic_parallel);
}

Christoffel christoffel_from_sample(const MetricSample& g) {
  const double det = g.det();
  if (!(det > 0.0)) throw DegenerateMetricError("christoffel: degenerate metric");
  // Inverse metric.
  const double inv[2][2] = {{g.g22 / det, -g.g12 / det}, {-g.g12 / det, g.g11 / det}};
  // d[l][i][j] = d g_{ij} / d x_l
  const double gij[2][2][2] = {
      {{g.dg11[0], g.dg12[0]}, {g.dg12[0], g.dg22[0]}},
      {{g.dg11[1], g.dg12[1]}, {g.dg12[1], g.dg22[1]}},
  };
  auto dg = [&](int l, int i, int j) { return gij[l][i][j]; };

  Christoffel out{};
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double acc = 0.0;
        for (int l = 0; l < 2; ++l) {
          acc += inv[k][l] * (dg(j, l, i) + dg(i, l, j) - dg(l, i, j));
        }
        out[k][i][j] = 0.5 * acc;
      }
    }
  }
  return out;
}

Christoffel christoffel(const MetricChart& chart, double x1, double x2) {
  return christoffel_from_sample(chart.checked_sample(x1, x2));
}

FrameSample frame_sample_from_metric(const MetricSample& g) {
  const double a = g.g11, b = g.g12, c = g.g22;
  const double det = a * c - b * b;
  if (!(a > 0.0) || !(det > 0.0)) throw DegenerateMetricError("frame: degenerate metric");

  FrameSample f;
  const double sa = std::sqrt(a);
  const double sd = std::sqrt(det);
  f.k = 1.0 / sa;
  f.l = 0.0;
  f.m = -b / (sa * sd);
  f.n = sa / sd;

  for (int i = 0; i < 2; ++i) {
    const double da = g.dg11[i], db = g.dg12[i], dc = g.dg22[i];
    const double ddet = da * c + a * dc - 2.0 * b * db;
    f.dk[i] = -0.5 * da / (a * sa);
    f.dl[i] = 0.0;
    // m = -b (a det)^(-1/2)
    const double ad = a * det;
    const double dad = da * det + a * ddet;
    f.dm[i] = -db / std::sqrt(ad) + 0.5 * b * dad / (ad * std::sqrt(ad));
    // n = (a / det)^(1/2)
    f.dn[i] = 0.5 / f.n * (da * det - a * ddet) / (det * det);
  }
  return f;
}

OrthonormalFrame frame_from_metric(const MetricChart& chart) {
  return OrthonormalFrame(
      [chart](double x1, double x2) { return frame_sample_from_metric(chart.sample(x1, x2)); });
}

ParallelValidation validate_geodesic_parallel(const MetricChart& chart, int grid) {
  grid = std::max(grid, 2);
  const Domain& d = chart.domain();
  const double x1lo = std::max(d.x1_min, -10.0), x1hi = std::min(d.x1_max, 10.0);
  const double x2lo = std::max(d.x2_min, -10.0), x2hi = std::min(d.x2_max, 10.0);

  ParallelValidation r;
  r.tolerance = chart.tolerance();
  for (int i = 0; i < grid; ++i) {
    const double x2 = x2lo + (x2hi - x2lo) * i / (grid - 1);
    if (chart.contains(0.0, x2)) {
      const MetricSample axis = chart.sample(0.0, x2);
      r.g22_axis_violation = std::max(r.g22_axis_violation, std::abs(axis.g22 - 1.0));
      r.dg22_axis_violation = std::max(r.dg22_axis_violation, std::abs(axis.dg22[0]));
    }
    for (int j = 0; j < grid; ++j) {
      const double x1 = x1lo + (x1hi - x1lo) * j / (grid - 1);
      const MetricSample s = chart.sample(x1, x2);
      r.g11_violation = std::max(r.g11_violation, std::abs(s.g11 - 1.0));
      r.g12_violation = std::max(r.g12_violation, std::abs(s.g12));
    }
  }
  r.passed = r.g11_violation <= r.tolerance && r.g12_violation <= r.tolerance &&
             r.g22_axis_violation <= r.tolerance && r.dg22_axis_violation <= r.tolerance;
  return r;
}

}  // namespace srgeo
