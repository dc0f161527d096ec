// Riemannian surface metrics in a single rectangular chart, their
// Christoffel symbols, and the Gram-Schmidt orthonormal frame
//   v1 = k d/dx1 + l d/dx2,   v2 = m d/dx1 + n d/dx2.

#ifndef SRGEO_METRIC_HPP
#define SRGEO_METRIC_HPP

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

namespace srgeo {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DegenerateMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

using Gradient2 = std::array<double, 2>;  // (d/dx1, d/dx2)

struct Domain {
  double x1_min = -1e6;
  double x1_max = 1e6;
  double x2_min = -1e6;
  double x2_max = 1e6;

  bool contains(double x1, double x2) const {
    return x1 >= x1_min && x1 <= x1_max && x2 >= x2_min && x2 <= x2_max;
  }
};

struct MetricSample {
  double g11 = 1.0, g12 = 0.0, g22 = 1.0;
  Gradient2 dg11{}, dg12{}, dg22{};

  double det() const { return g11 * g22 - g12 * g12; }
};

// One metric coefficient. `gradient` may be empty, in which case central
// differences are used.
struct MetricComponent {
  std::function<double(double, double)> value;
  std::function<Gradient2(double, double)> gradient;

  static MetricComponent constant(double c);
};

enum class ChartKind { Flat, Sphere, Hyperbolic, Custom };

class MetricChart {
 public:
  MetricChart(std::string name, ChartKind kind, Domain domain, MetricComponent g11,
              MetricComponent g12, MetricComponent g22, bool geodesic_parallel);

  const std::string& name() const { return name_; }
  ChartKind kind() const { return kind_; }
  bool is_flat() const { return kind_ == ChartKind::Flat; }
  const Domain& domain() const { return domain_; }
  bool contains(double x1, double x2) const { return domain_.contains(x1, x2); }
  bool claims_geodesic_parallel() const { return geodesic_parallel_; }
  bool has_analytic_partials() const { return analytic_; }

  // 1e-12 with analytic partials, 1e-6 with the finite-difference fallback.
  double tolerance() const { return analytic_ ? 1e-12 : 1e-6; }

  // Coefficients and first partials. No domain check: the integrators
  // evaluate stages slightly outside the chart near its boundary.
  MetricSample sample(double x1, double x2) const;

  // As sample(), but throws DomainError / DegenerateMetricError.
  MetricSample checked_sample(double x1, double x2) const;

 private:
  std::string name_;
  ChartKind kind_;
  Domain domain_;
  MetricComponent g11_, g12_, g22_;
  bool geodesic_parallel_;
  bool analytic_;
};

MetricChart flat_chart();
// g22 = cos^2 x1 on |x1| < pi/2 - 0.1 (curvature +1).
MetricChart sphere_chart();
// g22 = cosh^2 x1 (curvature -1).
MetricChart hyperbolic_chart();
// "flat" | "sphere" | "hyperbolic"; throws std::invalid_argument otherwise.
MetricChart builtin_chart(const std::string& name);

// Chart from expression strings in x1, x2 (see expression.hpp).
MetricChart expression_chart(const std::string& g11, const std::string& g12,
                             const std::string& g22, Domain domain, bool geodesic_parallel);

// Gamma[k][i][j] = Christoffel symbol of the second kind.
using Christoffel = std::array<std::array<std::array<double, 2>, 2>, 2>;

Christoffel christoffel(const MetricChart& chart, double x1, double x2);
Christoffel christoffel_from_sample(const MetricSample& g);

struct FrameSample {
  double k = 1.0, l = 0.0, m = 0.0, n = 1.0;
  Gradient2 dk{}, dl{}, dm{}, dn{};

  double det() const { return k * n - l * m; }
};

class OrthonormalFrame {
 public:
  using Evaluator = std::function<FrameSample(double, double)>;

  explicit OrthonormalFrame(Evaluator eval) : eval_(std::move(eval)) {}

  FrameSample at(double x1, double x2) const { return eval_(x1, x2); }

 private:
  Evaluator eval_;
};

// Gram-Schmidt frame: k = 1/sqrt(g11), l = 0, m = -g12/(sqrt(g11) sqrt(det)),
// n = sqrt(g11)/sqrt(det), with chain-rule partials.
FrameSample frame_sample_from_metric(const MetricSample& g);
OrthonormalFrame frame_from_metric(const MetricChart& chart);

// A chart with its frame; the pair every dynamical operation needs.
struct Surface {
  MetricChart chart;
  OrthonormalFrame frame;

  explicit Surface(MetricChart c) : chart(std::move(c)), frame(frame_from_metric(chart)) {}
  Surface(MetricChart c, OrthonormalFrame f) : chart(std::move(c)), frame(std::move(f)) {}
};

struct ParallelValidation {
  double g11_violation = 0.0;        // max |g11 - 1|
  double g12_violation = 0.0;        // max |g12|
  double g22_axis_violation = 0.0;   // max |g22(0, x2) - 1|
  double dg22_axis_violation = 0.0;  // max |dg22/dx1 (0, x2)|
  double tolerance = 0.0;
  bool passed = false;
};

// Samples a grid x grid lattice over the (finite part of the) chart domain.
ParallelValidation validate_geodesic_parallel(const MetricChart& chart, int grid = 64);

}  // namespace srgeo

#endif  // SRGEO_METRIC_HPP
