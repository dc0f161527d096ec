// The two Legendre projections of the unit tangent bundle:
//   pi  : (x1, x2, theta) -> (x1, x2)        (forget the direction)
//   pi' : (x1, x2, theta) -> (F, E)          (quotient by the geodesic flow)
// together with the geodesic-flow generator V = R d/dx1 + S d/dx2 + W d/dtheta
// and local leaf-space charts (pairs of independent first integrals of V).

#ifndef SRGEO_LEGENDRE_HPP
#define SRGEO_LEGENDRE_HPP

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "srgeo/extremal.hpp"

namespace srgeo {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

struct GeodesicFlowField {
  double R = 0.0;
  double S = 0.0;
  double W = 0.0;
};

// Parallel charts use the Liouville angle equation
//   W = -(dg22/dx1) / (2 g22) * sin(theta);
// other charts assemble W from the Christoffel symbols.
GeodesicFlowField geodesic_flow(const Surface& surface, double x1, double x2, double theta);

// Always the Christoffel route, for any chart.
GeodesicFlowField geodesic_flow_christoffel(const Surface& surface, double x1, double x2,
                                            double theta);

Vec2 project_pi(const ExtremalState& s);

// pi' o Gamma fails to immerse exactly where the velocity A V1 + phi d/dtheta
// is parallel to V, i.e. where Q = phi - A W vanishes. Q = theta' in the flat
// chart.
double pi_prime_switching(const Surface& surface, const ExtremalState& s);

// dQ/dt along the extremal flow; -A B in the flat chart.
double pi_prime_switching_rate(const Surface& surface, const ExtremalState& s);

class LeafChartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LeafProvenance { Explicit, Numeric };

class LeafChart {
 public:
  using Evaluator = std::function<Vec2(const Vec3&)>;

  LeafChart(Evaluator eval, LeafProvenance provenance, ExtremalState base)
      : eval_(std::move(eval)), provenance_(provenance), base_(base) {}

  // (F, E) at (x1, x2, theta). Numeric charts throw LeafChartError when the
  // flow line through the point does not reach the section.
  Vec2 operator()(const Vec3& q) const { return eval_(q); }
  Vec2 operator()(const ExtremalState& s) const { return eval_({s.x1, s.x2, s.theta}); }

  LeafProvenance provenance() const { return provenance_; }
  const ExtremalState& base() const { return base_; }

 private:
  Evaluator eval_;
  LeafProvenance provenance_;
  ExtremalState base_;
};

// F = -x1 sin(theta) + x2 cos(theta), E = theta (flat chart).
LeafChart leaf_chart_flat(const ExtremalState& base);

struct NumericLeafOptions {
  double flow_tol = 1e-12;
  double crossing_tol = 1e-12;
  double max_flow_time = 10.0;
};

// Section through the base spanned by d/dtheta and the direction
// J-orthogonal to the flow; (F, E) are section coordinates (centered at the
// base) of the point where the flow line meets the section.
LeafChart leaf_chart_numeric(const Surface& surface, const ExtremalState& base,
                             NumericLeafOptions opts = {});

// max(|dF(V)|, |dE(V)|) at q by central differences along V.
double first_integral_residual(const Surface& surface, const LeafChart& leaf, const Vec3& q,
                               double h = 1e-4);

struct PlaneCurve {
  std::vector<double> t;
  std::vector<Vec2> points;
  std::optional<double> truncated_at;  // leaf neighbourhood left here
};

PlaneCurve project_pi_prime(const Trajectory& traj, const LeafChart& leaf,
                            std::size_t samples = 200);

// First three derivatives of a projected curve at a parameter value.
struct CurveJet {
  Vec2 d1{};
  Vec2 d2{};
  Vec2 d3{};
};

double cross(const Vec2& a, const Vec2& b);
double norm(const Vec2& a);

// Jet of pi o Gamma at s: d1 from the field, d2 and d3 by fourth-order
// differences of the velocity over a tight local solve.
CurveJet pi_jet(const Surface& surface, const ExtremalState& s, double h);

// Jet of pi' o Gamma in the given leaf chart by fourth-order differences of
// the leaf coordinates over a tight local solve.
CurveJet pi_prime_jet(const Surface& surface, const LeafChart& leaf, const ExtremalState& s,
                      double h);

// Step for the jet stencils: 1e-2 over the dominant rate of the extremal.
double jet_step(const Surface& surface, const ExtremalState& s);

// Unit-speed Riemannian geodesic solved from the Christoffel symbols;
// returns (x1, x2) at arc length `length` from (x1, x2) in direction theta.
Vec2 christoffel_geodesic(const Surface& surface, double x1, double x2, double theta,
                          double length, double tol = 1e-13);

// Integral curve of V projected to the surface, at flow time `length`.
Vec2 flow_geodesic(const Surface& surface, double x1, double x2, double theta, double length,
                   double tol = 1e-13);

}  // namespace srgeo

#endif  // SRGEO_LEGENDRE_HPP
