#include "srgeo/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "srgeo/finite_difference.hpp"

namespace srgeo {

namespace {

Vec2 unit_direction(const FrameSample& f, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {f.k * c + f.m * s, f.l * c + f.n * s};
}

void require_inside(const Surface& surface, double x1, double x2, const char* who) {
  if (!surface.chart.contains(x1, x2)) {
    throw DomainError(std::string(who) + ": point outside chart '" + surface.chart.name() + "'");
  }
}

GeodesicFlowField christoffel_flow(const Surface& surface, double x1, double x2, double theta) {
  const MetricSample g = surface.chart.sample(x1, x2);
  const Christoffel gam = christoffel_from_sample(g);
  const FrameSample f = surface.frame.at(x1, x2);
  const double c = std::cos(theta), s = std::sin(theta);
  const Vec2 u = unit_direction(f, theta);
  const Vec2 nrm = {-s * f.k + c * f.m, -s * f.l + c * f.n};

  // x'' = theta' N + J u along the lift, J = c dv1 + s dv2 applied to u.
  const Vec2 v1x = {f.dk[0], f.dl[0]}, v1y = {f.dk[1], f.dl[1]};
  const Vec2 v2x = {f.dm[0], f.dn[0]}, v2y = {f.dm[1], f.dn[1]};
  Vec2 rhs{};
  for (int i = 0; i < 2; ++i) {
    double acc = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) acc += gam[i][a][b] * u[a] * u[b];
    }
    const double ju = (c * v1x[i] + s * v2x[i]) * u[0] + (c * v1y[i] + s * v2y[i]) * u[1];
    rhs[i] = -acc - ju;
  }
  const double W = g.g11 * nrm[0] * rhs[0] + g.g12 * (nrm[0] * rhs[1] + nrm[1] * rhs[0]) +
                   g.g22 * nrm[1] * rhs[1];
  return {u[0], u[1], W};
}

// No domain check: integrator stages may step slightly outside the chart.
GeodesicFlowField flow_unchecked(const Surface& surface, double x1, double x2, double theta) {
  if (!surface.chart.claims_geodesic_parallel()) return christoffel_flow(surface, x1, x2, theta);
  const MetricSample g = surface.chart.sample(x1, x2);
  const Vec2 u = unit_direction(surface.frame.at(x1, x2), theta);
  return {u[0], u[1], -g.dg22[0] / (2.0 * g.g22) * std::sin(theta)};
}

}  // namespace

GeodesicFlowField geodesic_flow_christoffel(const Surface& surface, double x1, double x2,
                                            double theta) {
  require_inside(surface, x1, x2, "geodesic_flow");
  surface.chart.checked_sample(x1, x2);
  return christoffel_flow(surface, x1, x2, theta);
}

GeodesicFlowField geodesic_flow(const Surface& surface, double x1, double x2, double theta) {
  require_inside(surface, x1, x2, "geodesic_flow");
  surface.chart.checked_sample(x1, x2);
  return flow_unchecked(surface, x1, x2, theta);
}

Vec2 project_pi(const ExtremalState& s) { return {s.x1, s.x2}; }

double pi_prime_switching(const Surface& surface, const ExtremalState& s) {
  const Switching sw = switching_values(surface.frame, s);
  if (surface.chart.is_flat()) return s.phi;
  return s.phi - sw.A * flow_unchecked(surface, s.x1, s.x2, s.theta).W;
}

double pi_prime_switching_rate(const Surface& surface, const ExtremalState& s) {
  const FrameSample f = surface.frame.at(s.x1, s.x2);
  const Switching sw = switching_values(f, s);
  if (surface.chart.is_flat()) return -sw.A * sw.B;

  const double W = flow_unchecked(surface, s.x1, s.x2, s.theta).W;
  auto partial = [&](int axis) {
    std::array<double, 5> w{};
    const double base = axis == 0 ? s.x1 : axis == 1 ? s.x2 : s.theta;
    const double h = 1e-3 * std::max(1.0, std::abs(base));
    for (int j = 0; j < 5; ++j) {
      double q[3] = {s.x1, s.x2, s.theta};
      q[axis] += fd::kOffsets5[j] * h;
      w[j] = flow_unchecked(surface, q[0], q[1], q[2]).W;
    }
    return fd::first(w, h);
  };
  const Vec2 u = unit_direction(f, s.theta);
  const double w_dot = sw.A * (partial(0) * u[0] + partial(1) * u[1]) + partial(2) * s.phi;
  // Q' = phi' - A' W - A W' with A' = B phi.
  return -sw.A * sw.B - sw.B * s.phi * W - sw.A * w_dot;
}

LeafChart leaf_chart_flat(const ExtremalState& base) {
  auto eval = [](const Vec3& q) -> Vec2 {
    return {-q[0] * std::sin(q[2]) + q[1] * std::cos(q[2]), q[2]};
  };
  return LeafChart(eval, LeafProvenance::Explicit, base);
}

namespace {

struct Section {
  Vec3 origin{};
  Vec2 span{};   // spatial spanning direction
  Vec2 normal{};  // Euclidean normal of the plane in (x1, x2)

  double signed_distance(const Vec3& q) const {
    return normal[0] * (q[0] - origin[0]) + normal[1] * (q[1] - origin[1]);
  }
  Vec2 coordinates(const Vec3& q) const {
    const double dx = q[0] - origin[0], dy = q[1] - origin[1];
    const double s2 = span[0] * span[0] + span[1] * span[1];
    return {(span[0] * dx + span[1] * dy) / s2, q[2] - origin[2]};
  }
};

Vec3 flow_vector(const Surface& surface, const Vec3& q) {
  const GeodesicFlowField v = flow_unchecked(surface, q[0], q[1], q[2]);
  return {v.R, v.S, v.W};
}

Vec2 section_coordinates(const Surface& surface, const Section& sec, const NumericLeafOptions& opts,
                         const Vec3& q) {
  const double scale = std::max({1.0, std::abs(q[0]), std::abs(q[1])});
  const double d0 = sec.signed_distance(q);
  if (std::abs(d0) <= 1e-15 * scale) return sec.coordinates(q);
  if (!surface.chart.contains(q[0], q[1])) {
    throw LeafChartError("leaf chart: point outside chart domain");
  }

  const Vec3 v0 = flow_vector(surface, q);
  const double rate0 = sec.normal[0] * v0[0] + sec.normal[1] * v0[1];
  // Flow toward the section: d(distance)/ds = rate, so go against d0 * rate.
  const double dir = (d0 * rate0 > 0.0) ? -1.0 : 1.0;
  double horizon = opts.max_flow_time;
  if (std::abs(rate0) > 0.0) horizon = std::min(horizon, 4.0 * std::abs(d0 / rate0) + 1e-3);

  auto rhs = [&surface](double, const Vec<3>& y) { return flow_vector(surface, y); };
  const MetricChart& chart = surface.chart;
  bool left_domain = false;
  auto stop = [&](double, const Vec<3>& y) {
    if (!chart.contains(y[0], y[1])) {
      left_domain = true;
      return true;
    }
    return sec.signed_distance(y) * d0 <= 0.0;
  };
  IntegratorOptions io;
  io.rtol = opts.flow_tol;
  io.atol = opts.flow_tol;
  io.stop_time_tol = opts.crossing_tol;
  DenseSolution<3> sol = dormand_prince<3>(rhs, 0.0, q, dir * horizon, io, stop);
  if (!sol.stop_time() || left_domain) {
    throw LeafChartError("leaf chart: flow line does not reach the section");
  }
  Vec3 y = sol.states().back();
  // Slide along V onto the plane to remove the bisection residue.
  const Vec3 v = flow_vector(surface, y);
  const double rate = sec.normal[0] * v[0] + sec.normal[1] * v[1];
  if (rate != 0.0) {
    const double ds = -sec.signed_distance(y) / rate;
    for (int i = 0; i < 3; ++i) y[i] += ds * v[i];
  }
  return sec.coordinates(y);
}

}  // namespace

LeafChart leaf_chart_numeric(const Surface& surface, const ExtremalState& base,
                             NumericLeafOptions opts) {
  require_inside(surface, base.x1, base.x2, "leaf_chart_numeric");
  const FrameSample f = surface.frame.at(base.x1, base.x2);
  const double c = std::cos(base.theta), s = std::sin(base.theta);
  const Vec2 u = {f.k * c + f.m * s, f.l * c + f.n * s};
  const Vec2 nrm = {-s * f.k + c * f.m, -s * f.l + c * f.n};
  const Vec3 v = flow_vector(surface, {base.x1, base.x2, base.theta});
  const double vnorm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);

  for (double alpha : {0.0, std::numbers::pi / 4.0}) {
    const Vec2 span = {std::cos(alpha) * nrm[0] + std::sin(alpha) * u[0],
                       std::cos(alpha) * nrm[1] + std::sin(alpha) * u[1]};
    Section sec;
    sec.origin = {base.x1, base.x2, base.theta};
    sec.span = span;
    sec.normal = {-span[1], span[0]};
    const double nn = std::hypot(sec.normal[0], sec.normal[1]);
    const double measure = std::abs(sec.normal[0] * v[0] + sec.normal[1] * v[1]) / (nn * vnorm);
    if (!(measure >= 1e-8)) continue;
    auto eval = [surface, sec, opts](const Vec3& q) {
      return section_coordinates(surface, sec, opts, q);
    };
    return LeafChart(eval, LeafProvenance::Numeric, base);
  }
  throw LeafChartError("leaf chart: geodesic flow tangent to every trial section");
}

double first_integral_residual(const Surface& surface, const LeafChart& leaf, const Vec3& q,
                               double h) {
  const Vec3 v = flow_vector(surface, q);
  const Vec3 qp = {q[0] + h * v[0], q[1] + h * v[1], q[2] + h * v[2]};
  const Vec3 qm = {q[0] - h * v[0], q[1] - h * v[1], q[2] - h * v[2]};
  const Vec2 fp = leaf(qp), fm = leaf(qm);
  return std::max(std::abs(fp[0] - fm[0]), std::abs(fp[1] - fm[1])) / (2.0 * h);
}

PlaneCurve project_pi_prime(const Trajectory& traj, const LeafChart& leaf, std::size_t samples) {
  PlaneCurve out;
  const std::size_t n = std::max<std::size_t>(samples, 2);
  const double t0 = traj.t_begin(), t1 = traj.t_end();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    try {
      const Vec2 p = leaf(traj.eval(t));
      out.t.push_back(t);
      out.points.push_back(p);
    } catch (const LeafChartError&) {
      out.truncated_at = t;
      break;
    } catch (const DomainError&) {
      out.truncated_at = t;
      break;
    }
  }
  return out;
}

double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }
double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

double jet_step(const Surface& surface, const ExtremalState& s) {
  const FrameSample f = surface.frame.at(s.x1, s.x2);
  const double a = f.k * s.p1 + f.l * s.p2;
  const double b = f.m * s.p1 + f.n * s.p2;
  const double rate = std::sqrt(a * a + b * b + s.phi * s.phi);
  return 1e-2 / std::max(1.0, rate);
}

namespace {

template <std::size_t N>
std::vector<ExtremalState> stencil_states(const Surface& surface, const ExtremalState& s,
                                          const std::array<double, N>& offsets, double h) {
  std::array<double, N> times{};
  for (std::size_t i = 0; i < N; ++i) times[i] = offsets[i] * h;
  return solve_at(surface, s, times);
}

}  // namespace

CurveJet pi_jet(const Surface& surface, const ExtremalState& s, double h) {
  const auto states = stencil_states(surface, s, fd::kOffsets5, h);
  std::array<Vec2, 5> vel{};
  for (std::size_t i = 0; i < 5; ++i) {
    const State6 d = extremal_rhs(surface.frame.at(states[i].x1, states[i].x2), states[i]);
    vel[i] = {d[0], d[1]};
  }
  auto comp = [&](int c, auto stencil) {
    std::array<double, 5> v{};
    for (std::size_t i = 0; i < 5; ++i) v[i] = vel[i][c];
    return stencil(v, h);
  };
  CurveJet jet;
  jet.d1 = vel[2];
  jet.d2 = {comp(0, fd::first<double>), comp(1, fd::first<double>)};
  jet.d3 = {comp(0, fd::second<double>), comp(1, fd::second<double>)};
  return jet;
}

CurveJet pi_prime_jet(const Surface& surface, const LeafChart& leaf, const ExtremalState& s,
                      double h) {
  const auto states = stencil_states(surface, s, fd::kOffsets7, h);
  std::array<Vec2, 7> pts{};
  for (std::size_t i = 0; i < 7; ++i) pts[i] = leaf(states[i]);
  CurveJet jet;
  for (int c = 0; c < 2; ++c) {
    std::array<double, 5> five{};
    std::array<double, 7> seven{};
    for (std::size_t i = 0; i < 7; ++i) seven[i] = pts[i][c];
    for (std::size_t i = 0; i < 5; ++i) five[i] = pts[i + 1][c];
    jet.d1[c] = fd::first(five, h);
    jet.d2[c] = fd::second(five, h);
    jet.d3[c] = fd::third(seven, h);
  }
  return jet;
}

Vec2 christoffel_geodesic(const Surface& surface, double x1, double x2, double theta,
                          double length, double tol) {
  require_inside(surface, x1, x2, "christoffel_geodesic");
  const Vec2 u = unit_direction(surface.frame.at(x1, x2), theta);
  const MetricChart& chart = surface.chart;
  auto rhs = [&chart](double, const Vec<4>& y) {
    const Christoffel gam = christoffel_from_sample(chart.sample(y[0], y[1]));
    Vec<4> d{y[2], y[3], 0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
      double acc = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) acc += gam[k][i][j] * y[2 + i] * y[2 + j];
      }
      d[2 + k] = -acc;
    }
    return d;
  };
  IntegratorOptions opts;
  opts.rtol = tol;
  opts.atol = tol;
  const auto sol = dormand_prince<4>(rhs, 0.0, Vec<4>{x1, x2, u[0], u[1]}, length, opts);
  const Vec<4> y = sol.states().back();
  return {y[0], y[1]};
}

Vec2 flow_geodesic(const Surface& surface, double x1, double x2, double theta, double length,
                   double tol) {
  require_inside(surface, x1, x2, "flow_geodesic");
  auto rhs = [&surface](double, const Vec<3>& y) { return flow_vector(surface, y); };
  IntegratorOptions opts;
  opts.rtol = tol;
  opts.atol = tol;
  const auto sol = dormand_prince<3>(rhs, 0.0, Vec<3>{x1, x2, theta}, length, opts);
  const Vec<3> y = sol.states().back();
  return {y[0], y[1]};
}

}  // namespace srgeo
