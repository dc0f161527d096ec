#include "srgeo/extremal.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace srgeo {

Switching switching_values(const FrameSample& f, const ExtremalState& s) {
  const double a = f.k * s.p1 + f.l * s.p2;
  const double b = f.m * s.p1 + f.n * s.p2;
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  return {a * c + b * sn, -a * sn + b * c};
}

Switching switching_values(const OrthonormalFrame& frame, const ExtremalState& s) {
  return switching_values(frame.at(s.x1, s.x2), s);
}

ControlValue controls(const OrthonormalFrame& frame, const ExtremalState& s) {
  return {switching_values(frame, s).A, s.phi};
}

Gradient2 switching_gradient(const FrameSample& f, const ExtremalState& s) {
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  Gradient2 g{};
  for (int i = 0; i < 2; ++i) {
    g[i] = (f.dk[i] * s.p1 + f.dl[i] * s.p2) * c + (f.dm[i] * s.p1 + f.dn[i] * s.p2) * sn;
  }
  return g;
}

State6 extremal_rhs(const FrameSample& f, const ExtremalState& s) {
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  const double a = f.k * s.p1 + f.l * s.p2;
  const double b = f.m * s.p1 + f.n * s.p2;
  const double A = a * c + b * sn;
  const double B = -a * sn + b * c;
  const Gradient2 dA = switching_gradient(f, s);
  return {A * (f.k * c + f.m * sn), A * (f.l * c + f.n * sn), s.phi, -A * dA[0], -A * dA[1],
          -A * B};
}

State6 extremal_field(const Surface& surface, const ExtremalState& s) {
  if (!surface.chart.contains(s.x1, s.x2)) {
    throw DomainError("extremal_field: point outside chart '" + surface.chart.name() + "'");
  }
  return extremal_rhs(surface.frame.at(s.x1, s.x2), s);
}

double hamiltonian_value(const OrthonormalFrame& frame, const ExtremalState& s) {
  const double A = switching_values(frame, s).A;
  return 0.5 * (A * A + s.phi * s.phi);
}

double speed(const OrthonormalFrame& frame, const ExtremalState& s) {
  return std::sqrt(2.0 * hamiltonian_value(frame, s));
}

Trajectory::Trajectory(Surface surface, DenseSolution<6> solution, std::string formulation)
    : surface_(std::move(surface)),
      solution_(std::move(solution)),
      formulation_(std::move(formulation)) {}

State6 Trajectory::derivative(double t) const {
  const ExtremalState s = eval(t);
  return extremal_rhs(surface_.frame.at(s.x1, s.x2), s);
}

State6 Trajectory::second_derivative(double t) const {
  const State6 y = solution_.eval(t);
  const ExtremalState s = ExtremalState::from_array(y);
  const State6 f = extremal_rhs(surface_.frame.at(s.x1, s.x2), s);
  double fn = 0.0, yn = 1.0;
  for (std::size_t k = 0; k < 6; ++k) {
    fn = std::max(fn, std::abs(f[k]));
    yn = std::max(yn, std::abs(y[k]));
  }
  if (fn == 0.0) return State6{};
  const double eps = 1e-6 * yn / fn;
  State6 yp{}, ym{};
  for (std::size_t k = 0; k < 6; ++k) {
    yp[k] = y[k] + eps * f[k];
    ym[k] = y[k] - eps * f[k];
  }
  const ExtremalState sp = ExtremalState::from_array(yp), sm = ExtremalState::from_array(ym);
  const State6 fp = extremal_rhs(surface_.frame.at(sp.x1, sp.x2), sp);
  const State6 fm = extremal_rhs(surface_.frame.at(sm.x1, sm.x2), sm);
  State6 out{};
  for (std::size_t k = 0; k < 6; ++k) out[k] = (fp[k] - fm[k]) / (2.0 * eps);
  return out;
}

std::vector<ExtremalState> Trajectory::node_states() const {
  std::vector<ExtremalState> out;
  out.reserve(solution_.states().size());
  for (const auto& y : solution_.states()) out.push_back(ExtremalState::from_array(y));
  return out;
}

void check_tolerance(double tol) {
  if (!(tol >= 1e-14 && tol <= 1e-3)) {
    throw std::invalid_argument("integration tolerance must lie in [1e-14, 1e-3]");
  }
}

double local_tolerance(double tol) { return std::max(1e-2 * tol, 1e-15); }

namespace {

template <class Rhs>
Trajectory run(const Surface& surface, const ExtremalState& s0, Window window, double tol,
               Rhs&& rhs, const char* formulation) {
  check_tolerance(tol);
  if (!surface.chart.contains(s0.x1, s0.x2)) {
    throw DomainError("initial state outside chart '" + surface.chart.name() + "'");
  }
  if (!std::isfinite(window.t0) || !std::isfinite(window.t1) || window.t0 == window.t1) {
    throw std::invalid_argument("integration window must be nonempty and finite");
  }
  IntegratorOptions opts;
  opts.rtol = opts.atol = local_tolerance(tol);
  const MetricChart& chart = surface.chart;
  auto outside = [&chart](double, const State6& y) { return !chart.contains(y[0], y[1]); };
  auto sol = dormand_prince<6>(rhs, window.t0, s0.to_array(), window.t1, opts, outside);
  sol.set_tolerance(tol);
  return Trajectory(surface, std::move(sol), formulation);
}

// H~ from frame values only; partials of the frame are not consulted.
double alt_hamiltonian(const OrthonormalFrame& frame, const State6& y) {
  const FrameSample f = frame.at(y[0], y[1]);
  const double c = std::cos(y[2]), sn = std::sin(y[2]);
  // <p, V1> with V1 = cos(theta) v1 + sin(theta) v2, and <phi, V2> = phi.
  const double pv1 = y[3] * (f.k * c + f.m * sn) + y[4] * (f.l * c + f.n * sn);
  return 0.5 * (pv1 * pv1 + y[5] * y[5]);
}

}  // namespace

Trajectory integrate(const Surface& surface, const ExtremalState& s0, Window window, double tol) {
  const OrthonormalFrame& frame = surface.frame;
  auto rhs = [&frame](double, const State6& y) {
    const ExtremalState s = ExtremalState::from_array(y);
    return extremal_rhs(frame.at(s.x1, s.x2), s);
  };
  return run(surface, s0, window, tol, rhs, "extremal");
}

Trajectory alt_integrate(const Surface& surface, const ExtremalState& s0, Window window,
                         double tol) {
  const OrthonormalFrame& frame = surface.frame;
  auto rhs = [&frame](double, const State6& y) {
    State6 grad{};
    for (std::size_t i = 0; i < 6; ++i) {
      const double h = 1e-3 * std::max(1.0, std::abs(y[i]));
      State6 z = y;
      auto at = [&](double d) {
        z[i] = y[i] + d;
        return alt_hamiltonian(frame, z);
      };
      const double d1 = at(h) - at(-h), d2 = at(2 * h) - at(-2 * h), d3 = at(3 * h) - at(-3 * h);
      grad[i] = (45.0 * d1 - 9.0 * d2 + d3) / (60.0 * h);
    }
    // (x, theta)' = dH/d(p, phi),  (p, phi)' = -dH/d(x, theta)
    return State6{grad[3], grad[4], grad[5], -grad[0], -grad[1], -grad[2]};
  };
  return run(surface, s0, window, tol, rhs, "alternate-hamiltonian");
}

bool abnormal_triviality_check(const OrthonormalFrame& frame, double x1, double x2,
                               double theta) {
  const FrameSample f = frame.at(x1, x2);
  const double det_frame = f.det();
  if (det_frame == 0.0 || !std::isfinite(det_frame)) {
    throw std::invalid_argument("abnormal_triviality_check: frame not invertible (kn - lm = 0)");
  }
  const double c = std::cos(theta), s = std::sin(theta);
  // [[c, s], [-s, c]] * [[k, l], [m, n]]
  const double m11 = c * f.k + s * f.m, m12 = c * f.l + s * f.n;
  const double m21 = -s * f.k + c * f.m, m22 = -s * f.l + c * f.n;
  return m11 * m22 - m12 * m21 != 0.0;
}

double arc_length(const Trajectory& traj) {
  using boost::math::quadrature::gauss_kronrod;
  const OrthonormalFrame& frame = traj.surface().frame;
  auto integrand = [&](double t) { return speed(frame, traj.eval(t)); };
  const auto& times = traj.node_times();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double a = std::min(times[i], times[i + 1]);
    const double b = std::max(times[i], times[i + 1]);
    if (b > a) total += gauss_kronrod<double, 15>::integrate(integrand, a, b, 8, 1e-13);
  }
  return total;
}

double hamiltonian_drift(const Trajectory& traj) {
  const OrthonormalFrame& frame = traj.surface().frame;
  const auto& states = traj.solution().states();
  const double h0 = hamiltonian_value(frame, ExtremalState::from_array(states.front()));
  double drift = 0.0;
  for (const auto& y : states) {
    drift = std::max(drift, std::abs(hamiltonian_value(frame, ExtremalState::from_array(y)) - h0));
  }
  return drift;
}

std::vector<ExtremalState> solve_at(const Surface& surface, const ExtremalState& s0,
                                    std::span<const double> offsets, double tol) {
  const OrthonormalFrame& frame = surface.frame;
  auto rhs = [&frame](double, const State6& y) {
    const ExtremalState s = ExtremalState::from_array(y);
    return extremal_rhs(frame.at(s.x1, s.x2), s);
  };
  IntegratorOptions opts;
  opts.rtol = tol;
  opts.atol = tol;
  double lo = 0.0, hi = 0.0;
  for (double o : offsets) {
    lo = std::min(lo, o);
    hi = std::max(hi, o);
  }
  const State6 y0 = s0.to_array();
  std::optional<DenseSolution<6>> fwd, bwd;
  if (hi > 0.0) fwd = dormand_prince<6>(rhs, 0.0, y0, hi, opts);
  if (lo < 0.0) bwd = dormand_prince<6>(rhs, 0.0, y0, lo, opts);
  std::vector<ExtremalState> out;
  out.reserve(offsets.size());
  for (double o : offsets) {
    if (o > 0.0) out.push_back(ExtremalState::from_array(fwd->eval(o)));
    else if (o < 0.0) out.push_back(ExtremalState::from_array(bwd->eval(o)));
    else out.push_back(s0);
  }
  return out;
}

}  // namespace srgeo
