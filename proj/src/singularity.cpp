#include "srgeo/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srgeo/pendulum.hpp"

namespace srgeo {

const char* to_string(NormalForm c) {
  switch (c) {
    case NormalForm::I: return "I";
    case NormalForm::II: return "II";
    case NormalForm::III: return "III";
    case NormalForm::IV: return "IV";
  }
  return "?";
}

const char* to_string(Projection p) { return p == Projection::Pi ? "pi" : "pi_prime"; }

bool ClassificationPair::allowed() const {
  using N = NormalForm;
  static constexpr ClassificationPair kAllowed[] = {
      {N::I, N::I},     {N::II, N::III},  {N::III, N::II},
      {N::III, N::III}, {N::III, N::IV},  {N::IV, N::III},
  };
  return std::find(std::begin(kAllowed), std::end(kAllowed), *this) != std::end(kAllowed);
}

std::string ClassificationPair::label() const {
  return std::string("(") + to_string(pi) + "," + to_string(pi_prime) + ")";
}

PairViolationError::PairViolationError(ClassificationPair p, double time)
    : std::runtime_error("classification pair " + p.label() + " outside the allowed list at t = " +
                         std::to_string(time)),
      pair(p),
      t(time) {}

double momentum_scale(const Surface& surface, const ExtremalState& s) {
  const FrameSample f = surface.frame.at(s.x1, s.x2);
  const double a = f.k * s.p1 + f.l * s.p2;
  const double b = f.m * s.p1 + f.n * s.p2;
  return std::sqrt(a * a + b * b + s.phi * s.phi);
}

namespace {

struct Levels {
  double a, b, A, B, phi, eps;
};

Levels levels(const Surface& surface, const ExtremalState& s) {
  const FrameSample f = surface.frame.at(s.x1, s.x2);
  const double a = f.k * s.p1 + f.l * s.p2;
  const double b = f.m * s.p1 + f.n * s.p2;
  const Switching sw = switching_values(f, s);
  const double scale = std::sqrt(a * a + b * b + s.phi * s.phi);
  return {a, b, sw.A, sw.B, s.phi, kClassEpsilon * scale};
}

bool is_constant(const Levels& lv) {
  return std::abs(lv.A) <= lv.eps && std::abs(lv.phi) <= lv.eps;
}

}  // namespace

NormalForm classify_pi(const Surface& surface, const ExtremalState& s) {
  const Levels lv = levels(surface, s);
  if (is_constant(lv)) return NormalForm::I;
  if (std::hypot(lv.a, lv.b) <= lv.eps) return NormalForm::II;
  if (std::abs(lv.A) > lv.eps) return NormalForm::III;
  return NormalForm::IV;  // |phi| > eps, since the germ is not constant
}

NormalForm classify_pi_prime(const Surface& surface, const ExtremalState& s) {
  const Levels lv = levels(surface, s);
  if (is_constant(lv)) return NormalForm::I;
  const double q = pi_prime_switching(surface, s);
  if (std::abs(q) > lv.eps) return NormalForm::III;
  const double eps_rate = lv.eps * momentum_scale(surface, s);
  if (std::abs(pi_prime_switching_rate(surface, s)) > eps_rate) return NormalForm::IV;
  return NormalForm::II;
}

ClassificationPair classify_pair_unchecked(const Surface& surface, const ExtremalState& s) {
  return {classify_pi(surface, s), classify_pi_prime(surface, s)};
}

ClassificationPair classify_pair(const Surface& surface, const ExtremalState& s, double t) {
  const ClassificationPair pair = classify_pair_unchecked(surface, s);
  if (!pair.allowed()) throw PairViolationError(pair, t);
  return pair;
}

double cusp_delta(const CurveJet& jet) { return cross(jet.d2, jet.d3); }

double pi_delta_formula(const Surface& surface, const ExtremalState& s) {
  const FrameSample f = surface.frame.at(s.x1, s.x2);
  const double B = switching_values(f, s).B;
  return 2.0 * B * B * f.det() * s.phi * s.phi * s.phi;
}

double pi_prime_delta_flat(const ExtremalState& s) {
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  const double A = s.p1 * c + s.p2 * sn;
  const double B = -s.p1 * sn + s.p2 * c;
  const double theta_dd = -A * B;
  return 2.0 * theta_dd * theta_dd * A;
}

NormalForm classify_jet(const CurveJet& jet, double tau, double floor) {
  const double v = norm(jet.d1);
  const double reach = norm(jet.d2) * tau + norm(jet.d3) * tau * tau;
  if (std::max(v, reach) <= floor) return NormalForm::II;
  if (v > 1e-4 * reach) return NormalForm::III;
  const double delta = std::abs(cusp_delta(jet));
  if (delta * tau * tau * tau > 1e-6 * reach * reach) return NormalForm::IV;
  return NormalForm::II;
}

CurvatureValue curvature(const Surface& surface, const ExtremalState& s) {
  const Levels lv = levels(surface, s);
  if (std::abs(lv.A) <= lv.eps) {
    throw std::domain_error("curvature: projection not immersive (A = 0)");
  }
  CurvatureValue out;
  out.formula = s.phi / std::abs(lv.A);
  const CurveJet jet = pi_jet(surface, s, jet_step(surface, s));
  const double speed1 = norm(jet.d1);
  out.jet = cross(jet.d1, jet.d2) / (speed1 * speed1 * speed1);
  out.validated = surface.chart.is_flat();
  return out;
}

double cuspidal_curvature_formula(const Surface& surface, const ExtremalState& s) {
  const FrameSample f = surface.frame.at(s.x1, s.x2);
  const double B = switching_values(f, s).B;
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  const double u = std::hypot(f.k * c + f.m * sn, f.l * c + f.n * sn);
  const double accel = std::abs(B * s.phi) * u;
  return pi_delta_formula(surface, s) / std::pow(accel, 2.5);
}

double cuspidal_curvature(const Surface& surface, const ExtremalState& s) {
  if (classify_pi(surface, s) != NormalForm::IV) {
    throw std::domain_error("cuspidal_curvature: state is not a pi-cusp");
  }
  const CurveJet jet = pi_jet(surface, s, jet_step(surface, s));
  return cusp_delta(jet) / std::pow(norm(jet.d2), 2.5);
}

namespace {

struct Sample {
  double t;
  double g;
};

template <class G>
std::pair<double, double> bisect(G&& g, double a, double ga, double b) {
  // Narrow to adjacent doubles; returns (root estimate, bracket width).
  for (int i = 0; i < 200; ++i) {
    const double mid = a + 0.5 * (b - a);
    if (mid == a || mid == b) break;
    const double gm = g(mid);
    if (gm == 0.0) return {mid, 0.0};
    if ((gm > 0.0) == (ga > 0.0)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  const double gb = g(b);
  return {std::abs(ga) <= std::abs(gb) ? a : b, std::abs(b - a)};
}

struct Root {
  double t;
  double width;
};

template <class G>
std::vector<Root> scan_roots(const Trajectory& traj, G&& g, int per_step, double zero_level) {
  std::vector<Sample> samples;
  const auto& times = traj.node_times();
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    for (int j = 0; j < per_step; ++j) {
      const double t = times[i] + (times[i + 1] - times[i]) * j / per_step;
      samples.push_back({t, g(t)});
    }
  }
  samples.push_back({times.back(), g(times.back())});

  std::vector<Root> roots;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Sample& s = samples[k];
    if (std::abs(s.g) <= zero_level) {
      roots.push_back({s.t, 0.0});
      continue;
    }
    if (k + 1 < samples.size()) {
      const Sample& n = samples[k + 1];
      if (std::abs(n.g) <= zero_level) continue;
      if ((s.g > 0.0) != (n.g > 0.0)) {
        const auto [t, width] = bisect(g, s.t, s.g, n.t);
        roots.push_back({t, width});
      }
    }
  }
  return roots;
}

SingularEvent make_event(const Trajectory& traj, Projection proj, const Root& root, bool jets) {
  const Surface& surface = traj.surface();
  SingularEvent ev;
  ev.t = root.t;
  ev.projection = proj;
  ev.refined_t_tol = root.width;
  ev.state = traj.eval(root.t);
  ev.pair = classify_pair(surface, ev.state, root.t);
  ev.clazz = proj == Projection::Pi ? ev.pair.pi : ev.pair.pi_prime;
  const bool flat = surface.chart.is_flat();
  if (proj == Projection::Pi) {
    ev.delta_formula = pi_delta_formula(surface, ev.state);
    if (ev.clazz == NormalForm::IV) ev.kappa_c_formula = cuspidal_curvature_formula(surface, ev.state);
  } else if (flat) {
    ev.delta_formula = pi_prime_delta_flat(ev.state);
  }
  if (!jets) return ev;
  try {
    const double h = jet_step(surface, ev.state);
    CurveJet jet;
    if (proj == Projection::Pi) {
      jet = pi_jet(surface, ev.state, h);
    } else {
      const LeafChart leaf =
          flat ? leaf_chart_flat(ev.state) : leaf_chart_numeric(surface, ev.state);
      jet = pi_prime_jet(surface, leaf, ev.state, h);
    }
    ev.jet = jet;
    ev.delta = cusp_delta(jet);
    if (proj == Projection::Pi && ev.clazz == NormalForm::IV) {
      ev.kappa_c = *ev.delta / std::pow(norm(jet.d2), 2.5);
    }
  } catch (const LeafChartError&) {
  } catch (const DomainError&) {
  } catch (const IntegrationError&) {
  }
  return ev;
}

}  // namespace

EventReport detect_events(const Trajectory& traj, DetectOptions opts) {
  const Surface& surface = traj.surface();
  EventReport rep;
  const ExtremalState s0 = traj.initial();
  rep.scale = speed(surface.frame, s0);
  rep.initial_pair = classify_pair(surface, s0, traj.t_begin());
  const bool constant = rep.initial_pair.pi == NormalForm::I;
  rep.pi_germ_global = constant || rep.initial_pair.pi == NormalForm::II;
  rep.pi_prime_germ_global = constant || rep.initial_pair.pi_prime == NormalForm::II;

  const double mscale = momentum_scale(surface, s0);
  const double zero_level = 1e-14 * mscale;
  const int per_step = std::max(1, opts.samples_per_step);

  auto collect = [&](Projection proj, auto&& g) {
    const auto roots = scan_roots(traj, g, per_step, zero_level);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (i > 0 && std::abs(roots[i].t - roots[i - 1].t) < opts.t_tol) {
        rep.clusters.push_back({proj, std::min(roots[i - 1].t, roots[i].t),
                                std::max(roots[i - 1].t, roots[i].t)});
        continue;
      }
      rep.events.push_back(make_event(traj, proj, roots[i], opts.jets));
    }
  };

  if (!rep.pi_germ_global) {
    collect(Projection::Pi, [&](double t) {
      return switching_values(surface.frame, traj.eval(t)).A;
    });
  }
  if (!rep.pi_prime_germ_global) {
    collect(Projection::PiPrime, [&](double t) { return pi_prime_switching(surface, traj.eval(t)); });
  }
  const double dir = traj.t_end() >= traj.t_begin() ? 1.0 : -1.0;
  std::stable_sort(rep.events.begin(), rep.events.end(),
                   [dir](const SingularEvent& a, const SingularEvent& b) {
                     return dir * a.t < dir * b.t;
                   });
  return rep;
}

ZigzagReport zigzag_report(const Trajectory& traj, const EventReport& report) {
  ZigzagReport out;
  out.events = report.events;
  const Surface& surface = traj.surface();
  const ExtremalState s0 = traj.initial();
  const PendulumParams pp = reduce(surface.frame, s0);
  const bool librating = surface.chart.is_flat() &&
                         classify_regime(s0, pp) == PendulumRegime::Libration;
  std::size_t n_pi = 0, n_prime = 0;
  for (const auto& ev : out.events) (ev.projection == Projection::Pi ? n_pi : n_prime)++;
  out.applicable = librating && n_prime > 0;
  if (out.applicable) {
    out.alternates = n_pi > 0;
    for (std::size_t i = 1; i < out.events.size(); ++i) {
      if (out.events[i].projection == out.events[i - 1].projection) out.alternates = false;
    }
  }

  out.directions_parallel = true;
  for (const auto& ev : out.events) {
    if (ev.projection != Projection::Pi || ev.clazz != NormalForm::IV) continue;
    ++out.cusp_count;
    if (!ev.jet) {
      out.directions_parallel = false;
      continue;
    }
    const Vec2 w = {ev.state.p2, -ev.state.p1};
    const double sine = std::abs(cross(ev.jet->d2, w)) / (norm(ev.jet->d2) * norm(w));
    const double angle = std::asin(std::min(1.0, sine));
    out.max_cusp_angle = std::max(out.max_cusp_angle, angle);
  }
  if (out.max_cusp_angle > 1e-6) out.directions_parallel = false;
  return out;
}

ZigzagReport zigzag_report(const Trajectory& traj) { return zigzag_report(traj, detect_events(traj)); }

}  // namespace srgeo
