#include "srgeo/cli/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "srgeo/cli/io.hpp"
#include "srgeo/cli/sweep.hpp"
#include "srgeo/pendulum.hpp"
#include "srgeo/singularity.hpp"

namespace srgeo::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

struct Sweeps {
  SweepResult flat, sphere, hyperbolic;
  double seconds = 0.0;
};

struct Runs {
  std::vector<Trajectory> oracle;
  std::vector<double> theta_errors;
  std::vector<Trajectory> libration;
  double oracle_seconds = 0.0;
};

CriterionResult oracle_equivalence(const Runs& runs) {
  CriterionResult r{1, "flat closed-form oracle (50 states, [0,20], tol 1e-10)", false, ""};
  double worst = 0.0;
  for (double e : runs.theta_errors) worst = std::max(worst, e);
  r.passed = runs.oracle.size() == 50 && worst <= 1e-8 && runs.oracle_seconds < 5.0;
  r.detail = "max theta error " + sci(worst) + ", runtime " + sci(runs.oracle_seconds) + " s";
  return r;
}

CriterionResult conservation(const Runs& runs) {
  CriterionResult r{2, "Hamiltonian and pendulum-energy conservation", false, ""};
  double h = 0.0, e = 0.0;
  for (const Trajectory& tr : runs.oracle) {
    h = std::max(h, relative_hamiltonian_drift(tr));
    e = std::max(e, relative_energy_drift(tr));
  }
  r.passed = h <= 1e-8 && e <= 1e-8;
  r.detail = "max relative drift H " + sci(h) + ", pendulum energy " + sci(e);
  return r;
}

// Visits the pi-cusps of a sweep; counts cusps whose jet was unavailable.
template <class F>
std::size_t for_each_pi_cusp(const SweepResult& sweep, std::size_t& missing, F&& f) {
  std::size_t n = 0;
  for (const SweepSample& s : sweep.samples) {
    if (!s.report) continue;
    for (const SingularEvent& e : s.report->events) {
      if (e.projection != Projection::Pi || e.clazz != NormalForm::IV) continue;
      if (!e.delta) {
        ++missing;
        continue;
      }
      ++n;
      f(e);
    }
  }
  return n;
}

CriterionResult flat_delta(const Sweeps& sw) {
  CriterionResult r{3, "flat cusp determinant identity", false, ""};
  double worst = 0.0;
  std::size_t missing = 0;
  const std::size_t n = for_each_pi_cusp(sw.flat, missing, [&](const SingularEvent& e) {
    const ExtremalState& s = e.state;
    const double expected = 2.0 * std::pow(s.phi, 3) * (s.p1 * s.p1 + s.p2 * s.p2);
    worst = std::max(worst, relative_error(*e.delta, expected));
  });
  r.passed = n > 0 && missing == 0 && worst <= 1e-5;
  r.detail = std::to_string(n) + " cusps, max relative error " + sci(worst) +
             (missing ? ", " + std::to_string(missing) + " without jet" : "");
  return r;
}

CriterionResult general_delta(const Sweeps& sw) {
  CriterionResult r{4, "curved-chart cusp determinant identity (sphere, hyperbolic)", false, ""};
  double worst = 0.0;
  std::size_t missing = 0, n = 0;
  for (const SweepResult* res : {&sw.sphere, &sw.hyperbolic}) {
    const Surface surface(builtin_chart(res->chart));
    n += for_each_pi_cusp(*res, missing, [&](const SingularEvent& e) {
      const ExtremalState& s = e.state;
      const FrameSample f = surface.frame.at(s.x1, s.x2);
      const double B = -(f.k * s.p1 + f.l * s.p2) * std::sin(s.theta) +
                       (f.m * s.p1 + f.n * s.p2) * std::cos(s.theta);
      const double expected = 2.0 * B * B * (f.k * f.n - f.l * f.m) * std::pow(s.phi, 3);
      worst = std::max(worst, relative_error(*e.delta, expected));
    });
  }
  // Cusps whose stencil leaves the chart carry no jet; they are reported, not scored.
  r.passed = n > 0 && worst <= 1e-4;
  r.detail = std::to_string(n) + " cusps, max relative error " + sci(worst) + ", " +
             std::to_string(missing) + " at the chart boundary without jet";
  return r;
}

CriterionResult flat_kappa(const Sweeps& sw) {
  CriterionResult r{5, "flat cuspidal curvature closed form", false, ""};
  double worst = 0.0;
  std::size_t missing = 0;
  const std::size_t n = for_each_pi_cusp(sw.flat, missing, [&](const SingularEvent& e) {
    const ExtremalState& s = e.state;
    const double expected = 2.0 * std::copysign(std::sqrt(std::abs(s.phi)), s.phi) /
                            std::pow(s.p1 * s.p1 + s.p2 * s.p2, 0.25);
    worst = std::max(worst, e.kappa_c ? relative_error(*e.kappa_c, expected) : 1.0);
  });
  r.passed = n > 0 && missing == 0 && worst <= 1e-6;
  r.detail = std::to_string(n) + " cusps, max relative error " + sci(worst);
  return r;
}

CriterionResult closure(const Sweeps& sw, std::size_t count) {
  CriterionResult r{6, "classification closure (" + std::to_string(count) + " states per chart)",
                    false, ""};
  std::size_t violations = 0, failures = 0, records = 0;
  for (const SweepResult* res : {&sw.flat, &sw.sphere, &sw.hyperbolic}) {
    violations += res->violations();
    failures += res->failures();
    for (const auto& [label, n] : res->histogram()) records += n;
  }
  r.passed = violations == 0 && failures == 0 && sw.seconds < 60.0;
  r.detail = std::to_string(records) + " classified records, " + std::to_string(violations) +
             " violations, " + std::to_string(failures) + " failures, runtime " +
             sci(sw.seconds) + " s";
  return r;
}

double exclusion_margin(const Trajectory& tr) {
  const Surface& surface = tr.surface();
  const double scale = speed(surface.frame, tr.initial());
  if (!(scale > 0.0)) return std::numeric_limits<double>::infinity();
  double margin = std::numeric_limits<double>::infinity();
  for (double t : tr.node_times()) {
    const ExtremalState s = tr.eval(t);
    const double A = switching_values(surface.frame, s).A;
    margin = std::min(margin, std::max(std::abs(A), std::abs(s.phi)) / scale);
  }
  return margin;
}

CriterionResult exclusion(const Sweeps& sw, const Runs& runs,
                          const std::vector<EventReport>& lib_reports) {
  CriterionResult r{7, "no simultaneous zeros of A and theta' on non-constant curves", false, ""};
  double margin = std::numeric_limits<double>::infinity();
  for (const SweepResult* res : {&sw.flat, &sw.sphere, &sw.hyperbolic}) {
    for (const SweepSample& s : res->samples) margin = std::min(margin, s.exclusion_margin);
  }
  for (const Trajectory& tr : runs.oracle) margin = std::min(margin, exclusion_margin(tr));
  for (std::size_t i = 0; i < runs.libration.size(); ++i) {
    const Trajectory& tr = runs.libration[i];
    margin = std::min(margin, exclusion_margin(tr));
    const double scale = lib_reports[i].scale;
    for (const SingularEvent& e : lib_reports[i].events) {
      const double A = switching_values(tr.surface().frame, e.state).A;
      margin = std::min(margin, std::max(std::abs(A), std::abs(e.state.phi)) / scale);
    }
  }
  r.passed = margin > 1e-9;
  r.detail = "min max(|A|, |theta'|) / sqrt(2H) = " + sci(margin);
  return r;
}

CriterionResult zigzag(const std::vector<ZigzagReport>& reports) {
  CriterionResult r{8, "zigzag alternation (20 librating flat runs, >= 2 periods)", false, ""};
  std::size_t ok = 0, events = 0;
  for (const ZigzagReport& z : reports) {
    ok += z.applicable && z.alternates && z.cusp_count >= 4;
    events += z.events.size();
  }
  r.passed = reports.size() == 20 && ok == reports.size();
  r.detail = std::to_string(ok) + "/" + std::to_string(reports.size()) + " interleave, " +
             std::to_string(events) + " events";
  return r;
}

CriterionResult parallel_cusps(const std::vector<ZigzagReport>& reports) {
  CriterionResult r{9, "parallel cusp directions on librating flat runs", false, ""};
  double worst = 0.0;
  std::size_t cusps = 0;
  bool all = !reports.empty();
  for (const ZigzagReport& z : reports) {
    worst = std::max(worst, z.max_cusp_angle);
    cusps += z.cusp_count;
    all = all && z.directions_parallel;
  }
  r.passed = all && worst <= 1e-6;
  r.detail = std::to_string(cusps) + " cusps, max angle to (p2, -p1) " + sci(worst) + " rad";
  return r;
}

CriterionResult chart_validation() {
  CriterionResult r{10, "geodesic-parallel chart conditions (sphere, hyperbolic)", false, ""};
  bool ok = true;
  double worst = 0.0, gamma0 = 0.0;
  for (const MetricChart& chart : {sphere_chart(), hyperbolic_chart()}) {
    const ParallelValidation v = validate_geodesic_parallel(chart);
    ok = ok && v.passed && v.tolerance <= 1e-12;
    worst = std::max({worst, v.g11_violation, v.g12_violation, v.g22_axis_violation,
                      v.dg22_axis_violation});
    const Christoffel g = christoffel(chart, 0.0, 0.0);
    for (const auto& a : g) {
      for (const auto& b : a) {
        for (double c : b) gamma0 = std::max(gamma0, std::abs(c));
      }
    }
  }
  r.passed = ok && worst <= 1e-12 && gamma0 <= 1e-12;
  r.detail = "max condition violation " + sci(worst) + ", max |Christoffel(0,0)| " + sci(gamma0);
  return r;
}

CriterionResult flow_and_leaf(const Sweeps& sw, const std::vector<EventReport>& lib_reports,
                              std::uint64_t seed) {
  CriterionResult r{11, "geodesic flow, leaf-chart integrals, leaf-chart class agreement", false,
                    ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double flow_err = 0.0, residual = 0.0;
  std::size_t leaf_points = 0;
  for (const MetricChart& chart : {flat_chart(), sphere_chart(), hyperbolic_chart()}) {
    const Surface surface(chart);
    for (int i = 0; i < 10;) {
      const double x1 = 0.5 * u(rng), x2 = 0.5 * u(rng), th = std::numbers::pi * u(rng);
      // Stay clear of the sphere chart's polar boundary (Clairaut constant).
      if (chart.kind() == ChartKind::Sphere && std::cos(x1) * std::abs(std::sin(th)) < 0.3) continue;
      const Vec2 a = flow_geodesic(surface, x1, x2, th, 5.0);
      const Vec2 b = christoffel_geodesic(surface, x1, x2, th, 5.0);
      flow_err = std::max(flow_err, std::hypot(a[0] - b[0], a[1] - b[1]));
      ++i;
    }
    for (int i = 0; i < 5; ++i) {
      const ExtremalState base{0.4 * u(rng), 0.4 * u(rng), std::numbers::pi * u(rng), u(rng), u(rng),
                               u(rng)};
      const LeafChart leaf = leaf_chart_numeric(surface, base);
      for (int j = 0; j < 4; ++j) {
        const Vec3 q{base.x1 + 0.05 * u(rng), base.x2 + 0.05 * u(rng), base.theta + 0.05 * u(rng)};
        residual = std::max(residual, first_integral_residual(surface, leaf, q));
        ++leaf_points;
      }
    }
  }

  const Surface flat(flat_chart());
  std::size_t compared = 0, agree = 0;
  auto compare = [&](const SingularEvent& e, double scale) {
    if (e.projection != Projection::PiPrime) return;
    const double h = jet_step(flat, e.state);
    const double tau = 1.0 / scale, floor = 1e-9 * scale;
    const CurveJet explicit_jet = pi_prime_jet(flat, leaf_chart_flat(e.state), e.state, h);
    const CurveJet numeric_jet = pi_prime_jet(flat, leaf_chart_numeric(flat, e.state), e.state, h);
    ++compared;
    agree += classify_jet(explicit_jet, tau, floor) == classify_jet(numeric_jet, tau, floor);
  };
  for (const EventReport& rep : lib_reports) {
    for (const SingularEvent& e : rep.events) compare(e, rep.scale);
  }
  for (const SweepSample& s : sw.flat.samples) {
    if (!s.report) continue;
    for (const SingularEvent& e : s.report->events) compare(e, s.report->scale);
  }
  r.passed = flow_err <= 1e-8 && residual <= 1e-6 && compared > 0 && agree == compared;
  r.detail = "flow vs Christoffel " + sci(flow_err) + ", leaf residual " + sci(residual) + " (" +
             std::to_string(leaf_points) + " points), classes agree " + std::to_string(agree) +
             "/" + std::to_string(compared);
  return r;
}

CriterionResult two_hamiltonians(std::uint64_t seed, double tol) {
  CriterionResult r{12, "integrate vs alt_integrate (100 states per chart, [0,10])", false, ""};
  double worst = 0.0;
  std::size_t runs = 0;
  for (const MetricChart& chart : {flat_chart(), sphere_chart(), hyperbolic_chart()}) {
    const Surface surface(chart);
    for (const ExtremalState& s : sample_states(surface, SweepSlice::All, 100, seed)) {
      const Trajectory a = integrate(surface, s, {0.0, 10.0}, tol);
      const Trajectory b = alt_integrate(surface, s, {0.0, 10.0}, tol);
      worst = std::max(worst, state_distance(a, b));
      ++runs;
    }
  }
  r.passed = runs == 300 && worst <= 1e-7;
  r.detail = "max state distance " + sci(worst) + " over " + std::to_string(runs) + " runs";
  return r;
}

}  // namespace

double closed_form_theta_error(const Trajectory& traj, std::size_t grid) {
  const ExtremalState s0 = traj.initial();
  const double t0 = traj.t_begin(), t1 = traj.t_end();
  double worst = 0.0;
  auto check = [&](double t) {
    worst = std::max(worst, std::abs(traj.eval(t).theta - closed_form_flat(s0, t - t0).theta));
  };
  for (double t : traj.node_times()) check(t);
  for (std::size_t k = 0; k <= grid; ++k) {
    check(t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(grid));
  }
  return worst;
}

double state_distance(const Trajectory& a, const Trajectory& b, std::size_t grid) {
  const double t0 = a.t_begin();
  const double dir = a.t_end() >= t0 ? 1.0 : -1.0;
  const double t1 = dir > 0 ? std::min(a.t_end(), b.t_end()) : std::max(a.t_end(), b.t_end());
  double worst = 0.0;
  for (std::size_t k = 0; k <= grid; ++k) {
    const double t = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(grid);
    const State6 ya = a.eval(t).to_array(), yb = b.eval(t).to_array();
    double d2 = 0.0;
    for (std::size_t i = 0; i < ya.size(); ++i) d2 += (ya[i] - yb[i]) * (ya[i] - yb[i]);
    worst = std::max(worst, std::sqrt(d2));
  }
  return worst;
}

double relative_hamiltonian_drift(const Trajectory& traj) {
  const double h0 = hamiltonian_value(traj.surface().frame, traj.initial());
  return h0 > 0.0 ? hamiltonian_drift(traj) / h0 : 0.0;
}

double relative_energy_drift(const Trajectory& traj) {
  const OrthonormalFrame& frame = traj.surface().frame;
  const ExtremalState s0 = traj.initial();
  const PendulumParams p0 = reduce(frame, s0);
  if (p0.degenerate) return 0.0;
  const double e0 = pendulum_energy(s0, p0);
  const double scale = std::max(std::abs(e0), 0.5 * p0.r);
  double worst = 0.0;
  for (double t : traj.node_times()) {
    const ExtremalState s = traj.eval(t);
    worst = std::max(worst, std::abs(pendulum_energy(s, reduce(frame, s)) - e0) / scale);
  }
  return worst;
}

std::vector<ExtremalState> pendulum_states(std::uint64_t seed, std::size_t count,
                                           bool libration_only) {
  const Surface flat(flat_chart());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ExtremalState> out;
  while (out.size() < count) {
    const int kind = libration_only ? 0 : static_cast<int>(out.size() % 3);
    const double pn = 0.3 + 1.7 * unit(rng), pa = 2 * std::numbers::pi * unit(rng);
    double m = 0.0;
    if (kind == 0) {
      m = 0.05 + 0.85 * unit(rng);
    } else if (kind == 1) {
      m = 1.1 + 2.9 * unit(rng);
    } else {
      m = 1.0 + (unit(rng) < 0.5 ? -1.0 : 1.0) * (1e-3 + 9e-3 * unit(rng));
    }
    // psi = theta + rho/2 with sin^2 psi <= m, then theta' from m.
    const double psi_max = m < 1.0 ? std::asin(std::sqrt(m)) : std::numbers::pi;
    const double psi = psi_max * (2.0 * unit(rng) - 1.0);
    ExtremalState s{0.0, 0.0, 0.0, pn * std::cos(pa), pn * std::sin(pa), 0.0};
    const PendulumParams pp = reduce(flat.frame, s);
    s.theta = psi - 0.5 * pp.rho;
    const double rest = m - std::sin(psi) * std::sin(psi);
    s.phi = (unit(rng) < 0.5 ? -1.0 : 1.0) * pp.omega * std::sqrt(std::max(rest, 0.0));
    out.push_back(s);
  }
  return out;
}

std::vector<CriterionResult> run_verification(const VerificationOptions& opts) {
  std::vector<CriterionResult> results;
  auto report = [&](CriterionResult r) {
    if (opts.progress) *opts.progress << format_result(r) << std::endl;
    results.push_back(std::move(r));
  };
  const Surface flat(flat_chart());

  Runs runs;
  auto start = Clock::now();
  for (const ExtremalState& s : pendulum_states(opts.seed, 50, false)) {
    runs.oracle.push_back(integrate(flat, s, {0.0, 20.0}, opts.tol));
    runs.theta_errors.push_back(closed_form_theta_error(runs.oracle.back()));
  }
  runs.oracle_seconds = seconds_since(start);
  report(oracle_equivalence(runs));
  report(conservation(runs));

  SweepOptions so;
  so.tol = opts.tol;
  so.threads = opts.threads;
  Sweeps sw;
  start = Clock::now();
  sw.flat = sweep(flat, SweepSlice::All, opts.sweep_count, opts.seed, so);
  sw.sphere = sweep(Surface(sphere_chart()), SweepSlice::All, opts.sweep_count, opts.seed + 1, so);
  sw.hyperbolic =
      sweep(Surface(hyperbolic_chart()), SweepSlice::All, opts.sweep_count, opts.seed + 2, so);
  sw.seconds = seconds_since(start);
  report(flat_delta(sw));
  report(general_delta(sw));
  report(flat_kappa(sw));
  report(closure(sw, opts.sweep_count));

  std::vector<EventReport> lib_reports;
  std::vector<ZigzagReport> zigzags;
  for (const ExtremalState& s : pendulum_states(opts.seed + 3, 20, true)) {
    const PendulumParams pp = reduce(flat.frame, s);
    const double m = s.phi * s.phi / (pp.omega * pp.omega) +
                     std::pow(std::sin(s.theta + 0.5 * pp.rho), 2);
    const double period = 4.0 * complete_elliptic_k(m) / pp.omega;
    runs.libration.push_back(integrate(flat, s, {0.0, 2.25 * period}, opts.tol));
    lib_reports.push_back(detect_events(runs.libration.back()));
    zigzags.push_back(zigzag_report(runs.libration.back(), lib_reports.back()));
  }
  report(exclusion(sw, runs, lib_reports));
  report(zigzag(zigzags));
  report(parallel_cusps(zigzags));
  report(chart_validation());
  report(flow_and_leaf(sw, lib_reports, opts.seed + 4));
  report(two_hamiltonians(opts.seed + 5, opts.tol));
  return results;
}

std::string format_result(const CriterionResult& r) {
  char head[16];
  std::snprintf(head, sizeof head, "%s %2d ", r.passed ? "PASS" : "FAIL", r.id);
  return head + r.label + ": " + r.detail;
}

}  // namespace srgeo::cli
