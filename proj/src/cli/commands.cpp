#include "srgeo/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "srgeo/cli/config.hpp"
#include "srgeo/cli/io.hpp"
#include "srgeo/cli/sweep.hpp"
#include "srgeo/cli/verification.hpp"
#include "srgeo/pendulum.hpp"

namespace srgeo::cli {

namespace {

constexpr double kOracleThetaLimit = 1e-8;
constexpr double kOracleAltLimit = 1e-7;
constexpr double kDriftLimit = 1e-8;

RunConfig resolve_config(const CommandOptions& opts, bool required) {
  RunConfig cfg;
  if (opts.config) {
    cfg = load_config(*opts.config);
  } else if (required) {
    throw ConfigError("--config is required for this command");
  }
  if (opts.tol) {
    if (!(*opts.tol >= 1e-14 && *opts.tol <= 1e-3)) {
      throw ConfigError("--tol must lie in [1e-14, 1e-3]");
    }
    cfg.tol = *opts.tol;
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.count) cfg.sweep.count = *opts.count;
  return cfg;
}

void write_file(const std::filesystem::path& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + (dir / name).string() + "'");
  f << content;
}

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  return theta - two_pi * std::floor(theta / two_pi);
}

std::string summary(const Trajectory& traj) {
  const Surface& surface = traj.surface();
  const ExtremalState s0 = traj.initial(), s1 = traj.eval(traj.t_end());
  std::ostringstream out;
  out << "metric: " << surface.chart.name() << '\n';
  out << "window: [" << format_number(traj.t_begin()) << ", " << format_number(traj.t_end())
      << "]\n";
  out << "nodes: " << traj.node_times().size() << " (rejected steps " << traj.stats().rejected
      << ")\n";
  if (traj.domain_exit()) {
    out << "domain-exit at t=" << format_double(*traj.exit_time()) << " (trajectory truncated)\n";
  }
  out << "H0: " << format_double(hamiltonian_value(surface.frame, s0)) << '\n';
  out << "relative H drift: " << format_number(relative_hamiltonian_drift(traj)) << '\n';
  if (surface.chart.is_flat()) {
    const PendulumParams pp = reduce(surface.frame, s0);
    out << "pendulum regime: " << to_string(classify_regime(s0, pp)) << '\n';
    out << "relative pendulum-energy drift: " << format_number(relative_energy_drift(traj))
        << '\n';
  }
  out << "arc length: " << format_double(arc_length(traj)) << '\n';
  out << "final state: x=(" << format_number(s1.x1) << ", " << format_number(s1.x2)
      << ") theta mod 2pi=" << format_number(wrap_angle(s1.theta)) << '\n';
  return out.str();
}

int simulate(const CommandOptions& opts, std::ostream& out) {
  const RunConfig cfg = resolve_config(opts, true);
  const Surface surface = make_surface(cfg.metric);
  const ExtremalState s0 = require_initial(cfg, surface);
  const Trajectory traj = integrate(surface, s0, cfg.window, cfg.tol);
  int code = kExitOk;
  if (cfg.wants(OutputKind::TrajectoryCsv)) {
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    write_file(opts.out_dir, "trajectory.csv", csv.str());
  }
  if (cfg.wants(OutputKind::EventsJson) || cfg.wants(OutputKind::FrontSvg)) {
    try {
      const EventReport report = detect_events(traj);
      if (cfg.wants(OutputKind::EventsJson)) {
        write_file(opts.out_dir, "events.json", events_json(report, traj.t_begin()).dump(2) + "\n");
      }
      if (cfg.wants(OutputKind::FrontSvg)) {
        write_file(opts.out_dir, "front.svg", render_svg(traj, report, cfg.render));
      }
    } catch (const PairViolationError& e) {
      out << "violation: " << e.what() << '\n';
      code = kExitViolation;
    }
  }
  const std::string text = summary(traj);
  if (cfg.wants(OutputKind::ReportText)) write_file(opts.out_dir, "report.txt", text);
  out << text;
  return code;
}

int classify(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_config(opts, true);
  const Surface surface = make_surface(cfg.metric);
  const ExtremalState s0 = require_initial(cfg, surface);
  const Trajectory traj = integrate(surface, s0, cfg.window, cfg.tol);
  EventReport report;
  try {
    report = detect_events(traj);
  } catch (const PairViolationError& e) {
    err << "violation: " << e.what() << '\n';
    return kExitViolation;
  }
  const std::string doc = events_json(report, traj.t_begin()).dump(2) + "\n";
  write_file(opts.out_dir, "events.json", doc);
  out << doc;
  return kExitOk;
}

int run_sweep_command(const CommandOptions& opts, std::ostream& out) {
  const RunConfig cfg = resolve_config(opts, false);
  const Surface surface = make_surface(cfg.metric);
  SweepOptions so;
  so.window = cfg.window;
  so.tol = cfg.tol;
  const SweepResult res = sweep(surface, cfg.sweep.slice, cfg.sweep.count, cfg.seed, so);
  const std::string text = sweep_report(res);
  write_file(opts.out_dir, "sweep.txt", text);
  out << text;
  if (res.violations() > 0) return kExitViolation;
  if (res.failures() > 0) return kExitIntegration;
  return kExitOk;
}

int oracle(const CommandOptions& opts, std::ostream& out) {
  const RunConfig cfg = resolve_config(opts, true);
  const Surface surface = make_surface(cfg.metric);
  if (!surface.chart.is_flat()) throw ConfigError("oracle requires the flat metric");
  const ExtremalState s0 = require_initial(cfg, surface);
  const Trajectory traj = integrate(surface, s0, cfg.window, cfg.tol);
  const Trajectory alt = alt_integrate(surface, s0, cfg.window, cfg.tol);
  const double theta_err = closed_form_theta_error(traj);
  const double alt_dist = state_distance(traj, alt);
  const double h_drift = relative_hamiltonian_drift(traj);
  const double e_drift = relative_energy_drift(traj);
  const PendulumParams pp = reduce(surface.frame, s0);
  const bool ok = theta_err <= kOracleThetaLimit && alt_dist <= kOracleAltLimit &&
                  h_drift <= kDriftLimit && e_drift <= kDriftLimit;
  std::ostringstream text;
  text << "regime: " << to_string(classify_regime(s0, pp)) << '\n';
  text << "max |theta - closed form|: " << format_number(theta_err) << " (limit "
       << format_number(kOracleThetaLimit) << ")\n";
  text << "max state distance to alt_integrate: " << format_number(alt_dist) << " (limit "
       << format_number(kOracleAltLimit) << ")\n";
  text << "relative H drift: " << format_number(h_drift) << '\n';
  text << "relative pendulum-energy drift: " << format_number(e_drift) << '\n';
  text << "result: " << (ok ? "pass" : "fail") << '\n';
  if (cfg.wants(OutputKind::ReportText)) write_file(opts.out_dir, "oracle.txt", text.str());
  out << text.str();
  return ok ? kExitOk : kExitCheckFailed;
}

int render(const CommandOptions& opts, std::ostream& out) {
  const RunConfig cfg = resolve_config(opts, true);
  const Surface surface = make_surface(cfg.metric);
  const ExtremalState s0 = require_initial(cfg, surface);
  const Trajectory traj = integrate(surface, s0, cfg.window, cfg.tol);
  DetectOptions det;
  det.jets = false;
  const EventReport report = detect_events(traj, det);
  write_file(opts.out_dir, "front.svg", render_svg(traj, report, cfg.render));
  std::size_t cusps = 0;
  for (const SingularEvent& e : report.events) cusps += e.projection == Projection::Pi;
  out << "front.svg: " << cusps << " pi-cusps, " << report.events.size() - cusps
      << " pi'-events\n";
  return kExitOk;
}

int check(const CommandOptions& opts, std::ostream& out) {
  const RunConfig cfg = resolve_config(opts, false);
  VerificationOptions vo;
  if (opts.seed) vo.seed = *opts.seed;
  if (opts.count) vo.sweep_count = *opts.count;
  vo.tol = cfg.tol;
  vo.progress = &out;
  const auto results = run_verification(vo);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed;
  out << passed << "/" << results.size() << " criteria passed\n";
  return passed == results.size() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out,
                std::ostream& err) {
  try {
    if (name == "simulate") return simulate(opts, out);
    if (name == "classify") return classify(opts, out, err);
    if (name == "sweep") return run_sweep_command(opts, out);
    if (name == "oracle") return oracle(opts, out);
    if (name == "render") return render(opts, out);
    if (name == "check") return check(opts, out);
    err << "unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IntegrationError& e) {
    err << "integration error: " << e.what() << '\n';
    return kExitIntegration;
  } catch (const DomainError& e) {
    err << "integration error: " << e.what() << '\n';
    return kExitIntegration;
  } catch (const LeafChartError& e) {
    err << "integration error: " << e.what() << '\n';
    return kExitIntegration;
  }
}

}  // namespace srgeo::cli
