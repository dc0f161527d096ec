#include "srgeo/cli/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "srgeo/cli/io.hpp"

namespace srgeo::cli {

namespace {

constexpr double kExclusionFloor = 1e-9;

std::pair<double, double> clip(double lo, double hi) {
  return {std::max(lo, -1.0), std::min(hi, 1.0)};
}

double exclusion_value(const Surface& surface, const ExtremalState& s, double scale) {
  const double A = switching_values(surface.frame, s).A;
  return std::max(std::abs(A), std::abs(s.phi)) / scale;
}

}  // namespace

std::vector<ExtremalState> sample_states(const Surface& surface, SweepSlice slice,
                                         std::size_t count, std::uint64_t seed) {
  const Domain& d = surface.chart.domain();
  const auto [a1, b1] = clip(d.x1_min, d.x1_max);
  const auto [a2, b2] = clip(d.x2_min, d.x2_max);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x1(a1, b1), x2(a2, b2);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> magnitude(0.25, 2.0), phi(-2.0, 2.0);
  std::vector<ExtremalState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ExtremalState s;
    s.x1 = x1(rng);
    s.x2 = x2(rng);
    s.theta = angle(rng);
    const double r = magnitude(rng), dir = angle(rng);
    if (slice == SweepSlice::All) {
      s.p1 = r * std::cos(dir);
      s.p2 = r * std::sin(dir);
      s.phi = phi(rng);
    } else {
      // (a, b) = lambda (cos theta, sin theta) gives B = 0; solve the frame for p.
      const double lambda = dir >= 0.0 ? r : -r;
      const double a = lambda * std::cos(s.theta), b = lambda * std::sin(s.theta);
      const FrameSample f = surface.frame.at(s.x1, s.x2);
      const double det = f.det();
      s.p1 = (f.n * a - f.l * b) / det;
      s.p2 = (-f.m * a + f.k * b) / det;
      s.phi = 0.0;
    }
    out.push_back(s);
  }
  return out;
}

SweepSample run_sample(const Surface& surface, const ExtremalState& s0, const SweepOptions& opts) {
  SweepSample out;
  out.initial = s0;
  try {
    const Trajectory traj = integrate(surface, s0, opts.window, opts.tol);
    out.domain_exit = traj.domain_exit();
    DetectOptions det;
    det.jets = opts.jets;
    out.report = detect_events(traj, det);
    const double scale = out.report->scale;
    if (out.report->initial_pair.pi == NormalForm::I || !(scale > 0.0)) {
      out.exclusion_margin = std::numeric_limits<double>::infinity();
    } else {
      double margin = std::numeric_limits<double>::infinity();
      for (double t : traj.node_times()) {
        margin = std::min(margin, exclusion_value(surface, traj.eval(t), scale));
      }
      for (const SingularEvent& e : out.report->events) {
        margin = std::min(margin, exclusion_value(surface, e.state, scale));
      }
      out.exclusion_margin = margin;
    }
  } catch (const PairViolationError& e) {
    out.violation = e.pair;
    out.violation_t = e.t;
  } catch (const IntegrationError& e) {
    out.failure = e.what();
  } catch (const DomainError& e) {
    out.failure = e.what();
  }
  return out;
}

SweepResult run_sweep(const Surface& surface, const std::vector<ExtremalState>& states,
                      const SweepOptions& opts) {
  SweepResult res;
  res.chart = surface.chart.name();
  res.options = opts;
  res.samples.resize(states.size());
  unsigned threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(states.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < states.size(); i = next++) {
      res.samples[i] = run_sample(surface, states[i], opts);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  return res;
}

SweepResult sweep(const Surface& surface, SweepSlice slice, std::size_t count, std::uint64_t seed,
                  const SweepOptions& opts) {
  SweepResult res = run_sweep(surface, sample_states(surface, slice, count, seed), opts);
  res.seed = seed;
  res.slice = slice;
  return res;
}

std::map<std::string, std::size_t> SweepResult::histogram() const {
  std::map<std::string, std::size_t> h;
  for (const SweepSample& s : samples) {
    if (!s.report) continue;
    ++h[s.report->initial_pair.label()];
    for (const SingularEvent& e : s.report->events) ++h[e.pair.label()];
  }
  return h;
}

std::size_t SweepResult::violations() const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [](const SweepSample& s) { return s.violation.has_value(); }));
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [](const SweepSample& s) { return !s.failure.empty(); }));
}

std::string sweep_report(const SweepResult& r) {
  std::ostringstream out;
  std::size_t events = 0, pi_events = 0, exits = 0, below_floor = 0;
  for (const SweepSample& s : r.samples) {
    exits += s.domain_exit;
    if (s.exclusion_margin <= kExclusionFloor) ++below_floor;
    if (!s.report) continue;
    events += s.report->events.size();
    for (const SingularEvent& e : s.report->events) pi_events += e.projection == Projection::Pi;
  }
  out << "chart: " << r.chart << '\n';
  out << "slice: " << (r.slice == SweepSlice::All ? "all" : "straight") << '\n';
  out << "seed: " << r.seed << '\n';
  out << "samples: " << r.samples.size() << '\n';
  out << "window: [" << format_number(r.options.window.t0) << ", "
      << format_number(r.options.window.t1) << "]\n";
  out << "tol: " << format_number(r.options.tol) << '\n';
  out << "events: " << events << " (pi " << pi_events << ", pi' " << events - pi_events << ")\n";
  out << "domain exits: " << exits << '\n';
  out << "integration failures: " << r.failures() << '\n';
  out << "exclusion-floor hits: " << below_floor << '\n';
  out << "pair histogram:\n";
  std::size_t total = 0;
  const auto hist = r.histogram();
  for (const auto& [label, n] : hist) total += n;
  for (const auto& [label, n] : hist) {
    char pct[32];
    const double share = total ? static_cast<double>(n) / static_cast<double>(total) : 0.0;
    std::snprintf(pct, sizeof pct, "%.2f", 100.0 * share);
    out << "  " << label << ": " << n << " (" << pct << "%)\n";
  }
  out << "violations: " << r.violations() << '\n';
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const SweepSample& s = r.samples[i];
    if (s.violation) {
      out << "  sample " << i << " t=" << format_number(s.violation_t) << ' '
          << s.violation->label() << '\n';
    }
    if (!s.failure.empty()) out << "  sample " << i << " failed: " << s.failure << '\n';
  }
  return out.str();
}

}  // namespace srgeo::cli
