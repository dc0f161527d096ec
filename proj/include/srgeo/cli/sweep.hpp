// Seeded random sweeps: sample initial states, integrate, classify, and
// aggregate the pair histogram. Work is spread over threads; results are
// stored by sample index so the report does not depend on scheduling.

#ifndef SRGEO_CLI_SWEEP_HPP
#define SRGEO_CLI_SWEEP_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srgeo/cli/config.hpp"
#include "srgeo/singularity.hpp"

namespace srgeo::cli {

// x in the chart domain clipped to [-1, 1]^2, theta in [-pi, pi],
// |p| in [0.25, 2] with uniform direction, phi in [-2, 2]. The straight
// slice sets phi = 0 and B = 0 (momentum along the direction of motion),
// which is the straight-geodesic family in the flat chart.
std::vector<ExtremalState> sample_states(const Surface& surface, SweepSlice slice,
                                         std::size_t count, std::uint64_t seed);

struct SweepSample {
  ExtremalState initial;
  std::optional<EventReport> report;
  std::optional<ClassificationPair> violation;
  double violation_t = 0.0;
  std::string failure;  // integration failure message
  bool domain_exit = false;
  // min over nodes and events of max(|A|, |theta'|) / sqrt(2H); infinity on
  // constant curves.
  double exclusion_margin = 0.0;
};

struct SweepOptions {
  Window window{0.0, 10.0};
  double tol = 1e-10;
  bool jets = true;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepResult {
  std::string chart;
  std::uint64_t seed = 0;
  SweepSlice slice = SweepSlice::All;
  SweepOptions options;
  std::vector<SweepSample> samples;

  // Initial germ pairs and event pairs, keyed by label.
  std::map<std::string, std::size_t> histogram() const;
  std::size_t violations() const;
  std::size_t failures() const;
};

SweepSample run_sample(const Surface& surface, const ExtremalState& s0, const SweepOptions& opts);

SweepResult run_sweep(const Surface& surface, const std::vector<ExtremalState>& states,
                      const SweepOptions& opts);

SweepResult sweep(const Surface& surface, SweepSlice slice, std::size_t count, std::uint64_t seed,
                  const SweepOptions& opts);

// Deterministic text report (no timings).
std::string sweep_report(const SweepResult& result);

}  // namespace srgeo::cli

#endif  // SRGEO_CLI_SWEEP_HPP
