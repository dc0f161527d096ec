// The invariant suite: one result per acceptance criterion, shared by the
// `check` command and the acceptance test binary.

#ifndef SRGEO_CLI_VERIFICATION_HPP
#define SRGEO_CLI_VERIFICATION_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "srgeo/extremal.hpp"

namespace srgeo::cli {

// max |theta - theta_closed_form| over the nodes and a uniform grid (flat).
double closed_form_theta_error(const Trajectory& traj, std::size_t grid = 4000);

// max Euclidean state distance over a uniform grid of the common window.
double state_distance(const Trajectory& a, const Trajectory& b, std::size_t grid = 1000);

// max |H - H0| / H0 over the nodes (0 for H0 = 0).
double relative_hamiltonian_drift(const Trajectory& traj);

// max |E - E0| / max(|E0|, r/2) over the nodes, E the pendulum energy (flat).
double relative_energy_drift(const Trajectory& traj);

// Flat states with pendulum parameter m drawn per regime: libration
// m in [0.05, 0.9], rotation m in [1.1, 4], near separatrix |m - 1| in
// [1e-3, 1e-2]. kind cycles libration, rotation, near separatrix unless
// libration_only.
std::vector<ExtremalState> pendulum_states(std::uint64_t seed, std::size_t count,
                                           bool libration_only);

struct CriterionResult {
  int id = 0;
  std::string label;
  bool passed = false;
  std::string detail;
};

struct VerificationOptions {
  std::uint64_t seed = 20240601;
  std::size_t sweep_count = 1000;  // per chart
  double tol = 1e-10;
  unsigned threads = 0;
  std::ostream* progress = nullptr;  // one line per finished criterion
};

std::vector<CriterionResult> run_verification(const VerificationOptions& opts);

// "PASS  3 flat cusp determinant identity: detail"
std::string format_result(const CriterionResult& r);

}  // namespace srgeo::cli

#endif  // SRGEO_CLI_VERIFICATION_HPP
