// Normal Pontryagin extremals of the sub-Riemannian structure on the unit
// tangent bundle, with the multiplier normalized to c = -1.
//
// Phase point (x1, x2, theta, p1, p2, phi); theta is the angle of the unit
// vector against d/dx1 measured in the frame (v1, v2), never wrapped.
//
// With a = k p1 + l p2, b = m p1 + n p2:
//   A = a cos(theta) + b sin(theta)      (u1, horizontal speed)
//   B = -a sin(theta) + b cos(theta)
//   x1' = A (k cos + m sin),  x2' = A (l cos + n sin),  theta' = phi,
//   p_i' = -A dA/dx_i,        phi' = -A B.

#ifndef SRGEO_EXTREMAL_HPP
#define SRGEO_EXTREMAL_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srgeo/metric.hpp"
#include "srgeo/ode.hpp"

namespace srgeo {

using State6 = Vec<6>;

struct ExtremalState {
  double x1 = 0.0;
  double x2 = 0.0;
  double theta = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double phi = 0.0;

  State6 to_array() const { return {x1, x2, theta, p1, p2, phi}; }
  static ExtremalState from_array(const State6& y) { return {y[0], y[1], y[2], y[3], y[4], y[5]}; }
};

struct ControlValue {
  double u1 = 0.0;
  double u2 = 0.0;
};

struct Switching {
  double A = 0.0;
  double B = 0.0;
};

Switching switching_values(const FrameSample& f, const ExtremalState& s);
Switching switching_values(const OrthonormalFrame& frame, const ExtremalState& s);

ControlValue controls(const OrthonormalFrame& frame, const ExtremalState& s);

// dA/dx_i at fixed (theta, p).
Gradient2 switching_gradient(const FrameSample& f, const ExtremalState& s);

// Right-hand side without the domain check (used inside integrators).
State6 extremal_rhs(const FrameSample& f, const ExtremalState& s);

// Right-hand side; throws DomainError outside the chart.
State6 extremal_field(const Surface& surface, const ExtremalState& s);

// H = (A^2 + phi^2) / 2.
double hamiltonian_value(const OrthonormalFrame& frame, const ExtremalState& s);

// Sub-Riemannian speed sqrt(A^2 + phi^2) = sqrt(2H).
double speed(const OrthonormalFrame& frame, const ExtremalState& s);

struct Window {
  double t0 = 0.0;
  double t1 = 1.0;
};

class Trajectory {
 public:
  Trajectory(Surface surface, DenseSolution<6> solution, std::string formulation);

  const Surface& surface() const { return surface_; }
  const DenseSolution<6>& solution() const { return solution_; }
  const IntegratorStats& stats() const { return solution_.stats(); }
  const std::string& formulation() const { return formulation_; }

  double t_begin() const { return solution_.t_begin(); }
  double t_end() const { return solution_.t_end(); }
  bool contains(double t) const { return solution_.contains(t); }

  // Set when the trajectory left the chart; t_end() is then the exit time.
  std::optional<double> exit_time() const { return solution_.stop_time(); }
  bool domain_exit() const { return exit_time().has_value(); }

  ExtremalState eval(double t) const { return ExtremalState::from_array(solution_.eval(t)); }
  // Vector field at eval(t).
  State6 derivative(double t) const;
  // Directional derivative of the field along itself at eval(t).
  State6 second_derivative(double t) const;

  const std::vector<double>& node_times() const { return solution_.times(); }
  std::vector<ExtremalState> node_states() const;

  ExtremalState initial() const { return eval(t_begin()); }

 private:
  Surface surface_;
  DenseSolution<6> solution_;
  std::string formulation_;
};

// Accepts tol in [1e-14, 1e-3].
void check_tolerance(double tol);

// Per-step tolerance used for a requested accuracy tol: two orders tighter,
// so that phase errors accumulated over many pendulum periods stay near tol.
double local_tolerance(double tol);

// Dormand-Prince 5(4) solve of the extremal system. Leaving the chart ends
// the trajectory with exit_time() set.
Trajectory integrate(const Surface& surface, const ExtremalState& s0, Window window,
                     double tol = 1e-10);

// Canonical Hamiltonian system of H~ = (<p, V1>^2 + <phi, V2>^2) / 2 with the
// gradient of H~ taken numerically from frame values only. Independent of the
// hand-assembled right-hand side used by integrate().
Trajectory alt_integrate(const Surface& surface, const ExtremalState& s0, Window window,
                         double tol = 1e-10);

// True iff A = B = 0 forces (p1, p2) = 0, i.e. the rotation-frame matrix is
// invertible. Throws std::invalid_argument when k n - l m = 0.
bool abnormal_triviality_check(const OrthonormalFrame& frame, double x1, double x2,
                               double theta);

// Integral of sqrt(u1^2 + u2^2) over the trajectory window.
double arc_length(const Trajectory& traj);

// max |H(t) - H(t0)| over the integrator nodes.
double hamiltonian_drift(const Trajectory& traj);

// States at s0's time plus each offset, from a tight local solve.
std::vector<ExtremalState> solve_at(const Surface& surface, const ExtremalState& s0,
                                    std::span<const double> offsets, double tol = 1e-13);

}  // namespace srgeo

#endif  // SRGEO_EXTREMAL_HPP
