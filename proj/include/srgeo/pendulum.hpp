// Pendulum reduction of the angle dynamics,
//   theta'' = -r sin(2 theta + rho),
// and the closed-form flat solution through Jacobi elliptic functions.

#ifndef SRGEO_PENDULUM_HPP
#define SRGEO_PENDULUM_HPP

#include <stdexcept>

#include "srgeo/extremal.hpp"

namespace srgeo {

struct PendulumParams {
  double r = 0.0;      // amplitude (a^2 + b^2) / 2
  double rho = 0.0;    // phase
  double omega = 0.0;  // sqrt(2 r)
  double Theta = 0.0;  // reduced angle 2 theta + rho
  bool degenerate = false;  // r = 0: rho undefined (fiber or constant extremal)
};

// With a = k p1 + l p2 and b = m p1 + n p2:
//   r sin(rho) = a b,   r cos(rho) = (b^2 - a^2) / 2,
// which makes theta'' = -A B = -r sin(2 theta + rho) an identity.
PendulumParams reduce(const OrthonormalFrame& frame, const ExtremalState& s);
PendulumParams reduce(const FrameSample& f, const ExtremalState& s);

// theta'^2 / 2 - (r / 2) cos(2 theta + rho). Libration below r / 2,
// rotation above.
double pendulum_energy(const ExtremalState& s, const PendulumParams& params);

enum class PendulumRegime { Degenerate, Equilibrium, Libration, Separatrix, Rotation };

const char* to_string(PendulumRegime regime);

// Separatrix when |energy - r/2| < 1e-12 max(1, r).
PendulumRegime classify_regime(const ExtremalState& s, const PendulumParams& params);

struct JacobiValues {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
  double am = 0.0;  // continuous amplitude
};

// Jacobi elliptic functions of parameter mmod in [0, 1] by the descending
// Landen (arithmetic-geometric mean) recursion. Throws std::domain_error
// outside [0, 1].
JacobiValues jacobi(double u, double mmod);

// Complete elliptic integral K(m) = pi / (2 AGM(1, sqrt(1 - m))), m in [0, 1).
double complete_elliptic_k(double mmod);

struct PendulumSolution {
  double theta = 0.0;
  double theta_dot = 0.0;
  PendulumRegime regime = PendulumRegime::Degenerate;
};

// Exact flat-chart solution at time t from the state s0 at time 0.
PendulumSolution closed_form_flat(const ExtremalState& s0, double t);

}  // namespace srgeo

#endif  // SRGEO_PENDULUM_HPP
