#include "srgeo/pendulum.hpp"

#include <boost/math/special_functions/ellint_1.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace srgeo {

PendulumParams reduce(const FrameSample& f, const ExtremalState& s) {
  const double a = f.k * s.p1 + f.l * s.p2;
  const double b = f.m * s.p1 + f.n * s.p2;
  PendulumParams out;
  out.r = 0.5 * (a * a + b * b);
  if (out.r == 0.0) {
    out.degenerate = true;
    out.Theta = 2.0 * s.theta;
    return out;
  }
  out.rho = std::atan2(a * b, 0.5 * (b * b - a * a));
  out.omega = std::sqrt(2.0 * out.r);
  out.Theta = 2.0 * s.theta + out.rho;
  return out;
}

PendulumParams reduce(const OrthonormalFrame& frame, const ExtremalState& s) {
  return reduce(frame.at(s.x1, s.x2), s);
}

double pendulum_energy(const ExtremalState& s, const PendulumParams& params) {
  return 0.5 * s.phi * s.phi - 0.5 * params.r * std::cos(2.0 * s.theta + params.rho);
}

const char* to_string(PendulumRegime regime) {
  switch (regime) {
    case PendulumRegime::Degenerate: return "degenerate";
    case PendulumRegime::Equilibrium: return "equilibrium";
    case PendulumRegime::Libration: return "libration";
    case PendulumRegime::Separatrix: return "separatrix";
    case PendulumRegime::Rotation: return "rotation";
  }
  return "unknown";
}

PendulumRegime classify_regime(const ExtremalState& s, const PendulumParams& params) {
  if (params.degenerate) return PendulumRegime::Degenerate;
  const double e = pendulum_energy(s, params);
  const double gap = e - 0.5 * params.r;
  if (std::abs(gap) < 1e-12 * std::max(1.0, params.r)) return PendulumRegime::Separatrix;
  if (gap > 0.0) return PendulumRegime::Rotation;
  const double psi = s.theta + 0.5 * params.rho;
  if (s.phi == 0.0 && std::sin(psi) == 0.0) return PendulumRegime::Equilibrium;
  return PendulumRegime::Libration;
}

namespace {

constexpr int kMaxAgm = 48;

double gudermannian(double x) { return 2.0 * std::atan(std::tanh(0.5 * x)); }

}  // namespace

double complete_elliptic_k(double mmod) {
  if (!(mmod >= 0.0 && mmod <= 1.0)) {
    throw std::domain_error("complete_elliptic_k: parameter outside [0, 1]");
  }
  if (mmod == 1.0) return std::numeric_limits<double>::infinity();
  double a = 1.0, b = std::sqrt(1.0 - mmod);
  for (int i = 0; i < kMaxAgm && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (a + b);
}

JacobiValues jacobi(double u, double mmod) {
  if (!(mmod >= 0.0 && mmod <= 1.0)) {
    throw std::domain_error("jacobi: parameter outside [0, 1]");
  }
  if (mmod == 0.0) return {std::sin(u), std::cos(u), 1.0, u};
  if (mmod == 1.0) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech, gudermannian(u)};
  }

  double a[kMaxAgm + 1], c[kMaxAgm + 1];
  a[0] = 1.0;
  c[0] = std::sqrt(mmod);
  double b = std::sqrt(1.0 - mmod);
  int n = 0;
  do {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  } while (n < kMaxAgm && std::abs(c[n]) > 1e-17 * a[n]);

  // Reduce modulo the half period 2K: am(u + 2K) = am(u) + pi.
  const double two_k = std::numbers::pi / a[n];
  const double shift = std::round(u / two_k);
  const double ur = u - shift * two_k;

  double phi = std::ldexp(a[n] * ur, n);
  double phi_prev = phi;
  for (int i = n; i >= 1; --i) {
    phi_prev = phi;
    phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  JacobiValues out;
  const double sign = (static_cast<long long>(shift) % 2 == 0) ? 1.0 : -1.0;
  out.sn = sign * std::sin(phi);
  out.cn = sign * std::cos(phi);
  out.dn = std::cos(phi) / std::cos(phi_prev - phi);
  out.am = phi + shift * std::numbers::pi;
  return out;
}

PendulumSolution closed_form_flat(const ExtremalState& s0, double t) {
  FrameSample flat;
  const PendulumParams pp = reduce(flat, s0);
  PendulumSolution out;
  out.regime = classify_regime(s0, pp);
  if (pp.degenerate) {
    out.theta = s0.theta + s0.phi * t;
    out.theta_dot = s0.phi;
    return out;
  }

  const double pi = std::numbers::pi;
  const double omega = pp.omega;
  const double half_rho = 0.5 * pp.rho;
  const double psi0 = s0.theta + half_rho;  // Theta / 2
  const double dpsi0 = s0.phi;
  const double mm = (dpsi0 / omega) * (dpsi0 / omega) + std::sin(psi0) * std::sin(psi0);

  double psi = psi0, dpsi = 0.0;
  switch (out.regime) {
    case PendulumRegime::Equilibrium:
    case PendulumRegime::Degenerate:
      break;
    case PendulumRegime::Libration: {
      const double j = std::round(psi0 / pi);
      const double psir = psi0 - j * pi;
      if (mm == 0.0) break;
      const double amp = std::atan2(omega * std::sin(psir), dpsi0);
      const double k = std::sqrt(std::min(mm, 1.0));
      const double u0 = boost::math::ellint_1(k, amp);
      const JacobiValues jv = jacobi(omega * t + u0, k * k);
      psi = j * pi + std::asin(std::clamp(k * jv.sn, -1.0, 1.0));
      dpsi = omega * k * jv.cn;
      break;
    }
    case PendulumRegime::Rotation: {
      const double sgn = dpsi0 > 0.0 ? 1.0 : -1.0;
      const double m_inv = 1.0 / mm;
      const double u0 = boost::math::ellint_1(std::sqrt(m_inv), sgn * psi0);
      const double scale = omega * std::sqrt(mm);
      const JacobiValues jv = jacobi(scale * t + u0, m_inv);
      psi = sgn * jv.am;
      dpsi = sgn * scale * jv.dn;
      break;
    }
    case PendulumRegime::Separatrix: {
      if (dpsi0 == 0.0) break;
      const double sgn = dpsi0 > 0.0 ? 1.0 : -1.0;
      const double j = std::round(psi0 / pi);
      const double psir = psi0 - j * pi;
      const double sn0 = std::clamp(std::sin(sgn * psir), -1.0 + 1e-16, 1.0 - 1e-16);
      const double u0 = std::atanh(sn0);
      const double u = omega * t + u0;
      psi = j * pi + sgn * gudermannian(u);
      dpsi = sgn * omega / std::cosh(u);
      break;
    }
  }
  out.theta = psi - half_rho;
  out.theta_dot = dpsi;
  return out;
}

}  // namespace srgeo
