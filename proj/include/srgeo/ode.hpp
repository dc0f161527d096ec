// Embedded Runge-Kutta 5(4) integrator of Dormand and Prince with PI step
// control and the standard quartic continuous extension.
//
// The integrator is generic over the state dimension. Integration may run
// forward or backward in time. An optional stop predicate terminates the
// solve at the first time the predicate becomes true; that time is located
// by bisection on the dense output.

#ifndef SRGEO_ODE_HPP
#define SRGEO_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace srgeo {

template <std::size_t N>
using Vec = std::array<double, N>;

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 2'000'000;
  double stop_time_tol = 1e-12;
};

struct IntegratorStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
  double tolerance = 0.0;
};

// Piecewise quartic dense output over the accepted steps.
template <std::size_t N>
class DenseSolution {
 public:
  struct Step {
    double t_old;
    double h;
    std::array<Vec<N>, 5> coeff;
  };

  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  double direction() const { return direction_; }
  bool contains(double t) const {
    const double lo = std::min(t_begin(), t_end());
    const double hi = std::max(t_begin(), t_end());
    return t >= lo && t <= hi;
  }

  const std::vector<double>& times() const { return times_; }
  const std::vector<Vec<N>>& states() const { return states_; }
  const std::vector<Step>& steps() const { return steps_; }
  const IntegratorStats& stats() const { return stats_; }

  // Time at which the stop predicate fired, if it did.
  std::optional<double> stop_time() const { return stop_time_; }

  // Records the caller-facing tolerance in the statistics.
  void set_tolerance(double tol) { stats_.tolerance = tol; }

  Vec<N> eval(double t) const {
    if (!contains(t)) {
      throw std::out_of_range("DenseSolution::eval: t outside solution window");
    }
    if (steps_.empty()) return states_.front();
    const std::size_t i = locate(t);
    if (t == times_[i]) return states_[i];
    if (t == times_[i + 1]) return states_[i + 1];
    return interpolate(steps_[i], t);
  }

  // Index i of the step with t in [times_[i], times_[i+1]].
  std::size_t locate(double t) const {
    const double s = direction_ * t;
    auto it = std::upper_bound(times_.begin(), times_.end(), s,
                               [this](double v, double ti) { return v < direction_ * ti; });
    std::size_t i = static_cast<std::size_t>(std::distance(times_.begin(), it));
    i = (i == 0) ? 0 : i - 1;
    return std::min(i, steps_.size() - 1);
  }

  static Vec<N> interpolate(const Step& st, double t) {
    const double th = (t - st.t_old) / st.h;
    const double th1 = 1.0 - th;
    Vec<N> y{};
    for (std::size_t k = 0; k < N; ++k) {
      y[k] = st.coeff[0][k] +
             th * (st.coeff[1][k] +
                   th1 * (st.coeff[2][k] + th * (st.coeff[3][k] + th1 * st.coeff[4][k])));
    }
    return y;
  }

 private:
  template <std::size_t M, class F, class S>
  friend DenseSolution<M> dormand_prince(F&&, double, const Vec<M>&, double,
                                         const IntegratorOptions&, S&&);

  std::vector<double> times_;
  std::vector<Vec<N>> states_;
  std::vector<Step> steps_;
  IntegratorStats stats_;
  double direction_ = 1.0;
  std::optional<double> stop_time_;
};

namespace detail {

struct NeverStop {
  template <class T, class Y>
  bool operator()(T, const Y&) const { return false; }
};

template <std::size_t N>
double error_norm(const Vec<N>& err, const Vec<N>& y0, const Vec<N>& y1, double atol,
                  double rtol) {
  double acc = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double sk = atol + rtol * std::max(std::abs(y0[k]), std::abs(y1[k]));
    const double r = err[k] / sk;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(N));
}

}  // namespace detail

// Integrates y' = f(t, y) from t0 to t1. `stop(t, y)` returning true ends the
// integration at the first such time (located to opts.stop_time_tol).
template <std::size_t N, class F, class S>
DenseSolution<N> dormand_prince(F&& f, double t0, const Vec<N>& y0, double t1,
                                const IntegratorOptions& opts, S&& stop) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) {
    throw std::invalid_argument("dormand_prince: tolerances must be positive");
  }

  DenseSolution<N> sol;
  sol.direction_ = (t1 >= t0) ? 1.0 : -1.0;
  sol.stats_.tolerance = opts.rtol;
  sol.times_.push_back(t0);
  sol.states_.push_back(y0);

  auto eval_f = [&](double t, const Vec<N>& y) {
    ++sol.stats_.evaluations;
    return f(t, y);
  };

  if (t1 == t0 || stop(t0, y0)) {
    if (t1 != t0) sol.stop_time_ = t0;
    return sol;
  }

  const double dir = sol.direction_;
  const double span = std::abs(t1 - t0);
  Vec<N> y = y0;
  double t = t0;
  Vec<N> k1 = eval_f(t, y);

  // Initial step guess (Hairer, Norsett & Wanner).
  double h = opts.initial_step;
  if (h <= 0.0) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      const double sk = opts.atol + opts.rtol * std::abs(y[k]);
      dnf += (k1[k] / sk) * (k1[k] / sk);
      dny += (y[k] / sk) * (y[k] / sk);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, opts.max_step);
    Vec<N> y1{};
    for (std::size_t k = 0; k < N; ++k) y1[k] = y[k] + dir * h * k1[k];
    const Vec<N> f1 = eval_f(t + dir * h, y1);
    double der2 = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      const double sk = opts.atol + opts.rtol * std::abs(y[k]);
      const double dd = (f1[k] - k1[k]) / sk;
      der2 += dd * dd;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = (der12 <= 1e-15) ? std::max(1e-6, std::abs(h) * 1e-3)
                                       : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * std::abs(h), h1, opts.max_step});
  }
  h = std::min(h, span);

  constexpr double safe = 0.9, facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0, beta = 0.04;
  const double expo1 = 0.2 - beta * 0.75;
  double facold = 1e-4;
  bool reject = false;
  bool last = false;

  Vec<N> k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  while (!last) {
    if (sol.stats_.steps + sol.stats_.rejected >= opts.max_steps) {
      throw IntegrationError("dormand_prince: maximum number of steps exceeded");
    }
    const double remaining = std::abs(t1 - t);
    if (h >= remaining * (1.0 - 1e-14)) {
      h = remaining;
      last = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw IntegrationError("dormand_prince: step size underflow at t = " + std::to_string(t));
    }
    const double hs = dir * h;

    for (std::size_t k = 0; k < N; ++k) ytmp[k] = y[k] + hs * a21 * k1[k];
    k2 = eval_f(t + c2 * hs, ytmp);
    for (std::size_t k = 0; k < N; ++k) ytmp[k] = y[k] + hs * (a31 * k1[k] + a32 * k2[k]);
    k3 = eval_f(t + c3 * hs, ytmp);
    for (std::size_t k = 0; k < N; ++k)
      ytmp[k] = y[k] + hs * (a41 * k1[k] + a42 * k2[k] + a43 * k3[k]);
    k4 = eval_f(t + c4 * hs, ytmp);
    for (std::size_t k = 0; k < N; ++k)
      ytmp[k] = y[k] + hs * (a51 * k1[k] + a52 * k2[k] + a53 * k3[k] + a54 * k4[k]);
    k5 = eval_f(t + c5 * hs, ytmp);
    for (std::size_t k = 0; k < N; ++k)
      ytmp[k] =
          y[k] + hs * (a61 * k1[k] + a62 * k2[k] + a63 * k3[k] + a64 * k4[k] + a65 * k5[k]);
    const double tnew = last ? t1 : t + hs;
    k6 = eval_f(t + hs, ytmp);
    for (std::size_t k = 0; k < N; ++k)
      ynew[k] =
          y[k] + hs * (a71 * k1[k] + a73 * k3[k] + a74 * k4[k] + a75 * k5[k] + a76 * k6[k]);
    k7 = eval_f(tnew, ynew);
    for (std::size_t k = 0; k < N; ++k)
      err[k] = hs * (e1 * k1[k] + e3 * k3[k] + e4 * k4[k] + e5 * k5[k] + e6 * k6[k] +
                     e7 * k7[k]);

    bool finite = true;
    for (std::size_t k = 0; k < N; ++k) finite = finite && std::isfinite(ynew[k]);
    const double en = finite ? detail::error_norm<N>(err, y, ynew, opts.atol, opts.rtol)
                             : std::numeric_limits<double>::infinity();

    const double fac11 = std::pow(std::max(en, 1e-300), expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::max(facc2, std::min(facc1, fac / safe));
    double hnew = h / fac;

    if (en <= 1.0) {
      facold = std::max(en, 1e-4);
      ++sol.stats_.steps;

      typename DenseSolution<N>::Step st;
      st.t_old = t;
      st.h = hs;
      for (std::size_t k = 0; k < N; ++k) {
        const double ydiff = ynew[k] - y[k];
        const double bspl = hs * k1[k] - ydiff;
        st.coeff[0][k] = y[k];
        st.coeff[1][k] = ydiff;
        st.coeff[2][k] = bspl;
        st.coeff[3][k] = ydiff - hs * k7[k] - bspl;
        st.coeff[4][k] =
            hs * (d1 * k1[k] + d3 * k3[k] + d4 * k4[k] + d5 * k5[k] + d6 * k6[k] + d7 * k7[k]);
      }

      if (stop(tnew, ynew)) {
        // Bisect the crossing inside this step on the interpolant.
        double lo = t, hi = tnew;
        while (std::abs(hi - lo) > opts.stop_time_tol) {
          const double mid = 0.5 * (lo + hi);
          if (mid == lo || mid == hi) break;
          if (stop(mid, DenseSolution<N>::interpolate(st, mid))) hi = mid;
          else lo = mid;
        }
        sol.steps_.push_back(st);
        sol.times_.push_back(hi);
        sol.states_.push_back(DenseSolution<N>::interpolate(st, hi));
        sol.stop_time_ = hi;
        return sol;
      }

      sol.steps_.push_back(st);
      sol.times_.push_back(tnew);
      sol.states_.push_back(ynew);
      k1 = k7;
      y = ynew;
      t = tnew;
      hnew = std::min(hnew, opts.max_step);
      if (reject) hnew = std::min(hnew, h);
      reject = false;
    } else {
      hnew = h / std::min(facc1, fac11 / safe);
      reject = true;
      last = false;
      ++sol.stats_.rejected;
    }
    h = hnew;
  }
  return sol;
}

template <std::size_t N, class F>
DenseSolution<N> dormand_prince(F&& f, double t0, const Vec<N>& y0, double t1,
                                const IntegratorOptions& opts) {
  return dormand_prince<N>(std::forward<F>(f), t0, y0, t1, opts, detail::NeverStop{});
}

}  // namespace srgeo

#endif  // SRGEO_ODE_HPP
