// Fourth-order central difference stencils on uniformly spaced samples.

#ifndef SRGEO_FINITE_DIFFERENCE_HPP
#define SRGEO_FINITE_DIFFERENCE_HPP

#include <array>

namespace srgeo::fd {

// Samples at offsets -2h, -h, 0, h, 2h.
template <class T>
T first(const std::array<T, 5>& f, double h) {
  return (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
}

template <class T>
T second(const std::array<T, 5>& f, double h) {
  return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
}

// Samples at offsets -3h .. 3h.
template <class T>
T third(const std::array<T, 7>& f, double h) {
  return (f[0] / 8.0 - f[1] + 13.0 / 8.0 * f[2] - 13.0 / 8.0 * f[4] + f[5] - f[6] / 8.0) /
         (h * h * h);
}

inline constexpr std::array<double, 5> kOffsets5 = {-2.0, -1.0, 0.0, 1.0, 2.0};
inline constexpr std::array<double, 7> kOffsets7 = {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0};

}  // namespace srgeo::fd

#endif  // SRGEO_FINITE_DIFFERENCE_HPP
