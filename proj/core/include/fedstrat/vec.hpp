#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace fedstrat {

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double l2_norm(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace fedstrat
