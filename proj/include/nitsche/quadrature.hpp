#pragma once

#include <array>
#include <cmath>

namespace nitsche {

struct GaussPoint {
  double x;  ///< position on [0, 1]
  double w;  ///< weight, summing to 1
};

/// 4-point Gauss-Legendre rule mapped to [0, 1]; exact through degree 7.
inline const std::array<GaussPoint, 4>& gauss4() {
  static const std::array<GaussPoint, 4> rule = [] {
    const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
    const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
    return std::array<GaussPoint, 4>{{{0.5 * (1.0 - b), 0.5 * wb},
                                      {0.5 * (1.0 - a), 0.5 * wa},
                                      {0.5 * (1.0 + a), 0.5 * wa},
                                      {0.5 * (1.0 + b), 0.5 * wb}}};
  }();
  return rule;
}

}  // namespace nitsche
