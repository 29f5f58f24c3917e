#pragma once

#include <numbers>

namespace fockphase {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Maps any finite angle into [0, 2π). Values that round to 2π map to 0.
double canonical_angle(double angle);

/// Signed difference a − b folded into (−π, π].
double angle_difference(double a, double b);

}  // namespace fockphase
