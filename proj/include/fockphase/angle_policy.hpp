#pragma once

#include <cstddef>
#include <string>

#include "fockphase/phase_distribution.hpp"

namespace fockphase {

/// How the spin measurement axis is chosen before each detection.
struct AnglePolicy {
  enum class Kind { fixed, alternating, perpendicular_feedback };

  Kind kind = Kind::fixed;
  double theta0 = 0.0;
  double delta = 0.0;
  /// Used by perpendicular feedback while the posterior has no preferred
  /// direction (resultant length below 1e-6).
  double fallback = 0.0;

  static AnglePolicy fixed(double theta0);
  static AnglePolicy alternating(double theta0, double delta);
  static AnglePolicy perpendicular(double fallback = 0.0);

  std::string id() const;
};

/// Axis for detection number `step` (0-based), canonicalized to [0, 2π).
double next_angle(const AnglePolicy& policy, const PhaseDistribution& posterior, std::size_t step);

}  // namespace fockphase
