#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fockphase {

/// Normalized density on a uniform grid over [0,2π) (dimension 1) or
/// [0,2π)² (dimension 2). Grid point j sits at Φ_j = 2πj/M. Two-dimensional
/// values are stored row-major: index j·M + k holds (Φ_j, Φ′_k).
///
/// Invariant: Σ g · (2π/M)^d = 1 within 1e-12, all values ≥ 0, M ≥ 16.
class PhaseDistribution {
 public:
  static constexpr std::size_t min_grid = 16;

  /// Constant density 1/(2π)^d.
  static PhaseDistribution uniform(std::size_t grid_size, int dimension = 1);
  /// Rescales nonnegative values to unit mass. Throws invalid_input on
  /// negative/non-finite entries, a bad shape, or zero total mass.
  static PhaseDistribution from_values(std::size_t grid_size, int dimension,
                                       std::vector<double> values);

  int dimension() const { return dimension_; }
  std::size_t grid_size() const { return grid_size_; }
  std::size_t point_count() const { return values_.size(); }
  /// Quadrature weight of one grid cell, (2π/M)^d.
  double cell() const;
  double angle(std::size_t j) const;

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(std::size_t j, std::size_t k) const { return values_[j * grid_size_ + k]; }
  double mass() const;

  /// Marginal over the first (axis 0) or second (axis 1) phase of a 2-D density.
  PhaseDistribution marginal(int axis) const;
  /// Distribution of (Φ + Φ′) mod 2π for a 2-D density, on the same grid.
  PhaseDistribution sum_marginal() const;
  /// Circular shift by `steps` grid cells along each axis (1-D: Φ → Φ + steps·2π/M).
  PhaseDistribution rotated(std::ptrdiff_t steps) const;

  /// Point mass at grid index j (1-D).
  static PhaseDistribution point_mass(std::size_t grid_size, std::size_t j);

 private:
  PhaseDistribution(std::size_t grid_size, int dimension, std::vector<double> values)
      : grid_size_(grid_size), dimension_(dimension), values_(std::move(values)) {}

  std::size_t grid_size_ = 0;
  int dimension_ = 1;
  std::vector<double> values_;
};

struct CircularStats {
  std::optional<double> mean;  ///< empty when the resultant length is below 1e-12
  double resultant = 0.0;      ///< snapped to 0 below 1e-12
  double circular_std = 0.0;   ///< √(−2 ln L); +inf for L = 0
};

/// Circular mean, resultant length and circular standard deviation of a 1-D
/// distribution. Throws invalid_input for 2-D input; take a marginal first.
CircularStats circular_stats(const PhaseDistribution& dist);

/// Same statistics from a known first moment E[e^{iΦ}].
CircularStats circular_stats_from_moment(std::complex<double> moment);

/// First trigonometric moment E[e^{iΦ}] by grid quadrature (1-D).
std::complex<double> first_moment(const PhaseDistribution& dist);

/// Rayleigh test of uniformity for a sample of angles. Returns the p-value.
double rayleigh_test(std::span<const double> angles);

}  // namespace fockphase
