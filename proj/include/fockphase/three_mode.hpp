#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fockphase/core_model.hpp"
#include "fockphase/phase_distribution.hpp"
#include "fockphase/sampling.hpp"

namespace fockphase {

/// Position detection among three plane waves, reduced to the pairwise
/// coordinates u_ab = (k_a−k_b)·r, u_bc = (k_b−k_c)·r, u_ca = (k_c−k_a)·r,
/// which sum to 0 mod 2π.
struct ThreeModeEvent {
  double u_ab = 0.0;
  double u_bc = 0.0;
  double u_ca = 0.0;

  /// Throws invalid_input unless the three coordinates sum to 0 mod 2π.
  static ThreeModeEvent from_coordinates(double u_ab, double u_bc, double u_ca);
  /// u_ca is implied.
  static ThreeModeEvent from_pair(double u_ab, double u_bc);
  static ThreeModeEvent at_position(const Vec3& r, const PlaneWaveModes& modes);
};

/// Pair contrasts x_ij = 3√(N_i N_j)/N.
struct ThreeModeModel {
  double x_ab = 1.0;
  double x_bc = 1.0;
  double x_ca = 1.0;

  static ThreeModeModel from_populations(std::int64_t n_a, std::int64_t n_b, std::int64_t n_c);
};

/// f(Φ,Φ′) = 1 + Re(ab·e^{−iΦ}) + Re(bc·e^{−iΦ′}) + Re(ca·e^{i(Φ+Φ′)}),
/// with each amplitude (2/3)·x_ij·e^{iu_ij}. Unit average over the torus.
struct FringeFactor3 {
  std::complex<double> ab;
  std::complex<double> bc;
  std::complex<double> ca;

  double operator()(double phi, double phi_prime) const;
};

FringeFactor3 fringe3(const ThreeModeEvent& event, const ThreeModeModel& model);

/// 1 + (2/3)[x_ab cos(u_ab−Φ) + x_bc cos(u_bc−Φ′) + x_ca cos(u_ca+Φ+Φ′)]
double event_factor3(const ThreeModeEvent& event, double phi, double phi_prime,
                     const ThreeModeModel& model);

/// 2-D analogue of sequence_probability; exact for M ≥ P + 1.
double sequence_probability3(std::span<const ThreeModeEvent> events,
                             const PhaseDistribution& prior, const ThreeModeModel& model);

PhaseDistribution posterior_update3(const PhaseDistribution& dist, const ThreeModeEvent& event,
                                    const ThreeModeModel& model);

std::vector<double> predictive_density3(const PhaseDistribution& dist,
                                        std::span<const ThreeModeEvent> candidates,
                                        const ThreeModeModel& model);

/// Default 2-D posterior grid: the smallest power of two ≥ max(64, P + 1).
std::size_t default_posterior_grid_2d(std::size_t event_count);

struct ThreeModeRecord {
  std::vector<ThreeModeEvent> events;
  std::vector<CircularStats> sum_stats;  ///< stats of (Φ+Φ′) after each event
  PhaseDistribution posterior;
  std::uint64_t seed = 0;
};

/// Samples detections on a side×side grid of (u_ab, u_bc) candidates.
ThreeModeRecord sample_record3(std::uint64_t seed, std::size_t event_count,
                               std::size_t candidate_side, const PhaseDistribution& prior,
                               const ThreeModeModel& model);

}  // namespace fockphase
