#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fockphase/core_model.hpp"
#include "fockphase/three_mode.hpp"

namespace fockphase {

/// Approximation-free sequence probabilities on double Fock states.
///
/// Detections at distinct points commute, so the product of detection
/// operators can be normal ordered. Restricted to the occupied modes each
/// detection is a bilinear Σ W[m′][m] c†_{m′} c_m, and on |N_a, N_b> only
/// products that create as many a-quanta as they destroy survive, each
/// weighted by (N_a)_m (N_b)_{P−m}. The transfer DP tracks how many
/// annihilators and creators picked mode a so far; the final contraction
/// keeps the balanced states. Replacing the falling factorials with powers
/// N_a^m N_b^{P−m} reproduces the phase-integral result exactly.

enum class WeightMode { falling_factorial, power };

const char* to_string(WeightMode mode);

/// W[creation][annihilation], mode index 0 = a, 1 = b.
using TransferMatrix = std::array<std::array<std::complex<double>, 2>, 2>;
using TransferMatrix3 = std::array<std::array<std::complex<double>, 3>, 3>;

struct OracleResult {
  double value = 0.0;   ///< may overflow to +inf for astronomically large N^P
  double scaled = 0.0;  ///< value / N^P, always finite
  WeightMode mode = WeightMode::falling_factorial;
  std::size_t events = 0;
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
};

/// Coefficients e_0..e_P of Π(1 + z_i t).
std::vector<std::complex<double>> elementary_symmetric(std::span<const std::complex<double>> z);

/// log((n)_m) = log n(n−1)…(n−m+1); −inf when m > n.
double log_falling_factorial(std::int64_t n, std::int64_t m);

/// Detection operator of one event in the spec's two occupied modes.
TransferMatrix transfer_matrix(const DetectionEvent& event, const CondensateSpec& spec);

/// Transverse spin σ_θ at one site (no density part, no ½).
TransferMatrix spin_transfer_matrix(std::size_t site, double theta, const CondensateSpec& spec);

/// Σ_m D_m w(m) by the O(P³) transfer DP.
OracleResult exact_sequence_probability(std::span<const DetectionEvent> events,
                                        const CondensateSpec& spec, WeightMode mode);

/// Same quantity by expanding all 4^P operator choices. Capped at P ≤ 10.
OracleResult brute_force_sequence_probability(std::span<const DetectionEvent> events,
                                              const CondensateSpec& spec, WeightMode mode);

/// Three plane-wave modes, paired count-vector DP in O(P⁵). Capped at
/// P ≤ `max_events` (default 15).
OracleResult exact_sequence_probability3(std::span<const ThreeModeEvent> events,
                                         const CondensateSpec& spec, WeightMode mode,
                                         std::size_t max_events = 15);

/// Dense two-mode cross-check for plane-wave specs: applies each local
/// detection operator c = φ_a a + φ_b b (spin: (φ_a a + η e^{−iθ} φ_b b)/√2)
/// to the Fock vector and returns ‖c_P…c_1|N_a,N_b>‖², which equals the
/// normal-ordered projector product. Requires N ≤ 4000.
double twomode_spin_sequential(const CondensateSpec& spec, std::span<const DetectionEvent> events);

/// <:Π n(r_i):> for the spinful density n = |φ_a|² a†a + |φ_b|² b†b at the
/// event sites; the sum of spin sequence probabilities over all η patterns.
OracleResult spin_density_expectation(std::span<const DetectionEvent> events,
                                      const CondensateSpec& spec, WeightMode mode);

/// <Π P_i · σ_θ(r*)> / <Π P_i> for a region layout. Throws
/// zero_probability_record when the record itself is impossible.
double remote_orientation_exact(std::span<const DetectionEvent> record, std::size_t target_site,
                                double theta, const RegionLayout& layout,
                                const CondensateSpec& spec,
                                WeightMode mode = WeightMode::falling_factorial);

}  // namespace fockphase
