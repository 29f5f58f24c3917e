#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "fockphase/phase_distribution.hpp"

namespace fockphase {

inline constexpr std::size_t default_prior_grid = 4096;

/// Dense amplitudes x_Q over the window Q ∈ [q_min, q_min + size).
///
/// x_Q is the amplitude of |N_a − Q, N_b + Q>: Q counts particles moved into
/// mode b. With this labeling the prior lives in the same phase variable as
/// the event factors cos(u + θ − Φ), and a coherent table with phase Θ peaks
/// at Φ = Θ.
struct CoefficientTable {
  std::int64_t q_min = 0;
  std::vector<std::complex<double>> values;

  std::int64_t q_max() const { return q_min + static_cast<std::int64_t>(values.size()) - 1; }
  double norm_squared() const;
};

/// Fixed-total slice of a general number superposition: N = total, and the
/// table is indexed by Q with N_a = N/2 − Q, N_b = N/2 + Q.
struct NumberSlice {
  std::int64_t total = 0;
  CoefficientTable coefficients;
};

struct NumberSuperposition {
  std::vector<NumberSlice> slices;
};

struct CoherentSpec {
  double modulus = 0.0;
  double phase = 0.0;
  std::int64_t q_max = 0;
};

/// Rescales a table to Σ|x_Q|² = 1. Throws invalid_input when all are zero.
CoefficientTable normalized(CoefficientTable table);

/// Checks Σ|x|² = 1 within 1e-9 and max|Q| ≤ min(N_a, N_b)/10. Throws
/// invalid_spec on violation.
void validate_superposition(const CoefficientTable& table, std::int64_t n_a, std::int64_t n_b);

PhaseDistribution uniform_prior(std::size_t grid_size = default_prior_grid);

/// G(Φ) ∝ |Σ_Q x_Q e^{−iQΦ}|², normalized on the grid.
PhaseDistribution g_from_coefficients(const CoefficientTable& table,
                                      std::size_t grid_size = default_prior_grid);

/// Poisson amplitudes e^{−|α|²/2} α^Q / √(Q!) for Q = 0..q_max, evaluated in
/// log space. Throws truncation when the discarded tail weight is ≥ 1e-12.
CoefficientTable coherent_coefficients(const CoherentSpec& spec);

/// Smallest q_max whose discarded Poisson tail is below 1e-12.
std::int64_t coherent_cutoff(double modulus);

/// G(Φ) = Σ_N |Σ_Q x_{N,Q} e^{−iQΦ}|², normalized on the grid.
PhaseDistribution g_general(const NumberSuperposition& state,
                            std::size_t grid_size = default_prior_grid);

/// Reads a `Q,re,im` CSV (header row required). Missing Q values inside the
/// window are zero; the result is normalized.
CoefficientTable load_coefficients_csv(const std::filesystem::path& path);

}  // namespace fockphase
