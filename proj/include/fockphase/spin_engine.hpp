#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "fockphase/angle_policy.hpp"
#include "fockphase/core_model.hpp"
#include "fockphase/phase_distribution.hpp"
#include "fockphase/sampling.hpp"

namespace fockphase {

/// ∫ dΦ/2π cos^{2P₊}(Φ/2) sin^{2P₋}(Φ/2) = Γ(P₊+½)Γ(P₋+½) / (π Γ(P₊+P₋+1)),
/// evaluated in log space. This is the probability of one ordered record of
/// equal-angle spin results with P₊ ups and P₋ downs.
double wallis_reference(std::int64_t p_plus, std::int64_t p_minus);

/// Probability of seeing P₊ ups and P₋ downs in any order:
/// C(P₊+P₋, P₊) · wallis_reference(P₊, P₋).
double wallis_composition(std::int64_t p_plus, std::int64_t p_minus);

/// Transverse orientation expected at a remote point, split into what the
/// posterior knows (axis, confidence) and how big the pointer is.
struct RemotePrediction {
  double axis = 0.0;        ///< θ* in [0, 2π)
  double confidence = 0.0;  ///< posterior resultant length L
  double magnitude = 0.0;   ///< 2√(N_a N_b)·|φ_a(r*)φ_b(r*)|

  /// <σ_θ(r*)> = magnitude · L · cos(θ − θ*)
  double expected_spin(double theta) const;

  friend bool operator==(const RemotePrediction&, const RemotePrediction&) = default;
};

/// θ* = μ − ξ(r*) (maximizer of cos(ξ + θ − Φ) at the posterior mean).
/// When the posterior has no mean, θ* = −ξ(r*) with zero confidence. Throws
/// no_orientation where the two orbitals do not overlap.
RemotePrediction predict_remote_orientation(const PhaseDistribution& posterior,
                                            std::size_t site, const GeneralModePair& modes,
                                            const CondensateSpec& spec);

struct RegionNames {
  std::string measured = "D";
  std::string near = "D'";
  std::string far = "D''";
};

struct RegionRun {
  MeasurementRecord record;
  RemotePrediction near;
  RemotePrediction far;
};

/// Samples P spin detections confined to the measured region, then predicts
/// the transverse orientation in the near and far regions.
RegionRun run_region_experiment(std::uint64_t seed, std::size_t event_count,
                                const AnglePolicy& policy, const RegionLayout& layout,
                                const CondensateSpec& spec, const RegionNames& names = {},
                                SnapshotMode snapshots = SnapshotMode::summary);

}  // namespace fockphase
