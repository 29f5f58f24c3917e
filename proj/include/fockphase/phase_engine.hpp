#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fockphase/core_model.hpp"
#include "fockphase/phase_distribution.hpp"

namespace fockphase {

/// Sign convention used everywhere: a detection contributes
///
///   position:  ρ(r) + x·|φ_aφ_b|·cos(ξ(r) − Φ)
///   spin:      ½ [ρ(r) + x·η·|φ_aφ_b|·cos(ξ(r) + θ − Φ)]
///
/// with ρ = f_a|φ_a|² + f_b|φ_b|² (f = population fractions). For plane
/// waves |φ| = 1 and ξ = u = (k_a − k_b)·r, so the factors reduce to
/// 1 + x·cos(u − Φ) and ½[1 + x·η·cos(u + θ − Φ)]. The ½ is the spin
/// projector's: the two results at one point add up to the position factor.
/// These are the large-N per-event weights divided by N, so an engine
/// sequence probability times N^P is the power-weight exact value.

/// f(Φ) = mean + Re(amplitude · e^{−iΦ})
struct FringeFactor {
  double mean = 1.0;
  std::complex<double> amplitude;

  double operator()(double phi) const;
};

class EventFactorModel {
 public:
  /// Plane waves described only by their contrast x ∈ [0, 1].
  static EventFactorModel plane_wave(double contrast);
  /// Plane-wave or tabulated model matching a two-mode condensate.
  static EventFactorModel from_spec(const CondensateSpec& spec);

  double contrast() const { return contrast_; }
  const GeneralModePair* modes() const { return modes_.get(); }

  /// Throws invalid_input when the event addresses a site but the model is
  /// plane-wave (or vice versa), or the site is out of range.
  FringeFactor fringe(const DetectionEvent& event) const;

 private:
  double contrast_ = 1.0;
  double frac_a_ = 0.5;
  double frac_b_ = 0.5;
  std::shared_ptr<const GeneralModePair> modes_;
};

double event_factor(const DetectionEvent& event, double phi, const EventFactorModel& model);

/// Default posterior grid max(4096, 2P + 2).
std::size_t default_posterior_grid(std::size_t event_count);

/// (2π/M) Σ_j prior_j Π_i f_i(Φ_j). The integrand is a trigonometric
/// polynomial of degree P (plus the prior), so the rule is exact once
/// M ≥ P + 1; smaller grids throw quadrature_degree. The empty record gives 1.
/// Records longer than 1000 events are accumulated in log space.
double sequence_probability(std::span<const DetectionEvent> events, const PhaseDistribution& prior,
                            const EventFactorModel& model);

/// Natural log of sequence_probability; −inf for impossible records.
double log_sequence_probability(std::span<const DetectionEvent> events,
                                const PhaseDistribution& prior, const EventFactorModel& model);

/// Bayes update by one detection. Throws zero_probability_record when the
/// remaining mass falls below 1e-300.
PhaseDistribution posterior_update(const PhaseDistribution& dist, const DetectionEvent& event,
                                   const EventFactorModel& model);

PhaseDistribution posterior_after(const PhaseDistribution& prior,
                                  std::span<const DetectionEvent> events,
                                  const EventFactorModel& model);

/// Probability density of each hypothetical next event under `dist`:
/// ∫ dist(Φ) f_c(Φ) dΦ. All candidates must share one kind.
std::vector<double> predictive_density(const PhaseDistribution& dist,
                                       std::span<const DetectionEvent> candidates,
                                       const EventFactorModel& model);

}  // namespace fockphase
