#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fockphase/angle_policy.hpp"
#include "fockphase/core_model.hpp"
#include "fockphase/phase_distribution.hpp"
#include "fockphase/phase_engine.hpp"

namespace fockphase {

inline constexpr std::size_t default_candidate_grid = 1024;

/// Portable U[0,1) stream: 53 high bits of mt19937_64, identical on every
/// standard library.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Index drawn by inverse CDF over nonnegative weights. Zero-weight entries
/// are never selected. Throws zero_probability_record if all weights vanish.
std::size_t sample_index(std::span<const double> weights, double uniform01);

/// Where the next detection may land. Plane-wave runs list reduced
/// coordinates; tabulated runs list sites (sites win when both are set).
/// Spin plans pair every location with both results η = ±1.
struct CandidatePlan {
  EventKind kind = EventKind::position;
  std::vector<double> u_values;
  std::vector<std::size_t> sites;
  AnglePolicy policy;

  static CandidatePlan position_grid(std::size_t count = default_candidate_grid);
  static CandidatePlan spin_grid(std::size_t count, AnglePolicy policy);
  static CandidatePlan spin_at_u(double u, AnglePolicy policy);
  static CandidatePlan spin_sites(std::vector<std::size_t> sites, AnglePolicy policy);
  static CandidatePlan position_sites(std::vector<std::size_t> sites);

  std::string policy_id() const;
};

enum class SnapshotMode { full, summary };

struct Snapshot {
  CircularStats stats;
  std::optional<PhaseDistribution> density;  ///< present in full mode
};

struct MeasurementRecord {
  std::vector<DetectionEvent> events;
  std::vector<Snapshot> snapshots;  ///< one per event, after that event
  PhaseDistribution posterior;      ///< final posterior (the prior when empty)
  std::uint64_t seed = 0;
  std::string policy;
};

/// Draws P detections one at a time: each from the predictive density over
/// the candidate plan, followed by a Bayes update. Deterministic per seed.
MeasurementRecord sample_record(std::uint64_t seed, std::size_t event_count,
                                const CandidatePlan& plan, const PhaseDistribution& prior,
                                const EventFactorModel& model,
                                SnapshotMode snapshots = SnapshotMode::full);

}  // namespace fockphase
