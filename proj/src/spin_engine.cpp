#include "fockphase/spin_engine.hpp"

#include <cmath>
#include <cstdio>

#include "fockphase/angles.hpp"
#include "fockphase/errors.hpp"
#include "fockphase/initial_phase.hpp"
#include "fockphase/phase_engine.hpp"

namespace fockphase {

AnglePolicy AnglePolicy::fixed(double theta0) {
  return {.kind = Kind::fixed, .theta0 = canonical_angle(theta0), .delta = 0.0, .fallback = 0.0};
}

AnglePolicy AnglePolicy::alternating(double theta0, double delta) {
  return {.kind = Kind::alternating, .theta0 = canonical_angle(theta0), .delta = delta,
          .fallback = 0.0};
}

AnglePolicy AnglePolicy::perpendicular(double fallback) {
  return {.kind = Kind::perpendicular_feedback, .theta0 = 0.0, .delta = 0.0,
          .fallback = canonical_angle(fallback)};
}

std::string AnglePolicy::id() const {
  char buf[96];
  switch (kind) {
    case Kind::fixed:
      std::snprintf(buf, sizeof buf, "fixed(%.17g)", theta0);
      break;
    case Kind::alternating:
      std::snprintf(buf, sizeof buf, "alternating(%.17g,%.17g)", theta0, delta);
      break;
    case Kind::perpendicular_feedback:
      std::snprintf(buf, sizeof buf, "perpendicular(%.17g)", fallback);
      break;
  }
  return buf;
}

double next_angle(const AnglePolicy& policy, const PhaseDistribution& posterior, std::size_t step) {
  switch (policy.kind) {
    case AnglePolicy::Kind::fixed:
      return canonical_angle(policy.theta0);
    case AnglePolicy::Kind::alternating:
      return canonical_angle(policy.theta0 + static_cast<double>(step) * policy.delta);
    case AnglePolicy::Kind::perpendicular_feedback: {
      const auto stats = circular_stats(posterior);
      if (stats.resultant < 1e-6 || !stats.mean) return canonical_angle(policy.fallback);
      return canonical_angle(*stats.mean + pi / 2.0);
    }
  }
  return 0.0;
}

double wallis_reference(std::int64_t p_plus, std::int64_t p_minus) {
  if (p_plus < 0 || p_minus < 0) {
    throw Error(ErrorKind::invalid_input, "Wallis counts must be nonnegative");
  }
  const double a = static_cast<double>(p_plus);
  const double b = static_cast<double>(p_minus);
  return std::exp(std::lgamma(a + 0.5) + std::lgamma(b + 0.5) - std::log(pi) -
                  std::lgamma(a + b + 1.0));
}

double wallis_composition(std::int64_t p_plus, std::int64_t p_minus) {
  const double a = static_cast<double>(p_plus);
  const double b = static_cast<double>(p_minus);
  const double log_binomial = std::lgamma(a + b + 1.0) - std::lgamma(a + 1.0) - std::lgamma(b + 1.0);
  return std::exp(log_binomial) * wallis_reference(p_plus, p_minus);
}

double RemotePrediction::expected_spin(double theta) const {
  return magnitude * confidence * std::cos(theta - axis);
}

RemotePrediction predict_remote_orientation(const PhaseDistribution& posterior,
                                            std::size_t site, const GeneralModePair& modes,
                                            const CondensateSpec& spec) {
  if (site >= modes.size()) throw Error(ErrorKind::invalid_input, "site outside the mode tables");
  const auto xi = modes.relative_phase(site);
  if (!xi) {
    throw Error(ErrorKind::no_orientation, "orbitals do not overlap at the requested point");
  }
  const auto stats = circular_stats(posterior);
  RemotePrediction out;
  out.axis = canonical_angle(stats.mean.value_or(0.0) - *xi);
  out.confidence = stats.resultant;
  out.magnitude = 2.0 * std::sqrt(static_cast<double>(spec.n_a) * static_cast<double>(spec.n_b)) *
                  modes.overlap(site);
  return out;
}

RegionRun run_region_experiment(std::uint64_t seed, std::size_t event_count,
                                const AnglePolicy& policy, const RegionLayout& layout,
                                const CondensateSpec& spec, const RegionNames& names,
                                SnapshotMode snapshots) {
  CondensateSpec local = spec;
  local.tabulated = layout.mode_pair();
  local.spinful = true;
  const auto model = EventFactorModel::from_spec(local);
  const auto plan = CandidatePlan::spin_sites({layout.index_of(names.measured)}, policy);
  auto record = sample_record(seed, event_count, plan,
                              uniform_prior(default_posterior_grid(event_count)), model, snapshots);
  const auto& modes = *local.tabulated;
  auto near = predict_remote_orientation(record.posterior, layout.index_of(names.near), modes, local);
  auto far = predict_remote_orientation(record.posterior, layout.index_of(names.far), modes, local);
  return {std::move(record), near, far};
}

}  // namespace fockphase
