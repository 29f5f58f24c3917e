#include "fockphase/sampling.hpp"

#include <algorithm>

#include "fockphase/angles.hpp"
#include "fockphase/errors.hpp"

namespace fockphase {

std::size_t sample_index(std::span<const double> weights, double uniform01) {
  std::vector<double> cumulative(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total += weights[i];
    cumulative[i] = total;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorKind::zero_probability_record, "every candidate has zero probability");
  }
  const double target = uniform01 * total;
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) {
    // uniform01 rounding up to total: take the last candidate with mass.
    it = std::lower_bound(cumulative.begin(), cumulative.end(), total);
  }
  return static_cast<std::size_t>(it - cumulative.begin());
}

CandidatePlan CandidatePlan::position_grid(std::size_t count) {
  if (count == 0) throw Error(ErrorKind::invalid_input, "candidate grid must not be empty");
  CandidatePlan plan;
  plan.kind = EventKind::position;
  plan.u_values.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    plan.u_values[k] = two_pi * static_cast<double>(k) / static_cast<double>(count);
  }
  return plan;
}

CandidatePlan CandidatePlan::spin_grid(std::size_t count, AnglePolicy policy) {
  CandidatePlan plan = position_grid(count);
  plan.kind = EventKind::spin;
  plan.policy = policy;
  return plan;
}

CandidatePlan CandidatePlan::spin_at_u(double u, AnglePolicy policy) {
  CandidatePlan plan;
  plan.kind = EventKind::spin;
  plan.u_values = {canonical_angle(u)};
  plan.policy = policy;
  return plan;
}

CandidatePlan CandidatePlan::spin_sites(std::vector<std::size_t> sites, AnglePolicy policy) {
  if (sites.empty()) throw Error(ErrorKind::invalid_input, "candidate site list must not be empty");
  CandidatePlan plan;
  plan.kind = EventKind::spin;
  plan.sites = std::move(sites);
  plan.policy = policy;
  return plan;
}

CandidatePlan CandidatePlan::position_sites(std::vector<std::size_t> sites) {
  if (sites.empty()) throw Error(ErrorKind::invalid_input, "candidate site list must not be empty");
  CandidatePlan plan;
  plan.kind = EventKind::position;
  plan.sites = std::move(sites);
  return plan;
}

std::string CandidatePlan::policy_id() const {
  return kind == EventKind::position ? "position" : policy.id();
}

namespace {

std::vector<DetectionEvent> build_candidates(const CandidatePlan& plan, double theta) {
  std::vector<DetectionEvent> out;
  const bool by_site = !plan.sites.empty();
  const std::size_t count = by_site ? plan.sites.size() : plan.u_values.size();
  if (count == 0) throw Error(ErrorKind::invalid_input, "candidate plan has no locations");
  out.reserve(plan.kind == EventKind::spin ? 2 * count : count);
  for (std::size_t i = 0; i < count; ++i) {
    if (plan.kind == EventKind::position) {
      out.push_back(by_site ? DetectionEvent::position_at(plan.sites[i])
                            : DetectionEvent::position(plan.u_values[i]));
    } else {
      for (int eta : {+1, -1}) {
        out.push_back(by_site ? DetectionEvent::spin_at(plan.sites[i], theta, eta)
                              : DetectionEvent::spin(plan.u_values[i], theta, eta));
      }
    }
  }
  return out;
}

}  // namespace

MeasurementRecord sample_record(std::uint64_t seed, std::size_t event_count,
                                const CandidatePlan& plan, const PhaseDistribution& prior,
                                const EventFactorModel& model, SnapshotMode snapshots) {
  MeasurementRecord record{.events = {},
                           .snapshots = {},
                           .posterior = prior,
                           .seed = seed,
                           .policy = plan.policy_id()};
  record.events.reserve(event_count);
  record.snapshots.reserve(event_count);
  UniformStream uniform(seed);

  // Position candidates do not depend on the posterior; build them once.
  std::vector<DetectionEvent> candidates;
  if (plan.kind == EventKind::position) candidates = build_candidates(plan, 0.0);

  for (std::size_t step = 0; step < event_count; ++step) {
    if (plan.kind == EventKind::spin) {
      candidates = build_candidates(plan, next_angle(plan.policy, record.posterior, step));
    }
    const auto weights = predictive_density(record.posterior, candidates, model);
    const DetectionEvent event = candidates[sample_index(weights, uniform.next())];
    record.posterior = posterior_update(record.posterior, event, model);
    record.events.push_back(event);
    Snapshot snap{.stats = circular_stats(record.posterior), .density = std::nullopt};
    if (snapshots == SnapshotMode::full) snap.density = record.posterior;
    record.snapshots.push_back(std::move(snap));
  }
  return record;
}

}  // namespace fockphase
