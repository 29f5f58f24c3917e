#include "fockphase/phase_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fockphase/errors.hpp"
#include "trig_table.hpp"

namespace fockphase {

namespace {

constexpr std::size_t kLogSpaceThreshold = 1000;
constexpr double kMassFloor = 1e-300;

void require_one_dimensional(const PhaseDistribution& dist) {
  if (dist.dimension() != 1) {
    throw Error(ErrorKind::invalid_input, "two-mode engine needs a 1-D phase distribution");
  }
}

void require_exact_quadrature(const PhaseDistribution& dist, std::size_t event_count) {
  if (dist.grid_size() < event_count + 1) {
    throw Error(ErrorKind::quadrature_degree,
                "grid of " + std::to_string(dist.grid_size()) + " points cannot integrate " +
                    std::to_string(event_count) + " fringe factors exactly (need M >= P+1)");
  }
}

}  // namespace

double FringeFactor::operator()(double phi) const {
  const double value = mean + amplitude.real() * std::cos(phi) + amplitude.imag() * std::sin(phi);
  return std::max(0.0, value);
}

EventFactorModel EventFactorModel::plane_wave(double contrast) {
  if (!(contrast >= 0.0 && contrast <= 1.0)) {
    throw Error(ErrorKind::invalid_spec, "contrast must lie in [0, 1]");
  }
  EventFactorModel model;
  model.contrast_ = contrast;
  return model;
}

EventFactorModel EventFactorModel::from_spec(const CondensateSpec& spec) {
  if (spec.n_c != 0) {
    throw Error(ErrorKind::invalid_spec, "two-mode factor model requested for a three-mode spec");
  }
  EventFactorModel model = plane_wave(spec.contrast());
  const double total = static_cast<double>(spec.n_a + spec.n_b);
  model.frac_a_ = static_cast<double>(spec.n_a) / total;
  model.frac_b_ = static_cast<double>(spec.n_b) / total;
  model.modes_ = spec.tabulated;
  return model;
}

FringeFactor EventFactorModel::fringe(const DetectionEvent& event) const {
  double density = 1.0;
  std::complex<double> cross = std::polar(1.0, event.u);
  if (modes_) {
    if (!event.site || *event.site >= modes_->size()) {
      throw Error(ErrorKind::invalid_input, "tabulated model needs an event site inside the grid");
    }
    const auto a = modes_->phi_a(*event.site);
    const auto b = modes_->phi_b(*event.site);
    density = frac_a_ * std::norm(a) + frac_b_ * std::norm(b);
    cross = a * std::conj(b);
  } else if (event.site) {
    throw Error(ErrorKind::invalid_input, "site-addressed event used with a plane-wave model");
  }

  FringeFactor f;
  if (event.kind == EventKind::position) {
    f.mean = density;
    f.amplitude = contrast_ * cross;
  } else {
    f.mean = 0.5 * density;
    f.amplitude = 0.5 * contrast_ * static_cast<double>(event.eta) *
                  std::polar(1.0, event.theta) * cross;
  }
  return f;
}

double event_factor(const DetectionEvent& event, double phi, const EventFactorModel& model) {
  return model.fringe(event)(phi);
}

std::size_t default_posterior_grid(std::size_t event_count) {
  return std::max<std::size_t>(4096, 2 * event_count + 2);
}

double sequence_probability(std::span<const DetectionEvent> events, const PhaseDistribution& prior,
                            const EventFactorModel& model) {
  if (events.size() > kLogSpaceThreshold) {
    return std::exp(log_sequence_probability(events, prior, model));
  }
  require_one_dimensional(prior);
  require_exact_quadrature(prior, events.size());
  std::vector<FringeFactor> factors;
  factors.reserve(events.size());
  for (const auto& e : events) factors.push_back(model.fringe(e));

  const auto& trig = detail::trig_table(prior.grid_size());
  double total = 0.0;
  for (std::size_t j = 0; j < prior.grid_size(); ++j) {
    double product = prior[j];
    for (const auto& f : factors) {
      product *= std::max(0.0, f.mean + f.amplitude.real() * trig.cos[j] +
                                   f.amplitude.imag() * trig.sin[j]);
    }
    total += product;
  }
  return total * prior.cell();
}

double log_sequence_probability(std::span<const DetectionEvent> events,
                                const PhaseDistribution& prior, const EventFactorModel& model) {
  require_one_dimensional(prior);
  require_exact_quadrature(prior, events.size());
  std::vector<FringeFactor> factors;
  factors.reserve(events.size());
  for (const auto& e : events) factors.push_back(model.fringe(e));

  const auto& trig = detail::trig_table(prior.grid_size());
  std::vector<double> logs(prior.grid_size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < prior.grid_size(); ++j) {
    double acc = std::log(prior[j]);
    for (const auto& f : factors) {
      acc += std::log(std::max(0.0, f.mean + f.amplitude.real() * trig.cos[j] +
                                        f.amplitude.imag() * trig.sin[j]));
    }
    logs[j] = acc;
    peak = std::max(peak, acc);
  }
  if (peak == -std::numeric_limits<double>::infinity()) return peak;
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - peak);
  return peak + std::log(sum * prior.cell());
}

PhaseDistribution posterior_update(const PhaseDistribution& dist, const DetectionEvent& event,
                                   const EventFactorModel& model) {
  require_one_dimensional(dist);
  const auto f = model.fringe(event);
  const auto& trig = detail::trig_table(dist.grid_size());
  std::vector<double> values(dist.values().begin(), dist.values().end());
  double total = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    values[j] *= std::max(0.0, f.mean + f.amplitude.real() * trig.cos[j] +
                                   f.amplitude.imag() * trig.sin[j]);
    total += values[j];
  }
  if (!(total * dist.cell() >= kMassFloor)) {
    throw Error(ErrorKind::zero_probability_record, "record has zero probability under the model");
  }
  return PhaseDistribution::from_values(dist.grid_size(), 1, std::move(values));
}

PhaseDistribution posterior_after(const PhaseDistribution& prior,
                                  std::span<const DetectionEvent> events,
                                  const EventFactorModel& model) {
  PhaseDistribution dist = prior;
  for (const auto& e : events) dist = posterior_update(dist, e, model);
  return dist;
}

std::vector<double> predictive_density(const PhaseDistribution& dist,
                                       std::span<const DetectionEvent> candidates,
                                       const EventFactorModel& model) {
  require_one_dimensional(dist);
  if (candidates.empty()) throw Error(ErrorKind::invalid_input, "empty candidate list");
  const EventKind kind = candidates.front().kind;
  // Each factor is a first-degree trigonometric polynomial, so its grid
  // average only needs the distribution's first moment.
  const std::complex<double> moment = std::conj(first_moment(dist));
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (c.kind != kind) throw Error(ErrorKind::invalid_input, "candidates must share one kind");
    const auto f = model.fringe(c);
    out.push_back(std::max(0.0, f.mean + (f.amplitude * moment).real()));
  }
  return out;
}

}  // namespace fockphase
