#include "fockphase/three_mode.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fockphase/angles.hpp"
#include "fockphase/errors.hpp"
#include "trig_table.hpp"

namespace fockphase {

namespace {

void require_two_dimensional(const PhaseDistribution& dist) {
  if (dist.dimension() != 2) {
    throw Error(ErrorKind::invalid_input, "three-mode engine needs a 2-D phase distribution");
  }
}

// Multiplies every grid point by the factor and returns the raw sum.
double apply_factor(std::vector<double>& values, std::size_t m, const FringeFactor3& f) {
  const auto& trig = detail::trig_table(m);
  std::vector<double> col(m);
  std::vector<double> diag(2 * m);  // doubled so j + k needs no wrap
  for (std::size_t k = 0; k < m; ++k) {
    col[k] = f.bc.real() * trig.cos[k] + f.bc.imag() * trig.sin[k];
    diag[k] = f.ca.real() * trig.cos[k] - f.ca.imag() * trig.sin[k];
    diag[k + m] = diag[k];
  }
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double row = 1.0 + f.ab.real() * trig.cos[j] + f.ab.imag() * trig.sin[j];
    double* line = values.data() + j * m;
    const double* d = diag.data() + j;
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      line[k] *= std::max(0.0, row + col[k] + d[k]);
      sum += line[k];
    }
    total += sum;
  }
  return total;
}

// E[e^{−iΦ}], E[e^{−iΦ′}], E[e^{i(Φ+Φ′)}] of a normalized density, from row,
// column and wrapped-diagonal sums.
struct Moments3 {
  std::complex<double> ab;
  std::complex<double> bc;
  std::complex<double> ca;
};

Moments3 moments(std::span<const double> values, std::size_t m) {
  const auto& trig = detail::trig_table(m);
  std::vector<double> rows(m, 0.0);
  std::vector<double> cols(m, 0.0);
  std::vector<double> diag(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double* line = values.data() + j * m;
    double row = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      row += line[k];
      cols[k] += line[k];
    }
    rows[j] = row;
    for (std::size_t k = 0; k < m - j; ++k) diag[j + k] += line[k];
    for (std::size_t k = m - j; k < m; ++k) diag[j + k - m] += line[k];
  }
  const double h = two_pi / static_cast<double>(m);
  Moments3 out;
  for (std::size_t j = 0; j < m; ++j) {
    out.ab += rows[j] * std::complex<double>(trig.cos[j], -trig.sin[j]);
    out.bc += cols[j] * std::complex<double>(trig.cos[j], -trig.sin[j]);
    out.ca += diag[j] * std::complex<double>(trig.cos[j], trig.sin[j]);
  }
  out.ab *= h * h;
  out.bc *= h * h;
  out.ca *= h * h;
  return out;
}

// Factors are first-degree trig polynomials, so the predictive weight only
// needs the three first moments.
void predictive_from_moments(const Moments3& mom, std::span<const FringeFactor3> fringes,
                             std::vector<double>& out) {
  out.resize(fringes.size());
  for (std::size_t i = 0; i < fringes.size(); ++i) {
    const auto& f = fringes[i];
    out[i] = std::max(0.0, 1.0 + (f.ab * mom.ab).real() + (f.bc * mom.bc).real() +
                               (f.ca * mom.ca).real());
  }
}

}  // namespace

ThreeModeEvent ThreeModeEvent::from_coordinates(double u_ab, double u_bc, double u_ca) {
  const double residual = angle_difference(u_ab + u_bc + u_ca, 0.0);
  if (std::abs(residual) > 1e-9) {
    throw Error(ErrorKind::invalid_input, "reduced coordinates must sum to 0 mod 2π");
  }
  return {canonical_angle(u_ab), canonical_angle(u_bc), canonical_angle(u_ca)};
}

ThreeModeEvent ThreeModeEvent::from_pair(double u_ab, double u_bc) {
  return {canonical_angle(u_ab), canonical_angle(u_bc), canonical_angle(-u_ab - u_bc)};
}

ThreeModeEvent ThreeModeEvent::at_position(const Vec3& r, const PlaneWaveModes& modes) {
  return from_pair(dot(modes.k_a - modes.k_b, r), dot(modes.k_b - modes.k_c, r));
}

ThreeModeModel ThreeModeModel::from_populations(std::int64_t n_a, std::int64_t n_b,
                                                std::int64_t n_c) {
  if (n_a < 0 || n_b < 0 || n_c < 0) throw Error(ErrorKind::invalid_spec, "negative population");
  const double total = static_cast<double>(n_a + n_b + n_c);
  if (total == 0.0) throw Error(ErrorKind::invalid_spec, "empty condensate");
  auto pair = [total](std::int64_t p, std::int64_t q) {
    return 3.0 * std::sqrt(static_cast<double>(p) * static_cast<double>(q)) / total;
  };
  return {pair(n_a, n_b), pair(n_b, n_c), pair(n_c, n_a)};
}

double FringeFactor3::operator()(double phi, double phi_prime) const {
  const double value = 1.0 + (ab * std::polar(1.0, -phi)).real() +
                       (bc * std::polar(1.0, -phi_prime)).real() +
                       (ca * std::polar(1.0, phi + phi_prime)).real();
  return std::max(0.0, value);
}

FringeFactor3 fringe3(const ThreeModeEvent& event, const ThreeModeModel& model) {
  constexpr double two_thirds = 2.0 / 3.0;
  return {two_thirds * model.x_ab * std::polar(1.0, event.u_ab),
          two_thirds * model.x_bc * std::polar(1.0, event.u_bc),
          two_thirds * model.x_ca * std::polar(1.0, event.u_ca)};
}

double event_factor3(const ThreeModeEvent& event, double phi, double phi_prime,
                     const ThreeModeModel& model) {
  return fringe3(event, model)(phi, phi_prime);
}

double sequence_probability3(std::span<const ThreeModeEvent> events,
                             const PhaseDistribution& prior, const ThreeModeModel& model) {
  require_two_dimensional(prior);
  if (prior.grid_size() < events.size() + 1) {
    throw Error(ErrorKind::quadrature_degree, "2-D grid too coarse for exact quadrature (need M >= P+1)");
  }
  std::vector<double> values(prior.values().begin(), prior.values().end());
  double total = 0.0;
  for (double v : values) total += v;
  for (const auto& e : events) total = apply_factor(values, prior.grid_size(), fringe3(e, model));
  return total * prior.cell();
}

PhaseDistribution posterior_update3(const PhaseDistribution& dist, const ThreeModeEvent& event,
                                    const ThreeModeModel& model) {
  require_two_dimensional(dist);
  std::vector<double> values(dist.values().begin(), dist.values().end());
  const double total = apply_factor(values, dist.grid_size(), fringe3(event, model));
  if (!(total * dist.cell() >= 1e-300)) {
    throw Error(ErrorKind::zero_probability_record, "record has zero probability under the model");
  }
  return PhaseDistribution::from_values(dist.grid_size(), 2, std::move(values));
}

std::vector<double> predictive_density3(const PhaseDistribution& dist,
                                        std::span<const ThreeModeEvent> candidates,
                                        const ThreeModeModel& model) {
  require_two_dimensional(dist);
  if (candidates.empty()) throw Error(ErrorKind::invalid_input, "empty candidate list");
  std::vector<FringeFactor3> fringes;
  fringes.reserve(candidates.size());
  for (const auto& c : candidates) fringes.push_back(fringe3(c, model));
  std::vector<double> out;
  predictive_from_moments(moments(dist.values(), dist.grid_size()), fringes, out);
  return out;
}

std::size_t default_posterior_grid_2d(std::size_t event_count) {
  return std::bit_ceil(std::max<std::size_t>(64, event_count + 1));
}

ThreeModeRecord sample_record3(std::uint64_t seed, std::size_t event_count,
                               std::size_t candidate_side, const PhaseDistribution& prior,
                               const ThreeModeModel& model) {
  require_two_dimensional(prior);
  if (candidate_side == 0) throw Error(ErrorKind::invalid_input, "candidate grid must not be empty");
  std::vector<ThreeModeEvent> candidates;
  std::vector<FringeFactor3> fringes;
  candidates.reserve(candidate_side * candidate_side);
  for (std::size_t i = 0; i < candidate_side; ++i) {
    for (std::size_t k = 0; k < candidate_side; ++k) {
      candidates.push_back(ThreeModeEvent::from_pair(
          two_pi * static_cast<double>(i) / static_cast<double>(candidate_side),
          two_pi * static_cast<double>(k) / static_cast<double>(candidate_side)));
      fringes.push_back(fringe3(candidates.back(), model));
    }
  }
  const std::size_t m = prior.grid_size();
  const double cell = prior.cell();
  std::vector<double> values(prior.values().begin(), prior.values().end());
  std::vector<double> weights;
  ThreeModeRecord record{.events = {}, .sum_stats = {}, .posterior = prior, .seed = seed};
  UniformStream uniform(seed);
  auto mom = moments(values, m);
  for (std::size_t step = 0; step < event_count; ++step) {
    predictive_from_moments(mom, fringes, weights);
    const std::size_t pick = sample_index(weights, uniform.next());
    const double total = apply_factor(values, m, fringes[pick]) * cell;
    if (!(total >= 1e-300)) {
      throw Error(ErrorKind::zero_probability_record, "record has zero probability under the model");
    }
    for (double& v : values) v /= total;
    mom = moments(values, m);
    record.events.push_back(candidates[pick]);
    // E[e^{i(Φ+Φ′)}] is the first moment of the sum marginal.
    record.sum_stats.push_back(circular_stats_from_moment(mom.ca));
  }
  record.posterior = PhaseDistribution::from_values(m, 2, std::move(values));
  return record;
}

}  // namespace fockphase
