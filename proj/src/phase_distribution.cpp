#include "fockphase/phase_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fockphase/angles.hpp"
#include "fockphase/errors.hpp"
#include "trig_table.hpp"

namespace fockphase {

namespace detail {

const TrigTable& trig_table(std::size_t grid_size) {
  thread_local std::map<std::size_t, std::unique_ptr<TrigTable>> cache;
  auto& slot = cache[grid_size];
  if (!slot) {
    slot = std::make_unique<TrigTable>();
    slot->cos.resize(grid_size);
    slot->sin.resize(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j) {
      const double phi = two_pi * static_cast<double>(j) / static_cast<double>(grid_size);
      slot->cos[j] = std::cos(phi);
      slot->sin[j] = std::sin(phi);
    }
  }
  return *slot;
}

}  // namespace detail

namespace {

void check_shape(std::size_t grid_size, int dimension) {
  if (dimension != 1 && dimension != 2) {
    throw Error(ErrorKind::invalid_input, "phase dimension must be 1 or 2");
  }
  if (grid_size < PhaseDistribution::min_grid) {
    throw Error(ErrorKind::invalid_input, "phase grid needs at least 16 points per dimension");
  }
}

std::size_t point_count_for(std::size_t grid_size, int dimension) {
  return dimension == 1 ? grid_size : grid_size * grid_size;
}

}  // namespace

PhaseDistribution PhaseDistribution::uniform(std::size_t grid_size, int dimension) {
  check_shape(grid_size, dimension);
  const double value = dimension == 1 ? 1.0 / two_pi : 1.0 / (two_pi * two_pi);
  return {grid_size, dimension, std::vector<double>(point_count_for(grid_size, dimension), value)};
}

PhaseDistribution PhaseDistribution::from_values(std::size_t grid_size, int dimension,
                                                 std::vector<double> values) {
  check_shape(grid_size, dimension);
  if (values.size() != point_count_for(grid_size, dimension)) {
    throw Error(ErrorKind::invalid_input, "density table size does not match the grid");
  }
  double total = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::invalid_input, "density values must be finite and nonnegative");
    }
    total += v;
  }
  PhaseDistribution dist(grid_size, dimension, std::move(values));
  total *= dist.cell();
  if (!(total > 0.0)) throw Error(ErrorKind::invalid_input, "density has zero mass");
  for (double& v : dist.values_) v /= total;
  return dist;
}

PhaseDistribution PhaseDistribution::point_mass(std::size_t grid_size, std::size_t j) {
  check_shape(grid_size, 1);
  std::vector<double> values(grid_size, 0.0);
  values.at(j) = 1.0;
  return from_values(grid_size, 1, std::move(values));
}

double PhaseDistribution::cell() const {
  const double h = two_pi / static_cast<double>(grid_size_);
  return dimension_ == 1 ? h : h * h;
}

double PhaseDistribution::angle(std::size_t j) const {
  return two_pi * static_cast<double>(j) / static_cast<double>(grid_size_);
}

double PhaseDistribution::mass() const {
  // Neumaier summation; plain accumulation drifts by ~1e-13 on large grids.
  double total = 0.0;
  double carry = 0.0;
  for (double v : values_) {
    const double t = total + v;
    carry += std::abs(total) >= std::abs(v) ? (total - t) + v : (v - t) + total;
    total = t;
  }
  return (total + carry) * cell();
}

PhaseDistribution PhaseDistribution::marginal(int axis) const {
  if (dimension_ != 2) throw Error(ErrorKind::invalid_input, "marginal needs a 2-D density");
  std::vector<double> out(grid_size_, 0.0);
  for (std::size_t j = 0; j < grid_size_; ++j) {
    for (std::size_t k = 0; k < grid_size_; ++k) {
      out[axis == 0 ? j : k] += at(j, k);
    }
  }
  return from_values(grid_size_, 1, std::move(out));
}

PhaseDistribution PhaseDistribution::sum_marginal() const {
  if (dimension_ != 2) throw Error(ErrorKind::invalid_input, "sum marginal needs a 2-D density");
  std::vector<double> out(grid_size_, 0.0);
  for (std::size_t j = 0; j < grid_size_; ++j) {
    for (std::size_t k = 0; k < grid_size_; ++k) {
      const std::size_t s = j + k;
      out[s < grid_size_ ? s : s - grid_size_] += at(j, k);
    }
  }
  return from_values(grid_size_, 1, std::move(out));
}

PhaseDistribution PhaseDistribution::rotated(std::ptrdiff_t steps) const {
  const auto m = static_cast<std::ptrdiff_t>(grid_size_);
  const auto shift = static_cast<std::size_t>(((steps % m) + m) % m);
  std::vector<double> out(values_.size());
  if (dimension_ == 1) {
    for (std::size_t j = 0; j < grid_size_; ++j) out[(j + shift) % grid_size_] = values_[j];
  } else {
    for (std::size_t j = 0; j < grid_size_; ++j) {
      for (std::size_t k = 0; k < grid_size_; ++k) {
        out[((j + shift) % grid_size_) * grid_size_ + (k + shift) % grid_size_] =
            values_[j * grid_size_ + k];
      }
    }
  }
  return {grid_size_, dimension_, std::move(out)};
}

std::complex<double> first_moment(const PhaseDistribution& dist) {
  if (dist.dimension() != 1) {
    throw Error(ErrorKind::invalid_input, "circular statistics need a 1-D density");
  }
  const auto& trig = detail::trig_table(dist.grid_size());
  double re = 0.0;
  double im = 0.0;
  const auto values = dist.values();
  for (std::size_t j = 0; j < values.size(); ++j) {
    re += values[j] * trig.cos[j];
    im += values[j] * trig.sin[j];
  }
  return {re * dist.cell(), im * dist.cell()};
}

CircularStats circular_stats(const PhaseDistribution& dist) {
  return circular_stats_from_moment(first_moment(dist));
}

CircularStats circular_stats_from_moment(std::complex<double> moment) {
  CircularStats stats;
  stats.resultant = std::min(1.0, std::abs(moment));
  // Below the round-off floor there is no preferred direction.
  if (stats.resultant < 1e-12) {
    stats.resultant = 0.0;
  } else {
    stats.mean = canonical_angle(std::arg(moment));
  }
  stats.circular_std = stats.resultant > 0.0 ? std::sqrt(std::max(0.0, -2.0 * std::log(stats.resultant)))
                                             : std::numeric_limits<double>::infinity();
  return stats;
}

double rayleigh_test(std::span<const double> angles) {
  if (angles.empty()) throw Error(ErrorKind::invalid_input, "Rayleigh test needs samples");
  double c = 0.0;
  double s = 0.0;
  for (double a : angles) {
    c += std::cos(a);
    s += std::sin(a);
  }
  const double n = static_cast<double>(angles.size());
  const double r_n = std::hypot(c, s);
  // Zar's approximation to the exact Rayleigh distribution.
  const double p = std::exp(std::sqrt(1.0 + 4.0 * n + 4.0 * (n * n - r_n * r_n)) - (1.0 + 2.0 * n));
  return std::min(1.0, p);
}

}  // namespace fockphase
