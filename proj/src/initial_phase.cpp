#include "fockphase/initial_phase.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fockphase/angles.hpp"
#include "fockphase/errors.hpp"
#include "trig_table.hpp"

namespace fockphase {

namespace {

constexpr double kTailBound = 1e-12;

double log_poisson_weight(double lambda, std::int64_t q) {
  if (lambda == 0.0) return q == 0 ? 0.0 : -INFINITY;
  const auto qd = static_cast<double>(q);
  return -lambda + qd * std::log(lambda) - std::lgamma(qd + 1.0);
}

double poisson_tail_above(double lambda, std::int64_t q_max) {
  double tail = 0.0;
  for (std::int64_t q = q_max + 1;; ++q) {
    const double term = std::exp(log_poisson_weight(lambda, q));
    tail += term;
    if (static_cast<double>(q) > lambda && term <= 1e-30 * std::max(tail, 1e-300)) break;
    if (term == 0.0 && static_cast<double>(q) > lambda) break;
  }
  return tail;
}

// |Σ_Q x_Q w^(Q − q_min)|² with w = e^{−iΦ_j}, by Horner; the dropped global
// factor w^q_min has unit modulus.
void accumulate_modulus_squared(const CoefficientTable& table, std::vector<double>& out) {
  const std::size_t m = out.size();
  const auto& trig = detail::trig_table(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::complex<double> w(trig.cos[j], -trig.sin[j]);
    std::complex<double> acc = 0.0;
    for (auto it = table.values.rbegin(); it != table.values.rend(); ++it) acc = acc * w + *it;
    out[j] += std::norm(acc);
  }
}

}  // namespace

double CoefficientTable::norm_squared() const {
  double total = 0.0;
  for (const auto& v : values) total += std::norm(v);
  return total;
}

CoefficientTable normalized(CoefficientTable table) {
  const double n2 = table.norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw Error(ErrorKind::invalid_input, "coefficient table is all zero");
  }
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& v : table.values) v *= scale;
  return table;
}

void validate_superposition(const CoefficientTable& table, std::int64_t n_a, std::int64_t n_b) {
  if (table.values.empty()) throw Error(ErrorKind::invalid_spec, "empty coefficient table");
  if (std::abs(table.norm_squared() - 1.0) > 1e-9) {
    throw Error(ErrorKind::invalid_spec, "coefficient table is not normalized");
  }
  const std::int64_t widest = std::max(std::abs(table.q_min), std::abs(table.q_max()));
  if (10 * widest > std::min(n_a, n_b)) {
    throw Error(ErrorKind::invalid_spec,
                "population window too wide: need max|Q| <= min(N_a, N_b)/10");
  }
}

PhaseDistribution uniform_prior(std::size_t grid_size) {
  return PhaseDistribution::uniform(grid_size, 1);
}

PhaseDistribution g_from_coefficients(const CoefficientTable& table, std::size_t grid_size) {
  if (table.values.empty() || !(table.norm_squared() > 0.0)) {
    throw Error(ErrorKind::invalid_input, "coefficient table is all zero");
  }
  std::vector<double> g(grid_size, 0.0);
  accumulate_modulus_squared(table, g);
  return PhaseDistribution::from_values(grid_size, 1, std::move(g));
}

std::int64_t coherent_cutoff(double modulus) {
  const double lambda = modulus * modulus;
  std::int64_t q_max = static_cast<std::int64_t>(std::ceil(lambda));
  while (poisson_tail_above(lambda, q_max) >= kTailBound) ++q_max;
  return q_max;
}

CoefficientTable coherent_coefficients(const CoherentSpec& spec) {
  if (!(spec.modulus >= 0.0) || !std::isfinite(spec.modulus) || spec.q_max < 0) {
    throw Error(ErrorKind::invalid_input, "coherent modulus and cutoff must be nonnegative");
  }
  const double lambda = spec.modulus * spec.modulus;
  if (poisson_tail_above(lambda, spec.q_max) >= kTailBound) {
    throw Error(ErrorKind::truncation,
                "coherent cutoff q_max=" + std::to_string(spec.q_max) +
                    " leaves tail weight >= 1e-12 (need q_max >= " +
                    std::to_string(coherent_cutoff(spec.modulus)) + ")");
  }
  CoefficientTable table;
  table.q_min = 0;
  table.values.resize(static_cast<std::size_t>(spec.q_max) + 1);
  for (std::int64_t q = 0; q <= spec.q_max; ++q) {
    const double log_mag = 0.5 * log_poisson_weight(lambda, q);
    table.values[static_cast<std::size_t>(q)] =
        std::polar(std::exp(log_mag), canonical_angle(static_cast<double>(q) * spec.phase));
  }
  return table;
}

PhaseDistribution g_general(const NumberSuperposition& state, std::size_t grid_size) {
  if (state.slices.empty()) throw Error(ErrorKind::invalid_input, "empty number superposition");
  std::vector<double> g(grid_size, 0.0);
  double weight = 0.0;
  for (const auto& slice : state.slices) {
    weight += slice.coefficients.norm_squared();
    accumulate_modulus_squared(slice.coefficients, g);
  }
  if (!(weight > 0.0)) throw Error(ErrorKind::invalid_input, "number superposition is all zero");
  return PhaseDistribution::from_values(grid_size, 1, std::move(g));
}

CoefficientTable load_coefficients_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open coefficient file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::invalid_input, "empty coefficient file");
  std::map<std::int64_t, std::complex<double>> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::int64_t q = 0;
    double re = 0.0;
    double im = 0.0;
    if (!(fields >> q >> re >> im)) {
      throw Error(ErrorKind::invalid_input,
                  path.string() + ":" + std::to_string(line_no) + ": expected Q,re,im");
    }
    if (!entries.emplace(q, std::complex<double>(re, im)).second) {
      throw Error(ErrorKind::invalid_input, "duplicate Q=" + std::to_string(q) + " in " + path.string());
    }
  }
  if (entries.empty()) throw Error(ErrorKind::invalid_input, "coefficient file has no rows");
  CoefficientTable table;
  table.q_min = entries.begin()->first;
  table.values.assign(static_cast<std::size_t>(entries.rbegin()->first - table.q_min + 1), 0.0);
  for (const auto& [q, v] : entries) table.values[static_cast<std::size_t>(q - table.q_min)] = v;
  return normalized(std::move(table));
}

}  // namespace fockphase
