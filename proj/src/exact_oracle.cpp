#include "fockphase/exact_oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fockphase/errors.hpp"

namespace fockphase {

namespace {

using cplx = std::complex<double>;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

std::pair<cplx, cplx> site_amplitudes(const DetectionEvent& event, const CondensateSpec& spec) {
  if (spec.tabulated) {
    if (!event.site || *event.site >= spec.tabulated->size()) {
      throw Error(ErrorKind::invalid_input, "tabulated spec needs an event site inside the grid");
    }
    return {spec.tabulated->phi_a(*event.site), spec.tabulated->phi_b(*event.site)};
  }
  if (event.site) throw Error(ErrorKind::invalid_input, "site-addressed event on a plane-wave spec");
  return {std::polar(1.0, event.u), cplx(1.0)};
}

void check_populations(const CondensateSpec& spec) {
  if (spec.n_a < 0 || spec.n_b < 0 || spec.n_a + spec.n_b == 0) {
    throw Error(ErrorKind::invalid_spec, "empty condensate");
  }
}

double log_power(std::int64_t n, std::int64_t m) {
  if (m == 0) return 0.0;
  if (n == 0) return kNegInf;
  return static_cast<double>(m) * std::log(static_cast<double>(n));
}

double log_weight(std::int64_t n, std::int64_t m, WeightMode mode) {
  return mode == WeightMode::falling_factorial ? log_falling_factorial(n, m) : log_power(n, m);
}

OracleResult finish(double scaled, std::size_t events, const CondensateSpec& spec,
                    WeightMode mode) {
  OracleResult r;
  r.scaled = scaled;
  r.value = scaled * std::pow(static_cast<double>(spec.total()), static_cast<double>(events));
  r.mode = mode;
  r.events = events;
  r.n_a = spec.n_a;
  r.n_b = spec.n_b;
  return r;
}

// Balanced-path sums D_m = Σ_{paths with m a-annihilators and m a-creators} Π W,
// weighted and scaled by N^P.
double contract_two_mode(std::span<const TransferMatrix> matrices, const CondensateSpec& spec,
                         WeightMode mode) {
  const std::size_t p = matrices.size();
  const std::size_t side = p + 1;
  std::vector<cplx> state(side * side, 0.0);
  std::vector<cplx> next(side * side);
  state[0] = 1.0;
  // (annihilation a-count c, creation a-count c′) at index c·side + c′
  for (std::size_t step = 0; step < p; ++step) {
    std::fill(next.begin(), next.end(), cplx(0.0));
    const auto& w = matrices[step];
    for (std::size_t c = 0; c <= step; ++c) {
      for (std::size_t cp = 0; cp <= step; ++cp) {
        const cplx d = state[c * side + cp];
        if (d == cplx(0.0)) continue;
        next[(c + 1) * side + cp + 1] += d * w[0][0];
        next[c * side + cp] += d * w[1][1];
        next[(c + 1) * side + cp] += d * w[1][0];
        next[c * side + cp + 1] += d * w[0][1];
      }
    }
    std::swap(state, next);
  }
  const double log_scale = static_cast<double>(p) * std::log(static_cast<double>(spec.total()));
  const auto pp = static_cast<std::int64_t>(p);
  double scaled = 0.0;
  for (std::int64_t m = 0; m <= pp; ++m) {
    const double lw = log_weight(spec.n_a, m, mode) + log_weight(spec.n_b, pp - m, mode);
    if (lw == kNegInf) continue;
    const auto idx = static_cast<std::size_t>(m) * side + static_cast<std::size_t>(m);
    scaled += state[idx].real() * std::exp(lw - log_scale);
  }
  return scaled;
}

std::vector<TransferMatrix> matrices_for(std::span<const DetectionEvent> events,
                                         const CondensateSpec& spec) {
  std::vector<TransferMatrix> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(transfer_matrix(e, spec));
  return out;
}

}  // namespace

const char* to_string(WeightMode mode) {
  return mode == WeightMode::falling_factorial ? "falling" : "power";
}

std::vector<cplx> elementary_symmetric(std::span<const cplx> z) {
  std::vector<cplx> e(z.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t m = i + 1; m >= 1; --m) e[m] += z[i] * e[m - 1];
  }
  return e;
}

double log_falling_factorial(std::int64_t n, std::int64_t m) {
  if (m < 0 || n < 0) throw Error(ErrorKind::invalid_input, "falling factorial of negative argument");
  if (m > n) return kNegInf;
  if (m == 0) return 0.0;
  if (m <= 64) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < m; ++k) acc += std::log(static_cast<double>(n - k));
    return acc;
  }
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(n - m) + 1.0);
}

TransferMatrix transfer_matrix(const DetectionEvent& event, const CondensateSpec& spec) {
  const auto [a, b] = site_amplitudes(event, spec);
  TransferMatrix w{};
  if (event.kind == EventKind::position) {
    w[0][0] = std::norm(a);
    w[1][1] = std::norm(b);
    w[1][0] = std::conj(b) * a;
    w[0][1] = std::conj(a) * b;
  } else {
    w[0][0] = 0.5 * std::norm(a);
    w[1][1] = 0.5 * std::norm(b);
    w[1][0] = 0.5 * static_cast<double>(event.eta) * std::polar(1.0, event.theta) * std::conj(b) * a;
    w[0][1] = std::conj(w[1][0]);
  }
  return w;
}

TransferMatrix spin_transfer_matrix(std::size_t site, double theta, const CondensateSpec& spec) {
  const auto [a, b] = site_amplitudes(
      spec.tabulated ? DetectionEvent::spin_at(site, theta, 1) : DetectionEvent::spin(0.0, theta, 1),
      spec);
  TransferMatrix w{};
  w[1][0] = std::polar(1.0, theta) * std::conj(b) * a;
  w[0][1] = std::conj(w[1][0]);
  return w;
}

OracleResult exact_sequence_probability(std::span<const DetectionEvent> events,
                                        const CondensateSpec& spec, WeightMode mode) {
  check_populations(spec);
  const auto matrices = matrices_for(events, spec);
  return finish(contract_two_mode(matrices, spec, mode), events.size(), spec, mode);
}

OracleResult brute_force_sequence_probability(std::span<const DetectionEvent> events,
                                              const CondensateSpec& spec, WeightMode mode) {
  check_populations(spec);
  const std::size_t p = events.size();
  if (p > 10) throw Error(ErrorKind::cap_exceeded, "brute-force oracle is capped at 10 events");
  const auto matrices = matrices_for(events, spec);
  std::vector<cplx> balanced(p + 1, 0.0);
  const std::size_t combos = std::size_t{1} << (2 * p);
  for (std::size_t code = 0; code < combos; ++code) {
    cplx product = 1.0;
    std::size_t destroyed_a = 0;
    std::size_t created_a = 0;
    for (std::size_t i = 0; i < p; ++i) {
      const std::size_t creation = (code >> (2 * i)) & 1U;
      const std::size_t annihilation = (code >> (2 * i + 1)) & 1U;
      product *= matrices[i][creation][annihilation];
      created_a += creation == 0 ? 1 : 0;
      destroyed_a += annihilation == 0 ? 1 : 0;
    }
    if (created_a == destroyed_a) balanced[created_a] += product;
  }
  const double log_scale = static_cast<double>(p) * std::log(static_cast<double>(spec.total()));
  double scaled = 0.0;
  for (std::size_t m = 0; m <= p; ++m) {
    const auto mi = static_cast<std::int64_t>(m);
    const double lw = log_weight(spec.n_a, mi, mode) +
                      log_weight(spec.n_b, static_cast<std::int64_t>(p) - mi, mode);
    if (lw != kNegInf) scaled += balanced[m].real() * std::exp(lw - log_scale);
  }
  return finish(scaled, p, spec, mode);
}

OracleResult exact_sequence_probability3(std::span<const ThreeModeEvent> events,
                                         const CondensateSpec& spec, WeightMode mode,
                                         std::size_t max_events) {
  if (spec.n_a < 0 || spec.n_b < 0 || spec.n_c < 0 || spec.total() == 0) {
    throw Error(ErrorKind::invalid_spec, "empty condensate");
  }
  const std::size_t p = events.size();
  if (p > max_events) {
    throw Error(ErrorKind::cap_exceeded,
                "three-mode oracle capped at " + std::to_string(max_events) + " events");
  }
  const std::size_t s = p + 1;
  auto index = [s](std::size_t ca, std::size_t cb, std::size_t pa, std::size_t pb) {
    return ((ca * s + cb) * s + pa) * s + pb;
  };
  std::vector<cplx> state(s * s * s * s, 0.0);
  std::vector<cplx> next(state.size());
  state[0] = 1.0;
  for (std::size_t step = 0; step < p; ++step) {
    const auto& e = events[step];
    const std::array<cplx, 3> phi{std::polar(1.0, e.u_ab), cplx(1.0), std::polar(1.0, -e.u_bc)};
    TransferMatrix3 w{};
    for (int mp = 0; mp < 3; ++mp) {
      for (int m = 0; m < 3; ++m) w[mp][m] = std::conj(phi[mp]) * phi[m];
    }
    std::fill(next.begin(), next.end(), cplx(0.0));
    for (std::size_t ca = 0; ca <= step; ++ca) {
      for (std::size_t cb = 0; ca + cb <= step; ++cb) {
        for (std::size_t pa = 0; pa <= step; ++pa) {
          for (std::size_t pb = 0; pa + pb <= step; ++pb) {
            const cplx d = state[index(ca, cb, pa, pb)];
            if (d == cplx(0.0)) continue;
            for (int mp = 0; mp < 3; ++mp) {
              for (int m = 0; m < 3; ++m) {
                next[index(ca + (m == 0), cb + (m == 1), pa + (mp == 0), pb + (mp == 1))] +=
                    d * w[mp][m];
              }
            }
          }
        }
      }
    }
    std::swap(state, next);
  }
  const double log_scale = static_cast<double>(p) * std::log(static_cast<double>(spec.total()));
  double scaled = 0.0;
  for (std::size_t ca = 0; ca <= p; ++ca) {
    for (std::size_t cb = 0; ca + cb <= p; ++cb) {
      const auto cc = static_cast<std::int64_t>(p - ca - cb);
      const double lw = log_weight(spec.n_a, static_cast<std::int64_t>(ca), mode) +
                        log_weight(spec.n_b, static_cast<std::int64_t>(cb), mode) +
                        log_weight(spec.n_c, cc, mode);
      if (lw == kNegInf) continue;
      scaled += state[index(ca, cb, ca, cb)].real() * std::exp(lw - log_scale);
    }
  }
  return finish(scaled, p, spec, mode);
}

double twomode_spin_sequential(const CondensateSpec& spec, std::span<const DetectionEvent> events) {
  check_populations(spec);
  if (spec.tabulated) {
    throw Error(ErrorKind::invalid_input, "sequential oracle needs plane-wave modes");
  }
  const std::int64_t total = spec.total();
  if (total > 4000) throw Error(ErrorKind::cap_exceeded, "sequential oracle capped at N = 4000");
  // amplitude over n_a for fixed remaining particle count R (n_b = R − n_a)
  std::vector<cplx> psi(static_cast<std::size_t>(total) + 1, 0.0);
  psi[static_cast<std::size_t>(spec.n_a)] = 1.0;
  for (const auto& e : events) {
    const std::size_t remaining = psi.size() - 1;
    if (remaining == 0) return 0.0;
    cplx alpha_a = std::polar(1.0, e.u);
    cplx alpha_b = 1.0;
    if (e.kind == EventKind::spin) {
      alpha_a *= kInvSqrt2;
      alpha_b = kInvSqrt2 * static_cast<double>(e.eta) * std::polar(1.0, -e.theta);
    }
    std::vector<cplx> out(remaining, 0.0);
    for (std::size_t n = 0; n < remaining; ++n) {
      out[n] = alpha_a * std::sqrt(static_cast<double>(n + 1)) * psi[n + 1] +
               alpha_b * std::sqrt(static_cast<double>(remaining - n)) * psi[n];
    }
    psi = std::move(out);
  }
  double norm = 0.0;
  for (const auto& v : psi) norm += std::norm(v);
  return norm;
}

OracleResult spin_density_expectation(std::span<const DetectionEvent> events,
                                      const CondensateSpec& spec, WeightMode mode) {
  check_populations(spec);
  std::vector<cplx> ratios;
  ratios.reserve(events.size());
  double prefactor = 1.0;
  for (const auto& e : events) {
    const auto [a, b] = site_amplitudes(e, spec);
    if (std::norm(b) == 0.0) {
      throw Error(ErrorKind::invalid_input, "density expectation needs φ_b ≠ 0 at every site");
    }
    ratios.emplace_back(std::norm(a) / std::norm(b));
    prefactor *= std::norm(b);
  }
  // Σ over subsets S choosing mode a: Π_S |φ_a|² Π_rest |φ_b|² (N_a)_|S| (N_b)_{P−|S|}
  const auto coeffs = elementary_symmetric(ratios);
  const auto p = static_cast<std::int64_t>(events.size());
  const double log_scale = static_cast<double>(p) * std::log(static_cast<double>(spec.total()));
  double scaled = 0.0;
  for (std::int64_t m = 0; m <= p; ++m) {
    const double lw = log_weight(spec.n_a, m, mode) + log_weight(spec.n_b, p - m, mode);
    if (lw != kNegInf) scaled += coeffs[static_cast<std::size_t>(m)].real() * std::exp(lw - log_scale);
  }
  return finish(prefactor * scaled, events.size(), spec, mode);
}

double remote_orientation_exact(std::span<const DetectionEvent> record, std::size_t target_site,
                                double theta, const RegionLayout& layout,
                                const CondensateSpec& spec, WeightMode mode) {
  CondensateSpec local = spec;
  local.tabulated = layout.mode_pair();
  check_populations(local);
  if (target_site >= local.tabulated->size()) {
    throw Error(ErrorKind::invalid_input, "target site outside the layout");
  }
  auto matrices = matrices_for(record, local);
  const double denominator = contract_two_mode(matrices, local, mode);
  if (!(denominator > 1e-300)) {
    throw Error(ErrorKind::zero_probability_record, "conditioning record has zero probability");
  }
  matrices.push_back(spin_transfer_matrix(target_site, theta, local));
  const double numerator = contract_two_mode(matrices, local, mode);
  // numerator carries one more factor of N in its scaling
  return static_cast<double>(local.total()) * numerator / denominator;
}

}  // namespace fockphase
