#include <doctest.h>

#include <random>

#include "fockphase/angles.hpp"
#include "fockphase/errors.hpp"
#include "fockphase/exact_oracle.hpp"
#include "fockphase/initial_phase.hpp"
#include "fockphase/phase_engine.hpp"
#include "fockphase/three_mode.hpp"
#include "support.hpp"

using namespace fockphase;
using test_support::plane_wave_spec;
using test_support::random_record;

namespace {

using cplx = std::complex<double>;

// ‖c_P…c_1|N_a,N_b>‖² for site-addressed events on a tabulated spec, by
// direct action on the Fock amplitudes.
double dense_norm(const CondensateSpec& spec, std::span<const DetectionEvent> events) {
  const auto& modes = *spec.tabulated;
  std::vector<cplx> psi(static_cast<std::size_t>(spec.n_a + spec.n_b) + 1, 0.0);
  psi[static_cast<std::size_t>(spec.n_a)] = 1.0;
  for (const auto& e : events) {
    const std::size_t remaining = psi.size() - 1;
    if (remaining == 0) return 0.0;
    cplx alpha_a = modes.phi_a(*e.site);
    cplx alpha_b = modes.phi_b(*e.site);
    if (e.kind == EventKind::spin) {
      alpha_a /= std::sqrt(2.0);
      alpha_b *= static_cast<double>(e.eta) * std::polar(1.0, -e.theta) / std::sqrt(2.0);
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

CondensateSpec tabulated(const RegionLayout& layout, std::int64_t n_a, std::int64_t n_b) {
  CondensateSpec spec;
  spec.n_a = n_a;
  spec.n_b = n_b;
  spec.spinful = true;
  spec.tabulated = layout.mode_pair();
  return spec;
}

double binomial(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

}  // namespace

TEST_SUITE("exact-oracle") {

TEST_CASE("elementary symmetric polynomials") {
  const std::vector<cplx> z{1.0, 2.0};
  const auto e = elementary_symmetric(z);
  REQUIRE(e.size() == 3);
  CHECK(e[0] == cplx(1.0));
  CHECK(e[1] == cplx(3.0));
  CHECK(e[2] == cplx(2.0));
  CHECK(elementary_symmetric(std::vector<cplx>{}).size() == 1);

  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int p = 1; p <= 30; ++p) {
    std::vector<cplx> zs;
    for (int i = 0; i < p; ++i) zs.push_back(std::polar(unit(rng), angle(rng)));
    const auto es = elementary_symmetric(zs);
    for (int m = 0; m <= p; ++m) CHECK(std::abs(es[static_cast<std::size_t>(m)]) <= binomial(p, m) * (1 + 1e-12));
  }
}

TEST_CASE("log falling factorial") {
  CHECK(log_falling_factorial(5, 2) == doctest::Approx(std::log(20.0)));
  CHECK(log_falling_factorial(7, 0) == 0.0);
  CHECK(std::isinf(log_falling_factorial(3, 4)));
  CHECK(log_falling_factorial(3, 3) == doctest::Approx(std::log(6.0)));
}

TEST_CASE("one position detection sees no interference") {
  for (double u : {0.0, 1.0, 4.0}) {
    const std::vector<DetectionEvent> one{DetectionEvent::position(u)};
    const auto r = exact_sequence_probability(one, plane_wave_spec(13, 29), WeightMode::falling_factorial);
    CHECK(r.value == doctest::Approx(42.0).epsilon(1e-13));
    CHECK(r.scaled == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("two detections at one point: 580 with falling, 600 with power weights") {
  const std::vector<DetectionEvent> two{DetectionEvent::position(0.0), DetectionEvent::position(0.0)};
  const auto spec = plane_wave_spec(10, 10);
  CHECK(exact_sequence_probability(two, spec, WeightMode::falling_factorial).value == doctest::Approx(580.0).epsilon(1e-13));
  CHECK(exact_sequence_probability(two, spec, WeightMode::power).value == doctest::Approx(600.0).epsilon(1e-13));
  CHECK(brute_force_sequence_probability(two, spec, WeightMode::falling_factorial).value == doctest::Approx(580.0).epsilon(1e-13));
  CHECK(twomode_spin_sequential(spec, two) == doctest::Approx(580.0).epsilon(1e-13));
}

TEST_CASE("one particle in each mode cannot give opposite results on one axis") {
  const auto spec = plane_wave_spec(1, 1);
  for (double theta : {0.0, 0.8, 3.0}) {
    const std::vector<DetectionEvent> opposite{DetectionEvent::spin(0.0, theta, 1), DetectionEvent::spin(0.0, theta, -1)};
    CHECK(std::abs(exact_sequence_probability(opposite, spec, WeightMode::falling_factorial).value) < 1e-15);
    CHECK(twomode_spin_sequential(spec, opposite) < 1e-15);
  }
}

TEST_CASE("sequential oracle examples") {
  const auto spec = plane_wave_spec(1, 1);
  const std::vector<DetectionEvent> one{DetectionEvent::spin(0.0, 0.0, 1)};
  CHECK(twomode_spin_sequential(spec, one) == doctest::Approx(1.0).epsilon(1e-15));
  double total = 0.0;
  double same = 0.0;
  for (int a : {1, -1}) {
    for (int b : {1, -1}) {
      const std::vector<DetectionEvent> pair{DetectionEvent::spin(0.0, 0.0, a), DetectionEvent::spin(0.0, 0.0, b)};
      const double v = twomode_spin_sequential(spec, pair);
      total += v;
      if (a == 1 && b == 1) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
        same = v;
      }
    }
  }
  CHECK(same / total == doctest::Approx(0.5).epsilon(1e-15));

  std::mt19937_64 rng(21);
  const auto spec2 = plane_wave_spec(4, 6);
  for (int i = 0; i < 10; ++i) {
    const auto events = random_record(rng, 5, 1.0);
    auto shifted = events;
    for (auto& e : shifted) e = DetectionEvent::spin(e.u, e.theta + 1.1, e.eta);
    CHECK(twomode_spin_sequential(spec2, shifted) == doctest::Approx(twomode_spin_sequential(spec2, events)).epsilon(1e-12));
  }
}

TEST_CASE("transfer DP, brute force and sequential oracle agree") {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<std::int64_t> pop(0, 12);
  for (int i = 0; i < 60; ++i) {
    const auto n_a = pop(rng);
    const auto n_b = pop(rng) + 1;
    const auto spec = plane_wave_spec(n_a, n_b);
    const auto events = random_record(rng, 1 + static_cast<std::size_t>(i % 8));
    const double seq = twomode_spin_sequential(spec, events);
    for (auto mode : {WeightMode::falling_factorial, WeightMode::power}) {
      const auto dp = exact_sequence_probability(events, spec, mode);
      const auto bf = brute_force_sequence_probability(events, spec, mode);
      CHECK(std::abs(dp.scaled - bf.scaled) <= 1e-12 * std::max(1.0, std::abs(bf.scaled)));
    }
    const double dp = exact_sequence_probability(events, spec, WeightMode::falling_factorial).value;
    CHECK(std::abs(dp - seq) <= 1e-12 * std::max(1.0, seq));
  }
}

TEST_CASE("spin patterns add up to the density correlation") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  const auto spec = plane_wave_spec(9, 14);
  for (std::size_t p = 1; p <= 6; ++p) {
    std::vector<double> u(p);
    std::vector<double> theta(p);
    for (std::size_t i = 0; i < p; ++i) {
      u[i] = angle(rng);
      theta[i] = angle(rng);
    }
    for (auto mode : {WeightMode::falling_factorial, WeightMode::power}) {
      double total = 0.0;
      std::vector<DetectionEvent> events;
      for (std::size_t mask = 0; mask < (std::size_t{1} << p); ++mask) {
        events.clear();
        for (std::size_t i = 0; i < p; ++i) events.push_back(DetectionEvent::spin(u[i], theta[i], (mask >> i) & 1 ? -1 : 1));
        total += exact_sequence_probability(events, spec, mode).scaled;
      }
      CHECK(total == doctest::Approx(spin_density_expectation(events, spec, mode).scaled).epsilon(1e-12));
    }
  }
}

TEST_CASE("falling-factorial weights approach power weights as N grows") {
  std::mt19937_64 rng(24);
  const auto events = random_record(rng, 6);
  double last = std::numeric_limits<double>::infinity();
  for (std::int64_t n : {100, 1000, 10000, 100000}) {
    const auto spec = plane_wave_spec(n / 2, n - n / 2);
    const double f = exact_sequence_probability(events, spec, WeightMode::falling_factorial).scaled;
    const double p = exact_sequence_probability(events, spec, WeightMode::power).scaled;
    const double dev = std::abs(f - p) / p;
    CHECK(dev < last);
    last = dev;
  }
  CHECK(last < 1e-3);
}

TEST_CASE("power weights reproduce the phase engine") {
  std::mt19937_64 rng(25);
  std::uniform_int_distribution<std::int64_t> pop(1, 1000);
  for (int i = 0; i < 30; ++i) {
    const auto spec = plane_wave_spec(pop(rng), pop(rng));
    const auto events = random_record(rng, 20 + static_cast<std::size_t>(i));
    const double engine = sequence_probability(events, uniform_prior(default_posterior_grid(events.size())),
                                               EventFactorModel::from_spec(spec));
    CHECK(exact_sequence_probability(events, spec, WeightMode::power).scaled == doctest::Approx(engine).epsilon(1e-10));
  }
}

TEST_CASE("tabulated regions: power weights reproduce the phase engine") {
  std::mt19937_64 rng(26);
  std::uniform_int_distribution<int> site(0, 3);
  for (int i = 0; i < 20; ++i) {
    const auto layout = test_support::random_layout(rng);
    const auto spec = tabulated(layout, 300, 500);
    std::vector<DetectionEvent> events;
    for (int k = 0; k < 8; ++k) {
      const auto s = static_cast<std::size_t>(site(rng));
      events.push_back(k % 2 ? DetectionEvent::position_at(s) : DetectionEvent::spin_at(s, 0.3 * k, k % 3 ? 1 : -1));
    }
    const double engine = sequence_probability(events, uniform_prior(64), EventFactorModel::from_spec(spec));
    CHECK(exact_sequence_probability(events, spec, WeightMode::power).scaled == doctest::Approx(engine).epsilon(1e-10));
  }
}

TEST_CASE("tabulated DP matches dense Fock-space evolution") {
  std::mt19937_64 rng(27);
  std::uniform_int_distribution<int> site(0, 3);
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  for (int i = 0; i < 20; ++i) {
    const auto layout = test_support::random_layout(rng);
    const auto spec = tabulated(layout, 2 + i % 5, 3 + i % 4);
    std::vector<DetectionEvent> events;
    for (int k = 0; k < 5; ++k) {
      const auto s = static_cast<std::size_t>(site(rng));
      events.push_back(k % 2 ? DetectionEvent::position_at(s) : DetectionEvent::spin_at(s, angle(rng), k % 4 ? 1 : -1));
    }
    const double dense = dense_norm(spec, events);
    CHECK(exact_sequence_probability(events, spec, WeightMode::falling_factorial).value ==
          doctest::Approx(dense).epsilon(1e-11));
  }
}

TEST_CASE("remote orientation matches dense Fock-space evolution") {
  std::mt19937_64 rng(28);
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const auto layout = test_support::random_layout(rng, i % 2 == 0);
    const std::int64_t n_a = 1 + i % 6;
    const std::int64_t n_b = 2 + i % 5;
    const auto spec = tabulated(layout, n_a, n_b);
    std::vector<DetectionEvent> record;
    const std::size_t p = static_cast<std::size_t>(i % 4);
    for (std::size_t k = 0; k < p; ++k) record.push_back(DetectionEvent::spin_at(0, angle(rng), unit(rng) < 0.5 ? 1 : -1));
    const double den = dense_norm(spec, record);
    if (den < 1e-12) continue;
    for (std::size_t target : {1, 2}) {
      const double theta = angle(rng);
      auto up = record;
      auto down = record;
      up.push_back(DetectionEvent::spin_at(target, theta, 1));
      down.push_back(DetectionEvent::spin_at(target, theta, -1));
      const double expected = (dense_norm(spec, up) - dense_norm(spec, down)) / den;
      const double got = remote_orientation_exact(record, target, theta, layout, spec, WeightMode::falling_factorial);
      CHECK(got == doctest::Approx(expected).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("remote orientation examples") {
  std::mt19937_64 rng(29);
  const auto layout = test_support::random_layout(rng);
  const auto spec = tabulated(layout, 40, 60);
  CHECK(std::abs(remote_orientation_exact({}, 1, 0.7, layout, spec)) < 1e-13);
  const std::vector<DetectionEvent> record{DetectionEvent::spin_at(0, 0.2, 1), DetectionEvent::spin_at(0, 0.2, 1),
                                           DetectionEvent::spin_at(0, 1.7, -1)};
  for (double theta : {0.0, 1.0, 2.5}) {
    const double a = remote_orientation_exact(record, 1, theta, layout, spec);
    const double b = remote_orientation_exact(record, 1, theta + pi, layout, spec);
    CHECK(b == doctest::Approx(-a).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)remote_orientation_exact(record, 9, 0.0, layout, spec), Error);
}

TEST_CASE("three-mode power weights reproduce the 2-D engine") {
  std::mt19937_64 rng(30);
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  std::uniform_int_distribution<std::int64_t> pop(1, 400);
  for (int i = 0; i < 10; ++i) {
    CondensateSpec spec;
    spec.n_a = pop(rng);
    spec.n_b = pop(rng);
    spec.n_c = pop(rng);
    std::vector<ThreeModeEvent> events;
    for (int k = 0; k < 1 + i % 6; ++k) events.push_back(ThreeModeEvent::from_pair(angle(rng), angle(rng)));
    const double engine = sequence_probability3(events, PhaseDistribution::uniform(16, 2),
                                                ThreeModeModel::from_populations(spec.n_a, spec.n_b, spec.n_c));
    CHECK(exact_sequence_probability3(events, spec, WeightMode::power).scaled == doctest::Approx(engine).epsilon(1e-10));
  }
}

TEST_CASE("oracle caps") {
  std::mt19937_64 rng(31);
  const auto spec = plane_wave_spec(20, 20);
  const auto eleven = random_record(rng, 11);
  try {
    (void)brute_force_sequence_probability(eleven, spec, WeightMode::power);
    FAIL("expected cap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cap_exceeded);
  }
  CondensateSpec three = spec;
  three.n_c = 20;
  const std::vector<ThreeModeEvent> sixteen(16, ThreeModeEvent::from_pair(0.1, 0.2));
  CHECK_THROWS_AS((void)exact_sequence_probability3(sixteen, three, WeightMode::power), Error);
  CHECK_NOTHROW((void)exact_sequence_probability3(std::span(sixteen).first(15), three, WeightMode::power));
}

}  // TEST_SUITE
