#include <doctest.h>

#include <random>

#include "fockphase/angles.hpp"
#include "fockphase/errors.hpp"
#include "fockphase/initial_phase.hpp"
#include "fockphase/phase_engine.hpp"
#include "fockphase/spin_engine.hpp"
#include "support.hpp"

using namespace fockphase;

TEST_SUITE("spin-engine") {

TEST_CASE("Wallis examples") {
  CHECK(wallis_reference(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wallis_reference(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(wallis_reference(1, 1) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(wallis_reference(2, 0) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(wallis_composition(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS((void)wallis_reference(-1, 2), Error);
}

TEST_CASE("Wallis values are symmetric and compositions sum to one") {
  for (std::int64_t p = 0; p <= 60; ++p) {
    double total = 0.0;
    for (std::int64_t k = 0; k <= p; ++k) {
      CHECK(wallis_reference(k, p - k) == doctest::Approx(wallis_reference(p - k, k)).epsilon(1e-13));
      total += wallis_composition(k, p - k);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Wallis values equal engine probabilities at one axis") {
  const auto model = EventFactorModel::plane_wave(1.0);
  const auto prior = uniform_prior(64);
  for (std::int64_t up = 0; up <= 8; ++up) {
    for (std::int64_t down = 0; down <= 8; ++down) {
      std::vector<DetectionEvent> events;
      for (std::int64_t i = 0; i < up; ++i) events.push_back(DetectionEvent::spin(0.4, 1.1, 1));
      for (std::int64_t i = 0; i < down; ++i) events.push_back(DetectionEvent::spin(0.4, 1.1, -1));
      CHECK(sequence_probability(events, prior, model) ==
            doctest::Approx(wallis_reference(up, down)).epsilon(1e-12));
    }
  }
}

TEST_CASE("angle policies") {
  const auto uniform = uniform_prior(256);
  CHECK(next_angle(AnglePolicy::fixed(0.3), uniform, 7) == doctest::Approx(0.3));
  CHECK(next_angle(AnglePolicy::fixed(-0.5), uniform, 0) == doctest::Approx(two_pi - 0.5));
  const auto alt = AnglePolicy::alternating(0.0, pi / 2.0);
  CHECK(next_angle(alt, uniform, 0) == 0.0);
  CHECK(next_angle(alt, uniform, 1) == doctest::Approx(pi / 2.0));
  CHECK(next_angle(alt, uniform, 4) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  CHECK(next_angle(AnglePolicy::perpendicular(0.7), uniform, 3) == doctest::Approx(0.7));
  const auto spike = PhaseDistribution::point_mass(256, 32);
  CHECK(next_angle(AnglePolicy::perpendicular(0.7), spike, 3) == doctest::Approx(spike.angle(32) + pi / 2.0));
  CHECK(AnglePolicy::fixed(0.25).id() == "fixed(0.25)");
  CHECK(AnglePolicy::perpendicular().id() == "perpendicular(0)");
}

TEST_CASE("remote prediction") {
  std::mt19937_64 rng(40);
  const auto layout = test_support::random_layout(rng);
  const auto& modes = *layout.mode_pair();
  CondensateSpec spec;
  spec.n_a = 400;
  spec.n_b = 900;
  spec.spinful = true;

  const auto flat = predict_remote_orientation(uniform_prior(256), 1, modes, spec);
  CHECK(flat.confidence == 0.0);
  CHECK(flat.expected_spin(0.3) == 0.0);
  CHECK(flat.magnitude == doctest::Approx(2.0 * 600.0 * modes.overlap(1)).epsilon(1e-14));

  const auto spike = PhaseDistribution::point_mass(256, 40);
  const auto sharp = predict_remote_orientation(spike, 2, modes, spec);
  CHECK(sharp.confidence == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(angle_difference(sharp.axis, spike.angle(40) - *modes.relative_phase(2))) < 1e-12);
  CHECK(sharp.expected_spin(sharp.axis) == doctest::Approx(sharp.magnitude));
  CHECK(sharp.expected_spin(sharp.axis + pi / 2.0) == doctest::Approx(0.0).scale(sharp.magnitude));

  const RegionLayout dead({{"D", 0.5, 1.0, 0.0, {}}, {"E", 0.5, 1.0, std::sqrt(2.0), {}}});
  try {
    (void)predict_remote_orientation(spike, 0, *dead.mode_pair(), spec);
    FAIL("expected no_orientation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_orientation);
  }
}

TEST_CASE("region experiments") {
  std::mt19937_64 rng(41);
  CondensateSpec spec;
  spec.n_a = 5000;
  spec.n_b = 5000;
  spec.spinful = true;
  const auto layout = test_support::random_layout(rng, true);
  const auto run = run_region_experiment(7, 60, AnglePolicy::perpendicular(), layout, spec);
  CHECK(run.record.events.size() == 60);
  for (const auto& e : run.record.events) CHECK(*e.site == layout.index_of("D"));
  CHECK(run.near == run.far);
  CHECK(run.near.confidence > 0.5);

  const auto empty = run_region_experiment(7, 0, AnglePolicy::perpendicular(), layout, spec);
  CHECK(empty.near.confidence == 0.0);

  const auto again = run_region_experiment(7, 60, AnglePolicy::perpendicular(), layout, spec);
  CHECK(again.record.events == run.record.events);
  CHECK(again.near == run.near);
}

TEST_CASE("rotating a fixed axis rotates the posterior") {
  const std::size_t m = 512;
  const std::ptrdiff_t steps = 64;
  const double delta = two_pi * static_cast<double>(steps) / static_cast<double>(m);
  const auto model = EventFactorModel::plane_wave(1.0);
  const auto prior = uniform_prior(m);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = sample_record(seed, 20, CandidatePlan::spin_grid(64, AnglePolicy::fixed(0.0)), prior, model);
    const auto b = sample_record(seed, 20, CandidatePlan::spin_grid(64, AnglePolicy::fixed(delta)), prior, model);
    for (std::size_t i = 0; i < a.events.size(); ++i) {
      CHECK(a.events[i].u == b.events[i].u);
      CHECK(a.events[i].eta == b.events[i].eta);
    }
    CHECK(test_support::max_abs_diff(a.posterior.rotated(steps), b.posterior) < 1e-10);
  }
}

}  // TEST_SUITE
