#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fockphase/angles.hpp"
#include "fockphase/core_model.hpp"
#include "fockphase/phase_distribution.hpp"

namespace test_support {

using fockphase::DetectionEvent;

inline double max_abs_diff(const fockphase::PhaseDistribution& a, const fockphase::PhaseDistribution& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.point_count(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double relative(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

/// Random spin or position record; `spin_share` of the events are spin events.
inline std::vector<DetectionEvent> random_record(std::mt19937_64& rng, std::size_t p,
                                                 double spin_share = 0.5, bool fixed_u = false) {
  std::uniform_real_distribution<double> angle(0.0, fockphase::two_pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DetectionEvent> events;
  for (std::size_t i = 0; i < p; ++i) {
    const double u = fixed_u ? 0.0 : angle(rng);
    if (unit(rng) < spin_share) {
      events.push_back(DetectionEvent::spin(u, angle(rng), unit(rng) < 0.5 ? 1 : -1));
    } else {
      events.push_back(DetectionEvent::position(u));
    }
  }
  return events;
}

inline fockphase::CondensateSpec plane_wave_spec(std::int64_t n_a, std::int64_t n_b, bool spinful = true) {
  fockphase::CondensateSpec spec;
  spec.n_a = n_a;
  spec.n_b = n_b;
  spec.spinful = spinful;
  spec.plane_waves.k_a = {1.0, 0.0, 0.0};
  return spec;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("fockphase-test-" + std::to_string(::getpid()) + "-" + tag + "-" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace test_support

namespace test_support {

/// Regions D, D′, D″ with random normalized orbitals. With `parallel`,
/// D′ and D″ carry identical wavefunction values.
inline fockphase::RegionLayout random_layout(std::mt19937_64& rng, bool parallel = false) {
  std::uniform_real_distribution<double> angle(0.0, fockphase::two_pi);
  std::uniform_real_distribution<double> mag(0.3, 1.0);
  std::vector<fockphase::Region> regions = {
      {"D", 0.25, {}, {}, {0.0, 0.0, 0.0}},
      {"D'", 0.25, {}, {}, {1.0, 0.0, 0.0}},
      {"D''", 0.25, {}, {}, {50.0, 0.0, 0.0}},
      {"rest", 0.25, {}, {}, {9.0, 9.0, 9.0}},
  };
  for (auto& r : regions) {
    r.phi_a = std::polar(mag(rng), angle(rng));
    r.phi_b = std::polar(mag(rng), angle(rng));
  }
  if (parallel) {
    regions[2].phi_a = regions[1].phi_a;
    regions[2].phi_b = regions[1].phi_b;
  }
  double na = 0.0;
  double nb = 0.0;
  for (const auto& r : regions) {
    na += std::norm(r.phi_a) * r.volume;
    nb += std::norm(r.phi_b) * r.volume;
  }
  for (auto& r : regions) {
    r.phi_a /= std::sqrt(na);
    r.phi_b /= std::sqrt(nb);
  }
  return fockphase::RegionLayout(std::move(regions));
}

}  // namespace test_support
