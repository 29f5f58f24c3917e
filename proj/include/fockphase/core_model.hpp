#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fockphase {

using complex = std::complex<double>;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double dot(const Vec3& a, const Vec3& b);
bool is_finite(const Vec3& v);

/// Two orbital modes tabulated on a shared set of sites. Each site carries a
/// cell volume, so a uniform grid and a piecewise-constant region layout use
/// the same representation. Both modes are normalized: Σ|φ|²·volume = 1.
class GeneralModePair {
 public:
  GeneralModePair(std::vector<complex> phi_a, std::vector<complex> phi_b,
                  std::vector<double> cell_volumes,
                  std::vector<Vec3> positions = {});

  std::size_t size() const { return phi_a_.size(); }
  complex phi_a(std::size_t site) const { return phi_a_.at(site); }
  complex phi_b(std::size_t site) const { return phi_b_.at(site); }
  double cell_volume(std::size_t site) const { return volumes_.at(site); }
  std::span<const Vec3> positions() const { return positions_; }

  /// |φ_a(r)φ_b(r)|
  double overlap(std::size_t site) const;
  bool is_live(std::size_t site) const { return overlap(site) > 0.0; }
  /// ξ(r) = arg(φ_a/φ_b) in [0, 2π); empty where either mode vanishes.
  std::optional<double> relative_phase(std::size_t site) const;

 private:
  std::vector<complex> phi_a_;
  std::vector<complex> phi_b_;
  std::vector<double> volumes_;
  std::vector<Vec3> positions_;
};

struct PlaneWaveModes {
  Vec3 k_a;
  Vec3 k_b;
  Vec3 k_c;
};

/// Initial multi-Fock state |N_a; N_b (; N_c)>. Plane-wave modes unless a
/// tabulated mode pair is attached.
struct CondensateSpec {
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
  std::int64_t n_c = 0;
  bool spinful = false;
  PlaneWaveModes plane_waves;
  std::shared_ptr<const GeneralModePair> tabulated;

  std::int64_t total() const { return n_a + n_b + n_c; }
  int mode_count() const { return n_c > 0 ? 3 : 2; }
  /// Two-mode contrast ratio 2√(N_a N_b)/(N_a+N_b).
  double contrast() const;
};

/// Fringe visibility 2√(N_a N_b)/(N_a+N_b). Throws invalid_spec when both
/// populations are zero or either is negative.
double contrast_ratio(std::int64_t n_a, std::int64_t n_b);

/// u = ((k_a − k_b)·r) mod 2π
double reduce_position(const Vec3& r, const Vec3& k_a, const Vec3& k_b);

enum class EventKind { position, spin };

/// One detection. Plane-wave runs use the reduced coordinate u; tabulated
/// runs use a site index into the mode tables. Position events always carry
/// η = +1 and θ = 0.
struct DetectionEvent {
  EventKind kind = EventKind::position;
  double u = 0.0;
  std::optional<std::size_t> site;
  double theta = 0.0;
  int eta = 1;

  static DetectionEvent position(double u);
  static DetectionEvent position_at(std::size_t site);
  static DetectionEvent spin(double u, double theta, int eta);
  static DetectionEvent spin_at(std::size_t site, double theta, int eta);

  friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

struct Region {
  std::string name;
  double volume = 0.0;
  complex phi_a;
  complex phi_b;
  Vec3 center;
};

/// Disjoint regions (D, D′, D″, ...) on which both orbitals are constant.
class RegionLayout {
 public:
  explicit RegionLayout(std::vector<Region> regions);

  std::span<const Region> regions() const { return regions_; }
  std::size_t index_of(const std::string& name) const;
  /// One site per region, cell volume = region volume.
  std::shared_ptr<const GeneralModePair> mode_pair() const { return pair_; }

 private:
  std::vector<Region> regions_;
  std::shared_ptr<const GeneralModePair> pair_;
};

}  // namespace fockphase
