#include "fockphase/core_model.hpp"

#include <cmath>
#include <set>

#include "fockphase/angles.hpp"
#include "fockphase/errors.hpp"

namespace fockphase {

namespace {

constexpr double kNormTolerance = 1e-9;

void check_eta(int eta) {
  if (eta != 1 && eta != -1) {
    throw Error(ErrorKind::invalid_input, "spin result must be +1 or -1");
  }
}

}  // namespace

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

GeneralModePair::GeneralModePair(std::vector<complex> phi_a, std::vector<complex> phi_b,
                                 std::vector<double> cell_volumes, std::vector<Vec3> positions)
    : phi_a_(std::move(phi_a)),
      phi_b_(std::move(phi_b)),
      volumes_(std::move(cell_volumes)),
      positions_(std::move(positions)) {
  if (phi_a_.empty() || phi_a_.size() != phi_b_.size() || volumes_.size() != phi_a_.size()) {
    throw Error(ErrorKind::invalid_spec, "mode tables must be non-empty and share one grid");
  }
  if (!positions_.empty() && positions_.size() != phi_a_.size()) {
    throw Error(ErrorKind::invalid_spec, "position table does not match mode tables");
  }
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (std::size_t i = 0; i < phi_a_.size(); ++i) {
    if (!(volumes_[i] > 0.0) || !std::isfinite(volumes_[i])) {
      throw Error(ErrorKind::invalid_spec, "cell volumes must be positive");
    }
    norm_a += std::norm(phi_a_[i]) * volumes_[i];
    norm_b += std::norm(phi_b_[i]) * volumes_[i];
  }
  if (std::abs(norm_a - 1.0) > kNormTolerance || std::abs(norm_b - 1.0) > kNormTolerance) {
    throw Error(ErrorKind::invalid_spec, "tabulated wavefunctions must be normalized");
  }
}

double GeneralModePair::overlap(std::size_t site) const {
  return std::abs(phi_a_.at(site)) * std::abs(phi_b_.at(site));
}

std::optional<double> GeneralModePair::relative_phase(std::size_t site) const {
  if (!is_live(site)) return std::nullopt;
  return canonical_angle(std::arg(phi_a_[site] * std::conj(phi_b_[site])));
}

double CondensateSpec::contrast() const { return contrast_ratio(n_a, n_b); }

double contrast_ratio(std::int64_t n_a, std::int64_t n_b) {
  if (n_a < 0 || n_b < 0) throw Error(ErrorKind::invalid_spec, "negative population");
  if (n_a + n_b == 0) throw Error(ErrorKind::invalid_spec, "empty condensate");
  if (n_a == n_b) return 1.0;
  const double a = static_cast<double>(n_a);
  const double b = static_cast<double>(n_b);
  return 2.0 * std::sqrt(a * b) / (a + b);
}

double reduce_position(const Vec3& r, const Vec3& k_a, const Vec3& k_b) {
  return canonical_angle(dot(k_a - k_b, r));
}

DetectionEvent DetectionEvent::position(double u) {
  DetectionEvent e;
  e.kind = EventKind::position;
  e.u = canonical_angle(u);
  return e;
}

DetectionEvent DetectionEvent::position_at(std::size_t site) {
  DetectionEvent e;
  e.kind = EventKind::position;
  e.site = site;
  return e;
}

DetectionEvent DetectionEvent::spin(double u, double theta, int eta) {
  check_eta(eta);
  DetectionEvent e;
  e.kind = EventKind::spin;
  e.u = canonical_angle(u);
  e.theta = canonical_angle(theta);
  e.eta = eta;
  return e;
}

DetectionEvent DetectionEvent::spin_at(std::size_t site, double theta, int eta) {
  check_eta(eta);
  DetectionEvent e;
  e.kind = EventKind::spin;
  e.site = site;
  e.theta = canonical_angle(theta);
  e.eta = eta;
  return e;
}

RegionLayout::RegionLayout(std::vector<Region> regions) : regions_(std::move(regions)) {
  std::set<std::string> names;
  std::vector<complex> phi_a;
  std::vector<complex> phi_b;
  std::vector<double> volumes;
  std::vector<Vec3> centers;
  for (const auto& region : regions_) {
    if (!names.insert(region.name).second) {
      throw Error(ErrorKind::invalid_spec, "duplicate region name '" + region.name + "'");
    }
    phi_a.push_back(region.phi_a);
    phi_b.push_back(region.phi_b);
    volumes.push_back(region.volume);
    centers.push_back(region.center);
  }
  pair_ = std::make_shared<const GeneralModePair>(std::move(phi_a), std::move(phi_b),
                                                  std::move(volumes), std::move(centers));
}

std::size_t RegionLayout::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].name == name) return i;
  }
  throw Error(ErrorKind::invalid_input, "unknown region '" + name + "'");
}

}  // namespace fockphase
