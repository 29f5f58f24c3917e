#include "fockphase/angles.hpp"

#include <cmath>

#include "fockphase/errors.hpp"

namespace fockphase {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_spec: return "invalid-spec";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::quadrature_degree: return "quadrature-degree";
    case ErrorKind::zero_probability_record: return "zero-probability-record";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::cap_exceeded: return "cap-exceeded";
    case ErrorKind::no_orientation: return "no-orientation-possible";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

double canonical_angle(double angle) {
  double r = std::fmod(angle, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

double angle_difference(double a, double b) {
  double d = canonical_angle(a - b);
  return d > pi ? d - two_pi : d;
}

}  // namespace fockphase
