#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace fockphase::detail {

/// cos/sin of Φ_j = 2πj/M, cached per grid size for the calling thread.
struct TrigTable {
  std::vector<double> cos;
  std::vector<double> sin;
};

const TrigTable& trig_table(std::size_t grid_size);

}  // namespace fockphase::detail
