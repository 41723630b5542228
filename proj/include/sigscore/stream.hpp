#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sigscore {

// Ordered sequence of points in R^d, stored row-major (point-major).
struct Stream {
  int dim = 0;
  std::vector<double> points;

  std::size_t point_count() const {
    return dim > 0 ? points.size() / static_cast<std::size_t>(dim) : 0;
  }

  std::span<const double> point(std::size_t index) const {
    return {points.data() + index * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
};

// Validates shape and finiteness; throws std::invalid_argument otherwise.
Stream make_stream(int dim, std::vector<double> points);

}  // namespace sigscore
