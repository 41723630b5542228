#pragma once

#include <cstddef>
#include <vector>

#include "sigscore/stream.hpp"
#include "sigscore/tensor.hpp"

namespace sigscore {

// Flattened length of a signature truncated at the given order, excluding
// the constant level-0 term: sum_{k=1..order} d^k. Throws
// std::overflow_error when the count does not fit in size_t.
std::size_t sig_dim(int dim, int order);

// Truncated signature of the linear interpolation of the stream, evaluated
// as the ordered product of segment exponentials (Chen concatenation,
// left-to-right). The result is group-like: level 0 equals 1.
TruncatedTensor stream_signature(const Stream& stream, int order);

// tensor_log of the stream signature; level 0 equals 0.
TruncatedTensor stream_log_signature(const Stream& stream, int order);

// Levels 1..N concatenated in level-major, row-major index order. Length is
// sig_dim(dim, order).
std::vector<double> flatten(const TruncatedTensor& tensor);

// Inverse of flatten given the shape and the level-0 coefficient.
TruncatedTensor unflatten(int dim, int order, double scalar,
                          const std::vector<double>& values);

// Direct numerical evaluation of the coordinate iterated integrals over the
// piecewise-linear interpolant. Marches a cumulative trapezoid rule level by
// level at two grid resolutions and Richardson-extrapolates. Intended as a
// test oracle for small dim/order; cost grows like steps * d^order.
TruncatedTensor brute_force_signature(const Stream& stream, int order, int steps);

}  // namespace sigscore
