#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sigscore {

// Dense element of the truncated tensor algebra T^N(R^d).
//
// Level k holds the d^k coefficients of the k-fold tensor component in
// row-major multi-index order: the coefficient of (z_1,...,z_k), z_c in
// [1,d], sits at offset sum_c (z_c - 1) * d^(k-c). Level 0 is stored
// explicitly so group-like elements (scalar 1) and Lie-type elements
// (scalar 0) are distinguishable by data.
class TruncatedTensor {
 public:
  TruncatedTensor(int dim, int order);

  static TruncatedTensor zero(int dim, int order) { return TruncatedTensor(dim, order); }
  static TruncatedTensor unit(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }

  double scalar() const { return levels_[0][0]; }
  void set_scalar(double value) { levels_[0][0] = value; }

  std::span<double> level(int k) { return levels_[static_cast<std::size_t>(k)]; }
  std::span<const double> level(int k) const { return levels_[static_cast<std::size_t>(k)]; }

  // this += factor * other
  TruncatedTensor& add_scaled(const TruncatedTensor& other, double factor);
  TruncatedTensor& scale(double factor);

  bool same_shape(const TruncatedTensor& other) const {
    return dim_ == other.dim_ && order_ == other.order_;
  }

 private:
  int dim_;
  int order_;
  std::vector<std::vector<double>> levels_;
};

// d^k as size_t, throwing std::overflow_error when it does not fit.
std::size_t level_size(int dim, int k);

// Graded product truncated at the common order: result level k is
// sum_{i+j=k} a_i (x) b_j.
TruncatedTensor tensor_mul(const TruncatedTensor& a, const TruncatedTensor& b);

// a := a (x) b without allocating the result.
void tensor_mul_inplace(TruncatedTensor& a, const TruncatedTensor& b);

// Truncated exponential 1 + x + x^2/2! + ... ; requires scalar() == 0.
TruncatedTensor tensor_exp(const TruncatedTensor& x);

// Truncated logarithm of a tensor with scalar() == 1; result has scalar 0.
TruncatedTensor tensor_log(const TruncatedTensor& x);

}  // namespace sigscore
