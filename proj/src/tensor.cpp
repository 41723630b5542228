#include "sigscore/tensor.hpp"

#include <limits>
#include <stdexcept>

namespace sigscore {

namespace {

// dest[i*nb + j] += a[i] * b[j]
void outer_accumulate(double* dest, const double* a, std::size_t na, const double* b,
                      std::size_t nb) {
  for (std::size_t i = 0; i < na; ++i) {
    const double ai = a[i];
    double* row = dest + i * nb;
    for (std::size_t j = 0; j < nb; ++j) {
      row[j] += ai * b[j];
    }
  }
}

void axpy(double* dest, const double* src, std::size_t n, double factor) {
  for (std::size_t i = 0; i < n; ++i) {
    dest[i] += factor * src[i];
  }
}

void require_same_shape(const TruncatedTensor& a, const TruncatedTensor& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("tensor shape mismatch: dim/order must agree");
  }
}

}  // namespace

std::size_t level_size(int dim, int k) {
  if (dim < 1 || k < 0) {
    throw std::invalid_argument("level_size requires dim >= 1 and k >= 0");
  }
  std::size_t size = 1;
  for (int c = 0; c < k; ++c) {
    if (size > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(dim)) {
      throw std::overflow_error("tensor level size overflows size_t");
    }
    size *= static_cast<std::size_t>(dim);
  }
  return size;
}

TruncatedTensor::TruncatedTensor(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1 || order < 1) {
    throw std::invalid_argument("TruncatedTensor requires dim >= 1 and order >= 1");
  }
  levels_.resize(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) {
    levels_[static_cast<std::size_t>(k)].assign(level_size(dim, k), 0.0);
  }
}

TruncatedTensor TruncatedTensor::unit(int dim, int order) {
  TruncatedTensor t(dim, order);
  t.set_scalar(1.0);
  return t;
}

TruncatedTensor& TruncatedTensor::add_scaled(const TruncatedTensor& other, double factor) {
  require_same_shape(*this, other);
  for (int k = 0; k <= order_; ++k) {
    axpy(levels_[static_cast<std::size_t>(k)].data(),
         other.levels_[static_cast<std::size_t>(k)].data(),
         levels_[static_cast<std::size_t>(k)].size(), factor);
  }
  return *this;
}

TruncatedTensor& TruncatedTensor::scale(double factor) {
  for (auto& level : levels_) {
    for (double& value : level) {
      value *= factor;
    }
  }
  return *this;
}

TruncatedTensor tensor_mul(const TruncatedTensor& a, const TruncatedTensor& b) {
  require_same_shape(a, b);
  const int order = a.order();
  TruncatedTensor result(a.dim(), order);
  result.set_scalar(a.scalar() * b.scalar());
  for (int k = 1; k <= order; ++k) {
    auto dest = result.level(k);
    for (int i = 0; i <= k; ++i) {
      const int j = k - i;
      if (i == 0) {
        if (a.scalar() != 0.0) {
          axpy(dest.data(), b.level(k).data(), dest.size(), a.scalar());
        }
      } else if (j == 0) {
        if (b.scalar() != 0.0) {
          axpy(dest.data(), a.level(k).data(), dest.size(), b.scalar());
        }
      } else {
        outer_accumulate(dest.data(), a.level(i).data(), a.level(i).size(),
                         b.level(j).data(), b.level(j).size());
      }
    }
  }
  return result;
}

void tensor_mul_inplace(TruncatedTensor& a, const TruncatedTensor& b) {
  require_same_shape(a, b);
  const int order = a.order();
  const double a0 = a.scalar();
  const double b0 = b.scalar();
  // Top level first: level L only reads strictly lower levels of a, which
  // are still untouched when we get to them.
  for (int level = order; level >= 1; --level) {
    auto dest = a.level(level);
    if (b0 != 1.0) {
      for (double& value : dest) {
        value *= b0;
      }
    }
    for (int i = level - 1; i >= 1; --i) {
      const int j = level - i;
      outer_accumulate(dest.data(), a.level(i).data(), a.level(i).size(),
                       b.level(j).data(), b.level(j).size());
    }
    if (a0 != 0.0) {
      axpy(dest.data(), b.level(level).data(), dest.size(), a0);
    }
  }
  a.set_scalar(a0 * b0);
}

TruncatedTensor tensor_exp(const TruncatedTensor& x) {
  if (x.scalar() != 0.0) {
    throw std::invalid_argument("tensor_exp requires a zero level-0 coefficient");
  }
  const int order = x.order();
  // Horner form: exp(x) = 1 + x(1 + x/2 (1 + x/3 (...)))
  TruncatedTensor result = TruncatedTensor::unit(x.dim(), order);
  for (int k = order; k >= 1; --k) {
    result = tensor_mul(x, result);
    result.scale(1.0 / k);
    result.set_scalar(1.0);
  }
  return result;
}

TruncatedTensor tensor_log(const TruncatedTensor& x) {
  if (x.scalar() != 1.0) {
    throw std::invalid_argument("tensor_log requires a unit level-0 coefficient");
  }
  const int order = x.order();
  TruncatedTensor y = x;
  y.set_scalar(0.0);
  // Horner form: log(1+y) = y (1/1 - y (1/2 - y (... - y/N)))
  TruncatedTensor t = TruncatedTensor::unit(y.dim(), order);
  t.scale(1.0 / order);
  for (int k = order - 1; k >= 1; --k) {
    t = tensor_mul(y, t);
    t.scale(-1.0);
    t.set_scalar(t.scalar() + 1.0 / k);
  }
  return tensor_mul(y, t);
}

}  // namespace sigscore
