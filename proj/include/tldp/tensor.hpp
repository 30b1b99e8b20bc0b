//
// Copyright 2026 The TLDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tldp/error.hpp"

namespace tldp {

using Dims = std::vector<std::size_t>;

// Product of the dimension list. Rejects empty lists, zero extents and
// products that overflow size_t.
inline std::size_t dims_product(std::span<const std::size_t> dims) {
  detail::require(!dims.empty(), "tensor order must be at least 1");
  std::size_t total = 1;
  for (std::size_t d : dims) {
    detail::require(d > 0, "tensor dimensions must be positive");
    detail::require(total <= std::numeric_limits<std::size_t>::max() / d,
                    "tensor element count overflows");
    total *= d;
  }
  return total;
}

// Dense N-order tensor of doubles, row-major (last index fastest).
// Immutable after construction; every element is finite.
class Tensor {
 public:
  Tensor(Dims dims, std::vector<double> data)
      : dims_(std::move(dims)), data_(std::move(data)) {
    const std::size_t count = dims_product(dims_);
    if (data_.size() != count) {
      throw InvalidArgument("tensor data length " +
                            std::to_string(data_.size()) +
                            " does not match dimension product " +
                            std::to_string(count));
    }
    for (double v : data_) {
      detail::require(std::isfinite(v), "tensor elements must be finite");
    }
  }

  static Tensor zeros(Dims dims) {
    const std::size_t count = dims_product(dims);
    return Tensor(std::move(dims), std::vector<double>(count, 0.0));
  }

  const Dims& dims() const noexcept { return dims_; }
  std::size_t order() const noexcept { return dims_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<const double> data() const noexcept { return data_; }
  double operator[](std::size_t i) const { return data_[i]; }

  // Releases the storage; used by builders that move a result out.
  std::vector<double> take_data() && { return std::move(data_); }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Dims dims_;
  std::vector<double> data_;
};

// Per-element retention flags paired with a tensor of the same shape.
struct RetentionMask {
  Dims dims;
  std::vector<bool> flags;

  std::size_t retained() const {
    return static_cast<std::size_t>(
        std::count(flags.begin(), flags.end(), true));
  }

  friend bool operator==(const RetentionMask&, const RetentionMask&) = default;
};

inline std::size_t element_count(const Tensor& t) noexcept { return t.size(); }

inline double frobenius_norm(const Tensor& t) {
  double sum = 0.0;
  for (double v : t.data()) sum += v * v;
  return std::sqrt(sum);
}

inline double linf_norm(const Tensor& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

// Coordinate-wise projection onto [-bound, bound].
inline Tensor clip_linf(const Tensor& t, double bound) {
  detail::require(bound > 0.0 && std::isfinite(bound),
                  "clip bound must be positive and finite");
  std::vector<double> out(t.data().begin(), t.data().end());
  for (double& v : out) v = std::clamp(v, -bound, bound);
  return Tensor(t.dims(), std::move(out));
}

inline Tensor add(const Tensor& a, const Tensor& b) {
  detail::require(a.dims() == b.dims(), "tensor shape mismatch in add");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Tensor(a.dims(), std::move(out));
}

inline Tensor subtract(const Tensor& a, const Tensor& b) {
  detail::require(a.dims() == b.dims(), "tensor shape mismatch in subtract");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Tensor(a.dims(), std::move(out));
}

inline Tensor scale(const Tensor& a, double factor) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (double& v : out) v *= factor;
  return Tensor(a.dims(), std::move(out));
}

// Elementwise mean of equally shaped tensors, accumulated in argument order.
inline Tensor mean(std::span<const Tensor> tensors) {
  detail::require(!tensors.empty(), "mean of zero tensors");
  std::vector<double> acc(tensors.front().size(), 0.0);
  for (const Tensor& t : tensors) {
    detail::require(t.dims() == tensors.front().dims(),
                    "tensor shape mismatch in mean");
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += t[i];
  }
  const double n = static_cast<double>(tensors.size());
  for (double& v : acc) v /= n;
  return Tensor(tensors.front().dims(), std::move(acc));
}

}  // namespace tldp
