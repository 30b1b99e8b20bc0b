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
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tldp/error.hpp"
#include "tldp/rng.hpp"
#include "tldp/tensor.hpp"

namespace tldp {

// Extended precision keeps the retention exponent eps*(1-I), which reaches
// -1e8 for megapixel tensors, accurate well below 1e-9 absolute.
static_assert(std::numeric_limits<long double>::digits >= 64,
              "log-space retention arithmetic needs an extended long double");

enum class MechanismKind {
  kTldpLaplace,
  kTldpGaussian,
  kWeightedTldpLaplace,
  kWeightedTldpGaussian,
  kFullLaplace,
  kFullGaussian,
};

inline constexpr std::array<MechanismKind, 6> kAllMechanismKinds = {
    MechanismKind::kTldpLaplace,         MechanismKind::kTldpGaussian,
    MechanismKind::kWeightedTldpLaplace, MechanismKind::kWeightedTldpGaussian,
    MechanismKind::kFullLaplace,         MechanismKind::kFullGaussian,
};

constexpr bool is_laplace(MechanismKind k) {
  return k == MechanismKind::kTldpLaplace ||
         k == MechanismKind::kWeightedTldpLaplace ||
         k == MechanismKind::kFullLaplace;
}
constexpr bool is_weighted(MechanismKind k) {
  return k == MechanismKind::kWeightedTldpLaplace ||
         k == MechanismKind::kWeightedTldpGaussian;
}
constexpr bool is_full(MechanismKind k) {
  return k == MechanismKind::kFullLaplace || k == MechanismKind::kFullGaussian;
}
// Plain randomized-response kinds (no weights).
constexpr bool is_tldp(MechanismKind k) {
  return k == MechanismKind::kTldpLaplace || k == MechanismKind::kTldpGaussian;
}

constexpr std::string_view to_string(MechanismKind k) {
  switch (k) {
    case MechanismKind::kTldpLaplace: return "tldp_laplace";
    case MechanismKind::kTldpGaussian: return "tldp_gaussian";
    case MechanismKind::kWeightedTldpLaplace: return "weighted_tldp_laplace";
    case MechanismKind::kWeightedTldpGaussian: return "weighted_tldp_gaussian";
    case MechanismKind::kFullLaplace: return "full_laplace";
    case MechanismKind::kFullGaussian: return "full_gaussian";
  }
  return "unknown";
}

inline MechanismKind parse_mechanism_kind(std::string_view name) {
  for (MechanismKind k : kAllMechanismKinds) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown mechanism kind '" + std::string(name) + "'");
}

struct PrivacyParams {
  MechanismKind kind = MechanismKind::kTldpLaplace;
  double epsilon = 0.0;
  double delta_range = 0.0;
  std::size_t count = 0;
  // b for Laplace kinds, sigma for Gaussian kinds.
  double scale = 0.0;
  // Natural log of the retention probability; -inf for full-noise kinds.
  double retain_log_p = -std::numeric_limits<double>::infinity();

  double retain_p() const { return std::exp(retain_log_p); }
  double variance() const {
    return is_laplace(kind) ? 2.0 * scale * scale : scale * scale;
  }

  friend bool operator==(const PrivacyParams&, const PrivacyParams&) = default;
};

namespace detail {

inline long double log_add_exp(long double x, long double y) {
  if (x < y) std::swap(x, y);
  if (y == -std::numeric_limits<long double>::infinity()) return x;
  return x + std::log1p(std::exp(y - x));
}

// Pieces of the randomized-response retention probability
//   p = e^a / (D + e^a),  a = eps - E,
// with D = 2b, E = I*Delta/b (Laplace) or D = sigma*sqrt(2 pi),
// E = I*Delta^2/(2 sigma^2) (Gaussian). Everything stays in log space.
struct RetentionTerms {
  long double penalty;     // E
  long double exponent;    // a
  long double log_norm;    // log D
  long double log_denom;   // log(D + e^a)

  long double log_p() const { return exponent - log_denom; }
  long double log_one_minus_p() const { return log_norm - log_denom; }
};

inline RetentionTerms retention_terms(bool laplace, double epsilon,
                                      double delta_range, std::size_t count,
                                      double scale) {
  const long double eps = epsilon;
  const long double delta = delta_range;
  const long double n = static_cast<long double>(count);
  const long double s = scale;
  RetentionTerms t{};
  if (laplace) {
    t.penalty = n * delta / s;
    t.log_norm = std::log(2.0L * s);
  } else {
    t.penalty = n * delta * delta / (2.0L * s * s);
    t.log_norm = std::log(s) + 0.5L * std::log(2.0L * std::numbers::pi_v<long double>);
  }
  t.exponent = eps - t.penalty;
  t.log_denom = log_add_exp(t.log_norm, t.exponent);
  return t;
}

inline void validate_budget(double epsilon, double delta_range,
                            std::size_t count) {
  require(epsilon > 0.0 && std::isfinite(epsilon),
          "epsilon must be positive and finite");
  require(delta_range > 0.0 && std::isfinite(delta_range),
          "delta_range must be positive and finite");
  require(count >= 1, "element count must be at least 1");
}

}  // namespace detail

// Noise scale and retention probability for one mechanism kind.
//
// Randomized-response kinds use b = Delta/eps or sigma^2 = Delta^2/(2 eps)
// and the retention probability above. Full-noise kinds inflate the scale
// so that I independent perturbations meet the same budget
// (b1 = I*Delta/eps, sigma1^2 = I*Delta^2/(2 eps)) and never retain.
inline PrivacyParams make_params(MechanismKind kind, double epsilon,
                                 double delta_range, std::size_t count) {
  detail::validate_budget(epsilon, delta_range, count);
  PrivacyParams params;
  params.kind = kind;
  params.epsilon = epsilon;
  params.delta_range = delta_range;
  params.count = count;
  const bool laplace = is_laplace(kind);
  if (is_full(kind)) {
    const long double n = static_cast<long double>(count);
    params.scale = laplace ? static_cast<double>(n * delta_range / epsilon)
                           : static_cast<double>(std::sqrt(
                                 n * delta_range * delta_range /
                                 (2.0L * epsilon)));
    params.retain_log_p = -std::numeric_limits<double>::infinity();
    return params;
  }
  params.scale = laplace ? delta_range / epsilon
                         : delta_range / std::sqrt(2.0 * epsilon);
  const auto terms =
      detail::retention_terms(laplace, epsilon, delta_range, count, params.scale);
  params.retain_log_p = static_cast<double>(terms.log_p());
  return params;
}

// Inverse-CDF Laplace(0, b) draw from u in (0, 1).
inline double sample_laplace(double scale, double u) {
  detail::require(u > 0.0 && u < 1.0, "laplace uniform must lie in (0, 1)");
  const double centered = u - 0.5;
  const double sign = centered < 0.0 ? -1.0 : (centered > 0.0 ? 1.0 : 0.0);
  return -scale * sign * std::log1p(-2.0 * std::abs(centered));
}

// Box-Muller N(0, sigma^2) draw (cosine branch).
inline double sample_gaussian(double sigma, double u1, double u2) {
  detail::require(u1 > 0.0 && u1 < 1.0, "gaussian radius uniform must lie in (0, 1)");
  detail::require(u2 >= 0.0 && u2 < 1.0, "gaussian angle uniform must lie in [0, 1)");
  return sigma * std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// (1 - w) * exp(base_log_p).
inline double weighted_retain_probability(double base_log_p, double weight) {
  detail::require(weight >= 0.0 && weight < 1.0, "weight must lie in [0, 1)");
  return (1.0 - weight) * std::exp(base_log_p);
}

// Per-cell sensitivity weights applied to the first two tensor modes and
// broadcast along the remaining ones.
class WeightMatrix {
 public:
  WeightMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    detail::require(rows > 0 && cols > 0, "weight matrix must be non-empty");
    detail::require(entries_.size() == rows * cols,
                    "weight matrix entry count does not match rows*cols");
    for (double w : entries_) {
      detail::require(w >= 0.0 && w < 1.0, "weights must lie in [0, 1)");
    }
  }

  static WeightMatrix uniform(std::size_t rows, std::size_t cols, double w) {
    return WeightMatrix(rows, cols, std::vector<double>(rows * cols, w));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t m, std::size_t n) const { return entries_[m * cols_ + n]; }
  std::span<const double> entries() const noexcept { return entries_; }

  // Weight for flat row-major index `flat` of a tensor with `dims`.
  double for_element(const Dims& dims, std::size_t flat) const {
    std::size_t trailing = 1;
    for (std::size_t k = 2; k < dims.size(); ++k) trailing *= dims[k];
    const std::size_t n = (flat / trailing) % dims[1];
    const std::size_t m = flat / (trailing * dims[1]);
    return at(m, n);
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

struct PerturbOutcome {
  Tensor output;
  RetentionMask mask;
  PrivacyParams params;
  std::uint64_t seed = 0;
};

struct ElementResult {
  double value;
  bool retained;
};

// One element of the mechanism. Draw 0 is the retention coin; draws 1 and 2
// feed the noise sampler. Full-noise kinds skip the coin.
template <rng::ElementStream Stream = rng::PhiloxStream>
ElementResult perturb_element(double x, std::size_t index, double retain_p,
                              const PrivacyParams& params, std::uint64_t seed,
                              const Stream& stream = {}) {
  if (!is_full(params.kind)) {
    const double r = stream(seed, index, 0);
    if (r <= retain_p) return {x, true};
  }
  const double noise =
      is_laplace(params.kind)
          ? sample_laplace(params.scale, stream(seed, index, 1))
          : sample_gaussian(params.scale, stream(seed, index, 1),
                            stream(seed, index, 2));
  return {x + noise, false};
}

// Per-element retention probabilities in flat index order.
inline std::vector<double> retention_probabilities(
    const Dims& dims, const PrivacyParams& params,
    const std::optional<WeightMatrix>& weights) {
  const std::size_t count = dims_product(dims);
  if (is_full(params.kind)) return std::vector<double>(count, 0.0);
  if (!is_weighted(params.kind)) {
    return std::vector<double>(count, params.retain_p());
  }
  std::vector<double> probs(count);
  for (std::size_t i = 0; i < count; ++i) {
    probs[i] = weighted_retain_probability(params.retain_log_p,
                                           weights->for_element(dims, i));
  }
  return probs;
}

inline void validate_perturb_inputs(const Dims& dims, MechanismKind kind,
                                    const PrivacyParams& params,
                                    const std::optional<WeightMatrix>& weights) {
  detail::require(params.kind == kind,
                  "params were built for " + std::string(to_string(params.kind)) +
                      ", not " + std::string(to_string(kind)));
  detail::require(params.count == dims_product(dims),
                  "params element count does not match tensor size");
  if (is_weighted(kind)) {
    detail::require(weights.has_value(), "weighted mechanism requires a weight matrix");
    detail::require(dims.size() >= 2,
                    "weighted mechanism requires a tensor of order >= 2");
    detail::require(weights->rows() == dims[0] && weights->cols() == dims[1],
                    "weight matrix shape must match the first two tensor modes");
  } else {
    detail::require(!weights.has_value(),
                    "weights given for an unweighted mechanism");
  }
}

// Randomized-response gated noise over every element of `x`.
template <rng::ElementStream Stream = rng::PhiloxStream>
PerturbOutcome perturb(const Tensor& x, MechanismKind kind,
                       const PrivacyParams& params,
                       const std::optional<WeightMatrix>& weights,
                       std::uint64_t seed, const Stream& stream = {}) {
  validate_perturb_inputs(x.dims(), kind, params, weights);
  const std::vector<double> probs =
      retention_probabilities(x.dims(), params, weights);
  std::vector<double> out(x.size());
  std::vector<bool> flags(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const ElementResult r = perturb_element(x[i], i, probs[i], params, seed, stream);
    out[i] = r.value;
    flags[i] = r.retained;
  }
  return PerturbOutcome{Tensor(x.dims(), std::move(out)),
                        RetentionMask{x.dims(), std::move(flags)}, params, seed};
}

}  // namespace tldp
