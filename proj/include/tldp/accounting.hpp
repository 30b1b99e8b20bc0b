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

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "tldp/error.hpp"
#include "tldp/mechanisms.hpp"
#include "tldp/tensor.hpp"

namespace tldp {

// Methods with a closed-form expected error E||Z||_2.
enum class ErrorMethod { kLaplace, kGaussian, kMvg, kIdn, kDphsgd, kTldpL, kTldpG };

constexpr std::string_view to_string(ErrorMethod m) {
  switch (m) {
    case ErrorMethod::kLaplace: return "laplace";
    case ErrorMethod::kGaussian: return "gaussian";
    case ErrorMethod::kMvg: return "mvg";
    case ErrorMethod::kIdn: return "idn";
    case ErrorMethod::kDphsgd: return "dphsgd";
    case ErrorMethod::kTldpL: return "tldp_l";
    case ErrorMethod::kTldpG: return "tldp_g";
  }
  return "unknown";
}

struct ErrorArgs {
  double delta_range = 0.0;
  double epsilon = 0.0;
  std::size_t count = 0;
  std::optional<std::size_t> first_mode;  // I_1, MVG only
  std::optional<double> clip;             // C, DPHSGD only
  std::optional<double> retain_p;         // TLDP methods only
};

// Exact published closed forms for the expected noise norm of each method.
inline double expected_error_table5(ErrorMethod method, const ErrorArgs& args) {
  detail::validate_budget(args.epsilon, args.delta_range, args.count);
  const double delta = args.delta_range;
  const double eps = args.epsilon;
  const double n = static_cast<double>(args.count);
  switch (method) {
    case ErrorMethod::kLaplace:
      return delta / eps * n * std::sqrt(2.0 * n);
    case ErrorMethod::kGaussian:
      return delta / (2.0 * eps) * n * std::sqrt(n);
    case ErrorMethod::kMvg: {
      detail::require(args.first_mode.has_value() && *args.first_mode > 0,
                      "mvg expected error requires the first mode size");
      const double i1 = static_cast<double>(*args.first_mode);
      const double log_term = std::log(i1 + 1.0);
      return delta * i1 * n * std::sqrt(n) / (std::numbers::sqrt2 * eps) *
             log_term * log_term;
    }
    case ErrorMethod::kIdn:
      return delta * n * std::sqrt(n) / (std::numbers::sqrt2 * eps);
    case ErrorMethod::kDphsgd:
      detail::require(args.clip.has_value() && *args.clip > 0.0,
                      "dphsgd expected error requires a positive clip value");
      return *args.clip * delta / eps * n * std::sqrt(2.0 * n);
    case ErrorMethod::kTldpL:
    case ErrorMethod::kTldpG: {
      detail::require(args.retain_p.has_value(),
                      "tldp expected error requires the retention probability");
      const double p = *args.retain_p;
      detail::require(p >= 0.0 && p <= 1.0, "retention probability must lie in [0, 1]");
      if (method == ErrorMethod::kTldpL) {
        return delta / eps * std::sqrt(2.0 * (1.0 - p) * n);
      }
      return delta / (2.0 * eps) * std::sqrt((1.0 - p) * n);
    }
  }
  throw InvalidArgument("unknown error method");
}

// Closed-form row matching a mechanism kind, with the kind's own p.
inline ErrorMethod error_method_for(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kFullLaplace: return ErrorMethod::kLaplace;
    case MechanismKind::kFullGaussian: return ErrorMethod::kGaussian;
    case MechanismKind::kTldpLaplace:
    case MechanismKind::kWeightedTldpLaplace: return ErrorMethod::kTldpL;
    case MechanismKind::kTldpGaussian:
    case MechanismKind::kWeightedTldpGaussian: return ErrorMethod::kTldpG;
  }
  throw InvalidArgument("unknown mechanism kind");
}

inline double expected_error_table5(const PrivacyParams& params) {
  ErrorArgs args;
  args.delta_range = params.delta_range;
  args.epsilon = params.epsilon;
  args.count = params.count;
  if (!is_full(params.kind)) args.retain_p = params.retain_p();
  return expected_error_table5(error_method_for(params.kind), args);
}

// sqrt(I (1-p) V): the second-moment bound from the mechanism's actual
// per-element noise variance V (2b^2 or sigma^2). Weighted kinds use the
// unweighted cell probability; pass weights for the exact per-cell sum.
inline double expected_error_variance(const PrivacyParams& params) {
  const double p = is_full(params.kind) ? 0.0 : params.retain_p();
  return std::sqrt(static_cast<double>(params.count) * (1.0 - p) *
                   params.variance());
}

inline double expected_error_variance(const PrivacyParams& params,
                                      const Dims& dims,
                                      const std::optional<WeightMatrix>& weights) {
  validate_perturb_inputs(dims, params.kind, params, weights);
  double noised = 0.0;
  for (double p : retention_probabilities(dims, params, weights)) noised += 1.0 - p;
  return std::sqrt(noised * params.variance());
}

// log[(p/(1-p)) * D * e^E] for a randomized-response kind, recomputed from
// the params' own scale. Algebraically this collapses to epsilon.
inline double privacy_identity_log(const PrivacyParams& params) {
  detail::require(is_tldp(params.kind),
                  "privacy identity is defined for tldp_laplace and tldp_gaussian only");
  detail::validate_budget(params.epsilon, params.delta_range, params.count);
  const auto t = detail::retention_terms(is_laplace(params.kind), params.epsilon,
                                         params.delta_range, params.count,
                                         params.scale);
  const long double log_odds = t.log_p() - t.log_one_minus_p();
  return static_cast<double>(log_odds + t.log_norm + t.penalty);
}

// log(1 - w) + eps: the bound on the weighted mechanism's likelihood ratio.
inline double weighted_privacy_bound_log(const PrivacyParams& params, double weight) {
  detail::require(weight >= 0.0 && weight < 1.0, "weight must lie in [0, 1)");
  return std::log1p(-weight) + params.epsilon;
}

// Ratio of the randomized-response scale parameter (b or sigma^2) to the
// full-noise baseline's at equal budget.
inline double noise_scale_ratio(MechanismKind kind, std::size_t count) {
  detail::require(!is_full(kind), "noise scale ratio is undefined for full-noise kinds");
  detail::require(count >= 1, "element count must be at least 1");
  return 1.0 / static_cast<double>(count);
}

// 2 * half_range * sqrt(prod dims).
inline double l2_sensitivity(std::span<const std::size_t> dims, double half_range) {
  detail::require(half_range > 0.0, "half range must be positive");
  return 2.0 * half_range * std::sqrt(static_cast<double>(dims_product(dims)));
}

}  // namespace tldp
