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
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tldp/accounting.hpp"
#include "tldp/error.hpp"
#include "tldp/mechanisms.hpp"
#include "tldp/rng.hpp"
#include "tldp/tensor.hpp"

// Monte-Carlo checks of the mechanisms against their analytic behaviour.
// Every trial runs on a seed derived under the audit domain tag, so audit
// draws never coincide with draws made directly through perturb().

namespace tldp::audit {

struct LrProbe {
  double bin_width = 0.0;
  double max_log_ratio = 0.0;
  double epsilon_claim = 0.0;
  std::size_t bins_compared = 0;
  // Lower edge (first coordinate) of the bin attaining the maximum.
  double argmax_edge = 0.0;
};

struct RetentionStats {
  double retained_mean = 0.0;
  double retained_expected = 0.0;
  double z_score = 0.0;
};

struct KsResult {
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

struct AuditReport {
  std::size_t trials = 0;
  double empirical_error_mean = 0.0;
  double analytic_error = 0.0;
  double table5_error = 0.0;
  double retained_mean = 0.0;
  double retained_expected = 0.0;
  double retained_z = 0.0;
  double ks_statistic = 0.0;
  double ks_threshold = 0.0;
  std::optional<LrProbe> lr_probe;
};

inline constexpr std::size_t kDefaultBinFloor = 50;
inline constexpr std::size_t kMinKsSamples = 1000;

inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial,
                                std::uint32_t lane = 0) {
  return rng::derive_seed(seed, rng::Domain::kAudit, trial, lane);
}

struct TrialSummary {
  std::vector<double> norms;
  std::vector<std::size_t> retained;
};

template <rng::ElementStream Stream = rng::PhiloxStream>
TrialSummary run_zero_trials(MechanismKind kind, const PrivacyParams& params,
                             const Dims& dims, std::size_t trials,
                             std::uint64_t seed,
                             const std::optional<WeightMatrix>& weights,
                             const Stream& stream = {}) {
  detail::require(trials >= 1, "trials must be at least 1");
  validate_perturb_inputs(dims, kind, params, weights);
  const Tensor zero = Tensor::zeros(dims);
  TrialSummary summary;
  summary.norms.reserve(trials);
  summary.retained.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const PerturbOutcome out =
        perturb(zero, kind, params, weights, trial_seed(seed, t), stream);
    summary.norms.push_back(frobenius_norm(out.output));
    summary.retained.push_back(out.mask.retained());
  }
  return summary;
}

// Mean ||Z||_F over `trials` perturbations of the all-zero tensor, next to
// the variance-derived and closed-form expectations.
template <rng::ElementStream Stream = rng::PhiloxStream>
AuditReport monte_carlo_error(MechanismKind kind, const PrivacyParams& params,
                              const Dims& dims, std::size_t trials,
                              std::uint64_t seed,
                              const std::optional<WeightMatrix>& weights = std::nullopt,
                              const Stream& stream = {}) {
  const TrialSummary s =
      run_zero_trials(kind, params, dims, trials, seed, weights, stream);
  AuditReport report;
  report.trials = trials;
  double sum = 0.0;
  for (double v : s.norms) sum += v;
  report.empirical_error_mean = sum / static_cast<double>(trials);
  report.analytic_error = weights ? expected_error_variance(params, dims, weights)
                                  : expected_error_variance(params);
  report.table5_error = expected_error_table5(params);
  return report;
}

// Mean retained count against its Poisson-binomial expectation.
template <rng::ElementStream Stream = rng::PhiloxStream>
RetentionStats retention_stats(MechanismKind kind, const PrivacyParams& params,
                               const Dims& dims, std::size_t trials,
                               std::uint64_t seed,
                               const std::optional<WeightMatrix>& weights = std::nullopt,
                               const Stream& stream = {}) {
  const TrialSummary s =
      run_zero_trials(kind, params, dims, trials, seed, weights, stream);
  double expected = 0.0;
  double variance = 0.0;
  for (double p : retention_probabilities(dims, params, weights)) {
    expected += p;
    variance += p * (1.0 - p);
  }
  double total = 0.0;
  for (std::size_t r : s.retained) total += static_cast<double>(r);
  RetentionStats stats;
  stats.retained_mean = total / static_cast<double>(trials);
  stats.retained_expected = expected;
  const double se = std::sqrt(variance / static_cast<double>(trials));
  const double dev = stats.retained_mean - expected;
  if (se > 0.0) {
    stats.z_score = dev / se;
  } else {
    stats.z_score = dev == 0.0 ? 0.0 : std::copysign(
        std::numeric_limits<double>::infinity(), dev);
  }
  return stats;
}

// Error, retention and marginal-distribution checks in one report.
inline AuditReport run_audit(MechanismKind kind, const PrivacyParams& params,
                             const Dims& dims, std::size_t trials, std::uint64_t seed,
                             const std::optional<WeightMatrix>& weights = std::nullopt);

// Exact CDF of the noise a kind adds, at the kind's scale.
inline double noise_cdf(MechanismKind kind, double scale, double x) {
  if (is_laplace(kind)) {
    return x < 0.0 ? 0.5 * std::exp(x / scale) : 1.0 - 0.5 * std::exp(-x / scale);
  }
  return 0.5 * std::erfc(-x / (scale * std::numbers::sqrt2));
}

// Output minus input for every noised element over `trials` runs.
inline std::vector<double> collect_noise_deviations(
    MechanismKind kind, const PrivacyParams& params, const Dims& dims,
    std::size_t trials, std::uint64_t seed,
    const std::optional<WeightMatrix>& weights = std::nullopt) {
  detail::require(trials >= 1, "trials must be at least 1");
  validate_perturb_inputs(dims, kind, params, weights);
  const Tensor zero = Tensor::zeros(dims);
  std::vector<double> samples;
  for (std::size_t t = 0; t < trials; ++t) {
    const PerturbOutcome out =
        perturb(zero, kind, params, weights, trial_seed(seed, t, 3));
    for (std::size_t i = 0; i < out.output.size(); ++i) {
      if (!out.mask.flags[i]) samples.push_back(out.output[i]);
    }
  }
  return samples;
}

// One-sample Kolmogorov-Smirnov test at alpha = 0.01 (asymptotic critical
// value 1.63/sqrt(n)).
template <typename Cdf>
KsResult ks_test(std::vector<double> samples, Cdf&& cdf) {
  detail::require(samples.size() >= kMinKsSamples,
                  "at least 1000 noised samples are needed for the KS test");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f,
                  f - static_cast<double>(i) / n});
  }
  KsResult r;
  r.statistic = d;
  r.samples = samples.size();
  r.threshold = 1.63 / std::sqrt(n);
  r.pass = d < r.threshold;
  return r;
}

inline KsResult ks_test_marginal(MechanismKind kind, const PrivacyParams& params,
                                 const Dims& dims, std::size_t trials,
                                 std::uint64_t seed,
                                 const std::optional<WeightMatrix>& weights = std::nullopt) {
  return ks_test(collect_noise_deviations(kind, params, dims, trials, seed, weights),
                 [&](double x) { return noise_cdf(kind, params.scale, x); });
}

// Empirical likelihood-ratio probe on a shared grid of cubic bins. For each
// bin width, reports the largest |log(count_x / count_alt)| among bins where
// both counts reach `min_count`. This is a measurement; nothing is asserted.
inline std::vector<LrProbe> lr_probe_curve(const Tensor& x, const Tensor& x_alt,
                                           MechanismKind kind,
                                           const PrivacyParams& params,
                                           std::span<const double> bin_widths,
                                           std::size_t trials, std::uint64_t seed,
                                           const std::optional<WeightMatrix>& weights = std::nullopt,
                                           std::size_t min_count = kDefaultBinFloor) {
  detail::require(x.dims() == x_alt.dims(), "probe inputs must share a shape");
  detail::require(trials >= 1, "trials must be at least 1");
  detail::require(!bin_widths.empty(), "at least one bin width is required");
  for (double h : bin_widths) {
    detail::require(h > 0.0 && std::isfinite(h), "bin width must be positive");
  }
  validate_perturb_inputs(x.dims(), kind, params, weights);

  const std::size_t n = x.size();
  std::vector<double> out_x(trials * n);
  std::vector<double> out_alt(trials * n);
  for (std::size_t t = 0; t < trials; ++t) {
    const PerturbOutcome a = perturb(x, kind, params, weights, trial_seed(seed, t, 1));
    const PerturbOutcome b = perturb(x_alt, kind, params, weights, trial_seed(seed, t, 2));
    std::copy(a.output.data().begin(), a.output.data().end(), out_x.begin() + t * n);
    std::copy(b.output.data().begin(), b.output.data().end(), out_alt.begin() + t * n);
  }

  std::vector<LrProbe> curve;
  for (double h : bin_widths) {
    using Key = std::vector<std::int64_t>;
    std::map<Key, std::pair<std::size_t, std::size_t>> bins;
    auto key_of = [&](const std::vector<double>& outs, std::size_t t) {
      Key key(n);
      for (std::size_t i = 0; i < n; ++i) {
        key[i] = static_cast<std::int64_t>(std::floor(outs[t * n + i] / h));
      }
      return key;
    };
    for (std::size_t t = 0; t < trials; ++t) {
      ++bins[key_of(out_x, t)].first;
      ++bins[key_of(out_alt, t)].second;
    }
    LrProbe probe;
    probe.bin_width = h;
    probe.epsilon_claim = params.epsilon;
    for (const auto& [key, counts] : bins) {
      if (counts.first < min_count || counts.second < min_count) continue;
      ++probe.bins_compared;
      const double r = std::abs(std::log(static_cast<double>(counts.first) /
                                         static_cast<double>(counts.second)));
      if (r > probe.max_log_ratio) {
        probe.max_log_ratio = r;
        probe.argmax_edge = static_cast<double>(key[0]) * h;
      }
    }
    detail::require(probe.bins_compared >= 1,
                    "no bin reached the count floor; raise trials or widen bins");
    curve.push_back(probe);
  }
  return curve;
}

inline LrProbe lr_probe(const Tensor& x, const Tensor& x_alt, MechanismKind kind,
                        const PrivacyParams& params, double bin_width,
                        std::size_t trials, std::uint64_t seed,
                        const std::optional<WeightMatrix>& weights = std::nullopt,
                        std::size_t min_count = kDefaultBinFloor) {
  const double widths[] = {bin_width};
  return lr_probe_curve(x, x_alt, kind, params, widths, trials, seed, weights,
                        min_count)
      .front();
}

inline AuditReport run_audit(MechanismKind kind, const PrivacyParams& params,
                             const Dims& dims, std::size_t trials, std::uint64_t seed,
                             const std::optional<WeightMatrix>& weights) {
  AuditReport report = monte_carlo_error(kind, params, dims, trials, seed, weights);
  const RetentionStats r = retention_stats(kind, params, dims, trials, seed, weights);
  report.retained_mean = r.retained_mean;
  report.retained_expected = r.retained_expected;
  report.retained_z = r.z_score;
  const KsResult ks = ks_test_marginal(kind, params, dims, trials, seed, weights);
  report.ks_statistic = ks.statistic;
  report.ks_threshold = ks.threshold;
  return report;
}

}  // namespace tldp::audit
