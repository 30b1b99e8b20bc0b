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

#include "tldp/mechanisms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "gtest/gtest.h"
#include "support/generators.hpp"
#include "tldp/rng.hpp"

namespace tldp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection on the exact Laplace CDF; independent of the inverse transform.
double laplace_quantile_by_bisection(double b, double u) {
  auto cdf = [b](double x) {
    return x < 0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b);
  };
  double lo = -100.0 * b;
  double hi = 100.0 * b;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Draw 0 lands below every positive p; noise draws are fixed.
struct AlwaysRetain {
  double operator()(std::uint64_t, std::uint64_t, std::uint32_t draw) const {
    return draw == 0 ? std::numeric_limits<double>::denorm_min() : 0.25;
  }
};

TEST(MechanismKindTest, NamesRoundTrip) {
  for (MechanismKind k : kAllMechanismKinds) {
    EXPECT_EQ(parse_mechanism_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_mechanism_kind("laplace"), InvalidArgument);
}

TEST(MakeParamsTest, LaplaceUnitCase) {
  const PrivacyParams p = make_params(MechanismKind::kTldpLaplace, 1.0, 1.0, 1);
  EXPECT_EQ(p.scale, 1.0);
  EXPECT_NEAR(p.retain_p(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.retain_log_p, -1.0986122886681097, 1e-15);
}

TEST(MakeParamsTest, LaplaceUnderflowHostile) {
  // log p = -783 - log(512 + e^-783), evaluated with mpmath at 50 digits.
  const PrivacyParams p = make_params(MechanismKind::kTldpLaplace, 1.0, 256.0, 784);
  EXPECT_EQ(p.scale, 256.0);
  EXPECT_NEAR(p.retain_log_p, -789.2383246250395, 1e-9);
  EXPECT_EQ(p.retain_p(), 0.0);
}

TEST(MakeParamsTest, FullLaplace) {
  const PrivacyParams p = make_params(MechanismKind::kFullLaplace, 1.0, 1.0, 784);
  EXPECT_EQ(p.scale, 784.0);
  EXPECT_EQ(p.retain_log_p, -kInf);
  EXPECT_EQ(p.retain_p(), 0.0);
}

TEST(MakeParamsTest, GaussianScales) {
  const PrivacyParams g = make_params(MechanismKind::kTldpGaussian, 2.0, 3.0, 1);
  EXPECT_DOUBLE_EQ(g.scale, 3.0 / std::sqrt(4.0));
  EXPECT_DOUBLE_EQ(g.variance(), 9.0 / 4.0);
  // 1 / (1 + sqrt(pi)) when a = 0 and D = sigma * sqrt(2 pi) = sqrt(pi).
  const PrivacyParams unit = make_params(MechanismKind::kTldpGaussian, 1.0, 1.0, 1);
  EXPECT_NEAR(unit.retain_p(), 0.36069130588896484, 1e-15);
  // -3 - log(sqrt(pi) + e^-3).
  const PrivacyParams four = make_params(MechanismKind::kTldpGaussian, 1.0, 1.0, 4);
  EXPECT_NEAR(four.retain_log_p, -3.6000670180181489, 1e-14);
  const PrivacyParams full = make_params(MechanismKind::kFullGaussian, 0.5, 1.0, 4);
  EXPECT_DOUBLE_EQ(full.variance(), 4.0);
  EXPECT_EQ(full.retain_log_p, -kInf);
}

TEST(MakeParamsTest, LaplaceVarianceIsTwoBSquared) {
  const PrivacyParams p = make_params(MechanismKind::kTldpLaplace, 0.5, 1.0, 3);
  EXPECT_DOUBLE_EQ(p.variance(), 2.0 * 4.0);
}

TEST(MakeParamsTest, RejectsInvalidBudget) {
  for (MechanismKind k : kAllMechanismKinds) {
    EXPECT_THROW(make_params(k, 0.0, 1.0, 1), InvalidArgument);
    EXPECT_THROW(make_params(k, -1.0, 1.0, 1), InvalidArgument);
    EXPECT_THROW(make_params(k, 1.0, 0.0, 1), InvalidArgument);
    EXPECT_THROW(make_params(k, 1.0, -2.0, 1), InvalidArgument);
    EXPECT_THROW(make_params(k, 1.0, 1.0, 0), InvalidArgument);
    EXPECT_THROW(make_params(k, std::nan(""), 1.0, 1), InvalidArgument);
    EXPECT_THROW(make_params(k, kInf, 1.0, 1), InvalidArgument);
  }
}

TEST(MakeParamsPropertyTest, ScaleInvariantsAndProbabilityRange) {
  testing::for_all(21, 500, [](testing::Gen& g) {
    const MechanismKind k = g.kind();
    const double eps = g.log_uniform(1e-3, 1e3);
    const double delta = g.log_uniform(1e-3, 1e6);
    const std::size_t count = g.size(1, 2000000);
    const PrivacyParams p = make_params(k, eps, delta, count);
    const double n = static_cast<double>(count);
    if (is_laplace(k)) {
      const double want = is_full(k) ? n * delta / eps : delta / eps;
      EXPECT_NEAR(p.scale, want, 1e-14 * want);
    } else {
      const double var = is_full(k) ? n * delta * delta / (2 * eps) : delta * delta / (2 * eps);
      EXPECT_NEAR(p.scale * p.scale, var, 1e-14 * var);
    }
    EXPECT_LE(p.retain_log_p, 0.0);
    EXPECT_GE(p.retain_p(), 0.0);
    EXPECT_LT(p.retain_p(), 1.0);
    if (is_full(k)) {
      EXPECT_EQ(p.retain_log_p, -kInf);
    }
  });
}

TEST(SampleLaplaceTest, Examples) {
  EXPECT_EQ(sample_laplace(1.0, 0.5), 0.0);
  EXPECT_NEAR(sample_laplace(1.0, 0.75), 0.6931471805599453, 1e-15);
  EXPECT_NEAR(sample_laplace(1.0, 0.75), laplace_quantile_by_bisection(1.0, 0.75), 1e-12);
  EXPECT_THROW(sample_laplace(1.0, 0.0), InvalidArgument);
  EXPECT_THROW(sample_laplace(1.0, 1.0), InvalidArgument);
}

TEST(SampleLaplacePropertyTest, MatchesBisectionAndIsSymmetric) {
  testing::for_all(22, 400, [](testing::Gen& g) {
    const double b = g.log_uniform(1e-3, 1e3);
    const double u = g.uniform(1e-9, 1.0 - 1e-9);
    const double x = sample_laplace(b, u);
    EXPECT_NEAR(x, laplace_quantile_by_bisection(b, u), 1e-9 * b * (1 + std::abs(x / b)));
    // 1 - u is rounded, so symmetry holds to the quantile's conditioning.
    EXPECT_NEAR(x, -sample_laplace(b, 1.0 - u), 1e-9 * b * (1 + std::abs(x / b)));
  });
}

TEST(SampleGaussianTest, Examples) {
  EXPECT_NEAR(sample_gaussian(1.0, std::nextafter(1.0, 0.0), 0.3), 0.0, 1e-7);
  EXPECT_NEAR(sample_gaussian(1.0, std::exp(-2.0), 0.0), 2.0, 1e-15);
  EXPECT_THROW(sample_gaussian(1.0, 0.0, 0.5), InvalidArgument);
  EXPECT_THROW(sample_gaussian(1.0, 1.0, 0.5), InvalidArgument);
  EXPECT_THROW(sample_gaussian(1.0, 0.5, 1.0), InvalidArgument);
}

TEST(SampleGaussianTest, MonteCarloMoments) {
  constexpr int kN = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < kN; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    const double z = sample_gaussian(1.0, rng::uniform(17, rng::Domain::kAudit, idx, 1),
                                     rng::uniform(17, rng::Domain::kAudit, idx, 2));
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / kN, 0.0, 0.02);
  EXPECT_NEAR(sq / kN, 1.0, 0.02);
}

TEST(WeightedRetainTest, Examples) {
  const double base = std::log(1.0 / 3.0);
  EXPECT_DOUBLE_EQ(weighted_retain_probability(base, 0.0), std::exp(base));
  EXPECT_NEAR(weighted_retain_probability(base, 0.5), 1.0 / 6.0, 1e-15);
  EXPECT_LT(weighted_retain_probability(base, std::nextafter(1.0, 0.0)), 1e-15);
  EXPECT_THROW(weighted_retain_probability(base, 1.0), InvalidArgument);
  EXPECT_THROW(weighted_retain_probability(base, -0.1), InvalidArgument);
}

TEST(WeightMatrixTest, RejectsBadEntries) {
  EXPECT_THROW(WeightMatrix(2, 2, {0, 0, 0}), InvalidArgument);
  EXPECT_THROW(WeightMatrix(1, 1, {1.0}), InvalidArgument);
  EXPECT_THROW(WeightMatrix(1, 1, {-0.5}), InvalidArgument);
  EXPECT_THROW(WeightMatrix(0, 1, {}), InvalidArgument);
}

TEST(WeightMatrixTest, BroadcastsAlongTrailingModes) {
  std::vector<double> w(2 * 3);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.1 * static_cast<double>(i);
  const WeightMatrix m(2, 3, w);
  const Dims dims = {2, 3, 4};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(m.for_element(dims, (i * 3 + j) * 4 + k), m.at(i, j));
      }
    }
  }
  EXPECT_EQ(m.for_element({2, 3}, 4), m.at(1, 1));
}

TEST(PerturbTest, ForcedRetentionIsIdentity) {
  const Tensor x({2, 3}, {1.5, -0.0, 3.0, 4.0, -5.25, 6.0});
  for (MechanismKind k : {MechanismKind::kTldpLaplace, MechanismKind::kTldpGaussian}) {
    const PrivacyParams p = make_params(k, 1.0, 1.0, x.size());
    const PerturbOutcome out = perturb(x, k, p, std::nullopt, 1, AlwaysRetain{});
    EXPECT_EQ(out.mask.retained(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(out.output[i]), std::bit_cast<std::uint64_t>(x[i]));
    }
  }
}

TEST(PerturbTest, FullKindsIgnoreTheCoin) {
  const Tensor x({1}, {0.0});
  const PrivacyParams p = make_params(MechanismKind::kFullLaplace, 1.0, 1.0, 1);
  const PerturbOutcome out = perturb(x, MechanismKind::kFullLaplace, p, std::nullopt, 9);
  EXPECT_FALSE(out.mask.flags[0]);
  EXPECT_EQ(out.output[0],
            sample_laplace(1.0, rng::uniform(9, rng::Domain::kMechanism, 0, 1)));
  const PerturbOutcome forced =
      perturb(x, MechanismKind::kFullLaplace, p, std::nullopt, 9, AlwaysRetain{});
  EXPECT_EQ(forced.mask.retained(), 0u);
}

TEST(PerturbTest, RetainedFractionMatchesOneThird) {
  const Tensor x({1}, {0.0});
  const PrivacyParams p = make_params(MechanismKind::kTldpLaplace, 1.0, 1.0, 1);
  constexpr int kTrials = 300000;
  int retained = 0;
  for (int s = 0; s < kTrials; ++s) {
    retained += perturb(x, MechanismKind::kTldpLaplace, p, std::nullopt,
                        static_cast<std::uint64_t>(s))
                    .mask.flags[0];
  }
  EXPECT_NEAR(static_cast<double>(retained) / kTrials, 1.0 / 3.0, 0.005);
}

TEST(PerturbTest, DeterministicAndOrderIndependent) {
  testing::for_all(23, 60, [](testing::Gen& g) {
    const Dims d = g.dims(3, 5);
    const MechanismKind k = g.kind();
    if (is_weighted(k) && d.size() < 2) return;
    const Tensor x = g.tensor(d, -1, 1);
    const PrivacyParams p = make_params(k, g.log_uniform(0.1, 50), 2.0, x.size());
    std::optional<WeightMatrix> w;
    if (is_weighted(k)) w = g.weights(d[0], d[1]);
    const std::uint64_t seed = g.bits();
    const PerturbOutcome a = perturb(x, k, p, w, seed);
    const PerturbOutcome b = perturb(x, k, p, w, seed);
    EXPECT_EQ(a.output, b.output);
    EXPECT_EQ(a.mask, b.mask);
    EXPECT_EQ(a.seed, seed);

    const std::vector<double> probs = retention_probabilities(d, p, w);
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::reverse(order.begin(), order.end());
    for (std::size_t i : order) {
      const ElementResult r = perturb_element(x[i], i, probs[i], p, seed);
      EXPECT_EQ(std::bit_cast<std::uint64_t>(r.value),
                std::bit_cast<std::uint64_t>(a.output[i]));
      EXPECT_EQ(r.retained, a.mask.flags[i]);
    }
  });
}

TEST(PerturbPropertyTest, RetainedBitExactNoisedDifferent) {
  testing::for_all(24, 200, [](testing::Gen& g) {
    const Dims d = g.dims(3, 4);
    const MechanismKind k = g.kind();
    if (is_weighted(k) && d.size() < 2) return;
    const bool awkward = g.coin();
    const double delta = 2.0;
    const Tensor x = awkward ? g.awkward_tensor(d) : g.tensor(d, -1, 1);
    // Large epsilon and small I keep p away from 0 so both branches occur.
    const PrivacyParams p = make_params(k, g.uniform(0.5, 5.0), delta, x.size());
    std::optional<WeightMatrix> w;
    if (is_weighted(k)) w = g.weights(d[0], d[1]);
    const PerturbOutcome out = perturb(x, k, p, w, g.bits());
    ASSERT_EQ(out.mask.dims, x.dims());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (out.mask.flags[i]) {
        EXPECT_EQ(std::bit_cast<std::uint64_t>(out.output[i]), std::bit_cast<std::uint64_t>(x[i]));
      } else if (!awkward) {
        EXPECT_NE(out.output[i], x[i]);
      }
    }
    if (is_full(k)) {
      EXPECT_EQ(out.mask.retained(), 0u);
    }
  });
}

TEST(PerturbTest, ZeroWeightsReduceToUnweighted) {
  const Tensor x = Tensor::zeros({3, 4, 2});
  for (auto [weighted, plain] : {std::pair{MechanismKind::kWeightedTldpLaplace, MechanismKind::kTldpLaplace},
                                 std::pair{MechanismKind::kWeightedTldpGaussian, MechanismKind::kTldpGaussian}}) {
    const PrivacyParams pw = make_params(weighted, 3.0, 1.0, x.size());
    const PrivacyParams pu = make_params(plain, 3.0, 1.0, x.size());
    EXPECT_EQ(pw.retain_log_p, pu.retain_log_p);
    EXPECT_EQ(pw.scale, pu.scale);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const PerturbOutcome a = perturb(x, weighted, pw, WeightMatrix::uniform(3, 4, 0.0), seed);
      const PerturbOutcome b = perturb(x, plain, pu, std::nullopt, seed);
      EXPECT_EQ(a.output, b.output);
      EXPECT_EQ(a.mask, b.mask);
    }
  }
}

TEST(PerturbTest, WeightedRetainsLess) {
  const Tensor x = Tensor::zeros({2, 2});
  const PrivacyParams pw = make_params(MechanismKind::kWeightedTldpLaplace, 1.0, 1.0, 4);
  const PrivacyParams pu = make_params(MechanismKind::kTldpLaplace, 1.0, 1.0, 4);
  const WeightMatrix w = WeightMatrix::uniform(2, 2, 0.3);
  const std::vector<double> probs_w = retention_probabilities(x.dims(), pw, w);
  const std::vector<double> probs_u = retention_probabilities(x.dims(), pu, std::nullopt);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LT(probs_w[i], probs_u[i]);

  constexpr int kTrials = 20000;
  double sum_w = 0.0;
  double sum_u = 0.0;
  for (int s = 0; s < kTrials; ++s) {
    const auto seed = static_cast<std::uint64_t>(s);
    sum_w += static_cast<double>(
        perturb(x, MechanismKind::kWeightedTldpLaplace, pw, w, seed).mask.retained());
    sum_u += static_cast<double>(
        perturb(x, MechanismKind::kTldpLaplace, pu, std::nullopt, seed).mask.retained());
  }
  // p ~ 0.0243 unweighted and 0.0170 weighted, so the gap is ~0.029 per trial
  // against a standard error of ~0.003.
  const double p = pu.retain_p();
  const double se = std::sqrt(2.0 * 4.0 * p * (1 - p) / kTrials);
  EXPECT_GT(sum_u / kTrials - sum_w / kTrials, 4.0 * se);
}

TEST(PerturbTest, RejectsMismatchedInputs) {
  const Tensor x = Tensor::zeros({2, 3});
  const Tensor v = Tensor::zeros({6});
  const auto lap = make_params(MechanismKind::kTldpLaplace, 1.0, 1.0, 6);
  const auto wlap = make_params(MechanismKind::kWeightedTldpLaplace, 1.0, 1.0, 6);
  const WeightMatrix w23 = WeightMatrix::uniform(2, 3, 0.1);
  EXPECT_THROW(perturb(x, MechanismKind::kWeightedTldpLaplace, wlap, std::nullopt, 0),
               InvalidArgument);
  EXPECT_THROW(perturb(x, MechanismKind::kTldpLaplace, lap, w23, 0), InvalidArgument);
  EXPECT_THROW(perturb(v, MechanismKind::kWeightedTldpLaplace, wlap, w23, 0), InvalidArgument);
  EXPECT_THROW(perturb(x, MechanismKind::kWeightedTldpLaplace, wlap,
                       WeightMatrix::uniform(3, 2, 0.1), 0),
               InvalidArgument);
  EXPECT_THROW(perturb(Tensor::zeros({7}), MechanismKind::kTldpLaplace, lap, std::nullopt, 0),
               InvalidArgument);
  EXPECT_THROW(perturb(x, MechanismKind::kTldpGaussian, lap, std::nullopt, 0), InvalidArgument);
}

}  // namespace
}  // namespace tldp
