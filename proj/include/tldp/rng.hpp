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

#include <array>
#include <concepts>
#include <cstdint>

// Counter-based randomness. Every draw is a pure function of
// (seed, domain, index, draw), so any evaluation order or thread schedule
// produces the same values.

namespace tldp::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., SC 2011).
inline Counter philox4x32_10(Counter ctr, Key key) noexcept {
  constexpr std::uint32_t kMulA = 0xD2511F53u;
  constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  constexpr std::uint32_t kWeylB = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

// Domain-separation tags. Streams with different tags never share draws.
enum class Domain : std::uint32_t {
  kMechanism = 0x4D454348u,  // "MECH"
  kAudit = 0x41554454u,      // "AUDT"
  kFedsim = 0x4653494Du,     // "FSIM"
  kData = 0x44415441u,       // "DATA"
};

inline std::array<std::uint64_t, 2> block(std::uint64_t seed, Domain domain,
                                          std::uint64_t index,
                                          std::uint32_t block_index) noexcept {
  const Counter ctr{static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32), block_index,
                    static_cast<std::uint32_t>(domain)};
  const Key key{static_cast<std::uint32_t>(seed),
                static_cast<std::uint32_t>(seed >> 32)};
  const Counter out = philox4x32_10(ctr, key);
  return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
          (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

// Maps 64 random bits to the open interval (0, 1) on a 2^-52 grid offset by
// half a step, so neither endpoint nor 0.5 is ever produced. Every grid point
// is exactly representable; a 53-bit grid would round its top point to 1.
inline double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

inline double uniform(std::uint64_t seed, Domain domain, std::uint64_t index,
                      std::uint32_t draw) noexcept {
  return to_open_unit(block(seed, domain, index, draw / 2)[draw % 2]);
}

// Child seed for an independent sub-stream (trial, client, sweep point).
inline std::uint64_t derive_seed(std::uint64_t seed, Domain domain,
                                 std::uint64_t a, std::uint32_t b = 0) noexcept {
  return block(seed, domain, a, 0x80000000u | b)[0];
}

// Source of per-element uniforms for the mechanisms. Returns a value in
// (0, 1) for (seed, flat element index, draw number).
template <typename S>
concept ElementStream = requires(const S& s, std::uint64_t seed,
                                 std::uint64_t index, std::uint32_t draw) {
  { s(seed, index, draw) } -> std::convertible_to<double>;
};

struct PhiloxStream {
  Domain domain = Domain::kMechanism;
  double operator()(std::uint64_t seed, std::uint64_t index,
                    std::uint32_t draw) const noexcept {
    return uniform(seed, domain, index, draw);
  }
};

// Sequential 64-bit generator for bulk work (shuffles, synthetic data)
// where a per-element contract is unnecessary. Satisfies
// UniformRandomBitGenerator.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  CounterEngine(std::uint64_t seed, Domain domain)
      : seed_(seed), domain_(domain) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() noexcept {
    if (lane_ == 2) {
      buffer_ = block(seed_, domain_, position_++, 0);
      lane_ = 0;
    }
    return buffer_[lane_++];
  }

  double uniform() noexcept { return to_open_unit((*this)()); }

 private:
  std::uint64_t seed_;
  Domain domain_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int lane_ = 2;
};

}  // namespace tldp::rng
