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

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tldp/error.hpp"
#include "tldp/mechanisms.hpp"
#include "tldp/tensor.hpp"

// TSR1 binary tensor format, all integers little-endian:
//
//   offset 0   "TSR1"
//   offset 4   u32 order N
//   offset 8   N x u64 dims
//   then       I x f64 payload (IEEE-754), row-major
//
// File length is exactly 8 + 8N + 8I bytes.

namespace tldp::io {

inline constexpr char kTensorMagic[4] = {'T', 'S', 'R', '1'};

namespace detail {

inline void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t offset,
                            int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(in[offset + static_cast<std::size_t>(i)]) << (8 * i);
  }
  return v;
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + 8 * t.order() + 8 * t.size());
  out.insert(out.end(), std::begin(kTensorMagic), std::end(kTensorMagic));
  detail::put_le(out, t.order(), 4);
  for (std::size_t d : t.dims()) detail::put_le(out, d, 8);
  for (double v : t.data()) detail::put_le(out, std::bit_cast<std::uint64_t>(v), 8);
  return out;
}

inline Tensor decode_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw FormatError("truncated TSR1 header");
  for (std::size_t i = 0; i < 4; ++i) {
    if (bytes[i] != static_cast<std::uint8_t>(kTensorMagic[i])) {
      throw FormatError("bad magic: expected TSR1");
    }
  }
  const std::uint64_t order = detail::get_le(bytes, 4, 4);
  if (order == 0) throw FormatError("tensor order must be at least 1");
  if (bytes.size() < 8 + 8 * order) throw FormatError("truncated TSR1 dimension list");
  Dims dims(order);
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < order; ++k) {
    dims[k] = detail::get_le(bytes, 8 + 8 * k, 8);
    if (dims[k] == 0) throw FormatError("tensor dimensions must be positive");
    if (count > std::numeric_limits<std::uint64_t>::max() / dims[k] / 8) {
      throw FormatError("declared tensor size overflows");
    }
    count *= dims[k];
  }
  const std::size_t header = 8 + 8 * order;
  const std::size_t payload = bytes.size() - header;
  if (payload != 8 * count) {
    throw FormatError("payload mismatch: dims declare " + std::to_string(count) +
                      " elements, file holds " + std::to_string(payload / 8) +
                      (payload % 8 ? " and a partial value" : ""));
  }
  std::vector<double> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    data[i] = std::bit_cast<double>(detail::get_le(bytes, header + 8 * i, 8));
    if (!std::isfinite(data[i])) throw FormatError("non-finite value in tensor payload");
  }
  return Tensor(std::move(dims), std::move(data));
}

inline std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

inline void write_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to '" + path + "'");
}

inline Tensor read_tensor(const std::string& path) { return decode_tensor(read_bytes(path)); }

inline void write_tensor(const std::string& path, const Tensor& t) {
  write_bytes(path, encode_tensor(t));
}

// Mask sidecar: a TSR1 tensor of 0.0 / 1.0.
inline Tensor mask_tensor(const RetentionMask& mask) {
  std::vector<double> values(mask.flags.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = mask.flags[i] ? 1.0 : 0.0;
  return Tensor(mask.dims, std::move(values));
}

// Weight matrices travel as order-2 TSR1 tensors.
inline WeightMatrix read_weights(const std::string& path) {
  const Tensor t = read_tensor(path);
  if (t.order() != 2) throw FormatError("weight file must hold an order-2 tensor");
  return WeightMatrix(t.dims()[0], t.dims()[1],
                      std::vector<double>(t.data().begin(), t.data().end()));
}

}  // namespace tldp::io
