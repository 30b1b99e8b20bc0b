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
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "tldp/error.hpp"
#include "tldp/fedsim.hpp"
#include "tldp/mechanisms.hpp"
#include "tldp/tensor.hpp"

// Flat `key = value` documents with `#` comments. Lists are comma
// separated. Every command declares the keys it accepts; anything else is
// rejected.

namespace tldp::config {

class Document {
 public:
  static Document parse(std::string_view text) {
    Document doc;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw FormatError("line " + std::to_string(line_no) + ": expected 'key = value'");
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) throw FormatError("line " + std::to_string(line_no) + ": empty key");
      if (!doc.values_.emplace(key, value).second) {
        throw FormatError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
    }
    return doc;
  }

  static Document load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read config '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
  }

  void require_known(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
      if (!allowed.contains(key)) throw FormatError("unknown config key '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  std::optional<std::string> get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  static std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  }

 private:
  std::map<std::string, std::string> values_;
};

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> items;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = s.find(',', pos);
    const std::string_view item =
        Document::trim(s.substr(pos, comma == std::string_view::npos ? s.size() - pos
                                                                     : comma - pos));
    if (item.empty()) throw FormatError("empty item in list '" + std::string(s) + "'");
    items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return items;
}

inline double parse_double(std::string_view s, std::string_view key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw FormatError("'" + std::string(key) + "' expects a number, got '" +
                      std::string(s) + "'");
  }
  return v;
}

inline std::uint64_t parse_uint(std::string_view s, std::string_view key) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw FormatError("'" + std::string(key) + "' expects a non-negative integer, got '" +
                      std::string(s) + "'");
  }
  return v;
}

inline bool parse_bool(std::string_view s, std::string_view key) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw FormatError("'" + std::string(key) + "' expects true or false");
}

inline const std::set<std::string> kSimulateKeys = {
    "task",     "clients",       "mechanism",     "epsilon",       "delta_range",
    "clip",     "epochs",        "batch_size",    "learning_rate", "perturb_point",
    "weight",   "num_train",     "num_test",      "features",      "classes",
    "class_separation",          "seed",
};

struct LoadedSim {
  fedsim::SimConfig config;
  std::optional<std::uint64_t> seed;
};

inline LoadedSim load_sim_config(const Document& doc) {
  doc.require_known(kSimulateKeys);
  LoadedSim out;
  fedsim::SimConfig& c = out.config;
  auto num = [&](const char* key, auto& field) {
    if (auto v = doc.get(key)) {
      using Field = std::remove_reference_t<decltype(field)>;
      if constexpr (std::is_floating_point_v<Field>) {
        field = parse_double(*v, key);
      } else {
        field = static_cast<Field>(parse_uint(*v, key));
      }
    }
  };
  if (auto v = doc.get("task")) c.task = fedsim::parse_task(*v);
  if (auto v = doc.get("mechanism")) {
    c.mechanisms.clear();
    for (const auto& item : split_list(*v)) c.mechanisms.push_back(parse_mechanism_kind(item));
  }
  if (auto v = doc.get("epsilon")) {
    c.epsilons.clear();
    for (const auto& item : split_list(*v)) c.epsilons.push_back(parse_double(item, "epsilon"));
  }
  if (auto v = doc.get("delta_range")) c.delta_range = parse_double(*v, "delta_range");
  if (auto v = doc.get("perturb_point")) c.perturb_point = fedsim::parse_perturb_point(*v);
  num("clients", c.clients);
  num("clip", c.clip);
  num("epochs", c.epochs);
  num("batch_size", c.batch_size);
  num("learning_rate", c.learning_rate);
  num("weight", c.weight);
  num("num_train", c.dataset.num_train);
  num("num_test", c.dataset.num_test);
  num("features", c.dataset.features);
  num("classes", c.dataset.classes);
  num("class_separation", c.dataset.class_separation);
  if (auto v = doc.get("seed")) out.seed = parse_uint(*v, "seed");
  fedsim::detail::validate(c);
  return out;
}

inline const std::set<std::string> kAuditKeys = {
    "mechanism", "epsilon", "delta_range", "dims",       "trials",    "seed",
    "weight",    "lr_probe", "bin_width",  "lr_trials",  "bin_floor",
};

struct AuditConfig {
  MechanismKind mechanism = MechanismKind::kTldpLaplace;
  double epsilon = 1.0;
  double delta_range = 1.0;
  Dims dims = {8, 8};
  std::size_t trials = 10000;
  std::optional<std::uint64_t> seed;
  double weight = 0.5;
  bool lr_probe = false;
  std::vector<double> bin_widths = {0.1};
  std::size_t lr_trials = 100000;
  std::size_t bin_floor = 50;
};

inline AuditConfig load_audit_config(const Document& doc) {
  doc.require_known(kAuditKeys);
  AuditConfig c;
  if (auto v = doc.get("mechanism")) c.mechanism = parse_mechanism_kind(*v);
  if (auto v = doc.get("epsilon")) c.epsilon = parse_double(*v, "epsilon");
  if (auto v = doc.get("delta_range")) c.delta_range = parse_double(*v, "delta_range");
  if (auto v = doc.get("dims")) {
    c.dims.clear();
    for (const auto& item : split_list(*v)) c.dims.push_back(parse_uint(item, "dims"));
  }
  if (auto v = doc.get("trials")) c.trials = parse_uint(*v, "trials");
  if (auto v = doc.get("seed")) c.seed = parse_uint(*v, "seed");
  if (auto v = doc.get("weight")) c.weight = parse_double(*v, "weight");
  if (auto v = doc.get("lr_probe")) c.lr_probe = parse_bool(*v, "lr_probe");
  if (auto v = doc.get("bin_width")) {
    c.bin_widths.clear();
    for (const auto& item : split_list(*v)) c.bin_widths.push_back(parse_double(item, "bin_width"));
  }
  if (auto v = doc.get("lr_trials")) c.lr_trials = parse_uint(*v, "lr_trials");
  if (auto v = doc.get("bin_floor")) c.bin_floor = parse_uint(*v, "bin_floor");

  tldp::detail::validate_budget(c.epsilon, c.delta_range, dims_product(c.dims));
  tldp::detail::require(c.trials >= 1, "trials must be at least 1");
  tldp::detail::require(c.weight >= 0.0 && c.weight < 1.0, "weight must lie in [0, 1)");
  tldp::detail::require(c.lr_trials >= 1, "lr_trials must be at least 1");
  tldp::detail::require(c.bin_floor >= 1, "bin_floor must be at least 1");
  if (is_weighted(c.mechanism)) {
    tldp::detail::require(c.dims.size() >= 2, "weighted mechanisms need dims of order >= 2");
  }
  return c;
}

}  // namespace tldp::config
