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

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tldp/accounting.hpp"
#include "tldp/audit.hpp"
#include "tldp/fedsim.hpp"
#include "tldp/mechanisms.hpp"

// Locale-independent key=value and CSV rendering.

namespace tldp::report {

using Lines = std::vector<std::pair<std::string, std::string>>;

// Shortest round-trip decimal form; never uses the global locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_number(std::size_t v) { return std::to_string(v); }

inline void write_lines(std::ostream& out, const Lines& lines) {
  for (const auto& [k, v] : lines) out << k << '=' << v << '\n';
}

struct ErrorExtras {
  std::optional<std::size_t> first_mode;
  std::optional<double> clip;
};

// Scale, retention, identity and expected-error summary for one parameter set.
inline Lines params_summary(const PrivacyParams& p, const ErrorExtras& extras = {}) {
  Lines lines;
  lines.emplace_back("kind", std::string(to_string(p.kind)));
  lines.emplace_back("epsilon", format_number(p.epsilon));
  lines.emplace_back("delta_range", format_number(p.delta_range));
  lines.emplace_back("count", format_number(p.count));
  lines.emplace_back(is_laplace(p.kind) ? "scale_b" : "scale_sigma", format_number(p.scale));
  lines.emplace_back("variance", format_number(p.variance()));
  lines.emplace_back("retain_log_p", format_number(p.retain_log_p));
  lines.emplace_back("retain_p", format_number(p.retain_p()));
  lines.emplace_back("privacy_identity_log",
                     is_tldp(p.kind) ? format_number(privacy_identity_log(p)) : "na");
  const double variance_error = expected_error_variance(p);
  const double table5_error = expected_error_table5(p);
  lines.emplace_back("expected_error_variance", format_number(variance_error));
  lines.emplace_back("expected_error_table5", format_number(table5_error));
  lines.emplace_back("expected_error_ratio",
                     table5_error > 0.0 ? format_number(variance_error / table5_error) : "na");
  lines.emplace_back("noise_scale_ratio",
                     is_full(p.kind) ? "na" : format_number(noise_scale_ratio(p.kind, p.count)));

  ErrorArgs args{p.delta_range, p.epsilon, p.count, extras.first_mode, extras.clip,
                 is_full(p.kind) ? std::optional<double>(0.0) : p.retain_p()};
  for (ErrorMethod m : {ErrorMethod::kLaplace, ErrorMethod::kGaussian, ErrorMethod::kMvg,
                        ErrorMethod::kIdn, ErrorMethod::kDphsgd, ErrorMethod::kTldpL,
                        ErrorMethod::kTldpG}) {
    if (m == ErrorMethod::kMvg && !extras.first_mode) continue;
    if (m == ErrorMethod::kDphsgd && !extras.clip) continue;
    lines.emplace_back("table5_" + std::string(to_string(m)),
                       format_number(expected_error_table5(m, args)));
  }
  return lines;
}

inline Lines audit_lines(const audit::AuditReport& r) {
  Lines lines = {
      {"trials", format_number(r.trials)},
      {"empirical_error_mean", format_number(r.empirical_error_mean)},
      {"analytic_error", format_number(r.analytic_error)},
      {"table5_error", format_number(r.table5_error)},
      {"retained_mean", format_number(r.retained_mean)},
      {"retained_expected", format_number(r.retained_expected)},
      {"retained_z", format_number(r.retained_z)},
      {"ks_statistic", format_number(r.ks_statistic)},
      {"ks_threshold", format_number(r.ks_threshold)},
  };
  return lines;
}

inline Lines lr_probe_lines(const audit::LrProbe& p, std::size_t index) {
  const std::string prefix = "lr_probe." + std::to_string(index) + ".";
  return {
      {prefix + "bin_width", format_number(p.bin_width)},
      {prefix + "max_log_ratio", format_number(p.max_log_ratio)},
      {prefix + "epsilon_claim", format_number(p.epsilon_claim)},
      {prefix + "bins_compared", format_number(p.bins_compared)},
      {prefix + "argmax_edge", format_number(p.argmax_edge)},
  };
}

inline constexpr const char* kSimCsvHeader =
    "epsilon,mechanism,f1,baseline_f1,retained_fraction,seconds";

inline void write_sim_csv(std::ostream& out, const fedsim::SimReport& report) {
  out << kSimCsvHeader << "\r\n";
  for (const fedsim::SimRow& row : report.rows) {
    out << format_number(row.epsilon) << ',' << to_string(row.mechanism) << ','
        << format_number(row.f1) << ',' << format_number(row.baseline_f1) << ','
        << format_number(row.retained_fraction) << ',' << format_number(row.seconds)
        << "\r\n";
  }
}

}  // namespace tldp::report
