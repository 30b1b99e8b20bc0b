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
// Command-line front end.
//
//   tldp perturb  --input X --output Y --kind K --epsilon E --delta-range D
//                 [--weights W] [--seed S]
//   tldp params   --kind K --epsilon E --delta-range D --count I [--i1 N] [--clip C]
//   tldp audit    --config FILE [--seed S]
//   tldp simulate --config FILE --output CSV [--seed S]
//
// Exit status: 0 success, 1 internal failure, 2 usage or validation error.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "tldp/tldp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --seed wins, then TLDP_SEED, then a seed from the config file, then entropy.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const std::optional<std::uint64_t>& from_config = std::nullopt) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TLDP_SEED"); env != nullptr && *env != '\0') {
    return tldp::config::parse_uint(env, "TLDP_SEED");
  }
  if (from_config) return *from_config;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) | rd();
}

void print_seed(std::uint64_t seed) { std::cout << "seed=" << seed << '\n'; }

struct PerturbArgs {
  std::string input;
  std::string output;
  std::string kind;
  double epsilon = 0.0;
  double delta_range = 0.0;
  std::optional<std::string> weights;
  std::optional<std::uint64_t> seed;
};

int run_perturb(const PerturbArgs& a) {
  const tldp::MechanismKind kind = tldp::parse_mechanism_kind(a.kind);
  if (tldp::is_weighted(kind) && !a.weights) {
    throw UsageError("--weights is required for " + std::string(tldp::to_string(kind)));
  }
  if (!tldp::is_weighted(kind) && a.weights) {
    throw UsageError("--weights only applies to weighted kinds");
  }
  const tldp::Tensor x = tldp::io::read_tensor(a.input);
  std::optional<tldp::WeightMatrix> weights;
  if (a.weights) weights = tldp::io::read_weights(*a.weights);
  const tldp::PrivacyParams params =
      tldp::make_params(kind, a.epsilon, a.delta_range, x.size());
  const std::uint64_t seed = resolve_seed(a.seed);
  const tldp::PerturbOutcome out = tldp::perturb(x, kind, params, weights, seed);

  const std::string mask_path = a.output + ".mask";
  tldp::io::write_tensor(a.output, out.output);
  tldp::io::write_tensor(mask_path, tldp::io::mask_tensor(out.mask));

  tldp::report::ErrorExtras extras;
  extras.first_mode = x.dims().front();
  tldp::report::write_lines(std::cout, tldp::report::params_summary(params, extras));
  print_seed(seed);
  std::cout << "retained=" << out.mask.retained() << '\n'
            << "output=" << a.output << '\n'
            << "mask=" << mask_path << '\n';
  return kExitOk;
}

struct ParamsArgs {
  std::string kind;
  double epsilon = 0.0;
  double delta_range = 0.0;
  std::size_t count = 0;
  std::optional<std::size_t> i1;
  std::optional<double> clip;
};

int run_params(const ParamsArgs& a) {
  const tldp::MechanismKind kind = tldp::parse_mechanism_kind(a.kind);
  const tldp::PrivacyParams params = tldp::make_params(kind, a.epsilon, a.delta_range, a.count);
  tldp::report::ErrorExtras extras{a.i1, a.clip};
  tldp::report::write_lines(std::cout, tldp::report::params_summary(params, extras));
  return kExitOk;
}

int run_audit(const std::string& config_path, const std::optional<std::uint64_t>& seed_flag) {
  const tldp::config::AuditConfig c =
      tldp::config::load_audit_config(tldp::config::Document::load(config_path));
  const std::uint64_t seed = resolve_seed(seed_flag, c.seed);
  const tldp::PrivacyParams params = tldp::make_params(
      c.mechanism, c.epsilon, c.delta_range, tldp::dims_product(c.dims));
  std::optional<tldp::WeightMatrix> weights;
  if (tldp::is_weighted(c.mechanism)) {
    weights = tldp::WeightMatrix::uniform(c.dims[0], c.dims[1], c.weight);
  }

  tldp::audit::AuditReport report =
      tldp::audit::run_audit(c.mechanism, params, c.dims, c.trials, seed, weights);
  std::vector<tldp::audit::LrProbe> curve;
  if (c.lr_probe) {
    const tldp::Tensor x = tldp::Tensor::zeros(c.dims);
    std::vector<double> alt(x.size(), 0.0);
    alt[0] = c.delta_range;
    const tldp::Tensor x_alt(c.dims, std::move(alt));
    curve = tldp::audit::lr_probe_curve(x, x_alt, c.mechanism, params, c.bin_widths,
                                        c.lr_trials, seed, weights, c.bin_floor);
    report.lr_probe = curve.front();
  }

  tldp::report::write_lines(std::cout, tldp::report::params_summary(params));
  print_seed(seed);
  tldp::report::write_lines(std::cout, tldp::report::audit_lines(report));
  for (std::size_t i = 0; i < curve.size(); ++i) {
    tldp::report::write_lines(std::cout, tldp::report::lr_probe_lines(curve[i], i));
  }
  return kExitOk;
}

int run_simulate(const std::string& config_path, const std::string& csv_path,
                 const std::optional<std::uint64_t>& seed_flag) {
  tldp::config::LoadedSim loaded =
      tldp::config::load_sim_config(tldp::config::Document::load(config_path));
  loaded.config.seed = resolve_seed(seed_flag, loaded.seed);
  const tldp::fedsim::SimReport report = tldp::fedsim::simulate(loaded.config);

  std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
  if (!csv) throw tldp::FormatError("cannot open '" + csv_path + "' for writing");
  tldp::report::write_sim_csv(csv, report);
  csv.close();
  if (!csv) throw tldp::FormatError("short write to '" + csv_path + "'");

  print_seed(loaded.config.seed);
  std::cout << "task=" << tldp::fedsim::to_string(report.task) << '\n';
  if (report.task == tldp::fedsim::Task::kTypeIII) {
    std::cout << "perturb_point=" << tldp::fedsim::to_string(report.perturb_point) << '\n';
  }
  std::cout << "rows=" << report.rows.size() << '\n' << "csv=" << csv_path << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor local differential privacy tools"};
  app.require_subcommand(1);

  PerturbArgs perturb;
  auto* perturb_cmd = app.add_subcommand("perturb", "Perturb a TSR1 tensor file");
  perturb_cmd->add_option("--input", perturb.input, "Input TSR1 tensor")->required();
  perturb_cmd->add_option("--output", perturb.output, "Output TSR1 tensor")->required();
  perturb_cmd->add_option("--kind", perturb.kind, "Mechanism kind")->required();
  perturb_cmd->add_option("--epsilon", perturb.epsilon, "Privacy budget")->required();
  perturb_cmd->add_option("--delta-range", perturb.delta_range, "Value range")->required();
  perturb_cmd->add_option("--weights", perturb.weights, "Order-2 TSR1 weight matrix");
  perturb_cmd->add_option("--seed", perturb.seed, "64-bit seed");

  ParamsArgs params;
  auto* params_cmd = app.add_subcommand("params", "Print scales, retention and expected errors");
  params_cmd->add_option("--kind", params.kind, "Mechanism kind")->required();
  params_cmd->add_option("--epsilon", params.epsilon, "Privacy budget")->required();
  params_cmd->add_option("--delta-range", params.delta_range, "Value range")->required();
  params_cmd->add_option("--count", params.count, "Element count I")->required();
  params_cmd->add_option("--i1", params.i1, "First mode size (enables the mvg line)");
  params_cmd->add_option("--clip", params.clip, "Clip value (enables the dphsgd line)");

  std::string audit_config;
  std::optional<std::uint64_t> audit_seed;
  auto* audit_cmd = app.add_subcommand("audit", "Monte-Carlo audit of one mechanism");
  audit_cmd->add_option("--config", audit_config, "Audit config file")->required();
  audit_cmd->add_option("--seed", audit_seed, "64-bit seed");

  std::string sim_config;
  std::string sim_output;
  std::optional<std::uint64_t> sim_seed;
  auto* sim_cmd = app.add_subcommand("simulate", "Federated simulation sweep to CSV");
  sim_cmd->add_option("--config", sim_config, "Simulation config file")->required();
  sim_cmd->add_option("--output", sim_output, "CSV output path")->required();
  sim_cmd->add_option("--seed", sim_seed, "64-bit seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*perturb_cmd) return run_perturb(perturb);
    if (*params_cmd) return run_params(params);
    if (*audit_cmd) return run_audit(audit_config, audit_seed);
    if (*sim_cmd) return run_simulate(sim_config, sim_output, sim_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tldp::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tldp::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
