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
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tldp/error.hpp"
#include "tldp/mechanisms.hpp"
#include "tldp/rng.hpp"
#include "tldp/tensor.hpp"

// Desk-scale federated simulation of the three privacy targets: raw data
// (Type I), extracted features (Type II) and model parameters (Type III),
// using softmax regression on synthetic Gaussian-cluster data.

namespace tldp::fedsim {

enum class Task { kTypeI, kTypeII, kTypeIII };
enum class PerturbPoint { kAtClient, kAfterAverage };

constexpr std::string_view to_string(Task t) {
  switch (t) {
    case Task::kTypeI: return "type1";
    case Task::kTypeII: return "type2";
    case Task::kTypeIII: return "type3";
  }
  return "unknown";
}

constexpr std::string_view to_string(PerturbPoint p) {
  return p == PerturbPoint::kAtClient ? "at_client" : "after_average";
}

inline Task parse_task(std::string_view s) {
  for (Task t : {Task::kTypeI, Task::kTypeII, Task::kTypeIII}) {
    if (to_string(t) == s) return t;
  }
  throw InvalidArgument("unknown task '" + std::string(s) + "'");
}

inline PerturbPoint parse_perturb_point(std::string_view s) {
  if (s == "at_client") return PerturbPoint::kAtClient;
  if (s == "after_average") return PerturbPoint::kAfterAverage;
  throw InvalidArgument("unknown perturb_point '" + std::string(s) + "'");
}

struct SyntheticSpec {
  std::size_t num_train = 3000;
  std::size_t num_test = 1000;
  std::size_t features = 256;
  std::size_t classes = 4;
  double class_separation = 1.0;
};

inline const std::vector<double> kDefaultEpsilonSweep = {0.1, 0.5, 1.0, 5.0, 10.0, 100.0};

struct SimConfig {
  Task task = Task::kTypeI;
  std::size_t clients = 3;
  std::vector<MechanismKind> mechanisms = {MechanismKind::kTldpLaplace};
  std::vector<double> epsilons = kDefaultEpsilonSweep;
  // Unset: 2 for data and features in (-1, 1), 2C for clipped parameters.
  std::optional<double> delta_range;
  double clip = 1.0;
  std::size_t epochs = 10;
  std::size_t batch_size = 64;
  double learning_rate = 0.5;
  PerturbPoint perturb_point = PerturbPoint::kAfterAverage;
  // Uniform cell weight for the weighted kinds.
  double weight = 0.5;
  SyntheticSpec dataset;
  std::uint64_t seed = 0;
};

struct SimRow {
  double epsilon = 0.0;
  MechanismKind mechanism = MechanismKind::kTldpLaplace;
  double f1 = 0.0;
  double baseline_f1 = 0.0;
  double retained_fraction = 0.0;
  double seconds = 0.0;
  // Type III only: every post-broadcast client model equalled the global.
  bool synchronized = true;
};

struct SimReport {
  Task task = Task::kTypeI;
  PerturbPoint perturb_point = PerturbPoint::kAfterAverage;
  std::vector<SimRow> rows;
};

// Hook invoked after every Type III broadcast with the client models and the
// global model.
using EpochObserver =
    std::function<void(std::size_t epoch, std::span<const Tensor> clients,
                       const Tensor& global)>;

// Support-weighted mean of per-class F1 scores. Classes with no predictions
// or no true members score 0.
inline double weighted_f1(std::span<const int> predictions,
                          std::span<const int> labels, int classes) {
  tldp::detail::require(!labels.empty(), "weighted_f1 needs at least one label");
  tldp::detail::require(predictions.size() == labels.size(),
                  "predictions and labels differ in length");
  tldp::detail::require(classes >= 1, "class count must be positive");
  const auto k = static_cast<std::size_t>(classes);
  std::vector<double> tp(k, 0.0), fp(k, 0.0), fn(k, 0.0), support(k, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    const int yhat = predictions[i];
    tldp::detail::require(y >= 0 && y < classes && yhat >= 0 && yhat < classes,
                    "label out of range");
    support[static_cast<std::size_t>(y)] += 1.0;
    if (y == yhat) {
      tp[static_cast<std::size_t>(y)] += 1.0;
    } else {
      fp[static_cast<std::size_t>(yhat)] += 1.0;
      fn[static_cast<std::size_t>(y)] += 1.0;
    }
  }
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double f1 = 0.0;
    if (tp[c] + fp[c] > 0.0 && tp[c] + fn[c] > 0.0) {
      const double precision = tp[c] / (tp[c] + fp[c]);
      const double recall = tp[c] / (tp[c] + fn[c]);
      if (precision + recall > 0.0) {
        f1 = 2.0 * precision * recall / (precision + recall);
      }
    }
    weighted += support[c] * f1;
    total += support[c];
  }
  return weighted / total;
}

// Fisher-Yates driven by the counter engine; unlike std::shuffle the
// permutation is identical across standard libraries.
inline void shuffle(std::vector<std::size_t>& v, rng::CounterEngine& engine) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(engine.uniform() * static_cast<double>(i));
    std::swap(v[i - 1], v[std::min(j, i - 1)]);
  }
}

// Row-major sample matrix with integer labels.
struct Dataset {
  std::size_t features = 0;
  std::vector<double> x;
  std::vector<int> y;

  std::size_t size() const { return y.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(x).subspan(i * features, features);
  }
};

inline void validate(const SyntheticSpec& spec) {
  tldp::detail::require(spec.num_train >= 1, "training set must not be empty");
  tldp::detail::require(spec.num_test >= 1, "test set must not be empty");
  tldp::detail::require(spec.features >= 1, "feature count must be positive");
  tldp::detail::require(spec.classes >= 2, "at least two classes are required");
  tldp::detail::require(spec.class_separation > 0.0, "class separation must be positive");
  tldp::detail::require((spec.features + 1) * spec.classes <= 10000,
                  "model size exceeds desk scale (10^4 parameters)");
}

// Gaussian clusters squashed into (-1, 1) by tanh. Centre coordinates have
// standard deviation 0.375 * class_separation, so the task gets easier as
// features grow. Centres and samples are fixed by the seed.
inline std::pair<Dataset, Dataset> make_synthetic(const SyntheticSpec& spec,
                                                  std::uint64_t seed) {
  validate(spec);
  rng::CounterEngine engine(rng::derive_seed(seed, rng::Domain::kData, 0),
                            rng::Domain::kData);
  auto normal = [](rng::CounterEngine& e) {
    return sample_gaussian(1.0, e.uniform(), e.uniform());
  };
  const double centre_scale = 0.375 * spec.class_separation;
  std::vector<double> centres(spec.classes * spec.features);
  for (double& c : centres) c = centre_scale * normal(engine);

  auto draw = [&](std::size_t n) {
    Dataset d;
    d.features = spec.features;
    d.x.resize(n * spec.features);
    d.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = i % spec.classes;
      d.y[i] = static_cast<int>(c);
      for (std::size_t j = 0; j < spec.features; ++j) {
        d.x[i * spec.features + j] =
            std::tanh(0.5 * (centres[c * spec.features + j] + normal(engine)));
      }
    }
    return d;
  };
  Dataset train = draw(spec.num_train);
  Dataset test = draw(spec.num_test);
  // Interleave classes so contiguous client shards stay balanced but not
  // perfectly periodic.
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, engine);
  Dataset shuffled;
  shuffled.features = train.features;
  shuffled.x.reserve(train.x.size());
  for (std::size_t i : order) {
    auto r = train.row(i);
    shuffled.x.insert(shuffled.x.end(), r.begin(), r.end());
    shuffled.y.push_back(train.y[i]);
  }
  return {std::move(shuffled), std::move(test)};
}

// Multiclass logistic regression; the last column of `weights` is the bias.
struct SoftmaxModel {
  std::size_t classes = 0;
  std::size_t inputs = 0;
  std::vector<double> weights;

  SoftmaxModel(std::size_t num_classes, std::size_t num_inputs)
      : classes(num_classes), inputs(num_inputs),
        weights(num_classes * (num_inputs + 1), 0.0) {}

  Dims dims() const { return {classes, inputs + 1}; }
  Tensor to_tensor() const { return Tensor(dims(), weights); }
  void assign(const Tensor& t) {
    tldp::detail::require(t.dims() == dims(), "parameter tensor shape mismatch");
    weights.assign(t.data().begin(), t.data().end());
  }

  void logits(std::span<const double> x, std::vector<double>& out) const {
    out.assign(classes, 0.0);
    const std::size_t stride = inputs + 1;
    for (std::size_t c = 0; c < classes; ++c) {
      const double* w = &weights[c * stride];
      double z = w[inputs];
      for (std::size_t j = 0; j < inputs; ++j) z += w[j] * x[j];
      out[c] = z;
    }
  }

  int predict(std::span<const double> x) const {
    std::vector<double> z;
    logits(x, z);
    return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
  }

  // One pass of mini-batch gradient descent over `data` in `order`.
  void train_epoch(const Dataset& data, std::span<const std::size_t> order,
                   std::size_t batch_size, double learning_rate) {
    const std::size_t stride = inputs + 1;
    std::vector<double> grad(weights.size());
    std::vector<double> z;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t end = std::min(order.size(), start + batch_size);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const auto x = data.row(order[k]);
        logits(x, z);
        const double zmax = *std::max_element(z.begin(), z.end());
        double norm = 0.0;
        for (double& v : z) norm += (v = std::exp(v - zmax));
        for (std::size_t c = 0; c < classes; ++c) {
          const double g = z[c] / norm - (data.y[order[k]] == static_cast<int>(c) ? 1.0 : 0.0);
          double* gw = &grad[c * stride];
          for (std::size_t j = 0; j < inputs; ++j) gw[j] += g * x[j];
          gw[inputs] += g;
        }
      }
      const double step = learning_rate / static_cast<double>(end - start);
      for (std::size_t i = 0; i < weights.size(); ++i) weights[i] -= step * grad[i];
    }
  }
};

inline double evaluate_f1(const SoftmaxModel& model, const Dataset& test) {
  std::vector<int> predictions(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) predictions[i] = model.predict(test.row(i));
  return weighted_f1(predictions, test.y, static_cast<int>(model.classes));
}

namespace detail {

inline void validate(const SimConfig& config) {
  tldp::detail::require(config.clients >= 1, "at least one client is required");
  tldp::detail::require(!config.mechanisms.empty(), "no mechanisms configured");
  tldp::detail::require(!config.epsilons.empty(), "no epsilon values configured");
  for (double e : config.epsilons) {
    tldp::detail::require(e > 0.0 && std::isfinite(e), "epsilon must be positive");
  }
  tldp::detail::require(config.clip > 0.0, "clip must be positive");
  tldp::detail::require(config.epochs >= 1, "epochs must be positive");
  tldp::detail::require(config.batch_size >= 1, "batch size must be positive");
  tldp::detail::require(config.learning_rate > 0.0, "learning rate must be positive");
  tldp::detail::require(config.weight >= 0.0 && config.weight < 1.0,
                        "weight must lie in [0, 1)");
  if (config.delta_range) {
    tldp::detail::require(*config.delta_range > 0.0, "delta_range must be positive");
  }
  fedsim::validate(config.dataset);
  tldp::detail::require(config.dataset.num_train >= config.clients,
                        "fewer training samples than clients");
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed,
                                                 std::uint64_t stream) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng::CounterEngine engine(rng::derive_seed(seed, rng::Domain::kFedsim, stream, 1),
                            rng::Domain::kFedsim);
  shuffle(order, engine);
  return order;
}

// Trains a fresh model on `data` for the configured epochs.
inline SoftmaxModel train_central(const Dataset& data, std::size_t classes,
                                  const SimConfig& config) {
  SoftmaxModel model(classes, data.features);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = shuffled_indices(data.size(), config.seed, epoch);
    model.train_epoch(data, order, config.batch_size, config.learning_rate);
  }
  return model;
}

struct PerturbTally {
  std::size_t retained = 0;
  std::size_t total = 0;
  double fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(retained) / static_cast<double>(total);
  }
};

// Perturbs every row of `data` as a 1 x features tensor, each on its own
// derived seed.
inline Dataset perturb_rows(const Dataset& data, MechanismKind kind, double epsilon,
                            double delta_range, const SimConfig& config,
                            std::uint64_t run_seed, PerturbTally& tally) {
  const Dims dims{1, data.features};
  const PrivacyParams params = make_params(kind, epsilon, delta_range, data.features);
  std::optional<WeightMatrix> weights;
  if (is_weighted(kind)) weights = WeightMatrix::uniform(1, data.features, config.weight);
  Dataset out;
  out.features = data.features;
  out.y = data.y;
  out.x.reserve(data.x.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto r = data.row(i);
    const Tensor sample(dims, std::vector<double>(r.begin(), r.end()));
    const PerturbOutcome o = perturb(
        sample, kind, params, weights,
        rng::derive_seed(run_seed, rng::Domain::kFedsim, i, 2));
    out.x.insert(out.x.end(), o.output.data().begin(), o.output.data().end());
    tally.retained += o.mask.retained();
    tally.total += o.output.size();
  }
  return out;
}

inline std::uint64_t run_seed(const SimConfig& config, std::size_t eps_index,
                              std::size_t mech_index) {
  return rng::derive_seed(config.seed, rng::Domain::kFedsim, eps_index,
                          static_cast<std::uint32_t>(mech_index + 16));
}

// Contiguous equal-size shards; the last shard absorbs the remainder.
inline std::vector<Dataset> shard(const Dataset& data, std::size_t clients) {
  std::vector<Dataset> shards(clients);
  const std::size_t base = data.size() / clients;
  for (std::size_t c = 0; c < clients; ++c) {
    const std::size_t begin = c * base;
    const std::size_t end = c + 1 == clients ? data.size() : begin + base;
    Dataset& s = shards[c];
    s.features = data.features;
    s.x.assign(data.x.begin() + static_cast<std::ptrdiff_t>(begin * data.features),
               data.x.begin() + static_cast<std::ptrdiff_t>(end * data.features));
    s.y.assign(data.y.begin() + static_cast<std::ptrdiff_t>(begin),
               data.y.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return shards;
}

inline Dataset concat(std::span<const Dataset> parts) {
  Dataset out;
  out.features = parts.front().features;
  for (const Dataset& p : parts) {
    out.x.insert(out.x.end(), p.x.begin(), p.x.end());
    out.y.insert(out.y.end(), p.y.begin(), p.y.end());
  }
  return out;
}

// Clients perturb their rows, the server trains on the union.
inline SimReport run_on_shared_rows(const Dataset& train, const Dataset& test,
                                    const SimConfig& config, double default_delta) {
  const std::size_t classes = config.dataset.classes;
  const double delta = config.delta_range.value_or(default_delta);
  const double baseline = evaluate_f1(train_central(train, classes, config), test);
  const std::vector<Dataset> shards = shard(train, config.clients);
  SimReport report{config.task, config.perturb_point, {}};
  for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
    for (std::size_t m = 0; m < config.mechanisms.size(); ++m) {
      const auto start = std::chrono::steady_clock::now();
      const std::uint64_t seed = run_seed(config, e, m);
      PerturbTally tally;
      std::vector<Dataset> uploads;
      for (std::size_t c = 0; c < shards.size(); ++c) {
        uploads.push_back(perturb_rows(
            shards[c], config.mechanisms[m], config.epsilons[e], delta, config,
            rng::derive_seed(seed, rng::Domain::kFedsim, c, 3), tally));
      }
      const SoftmaxModel model = train_central(concat(uploads), classes, config);
      SimRow row;
      row.epsilon = config.epsilons[e];
      row.mechanism = config.mechanisms[m];
      row.f1 = evaluate_f1(model, test);
      row.baseline_f1 = baseline;
      row.retained_fraction = tally.fraction();
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace detail

// Type I: clients perturb raw samples and upload them; the server trains on
// the union and is evaluated on clean test data.
inline SimReport run_type1(const SimConfig& config) {
  tldp::detail::require(config.task == Task::kTypeI, "run_type1 needs task = type1");
  detail::validate(config);
  const auto [train, test] = make_synthetic(config.dataset, config.seed);
  return detail::run_on_shared_rows(train, test, config, 2.0);
}

// Frozen random feature extractor: tanh of a seeded Gaussian projection,
// so every feature lies in (-1, 1).
class FeatureMap {
 public:
  FeatureMap(std::size_t inputs, std::size_t outputs, std::uint64_t seed)
      : inputs_(inputs), outputs_(outputs), weights_(inputs * outputs), bias_(outputs) {
    rng::CounterEngine engine(rng::derive_seed(seed, rng::Domain::kData, 1),
                              rng::Domain::kData);
    auto normal = [](rng::CounterEngine& e) {
      return sample_gaussian(1.0, e.uniform(), e.uniform());
    };
    const double s = 1.5 / std::sqrt(static_cast<double>(inputs));
    for (double& w : weights_) w = s * normal(engine);
    for (double& b : bias_) b = 0.1 * normal(engine);
  }

  Dataset apply(const Dataset& data) const {
    tldp::detail::require(data.features == inputs_, "feature map input size mismatch");
    Dataset out;
    out.features = outputs_;
    out.y = data.y;
    out.x.resize(data.size() * outputs_);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto x = data.row(i);
      for (std::size_t k = 0; k < outputs_; ++k) {
        double z = bias_[k];
        for (std::size_t j = 0; j < inputs_; ++j) z += weights_[k * inputs_ + j] * x[j];
        out.x[i * outputs_ + k] = std::tanh(z);
      }
    }
    return out;
  }

 private:
  std::size_t inputs_;
  std::size_t outputs_;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

// Type II: a frozen extractor produces features in (-1, 1); the features are
// perturbed with Delta = 2 and only the linear head is trained.
inline SimReport run_type2(const SimConfig& config) {
  tldp::detail::require(config.task == Task::kTypeII, "run_type2 needs task = type2");
  detail::validate(config);
  const auto [train, test] = make_synthetic(config.dataset, config.seed);
  const FeatureMap extractor(config.dataset.features, config.dataset.features, config.seed);
  return detail::run_on_shared_rows(extractor.apply(train), extractor.apply(test),
                                    config, 2.0);
}

// Server step for client-side perturbation: only perturbed uploads are
// accepted, so raw client parameters cannot reach the aggregate.
inline Tensor aggregate_perturbed(std::span<const PerturbOutcome> uploads) {
  std::vector<Tensor> outputs;
  outputs.reserve(uploads.size());
  for (const PerturbOutcome& u : uploads) outputs.push_back(u.output);
  return mean(outputs);
}

// Type III: per epoch each client trains one pass on its shard, clips its
// parameters to [-C, C], and the server averages and broadcasts. Noise with
// Delta = 2C is added either to the average (after_average) or by each
// client before upload (at_client).
inline SimReport run_type3(const SimConfig& config, const EpochObserver& observer = {}) {
  tldp::detail::require(config.task == Task::kTypeIII, "run_type3 needs task = type3");
  detail::validate(config);
  const auto [train, test] = make_synthetic(config.dataset, config.seed);
  const std::size_t classes = config.dataset.classes;
  const double delta = config.delta_range.value_or(2.0 * config.clip);
  const std::vector<Dataset> shards = detail::shard(train, config.clients);

  // std::nullopt kind trains without noise for the baseline.
  auto federate = [&](std::optional<MechanismKind> kind, double epsilon,
                      std::uint64_t seed, detail::PerturbTally& tally, bool& synced) {
    SoftmaxModel global(classes, train.features);
    std::vector<SoftmaxModel> locals(config.clients, global);
    const std::size_t count = global.weights.size();
    std::optional<PrivacyParams> params;
    std::optional<WeightMatrix> weights;
    if (kind) {
      params = make_params(*kind, epsilon, delta, count);
      if (is_weighted(*kind)) {
        weights = WeightMatrix::uniform(classes, train.features + 1, config.weight);
      }
    }
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      std::vector<Tensor> clipped;
      for (std::size_t c = 0; c < config.clients; ++c) {
        const auto order = detail::shuffled_indices(
            shards[c].size(), config.seed, (epoch << 16) | c);
        locals[c].train_epoch(shards[c], order, config.batch_size, config.learning_rate);
        clipped.push_back(clip_linf(locals[c].to_tensor(), config.clip));
      }
      const std::uint64_t epoch_seed =
          rng::derive_seed(seed, rng::Domain::kFedsim, epoch, 4);
      Tensor next = clipped.front();
      if (!kind) {
        next = mean(clipped);
      } else if (config.perturb_point == PerturbPoint::kAfterAverage) {
        const PerturbOutcome o = perturb(mean(clipped), *kind, *params, weights, epoch_seed);
        tally.retained += o.mask.retained();
        tally.total += o.output.size();
        next = o.output;
      } else {
        std::vector<PerturbOutcome> uploads;
        for (std::size_t c = 0; c < config.clients; ++c) {
          uploads.push_back(perturb(clipped[c], *kind, *params, weights,
                                    rng::derive_seed(epoch_seed, rng::Domain::kFedsim, c, 5)));
          tally.retained += uploads.back().mask.retained();
          tally.total += uploads.back().output.size();
        }
        next = aggregate_perturbed(uploads);
      }
      global.assign(next);
      for (SoftmaxModel& local : locals) local.assign(next);

      std::vector<Tensor> views;
      for (const SoftmaxModel& local : locals) {
        views.push_back(local.to_tensor());
        if (views.back() != next) synced = false;
      }
      if (observer) observer(epoch, views, next);
    }
    return evaluate_f1(global, test);
  };

  detail::PerturbTally ignored;
  bool baseline_synced = true;
  const double baseline = federate(std::nullopt, 1.0, config.seed, ignored, baseline_synced);
  SimReport report{config.task, config.perturb_point, {}};
  for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
    for (std::size_t m = 0; m < config.mechanisms.size(); ++m) {
      const auto start = std::chrono::steady_clock::now();
      detail::PerturbTally tally;
      SimRow row;
      row.epsilon = config.epsilons[e];
      row.mechanism = config.mechanisms[m];
      row.f1 = federate(config.mechanisms[m], config.epsilons[e],
                        detail::run_seed(config, e, m), tally, row.synchronized);
      row.baseline_f1 = baseline;
      row.retained_fraction = tally.fraction();
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report.rows.push_back(row);
    }
  }
  return report;
}

inline SimReport simulate(const SimConfig& config, const EpochObserver& observer = {}) {
  switch (config.task) {
    case Task::kTypeI: return run_type1(config);
    case Task::kTypeII: return run_type2(config);
    case Task::kTypeIII: return run_type3(config, observer);
  }
  throw InvalidArgument("unknown task");
}

}  // namespace tldp::fedsim
