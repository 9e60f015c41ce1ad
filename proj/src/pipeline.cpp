/*
 * Copyright (c) 2026, The seed-forecast Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "seed/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "seed/adam.hpp"
#include "seed/errors.hpp"
#include "seed/ops.hpp"

namespace seed {

const std::vector<WindowSample>& PreparedData::windows(std::string_view split_name) const {
  if (split_name == "train") return train;
  if (split_name == "val") return val;
  if (split_name == "test") return test;
  throw ConfigError("unknown split '" + std::string(split_name) + "' (expected train, val or test)");
}

PreparedData prepare_data(const ExperimentConfig& config) {
  if (config.data_path.empty()) throw ConfigError("data.path is not set");
  CsvSchema schema = config.schema;
  schema.min_rows = std::max(schema.min_rows, config.window + config.horizon);
  return prepare_data(config, load_csv(config.data_path, schema));
}

PreparedData prepare_data(const ExperimentConfig& config, RawSeries series, const NormStats* stats) {
  PreparedData d;
  d.series = std::move(series);
  d.ranges = split(d.series, config.split);
  const auto rows = [&](const RowRange& r) {
    return d.series.values.middleRows(static_cast<Eigen::Index>(r.begin), static_cast<Eigen::Index>(r.size()));
  };
  d.stats = stats ? *stats : zscore_fit(rows(d.ranges.train));
  if (static_cast<Index>(d.stats.mean.size()) != d.series.num_vars()) {
    throw DataError("normalization statistics cover " + std::to_string(d.stats.mean.size()) +
                    " variables but the data has " + std::to_string(d.series.num_vars()));
  }
  const auto windows = [&](const RowRange& r, Index stride) {
    return make_windows(zscore_apply(rows(r), d.stats), config.window, config.horizon, stride, r.begin);
  };
  d.train = windows(d.ranges.train, config.stride);
  d.val = windows(d.ranges.val, config.eval_stride);
  d.test = windows(d.ranges.test, config.eval_stride);
  return d;
}

namespace {

double window_loss_value(const Tensor& loss) {
  const double v = loss.item();
  if (!std::isfinite(v)) throw NumericError("training diverged: non-finite loss " + std::to_string(v));
  return v;
}

}  // namespace

TrainResult train_model(SeedModel& model, const ExperimentConfig& config, const PreparedData& data,
                        const EpochCallback& on_epoch) {
  if (data.train.empty()) throw DataError("training split yields no windows of length L + H");
  if (data.val.empty()) throw DataError("validation split yields no windows of length L + H");
  const auto t0 = std::chrono::steady_clock::now();
  ParameterSet& params = model.params();
  TrainResult result;
  result.decoder_digest = decoder_digest(params);

  AdamState adam;
  adam.lr = config.train.lr;
  adam.beta1 = config.train.beta1;
  adam.beta2 = config.train.beta2;
  adam.eps = config.train.eps;
  Rng order_rng = Rng(config.train.seed).fork(1);
  std::vector<Index> order(data.train.size());
  std::iota(order.begin(), order.end(), Index{0});

  TrainState& state = result.state;
  state.best_val_loss = evaluate_windows(model, data.val, nullptr, config.eval_threads).mse;
  state.best_snapshot = params.snapshot();
  for (Index epoch = 1; epoch <= config.train.max_epochs; ++epoch) {
    state.epoch = epoch;
    order_rng.shuffle(std::span<Index>(order));
    std::vector<double> window_losses(order.size());
    for (std::size_t start = 0; start < order.size(); start += config.train.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.train.batch_size);
      const double weight = 1.0 / static_cast<double>(stop - start);
      params.zero_grad();
      for (std::size_t i = start; i < stop; ++i) {
        const WindowSample& w = data.train[order[i]];
        const Tensor loss = mse_loss(model.forward(w.x), Tensor::from_matrix(w.y));
        window_losses[order[i]] = window_loss_value(loss);
        scale(loss, weight).backward();
      }
      adam_step(params, adam);
    }
    const double loss_total = std::accumulate(window_losses.begin(), window_losses.end(), 0.0);
    EpochRecord record{epoch, loss_total / static_cast<double>(order.size()),
                       evaluate_windows(model, data.val, nullptr, config.eval_threads).mse, false};
    if (!std::isfinite(record.val_mse)) throw NumericError("validation loss is not finite");
    if (record.val_mse < state.best_val_loss) {
      record.improved = true;
      state.best_val_loss = record.val_mse;
      state.best_epoch = epoch;
      state.epochs_since_improvement = 0;
      state.best_snapshot = params.snapshot();
    } else {
      ++state.epochs_since_improvement;
    }
    result.log.push_back(record);
    if (on_epoch) on_epoch(record);
    if (state.epochs_since_improvement >= config.train.patience) break;
  }
  params.restore(state.best_snapshot);
  params.zero_grad();
  result.decoder_unchanged = freeze_check(params, result.decoder_digest);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

Metrics evaluate_windows(const SeedModel& model, std::span<const WindowSample> windows,
                         const NormStats* denormalize, Index threads) {
  if (windows.empty()) throw DataError("evaluation split yields no windows");
  std::vector<RowMatrix> predictions(windows.size());
  const auto run = [&](std::size_t begin, std::size_t step) {
    NoGradGuard guard;
    for (std::size_t i = begin; i < windows.size(); i += step) predictions[i] = model.forward(windows[i].x).to_matrix();
  };
  const std::size_t workers = std::min<std::size_t>(std::max<Index>(threads, 1), windows.size());
  if (workers <= 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run, t, workers);
  }
  MetricAccumulator acc;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (denormalize) {
      acc.add(zscore_invert(predictions[i], *denormalize), zscore_invert(windows[i].y, *denormalize));
    } else {
      acc.add(predictions[i], windows[i].y);
    }
  }
  return acc.result();
}

RowMatrix naive_forecast(const WindowSample& window, Index horizon) {
  return window.x.row(window.x.rows() - 1).replicate(static_cast<Eigen::Index>(horizon), 1);
}

Metrics naive_metrics(std::span<const WindowSample> windows, Index horizon) {
  MetricAccumulator acc;
  for (const WindowSample& w : windows) acc.add(naive_forecast(w, horizon), w.y);
  return acc.result();
}

namespace {

std::string join_doubles(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

std::string encode_metadata(const RunMetadata& meta) {
  std::string out = meta.config.to_text();
  std::string names;
  for (const auto& n : meta.variables) names += (names.empty() ? "" : ",") + n;
  out += "stats.variables = " + names + "\n";
  out += "stats.mean = " + join_doubles(meta.stats.mean) + "\n";
  out += "stats.std = " + join_doubles(meta.stats.std) + "\n";
  return out;
}

RunMetadata decode_metadata(const std::string& text) {
  std::istringstream in(text);
  std::string config_text, line;
  std::map<std::string, std::string> stats;
  while (std::getline(in, line)) {
    if (line.rfind("stats.", 0) == 0) {
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) throw DataError("checkpoint metadata: malformed line '" + line + "'");
      stats[line.substr(0, eq)] = line.substr(eq + 3);
    } else {
      config_text += line + "\n";
    }
  }
  RunMetadata meta;
  meta.config = parse_config_text(config_text);
  if (!stats.count("stats.variables") || !stats.count("stats.mean") || !stats.count("stats.std")) {
    throw DataError("checkpoint metadata lacks normalization statistics");
  }
  meta.variables = split_commas(stats["stats.variables"]);
  const auto to_vector = [](const std::vector<std::string>& parts) {
    Vector v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_double(parts[i]);
    return v;
  };
  meta.stats.mean = to_vector(split_commas(stats["stats.mean"]));
  meta.stats.std = to_vector(split_commas(stats["stats.std"]));
  if (meta.stats.mean.size() != static_cast<Eigen::Index>(meta.variables.size()) ||
      meta.stats.std.size() != meta.stats.mean.size()) {
    throw DataError("checkpoint metadata: statistics do not match the variable list");
  }
  return meta;
}

TrainOutcome run_training(const ExperimentConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  return run_training(config, prepare_data(config), on_epoch);
}

TrainOutcome run_training(const ExperimentConfig& config, const PreparedData& data, const EpochCallback& on_epoch) {
  SeedModel model(config, data.series.num_vars());
  TrainOutcome out;
  out.result = train_model(model, config, data, on_epoch);
  if (!out.result.decoder_unchanged) throw ContractError("decoder parameters changed during training");
  out.val = evaluate_windows(model, data.val, nullptr, config.eval_threads);
  out.params_trainable = model.params().trainable_count();
  out.params_frozen = model.params().frozen_count();
  out.dropped_rows = data.series.dropped_rows;
  for (Index c : data.stats.clamped_channels) out.clamped_vars.push_back(data.series.variable_names[c]);
  out.checkpoint = capture(model.params(), encode_metadata({config, data.series.variable_names, data.stats}));
  return out;
}

std::unique_ptr<SeedModel> restore_model(const Checkpoint& ckpt, RunMetadata* meta) {
  RunMetadata m = decode_metadata(ckpt.metadata);
  auto model = std::make_unique<SeedModel>(m.config, m.variables.size());
  apply(ckpt, model->params());
  if (meta) *meta = std::move(m);
  return model;
}

Metrics evaluate_checkpoint(const Checkpoint& ckpt, std::string_view split_name) {
  if (split_name != "val" && split_name != "test") {
    throw ConfigError("evaluate: split must be val or test, got '" + std::string(split_name) + "'");
  }
  RunMetadata meta;
  const auto model = restore_model(ckpt, &meta);
  CsvSchema schema = meta.config.schema;
  schema.min_rows = std::max(schema.min_rows, meta.config.window + meta.config.horizon);
  RawSeries series = load_csv(meta.config.data_path, schema);
  if (series.variable_names != meta.variables) {
    throw DataError("dataset columns no longer match the checkpoint's variables");
  }
  const PreparedData data = prepare_data(meta.config, std::move(series), &meta.stats);
  return evaluate_windows(*model, data.windows(split_name), meta.config.eval_denormalized ? &data.stats : nullptr,
                          meta.config.eval_threads);
}

RowMatrix forecast_checkpoint(const Checkpoint& ckpt, const RawSeries& input) {
  RunMetadata meta;
  const auto model = restore_model(ckpt, &meta);
  if (input.variable_names != meta.variables) {
    std::string expected;
    for (const auto& n : meta.variables) expected += (expected.empty() ? "" : ",") + n;
    throw DataError("forecast input columns do not match the trained variables (" + expected + ")");
  }
  const Index window = meta.config.window;
  if (input.num_rows() < window) {
    throw DataError("forecast input has " + std::to_string(input.num_rows()) + " rows; need at least " +
                    std::to_string(window));
  }
  const RowMatrix x = zscore_apply(
      input.values.bottomRows(static_cast<Eigen::Index>(window)), meta.stats);
  NoGradGuard guard;
  return zscore_invert(model->forward(x).to_matrix(), meta.stats);
}

void write_forecast_csv(std::ostream& out, const RowMatrix& forecast, const std::vector<std::string>& variables) {
  out << "step";
  for (const auto& v : variables) out << ',' << v;
  out << '\n';
  for (Eigen::Index h = 0; h < forecast.rows(); ++h) {
    out << (h + 1);
    for (Eigen::Index c = 0; c < forecast.cols(); ++c) out << ',' << format_double(forecast(h, c));
    out << '\n';
  }
}

std::vector<ReportRow> run_ablation(const ExperimentConfig& config,
                                    const std::function<void(Variant, const EpochRecord&)>& on_epoch) {
  config.validate();
  const PreparedData data = prepare_data(config);
  std::vector<ReportRow> rows;
  for (Variant v : kAllVariants) {
    ExperimentConfig c = config;
    c.variant = v;
    const TrainOutcome out = run_training(c, data, [&](const EpochRecord& r) {
      if (on_epoch) on_epoch(v, r);
    });
    const auto model = restore_model(out.checkpoint);
    const Metrics test = evaluate_windows(*model, data.test, c.eval_denormalized ? &data.stats : nullptr,
                                          c.eval_threads);
    ReportRow row{c.dataset_label(), std::string(variant_name(v)), test.mse, test.mae, std::nullopt,
                  out.params_trainable, out.params_frozen};
    if (c.report_timing) row.train_time_s = out.result.seconds;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace seed
