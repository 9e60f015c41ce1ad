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

#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "seed/checkpoint.hpp"
#include "seed/metrics.hpp"
#include "seed/model.hpp"

namespace seed {

/// A dataset after splitting, normalization with training statistics, and
/// windowing. Windows never cross split boundaries.
struct PreparedData {
  RawSeries series;
  NormStats stats;
  SplitRanges ranges;
  std::vector<WindowSample> train;
  std::vector<WindowSample> val;
  std::vector<WindowSample> test;

  const std::vector<WindowSample>& windows(std::string_view split_name) const;
};

/// Loads `config.data_path` and prepares it.
PreparedData prepare_data(const ExperimentConfig& config);
/// Prepares an already loaded series; statistics are fit on its training
/// rows unless `stats` is given.
PreparedData prepare_data(const ExperimentConfig& config, RawSeries series, const NormStats* stats = nullptr);

struct EpochRecord {
  Index epoch = 0;
  double train_loss = 0.0;
  double val_mse = 0.0;
  bool improved = false;
};

struct TrainState {
  Index epoch = 0;
  double best_val_loss = 0.0;
  Index epochs_since_improvement = 0;
  Index best_epoch = 0;
  std::vector<Vector> best_snapshot;
};

struct TrainResult {
  std::vector<EpochRecord> log;
  TrainState state;
  double seconds = 0.0;
  std::uint64_t decoder_digest = 0;
  bool decoder_unchanged = true;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/**
 * Adam on every trainable parameter against the per-window MSE, averaged
 * over each mini-batch. Stops once validation MSE has not improved for
 * `patience` epochs and leaves the best-epoch parameters in place.
 * NumericError on a non-finite loss.
 */
TrainResult train_model(SeedModel& model, const ExperimentConfig& config, const PreparedData& data,
                        const EpochCallback& on_epoch = {});

/// Metrics over `windows`; denormalized first when `denormalize` is given.
Metrics evaluate_windows(const SeedModel& model, std::span<const WindowSample> windows,
                         const NormStats* denormalize = nullptr, Index threads = 1);

/// Repeats the last observed row for all H steps.
RowMatrix naive_forecast(const WindowSample& window, Index horizon);
Metrics naive_metrics(std::span<const WindowSample> windows, Index horizon);

/// Experiment description stored alongside the parameters.
struct RunMetadata {
  ExperimentConfig config;
  std::vector<std::string> variables;
  NormStats stats;
};

std::string encode_metadata(const RunMetadata& meta);
RunMetadata decode_metadata(const std::string& text);

struct TrainOutcome {
  Checkpoint checkpoint;
  TrainResult result;
  Metrics val;
  Index params_trainable = 0;
  Index params_frozen = 0;
  Index dropped_rows = 0;                 // rows removed by the NaN policy
  std::vector<std::string> clamped_vars;  // constant in training, std set to 1
};

/// Data preparation, model construction, training and checkpoint capture.
TrainOutcome run_training(const ExperimentConfig& config, const EpochCallback& on_epoch = {});
TrainOutcome run_training(const ExperimentConfig& config, const PreparedData& data,
                          const EpochCallback& on_epoch = {});

/// Rebuilds the model a checkpoint describes and loads its parameters.
std::unique_ptr<SeedModel> restore_model(const Checkpoint& ckpt, RunMetadata* meta = nullptr);

/// Split "val" or "test" of the checkpoint's dataset.
Metrics evaluate_checkpoint(const Checkpoint& ckpt, std::string_view split_name);

/// Forecast [H, N] in original units from the last L rows of `input`,
/// whose variables must match the training data by name and order.
RowMatrix forecast_checkpoint(const Checkpoint& ckpt, const RawSeries& input);
/// Header `step,<variables>`, one row per horizon step starting at 1.
void write_forecast_csv(std::ostream& out, const RowMatrix& forecast, const std::vector<std::string>& variables);

/// Trains and tests every variant on the same data and seed.
std::vector<ReportRow> run_ablation(const ExperimentConfig& config,
                                    const std::function<void(Variant, const EpochRecord&)>& on_epoch = {});

}  // namespace seed
