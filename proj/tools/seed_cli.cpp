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

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "seed/diagnostics.hpp"
#include "seed/errors.hpp"
#include "seed/pipeline.hpp"

namespace {

using namespace seed;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

void print_epoch(const EpochRecord& r) {
  std::fprintf(stderr, "epoch %3zu  train_mse %.6f  val_mse %.6f%s\n", r.epoch, r.train_loss, r.val_mse,
               r.improved ? "  *" : "");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

int cmd_train(const std::string& config_path, const std::string& out_path) {
  const ExperimentConfig config = load_config(config_path);
  const TrainOutcome outcome = run_training(config, print_epoch);
  if (outcome.dropped_rows > 0) std::fprintf(stderr, "warning: dropped %zu rows with missing values\n", outcome.dropped_rows);
  for (const auto& name : outcome.clamped_vars) {
    std::fprintf(stderr, "warning: variable %s is constant in the training split; std set to 1\n", name.c_str());
  }
  save_checkpoint(out_path, outcome.checkpoint);
  std::printf("best epoch %zu of %zu\n", outcome.result.state.best_epoch, outcome.result.log.size());
  std::printf("val mse %s  mae %s\n", format_metric(outcome.val.mse).c_str(), format_metric(outcome.val.mae).c_str());
  std::printf("params trainable %zu  frozen %zu\n", outcome.params_trainable, outcome.params_frozen);
  std::printf("checkpoint %s\n", out_path.c_str());
  return 0;
}

int cmd_evaluate(const std::string& ckpt_path, const std::string& split) {
  const Metrics m = evaluate_checkpoint(load_checkpoint(ckpt_path), split);
  std::printf("split %s  windows %zu\nmse %s\nmae %s\n", split.c_str(), m.n_samples, format_metric(m.mse).c_str(),
              format_metric(m.mae).c_str());
  return 0;
}

int cmd_forecast(const std::string& ckpt_path, const std::string& input, const std::string& out_path) {
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const RunMetadata meta = decode_metadata(ckpt.metadata);
  CsvSchema schema = meta.config.schema;
  schema.min_rows = meta.config.window;
  const RawSeries series = load_csv(input, schema);
  const RowMatrix forecast = forecast_checkpoint(ckpt, series);
  std::ofstream out = open_output(out_path);
  write_forecast_csv(out, forecast, series.variable_names);
  return 0;
}

int cmd_ablate(const std::string& config_path, const std::string& csv_path) {
  const ExperimentConfig config = load_config(config_path);
  const auto rows = run_ablation(config, [](Variant v, const EpochRecord& r) {
    std::fprintf(stderr, "[%s] ", std::string(variant_name(v)).c_str());
    print_epoch(r);
  });
  std::cout << format_report_table(rows);
  if (!csv_path.empty()) {
    std::ofstream out = open_output(csv_path);
    write_report_csv(out, rows);
  }
  return 0;
}

int cmd_gradcheck(const std::string& module) {
  constexpr double kTolerance = 1e-4;
  bool ok = true;
  for (const ModuleGradCheck& c : gradient_checks(module)) {
    const bool pass = c.report.max_rel_error < kTolerance;
    ok = ok && pass;
    std::printf("%-16s coords %5zu  max_rel_error %.3e  %s\n", c.module.c_str(), c.report.coordinates,
                c.report.max_rel_error, pass ? "ok" : "FAIL");
  }
  return ok ? 0 : kExitNumeric;
}

int cmd_synth(const std::string& out_path, Index rows, Index vars, std::uint64_t seed) {
  const RawSeries series = synthetic_series(rows, vars, seed);
  std::ofstream out = open_output(out_path);
  write_csv(out, series);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-series forecasting with a structural encoder, prototype reprogramming and a frozen decoder"};
  app.require_subcommand(1);

  std::string config_path, ckpt_path, out_path = "seed.ckpt", split = "test", input, csv_path, module = "all";
  Index rows = 2000, vars = 3;
  std::uint64_t seed = 42;

  auto* train = app.add_subcommand("train", "Train a model and write a checkpoint");
  train->add_option("--config", config_path, "Experiment config file")->required();
  train->add_option("--out", out_path, "Checkpoint path")->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "MSE and MAE of a checkpoint on a split");
  evaluate->add_option("--checkpoint", ckpt_path)->required();
  evaluate->add_option("--split", split)->check(CLI::IsMember({"val", "test"}))->capture_default_str();

  std::string forecast_out;
  auto* forecast = app.add_subcommand("forecast", "Forecast H steps after the last L rows of a CSV");
  forecast->add_option("--checkpoint", ckpt_path)->required();
  forecast->add_option("--input", input)->required();
  forecast->add_option("--out", forecast_out)->required();

  auto* ablate = app.add_subcommand("ablate", "Train and test every model variant");
  ablate->add_option("--config", config_path)->required();
  ablate->add_option("--csv", csv_path, "Also write the table as CSV");

  auto* grad = app.add_subcommand("gradcheck", "Finite-difference gradient checks at toy sizes");
  grad->add_option("--module", module)->capture_default_str();

  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic multivariate CSV");
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--rows", rows)->capture_default_str();
  synth->add_option("--vars", vars)->capture_default_str();
  synth->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train) return cmd_train(config_path, out_path);
    if (*evaluate) return cmd_evaluate(ckpt_path, split);
    if (*forecast) return cmd_forecast(ckpt_path, input, forecast_out);
    if (*ablate) return cmd_ablate(config_path, csv_path);
    if (*grad) return cmd_gradcheck(module);
    if (*synth) return cmd_synth(synth_out, rows, vars, seed);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}
