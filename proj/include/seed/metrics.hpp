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

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seed/tensor.hpp"

namespace seed {

/// Pooled errors over every forecast value.
struct Metrics {
  double mse = 0.0;
  double mae = 0.0;
  Index n_samples = 0;
  Index n_values = 0;
};

/// mse = mean (p - t)^2 and mae = mean |p - t| over paired values.
Metrics compute_metrics(std::span<const double> predicted, std::span<const double> target);

/// Running sums in insertion order; one add() per forecast window.
class MetricAccumulator {
 public:
  void add(const RowMatrix& predicted, const RowMatrix& target);
  Metrics result() const;

 private:
  double squared_ = 0.0;
  double absolute_ = 0.0;
  Index samples_ = 0;
  Index values_ = 0;
};

struct ReportRow {
  std::string dataset;
  std::string variant;
  double mse = 0.0;
  double mae = 0.0;
  std::optional<double> train_time_s;  // printed as "-" when absent
  Index params_trainable = 0;
  Index params_frozen = 0;
};

/// Three decimals.
std::string format_metric(double value);

/// Header dataset,variant,mse,mae,train_time_s,params_trainable,params_frozen.
void write_report_csv(std::ostream& out, std::span<const ReportRow> rows);
/// Space-aligned text table with the same columns.
std::string format_report_table(std::span<const ReportRow> rows);

}  // namespace seed
