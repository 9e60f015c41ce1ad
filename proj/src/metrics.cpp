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

#include "seed/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "seed/errors.hpp"

namespace seed {

Metrics compute_metrics(std::span<const double> predicted, std::span<const double> target) {
  if (predicted.size() != target.size()) throw DimensionError("compute_metrics: length mismatch");
  if (predicted.empty()) throw DataError("compute_metrics: no values");
  double sq = 0.0, ab = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double e = predicted[i] - target[i];
    sq += e * e;
    ab += std::abs(e);
  }
  const auto n = static_cast<double>(predicted.size());
  return {sq / n, ab / n, 1, predicted.size()};
}

void MetricAccumulator::add(const RowMatrix& predicted, const RowMatrix& target) {
  if (predicted.rows() != target.rows() || predicted.cols() != target.cols()) {
    throw DimensionError("metrics: prediction and target shapes differ");
  }
  for (Eigen::Index i = 0; i < predicted.size(); ++i) {
    const double e = predicted.data()[i] - target.data()[i];
    squared_ += e * e;
    absolute_ += std::abs(e);
  }
  ++samples_;
  values_ += static_cast<Index>(predicted.size());
}

Metrics MetricAccumulator::result() const {
  if (values_ == 0) throw DataError("metrics: no forecast windows were evaluated");
  const auto n = static_cast<double>(values_);
  return {squared_ / n, absolute_ / n, samples_, values_};
}

std::string format_metric(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

namespace {

constexpr std::array<const char*, 7> kColumns = {"dataset", "variant", "mse", "mae",
                                                 "train_time_s", "params_trainable", "params_frozen"};

std::array<std::string, 7> cells(const ReportRow& r) {
  std::string time = "-";
  if (r.train_time_s) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", *r.train_time_s);
    time = buf;
  }
  return {r.dataset, r.variant, format_metric(r.mse), format_metric(r.mae), time,
          std::to_string(r.params_trainable), std::to_string(r.params_frozen)};
}

}  // namespace

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
  for (std::size_t c = 0; c < kColumns.size(); ++c) out << (c ? "," : "") << kColumns[c];
  out << '\n';
  for (const ReportRow& r : rows) {
    const auto row = cells(r);
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

std::string format_report_table(std::span<const ReportRow> rows) {
  std::vector<std::array<std::string, 7>> table;
  std::array<std::string, 7> header;
  for (std::size_t c = 0; c < kColumns.size(); ++c) header[c] = kColumns[c];
  table.push_back(header);
  for (const ReportRow& r : rows) table.push_back(cells(r));
  std::array<std::size_t, 7> width{};
  for (const auto& row : table)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (const auto& row : table) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      // Text columns left-aligned, numbers right-aligned.
      const std::string pad(width[c] - row[c].size(), ' ');
      line += (c ? "  " : "") + (c < 2 ? row[c] + pad : pad + row[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

}  // namespace seed
