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

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "seed/errors.hpp"
#include "seed/tensor.hpp"

namespace seed {

enum class NanPolicy { reject, drop_row };

struct CsvSchema {
  std::string time_column = "date";
  NanPolicy nan_policy = NanPolicy::reject;
  /// Fewer parsed rows than this is an insufficient-data error.
  Index min_rows = 0;
};

struct RawSeries {
  std::vector<std::string> timestamps;
  RowMatrix values;  // rows x variables
  std::vector<std::string> variable_names;
  Index dropped_rows = 0;

  Index num_rows() const { return static_cast<Index>(values.rows()); }
  Index num_vars() const { return static_cast<Index>(values.cols()); }
};

/// Parses a header + rows CSV. The first column is the timestamp (or
/// index) column; every other column is a numeric variable.
RawSeries read_csv(std::istream& in, const CsvSchema& schema = {});
RawSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
void write_csv(std::ostream& out, const RawSeries& series);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Per-channel statistics, fit on training rows only.
struct NormStats {
  Vector mean;
  Vector std;
  std::vector<Index> clamped_channels;  // channels whose std was 0
};

/// Population (ddof = 0) mean and std per column. Constant columns get
/// std = 1 and are listed in clamped_channels.
template <typename Derived>
NormStats zscore_fit(const Eigen::MatrixBase<Derived>& rows) {
  if (rows.rows() < 2) throw DataError("zscore_fit: need at least 2 training rows");
  NormStats stats;
  const auto n = static_cast<double>(rows.rows());
  stats.mean = rows.colwise().sum().transpose() / n;
  stats.std.resize(rows.cols());
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    const double var = (rows.col(c).array() - stats.mean[c]).square().sum() / n;
    double sd = std::sqrt(var);
    if (!(sd > 0.0)) {
      sd = 1.0;
      stats.clamped_channels.push_back(static_cast<Index>(c));
    }
    stats.std[c] = sd;
  }
  return stats;
}

template <typename Derived>
RowMatrix zscore_apply(const Eigen::MatrixBase<Derived>& rows, const NormStats& stats) {
  if (rows.cols() != stats.mean.size()) throw DimensionError("zscore_apply: channel count mismatch");
  return ((rows.rowwise() - stats.mean.transpose()).array().rowwise() /
          stats.std.transpose().array())
      .matrix();
}

template <typename Derived>
RowMatrix zscore_invert(const Eigen::MatrixBase<Derived>& rows, const NormStats& stats) {
  if (rows.cols() != stats.mean.size()) throw DimensionError("zscore_invert: channel count mismatch");
  return ((rows.array().rowwise() * stats.std.transpose().array()).matrix().rowwise() +
          stats.mean.transpose());
}

/// History x (L rows) immediately followed by target y (H rows).
struct WindowSample {
  RowMatrix x;
  RowMatrix y;
  Index origin_index = 0;
};

/**
 * Sliding windows over `rows`: floor((T - L - H) / stride) + 1 samples when
 * T >= L + H, otherwise none. origin_index is the row of x[0], offset by
 * `origin_offset` so indices can refer to the unsplit series.
 */
std::vector<WindowSample> make_windows(const RowMatrix& rows, Index L, Index H, Index stride,
                                       Index origin_offset = 0);

enum class SplitMode { ratio, ett_hourly, ett_minutely };

struct SplitSpec {
  SplitMode mode = SplitMode::ratio;
  std::array<double, 3> ratios{0.7, 0.1, 0.2};

  void validate() const;
};

struct RowRange {
  Index begin = 0;
  Index end = 0;
  Index size() const { return end - begin; }
};

struct SplitRanges {
  RowRange train;
  RowRange val;
  RowRange test;
};

/// Contiguous train < val < test row ranges. Ratio mode floors the train
/// and validation counts and gives the remainder to test; ETT modes use the
/// fixed 12/4/4-month row counts.
SplitRanges split(Index total_rows, const SplitSpec& spec);
inline SplitRanges split(const RawSeries& series, const SplitSpec& spec) {
  return split(series.num_rows(), spec);
}

/**
 * Deterministic multivariate test signal: per channel, two sinusoids
 * (periods 24 and 12 steps, channel-dependent phases and amplitudes), a
 * small linear trend, and Gaussian noise (sd 0.1), all drawn from `seed`.
 */
RawSeries synthetic_series(Index rows, Index vars, std::uint64_t seed);

}  // namespace seed
