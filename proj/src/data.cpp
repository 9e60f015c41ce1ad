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

#include "seed/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "seed/rng.hpp"

namespace seed {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool is_missing(std::string_view s) {
  return s.empty() || s == "nan" || s == "NaN" || s == "NAN" || s == "NA";
}

std::optional<double> as_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  const auto v = as_number(trim(text));
  if (!v) throw DataError("not a number: '" + std::string(text) + "'");
  return *v;
}

RawSeries read_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: missing header row");
  const auto header = split_fields(line);
  if (header.size() < 2) throw DataError("csv: need a time column and at least one variable");
  if (header[0] != schema.time_column) {
    throw DataError("csv: first column is '" + std::string(header[0]) + "', expected '" +
                    schema.time_column + "'");
  }
  RawSeries series;
  for (std::size_t c = 1; c < header.size(); ++c) series.variable_names.emplace_back(header[c]);
  const std::size_t vars = header.size() - 1;

  std::vector<double> flat;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw DataError("csv line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    std::vector<double> row(vars);
    bool missing = false;
    for (std::size_t c = 0; c < vars; ++c) {
      const std::string_view cell = fields[c + 1];
      std::optional<double> v = is_missing(cell) ? std::optional<double>(std::nan("")) : as_number(cell);
      if (!v) {
        throw DataError("csv line " + std::to_string(line_no) + ", column '" +
                        series.variable_names[c] + "': cannot parse '" + std::string(cell) + "'");
      }
      if (!std::isfinite(*v)) {
        if (schema.nan_policy == NanPolicy::reject) {
          throw DataError("csv line " + std::to_string(line_no) + ", column '" +
                          series.variable_names[c] + "': non-finite value '" + std::string(cell) + "'");
        }
        missing = true;
      }
      row[c] = *v;
    }
    if (missing) {
      ++series.dropped_rows;
      continue;
    }
    const std::string stamp(fields[0]);
    if (!series.timestamps.empty()) {
      const auto prev = as_number(series.timestamps.back());
      const auto cur = as_number(stamp);
      const bool increasing = (prev && cur) ? *cur > *prev : stamp > series.timestamps.back();
      if (!increasing) {
        throw DataError("csv line " + std::to_string(line_no) + ": timestamp '" + stamp +
                        "' is not after '" + series.timestamps.back() + "'");
      }
    }
    series.timestamps.push_back(stamp);
    flat.insert(flat.end(), row.begin(), row.end());
  }
  const Index rows = series.timestamps.size();
  if (rows < schema.min_rows || rows == 0) {
    throw DataError("csv: " + std::to_string(rows) + " usable rows, need at least " +
                    std::to_string(std::max<Index>(schema.min_rows, 1)));
  }
  series.values = Eigen::Map<const RowMatrix>(flat.data(), static_cast<Eigen::Index>(rows),
                                              static_cast<Eigen::Index>(vars));
  return series;
}

RawSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_csv(in, schema);
}

void write_csv(std::ostream& out, const RawSeries& series) {
  out << "date";
  for (const auto& name : series.variable_names) out << ',' << name;
  out << '\n';
  for (Index r = 0; r < series.num_rows(); ++r) {
    out << series.timestamps[r];
    for (Index c = 0; c < series.num_vars(); ++c) out << ',' << format_double(series.values(r, c));
    out << '\n';
  }
}

std::vector<WindowSample> make_windows(const RowMatrix& rows, Index L, Index H, Index stride,
                                       Index origin_offset) {
  if (L < 1 || H < 1 || stride < 1) throw ContractError("make_windows: L, H and stride must be >= 1");
  std::vector<WindowSample> out;
  const auto total = static_cast<Index>(rows.rows());
  if (total < L + H) return out;
  const Index count = (total - L - H) / stride + 1;
  out.reserve(count);
  for (Index k = 0; k < count; ++k) {
    const Index start = k * stride;
    out.push_back({rows.middleRows(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(L)),
                   rows.middleRows(static_cast<Eigen::Index>(start + L), static_cast<Eigen::Index>(H)),
                   origin_offset + start});
  }
  return out;
}

void SplitSpec::validate() const {
  if (mode != SplitMode::ratio) return;
  double total = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("split ratios must each lie in (0, 1)");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");
}

SplitRanges split(Index total_rows, const SplitSpec& spec) {
  spec.validate();
  Index train = 0;
  Index val = 0;
  Index test = 0;
  switch (spec.mode) {
    case SplitMode::ratio: {
      // The small slack keeps products like 0.7 * 100 from flooring to 69.
      const auto take = [&](double r) {
        return static_cast<Index>(std::floor(r * static_cast<double>(total_rows) + 1e-9));
      };
      train = take(spec.ratios[0]);
      val = take(spec.ratios[1]);
      if (train + val > total_rows) throw DataError("split: ratios exceed series length");
      test = total_rows - train - val;
      break;
    }
    case SplitMode::ett_hourly:
      train = 12 * 30 * 24;
      val = test = 4 * 30 * 24;
      break;
    case SplitMode::ett_minutely:
      train = 12 * 30 * 24 * 4;
      val = test = 4 * 30 * 24 * 4;
      break;
  }
  if (train + val + test > total_rows || train == 0 || val == 0 || test == 0) {
    throw DataError("split: series of " + std::to_string(total_rows) +
                    " rows is too short for the requested split");
  }
  return {{0, train}, {train, train + val}, {train + val, train + val + test}};
}

RawSeries synthetic_series(Index rows, Index vars, std::uint64_t seed) {
  if (rows < 1 || vars < 1) throw ContractError("synthetic_series: rows and vars must be >= 1");
  Rng rng(seed);
  struct Channel {
    double a1, a2, phase1, phase2, slope, offset;
  };
  std::vector<Channel> channels(vars);
  for (Channel& c : channels) {
    c.a1 = rng.uniform(0.8, 1.5);
    c.a2 = rng.uniform(0.2, 0.6);
    c.phase1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
    c.phase2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
    c.slope = rng.uniform(-1.0, 1.0) * 2e-4;
    c.offset = rng.uniform(-1.0, 1.0);
  }
  RawSeries series;
  series.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(vars));
  for (Index v = 0; v < vars; ++v) series.variable_names.push_back("x" + std::to_string(v));
  const double two_pi = 2.0 * std::numbers::pi;
  for (Index t = 0; t < rows; ++t) {
    series.timestamps.push_back(std::to_string(t));
    const double td = static_cast<double>(t);
    for (Index v = 0; v < vars; ++v) {
      const Channel& c = channels[v];
      series.values(t, v) = c.offset + c.a1 * std::sin(two_pi * td / 24.0 + c.phase1) +
                            c.a2 * std::sin(two_pi * td / 12.0 + c.phase2) + c.slope * td +
                            0.1 * rng.normal();
    }
  }
  return series;
}

}  // namespace seed
