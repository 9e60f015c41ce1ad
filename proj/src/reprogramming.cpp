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

#include "seed/reprogramming.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "seed/errors.hpp"
#include "seed/ops.hpp"

namespace seed {

std::string_view task_name(TaskId task) {
  switch (task) {
    case TaskId::forecast: return "forecast";
    case TaskId::imputation: return "imputation";
    case TaskId::anomaly: return "anomaly";
  }
  return "forecast";
}

TaskId parse_task(std::string_view name) {
  for (TaskId t : {TaskId::forecast, TaskId::imputation, TaskId::anomaly}) {
    if (task_name(t) == name) return t;
  }
  throw ConfigError("unknown task '" + std::string(name) + "' (expected forecast, imputation or anomaly)");
}

PrototypeBank PrototypeBank::init(Index count, Index d_lm, ParameterSet& params, Rng& rng,
                                  PrototypeInit mode, const Tensor* vocabulary,
                                  const std::string& name) {
  if (count == 0) throw ConfigError("reprog.K must be >= 1");
  if (mode == PrototypeInit::random) {
    return {params.add(name, normal_tensor({count, d_lm}, 0.02, rng))};
  }
  if (vocabulary == nullptr || vocabulary->rank() != 2 || vocabulary->dim(1) != d_lm) {
    throw ContractError("vocabulary prototype init needs a [V, d_lm] embedding table");
  }
  const Index rows = vocabulary->dim(0);
  if (count > rows) throw ConfigError("reprog.K exceeds the vocabulary size");
  std::vector<Index> ids(rows);
  std::iota(ids.begin(), ids.end(), Index{0});
  rng.shuffle(std::span<Index>(ids));
  ids.resize(count);
  Tensor copy;
  {
    NoGradGuard guard;
    copy = gather_rows(*vocabulary, ids).detach();
  }
  return {params.add(name, copy)};
}

TaskPromptBank TaskPromptBank::init(const std::vector<TaskId>& tasks, Index task_len, Index d_lm,
                                    ParameterSet& params, Rng& rng, const std::string& prefix) {
  if (task_len == 0) throw ConfigError("reprog.task_len must be >= 1");
  TaskPromptBank bank;
  for (TaskId t : tasks) {
    if (bank.contains(t)) continue;
    bank.prompts_.emplace_back(
        t, params.add(prefix + std::string(task_name(t)), normal_tensor({task_len, d_lm}, 0.02, rng)));
  }
  return bank;
}

bool TaskPromptBank::contains(TaskId task) const {
  return std::any_of(prompts_.begin(), prompts_.end(), [&](const auto& p) { return p.first == task; });
}

const Tensor& TaskPromptBank::prompt(TaskId task) const {
  for (const auto& p : prompts_) {
    if (p.first == task) return p.second;
  }
  throw ContractError("no prompt registered for task '" + std::string(task_name(task)) + "'");
}

Tensor prototype_attention(const Tensor& z, const Tensor& prototypes) {
  if (prototypes.rank() != 2 || z.rank() < 1 || z.rank() > 2 || z.dim(z.rank() - 1) != prototypes.dim(1)) {
    throw DimensionError("prototype_attention: token " + shape_string(z.shape()) +
                         " does not match prototypes " + shape_string(prototypes.shape()));
  }
  const double inv = 1.0 / std::sqrt(static_cast<double>(prototypes.dim(1)));
  const Tensor logits = scale(linear(z, prototypes, Tensor()), inv);
  return softmax(logits, logits.rank() - 1);
}

Tensor reprogram(const Tensor& z, const Tensor& prototypes, Tensor* alpha) {
  const Tensor a = prototype_attention(z, prototypes);
  if (alpha != nullptr) *alpha = a;
  if (a.rank() == 1) return reshape(matmul(reshape(a, {1, a.dim(0)}), prototypes), {prototypes.dim(1)});
  return matmul(a, prototypes);
}

namespace {

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  std::string s(buf);
  return s == "-0.000" ? "0.000" : s;
}

}  // namespace

WindowStats window_statistics(const RowMatrix& x, Index top_lags) {
  if (x.size() == 0) throw DimensionError("window_statistics: empty window");
  if (!x.allFinite()) throw NumericError("window_statistics: non-finite input");
  WindowStats s;
  s.min = x.minCoeff();
  s.max = x.maxCoeff();
  s.mean = x.mean();
  s.median = median_of(std::vector<double>(x.data(), x.data() + x.size()));

  const Vector series = x.rowwise().mean();
  const auto len = series.size();
  const double centre_t = 0.5 * static_cast<double>(len - 1);
  const double centre_v = series.mean();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (Eigen::Index t = 0; t < len; ++t) {
    const double dt = static_cast<double>(t) - centre_t;
    const double dv = series[t] - centre_v;
    sxy += dt * dv;
    sxx += dt * dt;
    syy += dv * dv;
  }
  if (sxx > 0.0) {
    const double slope = sxy / sxx;
    const double scale_ref = std::max(1.0, std::max(std::abs(s.min), std::abs(s.max)));
    if (std::abs(slope) > 1e-12 * scale_ref) s.trend = slope > 0.0 ? 1 : -1;
  }

  if (syy > 0.0) {
    std::vector<std::pair<double, Index>> acf;
    for (Eigen::Index k = 1; k <= len / 2; ++k) {
      double c = 0.0;
      for (Eigen::Index t = 0; t + k < len; ++t) c += (series[t] - centre_v) * (series[t + k] - centre_v);
      acf.emplace_back(c / syy, static_cast<Index>(k));
    }
    std::stable_sort(acf.begin(), acf.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (Index i = 0; i < std::min<Index>(top_lags, acf.size()); ++i) s.lags.push_back(acf[i].second);
  }
  return s;
}

TextPromptSpec build_text_prompt(const RowMatrix& x, std::string_view text_template,
                                 std::string domain, std::string instruction) {
  TextPromptSpec spec{std::move(domain), std::move(instruction), window_statistics(x), {}};
  std::string lags;
  for (Index lag : spec.stats.lags) lags += (lags.empty() ? "" : ",") + std::to_string(lag);
  if (lags.empty()) lags = "none";
  const std::map<std::string, std::string, std::less<>> values{
      {"domain", spec.domain},
      {"instruction", spec.instruction},
      {"min", fixed3(spec.stats.min)},
      {"max", fixed3(spec.stats.max)},
      {"mean", fixed3(spec.stats.mean)},
      {"median", fixed3(spec.stats.median)},
      {"trend", spec.stats.trend > 0 ? "upward" : spec.stats.trend < 0 ? "downward" : "flat"},
      {"lags", lags},
  };
  std::string out;
  std::size_t pos = 0;
  while (pos < text_template.size()) {
    const std::size_t open = text_template.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(text_template.substr(pos));
      break;
    }
    out.append(text_template.substr(pos, open - pos));
    const std::size_t close = text_template.find('}', open);
    if (close == std::string_view::npos) throw ConfigError("prompt template: unterminated placeholder");
    const auto key = text_template.substr(open + 1, close - open - 1);
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError("prompt template: unknown placeholder {" + std::string(key) + "}");
    out += it->second;
    pos = close + 1;
  }
  spec.rendered = std::move(out);
  return spec;
}

std::optional<Tensor> embed_text(std::string_view text, const Tensor& table) {
  if (table.rank() != 2 || table.dim(0) != 256) {
    throw DimensionError("embed_text: byte table must be [256, d_lm], got " + shape_string(table.shape()));
  }
  if (text.empty()) return std::nullopt;
  std::vector<Index> ids;
  ids.reserve(text.size());
  for (char c : text) ids.push_back(static_cast<unsigned char>(c));
  return gather_rows(table, ids);
}

SemanticSequence assemble_sequence(const std::optional<Tensor>& text, const Tensor& task,
                                   const Tensor& patches) {
  if (task.rank() != 2 || patches.rank() != 2 || task.dim(1) != patches.dim(1) ||
      (text && (text->rank() != 2 || text->dim(1) != task.dim(1)))) {
    throw DimensionError("assemble_sequence: segments do not share a 2-d layout with one width (task " +
                         shape_string(task.shape()) + ", patches " + shape_string(patches.shape()) + ")");
  }
  SemanticSequence seq;
  std::vector<Tensor> parts;
  if (text) {
    parts.push_back(*text);
    seq.text_len = text->dim(0);
  }
  parts.push_back(task);
  parts.push_back(patches);
  seq.task_len = task.dim(0);
  seq.patch_len = patches.dim(0);
  seq.tokens = concat(parts, 0);
  return seq;
}

}  // namespace seed
