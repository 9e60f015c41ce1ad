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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seed/parameter.hpp"

namespace seed {

enum class TaskId { forecast, imputation, anomaly };

std::string_view task_name(TaskId task);
/// ConfigError on an unknown name.
TaskId parse_task(std::string_view name);

enum class PrototypeInit { random, vocab };

/// Learnable prototype rows [K, d_lm].
struct PrototypeBank {
  Tensor prototypes;

  Index size() const { return prototypes.dim(0); }

  /// `random` draws normal * 0.02; `vocab` copies K distinct rows of
  /// `vocabulary` (required in that mode) chosen by the RNG.
  static PrototypeBank init(Index count, Index d_lm, ParameterSet& params, Rng& rng,
                            PrototypeInit mode = PrototypeInit::random,
                            const Tensor* vocabulary = nullptr,
                            const std::string& name = "reprog.prototypes");
};

/// One learned [task_len, d_lm] block per registered task.
class TaskPromptBank {
 public:
  static TaskPromptBank init(const std::vector<TaskId>& tasks, Index task_len, Index d_lm,
                             ParameterSet& params, Rng& rng, const std::string& prefix = "reprog.task.");

  /// ContractError for a task that was not registered.
  const Tensor& prompt(TaskId task) const;
  bool contains(TaskId task) const;

 private:
  std::vector<std::pair<TaskId, Tensor>> prompts_;
};

/**
 * Prototype weights softmax_k(z . p_k / sqrt(d_lm)). z is a single token
 * [d_lm] or a batch [M, d_lm]; the result is [K] or [M, K].
 */
Tensor prototype_attention(const Tensor& z, const Tensor& prototypes);

/// Convex mixture alpha P of the prototype rows, same leading shape as z.
Tensor reprogram(const Tensor& z, const Tensor& prototypes, Tensor* alpha = nullptr);

/// Summary of one input window. Lags are sorted by descending
/// autocorrelation of the channel-mean series (ties favour the shorter lag);
/// a series with no variance has none.
struct WindowStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  int trend = 0;
  std::vector<Index> lags;
};

WindowStats window_statistics(const RowMatrix& x, Index top_lags = 3);

struct TextPromptSpec {
  std::string domain;
  std::string instruction;
  WindowStats stats;
  std::string rendered;
};

inline constexpr std::string_view kDefaultPromptTemplate =
    "Dataset: {domain}. Task: {instruction}. Input statistics: min {min}, max {max}, "
    "mean {mean}, median {median}, trend {trend}, top lags {lags}.";

/**
 * Fills the placeholders {domain} {instruction} {min} {max} {mean} {median}
 * {trend} {lags} of `text_template` from x [L, N]. Numbers use three
 * decimals; trend renders as upward, downward or flat. ConfigError on an
 * unknown or unterminated placeholder.
 */
TextPromptSpec build_text_prompt(const RowMatrix& x, std::string_view text_template,
                                 std::string domain, std::string instruction);

/// Byte-level lookup in `table` [256, d_lm]; nullopt for an empty string.
std::optional<Tensor> embed_text(std::string_view text, const Tensor& table);

struct SemanticSequence {
  Tensor tokens;  // [text_len + task_len + patch_len, d_lm]
  Index text_len = 0;
  Index task_len = 0;
  Index patch_len = 0;

  Index length() const { return text_len + task_len + patch_len; }
};

/// [text][task][patches] along the first axis.
SemanticSequence assemble_sequence(const std::optional<Tensor>& text, const Tensor& task,
                                   const Tensor& patches);

}  // namespace seed
