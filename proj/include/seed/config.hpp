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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "seed/data.hpp"
#include "seed/decoder.hpp"
#include "seed/encoder.hpp"
#include "seed/patching.hpp"
#include "seed/reprogramming.hpp"

namespace seed {

enum class Variant { full, no_reprogram, no_encoder, single_shot };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);
inline constexpr Variant kAllVariants[] = {Variant::full, Variant::no_reprogram, Variant::no_encoder,
                                           Variant::single_shot};

struct ReprogramSettings {
  Index num_prototypes = 8;  // K
  Index task_len = 4;
  std::vector<TaskId> tasks{TaskId::forecast};
  PrototypeInit init = PrototypeInit::random;
  bool text_prompt = false;
  std::string template_path;  // empty: built-in template
  std::string domain = "multivariate sensor series";
  std::string instruction = "forecast the next steps";
};

struct TrainSettings {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  Index batch_size = 32;
  Index max_epochs = 50;
  Index patience = 5;
  std::uint64_t seed = 42;
};

/**
 * Everything one experiment needs. Read from `key = value` lines with
 * dotted keys; `#` starts a comment. The encoder's num_vars is filled in
 * from the dataset.
 */
struct ExperimentConfig {
  std::string data_path;
  std::string data_name;  // report label; defaults to the file stem
  CsvSchema schema;
  SplitSpec split;

  Index window = 96;      // L
  Index horizon = 96;     // H
  Index stride = 1;       // training windows
  Index eval_stride = 1;  // validation and test windows

  EncoderConfig encoder;
  PatchConfig patch;
  ReprogramSettings reprog;
  DecoderConfig decoder;
  GenerationMode mode = GenerationMode::autoregressive;
  Variant variant = Variant::full;
  TrainSettings train;

  bool eval_denormalized = false;
  Index eval_threads = 1;
  bool report_timing = true;

  /// ConfigError listing every violated constraint.
  void validate() const;
  /// Canonical `key = value` text; parse_config(to_text()) round-trips.
  std::string to_text() const;
  /// Label used in reports.
  std::string dataset_label() const;
};

/// Relative data and template paths resolve against `base_dir` when given.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace seed
