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

#include <memory>
#include <optional>
#include <string>

#include "seed/config.hpp"

namespace seed {

/**
 * The full forecaster: structural encoder, patch embedding, prototype
 * reprogramming, prompt assembly, frozen decoder and forecast head, with
 * every tensor registered in one ParameterSet.
 *
 * Decoder weights come from `decoder.seed`; everything else from
 * `train.seed`. Variants change the wiring: no_reprogram registers no
 * prototypes and feeds patch tokens straight through, no_encoder uses zero
 * attention layers, single_shot predicts all H steps from the final state.
 */
class SeedModel {
 public:
  SeedModel(const ExperimentConfig& config, Index num_vars);
  SeedModel(const SeedModel&) = delete;
  SeedModel& operator=(const SeedModel&) = delete;

  /// Normalized window x [L, N] to forecast [H, N].
  Tensor forward(const RowMatrix& x) const;
  /// The token sequence handed to the decoder.
  SemanticSequence sequence(const RowMatrix& x) const;

  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }
  const Decoder& decoder() const { return *decoder_; }
  const EncoderConfig& encoder_config() const { return encoder_config_; }
  const GenerationConfig& generation() const { return generation_; }
  const EncoderParams& encoder() const { return encoder_; }
  const PatchParams& patching() const { return patch_; }
  const std::optional<PrototypeBank>& prototypes() const { return prototypes_; }
  const TaskPromptBank& prompts() const { return prompts_; }
  const ForecastHead& head() const { return head_; }
  Index num_vars() const { return encoder_config_.num_vars; }

 private:
  ExperimentConfig config_;
  EncoderConfig encoder_config_;
  GenerationConfig generation_;
  std::string prompt_template_;
  ParameterSet params_;
  std::shared_ptr<FrozenDecoder> decoder_;
  EncoderParams encoder_;
  PatchParams patch_;
  std::optional<PrototypeBank> prototypes_;
  TaskPromptBank prompts_;
  ForecastHead head_;
};

}  // namespace seed
