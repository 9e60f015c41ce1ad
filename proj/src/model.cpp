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

#include "seed/model.hpp"

#include <fstream>
#include <sstream>

#include "seed/errors.hpp"
#include "seed/ops.hpp"

namespace seed {

namespace {

std::string read_template(const std::string& path) {
  if (path.empty()) return std::string(kDefaultPromptTemplate);
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open prompt template " + path);
  std::ostringstream text;
  text << in.rdbuf();
  std::string s = text.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

SeedModel::SeedModel(const ExperimentConfig& config, Index num_vars) : config_(config) {
  if (num_vars == 0) throw DataError("model needs at least one variable");
  config_.encoder.num_vars = num_vars;
  config_.encoder.window = config.window;
  config_.patch.d_lm = config.decoder.d_lm;
  if (config_.variant == Variant::no_encoder) config_.encoder.num_layers = 0;
  if (config_.variant == Variant::single_shot) config_.mode = GenerationMode::single_shot;
  config_.validate();

  encoder_config_ = config_.encoder;
  generation_ = {config_.horizon, config_.mode};
  if (config_.reprog.text_prompt) prompt_template_ = read_template(config_.reprog.template_path);

  decoder_ = FrozenDecoder::create(config_.decoder, params_);
  Rng rng(config_.train.seed);
  encoder_ = EncoderParams::init(encoder_config_, params_, rng);
  patch_ = PatchParams::init(config_.patch, num_vars, encoder_config_.channels, params_, rng);
  if (config_.variant != Variant::no_reprogram) {
    prototypes_ = PrototypeBank::init(config_.reprog.num_prototypes, config_.decoder.d_lm, params_, rng,
                                      config_.reprog.init, &decoder_->vocabulary());
  }
  prompts_ = TaskPromptBank::init(config_.reprog.tasks, config_.reprog.task_len, config_.decoder.d_lm, params_, rng);
  head_ = ForecastHead::init(num_vars, config_.decoder.d_lm, generation_, params_, rng);
}

SemanticSequence SeedModel::sequence(const RowMatrix& x) const {
  if (static_cast<Index>(x.rows()) != encoder_config_.window ||
      static_cast<Index>(x.cols()) != encoder_config_.num_vars) {
    throw DimensionError("model: expected a " + std::to_string(encoder_config_.window) + "x" +
                         std::to_string(encoder_config_.num_vars) + " window, got " + std::to_string(x.rows()) +
                         "x" + std::to_string(x.cols()));
  }
  const Tensor features = encode(Tensor::from_matrix(x), encoder_config_, encoder_);
  const PatchSequence patches = embed_patches(features, patch_, config_.patch);
  const Tensor tokens = prototypes_ ? reprogram(patches.tokens, prototypes_->prototypes) : patches.tokens;
  std::optional<Tensor> text;
  if (config_.reprog.text_prompt) {
    const TextPromptSpec spec =
        build_text_prompt(x, prompt_template_, config_.reprog.domain, config_.reprog.instruction);
    text = embed_text(spec.rendered, decoder_->vocabulary());
  }
  return assemble_sequence(text, prompts_.prompt(TaskId::forecast), tokens);
}

Tensor SeedModel::forward(const RowMatrix& x) const {
  return generate(sequence(x), *decoder_, head_, generation_);
}

}  // namespace seed
