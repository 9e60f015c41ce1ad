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
#include <memory>
#include <string>
#include <vector>

#include "seed/layers.hpp"
#include "seed/reprogramming.hpp"

namespace seed {

struct DecoderConfig {
  Index d_lm = 64;
  Index num_layers = 2;
  Index num_heads = 4;
  Index ffn_dim = 256;
  std::uint64_t seed = 7;

  void validate() const;
};

/**
 * Incremental view of one decoder pass. Each append runs the new rows
 * through the stack while attending to everything appended before, and
 * returns their hidden states.
 */
class DecoderSession {
 public:
  virtual ~DecoderSession() = default;
  virtual Tensor append(const Tensor& rows) = 0;
  virtual Index length() const = 0;
};

/// Any causal sequence model that can stand in for the language model.
class Decoder {
 public:
  virtual ~Decoder() = default;
  virtual Index width() const = 0;
  /// Token embedding table [256, width] used for text prompts.
  virtual const Tensor& vocabulary() const = 0;
  virtual std::unique_ptr<DecoderSession> start() const = 0;

  /// Hidden states [T, width] for a whole sequence [T, width].
  Tensor decode(const Tensor& tokens) const { return start()->append(tokens); }
};

/// Pre-norm causal block.
struct DecoderBlock {
  LayerNormParams norm1;
  Linear query;
  Linear key;
  Linear value;
  Linear output;
  LayerNormParams norm2;
  Linear ffn_in;
  Linear ffn_out;
};

/**
 * Randomly initialized transformer whose weights are registered frozen and
 * drawn from a private RNG seeded by `config.seed`, so the same seed gives
 * the same weights whatever else the model contains.
 */
class FrozenDecoder final : public Decoder {
 public:
  static std::shared_ptr<FrozenDecoder> create(const DecoderConfig& config, ParameterSet& params,
                                               const std::string& prefix = "decoder.");

  Index width() const override { return config_.d_lm; }
  const Tensor& vocabulary() const override { return embedding_; }
  std::unique_ptr<DecoderSession> start() const override;

  const DecoderConfig& config() const { return config_; }
  const std::vector<DecoderBlock>& blocks() const { return blocks_; }
  const LayerNormParams& final_norm() const { return final_norm_; }

 private:
  DecoderConfig config_;
  Tensor embedding_;
  std::vector<DecoderBlock> blocks_;
  LayerNormParams final_norm_;
};

/// Digest of every parameter under `prefix`.
inline std::uint64_t decoder_digest(const ParameterSet& params, std::string_view prefix = "decoder.") {
  return params.digest(prefix);
}

/// True iff the decoder parameters still hash to `digest_before`.
bool freeze_check(const ParameterSet& params, std::uint64_t digest_before,
                  std::string_view prefix = "decoder.");

enum class GenerationMode { autoregressive, single_shot };

GenerationMode parse_generation_mode(std::string_view name);
std::string_view generation_mode_name(GenerationMode mode);

struct GenerationConfig {
  Index horizon = 24;
  GenerationMode mode = GenerationMode::autoregressive;
};

/// y = W_out h + b_out on the last axis of h.
Tensor project_output(const Tensor& h, const Tensor& weight, const Tensor& bias);

/**
 * Learned maps around the decoder. Autoregressive mode: `output` is
 * [N, d_lm] and `value_embedding` feeds each step's prediction back in as
 * the next token. Single-shot mode: `output` is [H*N, d_lm] and there is no
 * value embedding.
 */
struct ForecastHead {
  Linear output;
  Linear value_embedding;

  static ForecastHead init(Index num_vars, Index d_lm, const GenerationConfig& gen,
                           ParameterSet& params, Rng& rng, const std::string& prefix = "head.");
};

/// Forecast [H, N] in normalized units.
Tensor generate(const SemanticSequence& seq, const Decoder& decoder, const ForecastHead& head,
                const GenerationConfig& gen);

}  // namespace seed
