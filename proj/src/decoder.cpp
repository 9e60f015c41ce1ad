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

#include "seed/decoder.hpp"

#include "seed/errors.hpp"
#include "seed/ops.hpp"

namespace seed {

void DecoderConfig::validate() const {
  std::string problems;
  const auto need = [&](bool ok, const std::string& what) {
    if (!ok) problems += (problems.empty() ? "" : "; ") + what;
  };
  need(d_lm >= 1, "decoder.d_lm must be >= 1");
  need(num_heads >= 1 && d_lm % std::max<Index>(num_heads, 1) == 0,
       "decoder.d_lm must be divisible by decoder.heads");
  need(ffn_dim >= 1, "decoder.ffn_dim must be >= 1");
  if (!problems.empty()) throw ConfigError(problems);
}

namespace {

class CachedSession final : public DecoderSession {
 public:
  explicit CachedSession(const FrozenDecoder& decoder)
      : decoder_(decoder), keys_(decoder.blocks().size()), values_(decoder.blocks().size()) {}

  Tensor append(const Tensor& rows) override {
    if (rows.rank() != 2 || rows.dim(1) != decoder_.width()) {
      throw DimensionError("decoder: expected [T, " + std::to_string(decoder_.width()) + "] tokens, got " +
                           shape_string(rows.shape()));
    }
    const Index heads = decoder_.config().num_heads;
    Tensor x = rows;
    for (std::size_t l = 0; l < decoder_.blocks().size(); ++l) {
      const DecoderBlock& b = decoder_.blocks()[l];
      const Tensor h = b.norm1(x);
      const Tensor k = b.key(h);
      const Tensor v = b.value(h);
      keys_[l] = keys_[l].defined() ? concat({keys_[l], k}, 0) : k;
      values_[l] = values_[l].defined() ? concat({values_[l], v}, 0) : v;
      x = add(x, b.output(attend(b.query(h), keys_[l], values_[l], heads, length_)));
      x = add(x, b.ffn_out(relu(b.ffn_in(b.norm2(x)))));
    }
    length_ += rows.dim(0);
    return decoder_.final_norm()(x);
  }

  Index length() const override { return length_; }

 private:
  const FrozenDecoder& decoder_;
  std::vector<Tensor> keys_;
  std::vector<Tensor> values_;
  Index length_ = 0;
};

}  // namespace

std::shared_ptr<FrozenDecoder> FrozenDecoder::create(const DecoderConfig& config, ParameterSet& params,
                                                     const std::string& prefix) {
  config.validate();
  Rng rng(config.seed);
  auto dec = std::make_shared<FrozenDecoder>();
  dec->config_ = config;
  const Index d = config.d_lm;
  dec->embedding_ = params.add(prefix + "embedding", normal_tensor({256, d}, 0.02, rng), true);
  for (Index l = 0; l < config.num_layers; ++l) {
    const std::string base = prefix + "layer" + std::to_string(l) + ".";
    DecoderBlock b;
    b.norm1 = make_layer_norm(params, base + "norm1", d, true);
    b.query = make_linear(params, base + "query", d, d, rng, true);
    b.key = make_linear(params, base + "key", d, d, rng, true, false);
    b.value = make_linear(params, base + "value", d, d, rng, true);
    b.output = make_linear(params, base + "output", d, d, rng, true);
    b.norm2 = make_layer_norm(params, base + "norm2", d, true);
    b.ffn_in = make_linear(params, base + "ffn_in", d, config.ffn_dim, rng, true);
    b.ffn_out = make_linear(params, base + "ffn_out", config.ffn_dim, d, rng, true);
    dec->blocks_.push_back(std::move(b));
  }
  dec->final_norm_ = make_layer_norm(params, prefix + "final_norm", d, true);
  return dec;
}

std::unique_ptr<DecoderSession> FrozenDecoder::start() const { return std::make_unique<CachedSession>(*this); }

bool freeze_check(const ParameterSet& params, std::uint64_t digest_before, std::string_view prefix) {
  return params.digest(prefix) == digest_before;
}

GenerationMode parse_generation_mode(std::string_view name) {
  if (name == "autoregressive") return GenerationMode::autoregressive;
  if (name == "single_shot") return GenerationMode::single_shot;
  throw ConfigError("unknown decoder.mode '" + std::string(name) + "' (expected autoregressive or single_shot)");
}

std::string_view generation_mode_name(GenerationMode mode) {
  return mode == GenerationMode::autoregressive ? "autoregressive" : "single_shot";
}

Tensor project_output(const Tensor& h, const Tensor& weight, const Tensor& bias) {
  if (weight.rank() != 2 || h.rank() < 1 || h.dim(h.rank() - 1) != weight.dim(1)) {
    throw DimensionError("project_output: state " + shape_string(h.shape()) + " does not match head " +
                         shape_string(weight.shape()));
  }
  return linear(h, weight, bias);
}

ForecastHead ForecastHead::init(Index num_vars, Index d_lm, const GenerationConfig& gen, ParameterSet& params,
                                Rng& rng, const std::string& prefix) {
  if (gen.horizon == 0) throw ConfigError("window.H must be >= 1");
  ForecastHead head;
  if (gen.mode == GenerationMode::autoregressive) {
    head.output = make_linear(params, prefix + "output", d_lm, num_vars, rng);
    head.value_embedding = make_linear(params, prefix + "value_embedding", num_vars, d_lm, rng);
  } else {
    head.output = make_linear(params, prefix + "output", d_lm, gen.horizon * num_vars, rng);
  }
  return head;
}

Tensor generate(const SemanticSequence& seq, const Decoder& decoder, const ForecastHead& head,
                const GenerationConfig& gen) {
  if (gen.horizon == 0) throw ContractError("generate: horizon must be >= 1");
  auto session = decoder.start();
  const Tensor hidden = session->append(seq.tokens);
  Tensor last = slice(hidden, 0, hidden.dim(0) - 1, hidden.dim(0));
  if (gen.mode == GenerationMode::single_shot) {
    const Tensor y = project_output(last, head.output.weight, head.output.bias);
    const Index n = head.output.out_features() / gen.horizon;
    if (n * gen.horizon != head.output.out_features()) {
      throw DimensionError("generate: single-shot head width is not a multiple of the horizon");
    }
    return reshape(y, {gen.horizon, n});
  }
  if (!head.value_embedding.weight.defined()) {
    throw ContractError("generate: autoregressive mode needs a value embedding");
  }
  std::vector<Tensor> steps;
  steps.reserve(gen.horizon);
  for (Index h = 0; h < gen.horizon; ++h) {
    const Tensor y = project_output(last, head.output.weight, head.output.bias);
    steps.push_back(y);
    if (h + 1 < gen.horizon) last = session->append(head.value_embedding(y));
  }
  return concat(steps, 0);
}

}  // namespace seed
