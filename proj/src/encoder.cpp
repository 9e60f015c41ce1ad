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

#include "seed/encoder.hpp"

#include "seed/errors.hpp"

namespace seed {

void EncoderConfig::validate() const {
  std::string problems;
  const auto need = [&](bool ok, const char* what) {
    if (!ok) problems += std::string(problems.empty() ? "" : "; ") + what;
  };
  need(num_vars >= 1, "encoder: N must be >= 1");
  need(window >= 1, "encoder: L must be >= 1");
  need(d_model >= 1, "encoder.d must be >= 1");
  need(num_heads >= 1, "encoder.heads must be >= 1");
  need(num_heads >= 1 && d_model % num_heads == 0, "encoder.d must be divisible by encoder.heads");
  need(ffn_dim >= 1, "encoder.ffn_dim must be >= 1");
  need(channels >= 1, "encoder.D must be >= 1");
  if (!problems.empty()) throw ConfigError(problems);
}

EncoderParams EncoderParams::init(const EncoderConfig& config, ParameterSet& params, Rng& rng,
                                  const std::string& prefix) {
  config.validate();
  const Index d = config.d_model;
  EncoderParams p;
  p.temporal = make_linear(params, prefix + "temporal", config.window, d, rng);
  for (Index l = 0; l < config.num_layers; ++l) {
    const std::string base = prefix + "layer" + std::to_string(l) + ".";
    VariableAttentionLayer layer;
    layer.query = make_linear(params, base + "query", d, d, rng);
    // A key bias only shifts each score row by a constant, which softmax
    // ignores; it would be a parameter with identically zero gradient.
    layer.key = make_linear(params, base + "key", d, d, rng, false, false);
    layer.value = make_linear(params, base + "value", d, d, rng);
    layer.output = make_linear(params, base + "output", d, d, rng);
    layer.norm1 = make_layer_norm(params, base + "norm1", d);
    layer.ffn_in = make_linear(params, base + "ffn_in", d, config.ffn_dim, rng);
    layer.ffn_out = make_linear(params, base + "ffn_out", config.ffn_dim, d, rng);
    layer.norm2 = make_layer_norm(params, base + "norm2", d);
    p.layers.push_back(std::move(layer));
  }
  p.unfold = make_linear(params, prefix + "unfold", d, config.channels * config.window, rng);
  return p;
}

Tensor temporal_project(const Tensor& x_transposed, const Linear& temporal) {
  if (x_transposed.rank() != 2 || x_transposed.dim(1) != temporal.in_features()) {
    throw DimensionError("temporal_project: input " + shape_string(x_transposed.shape()) +
                         " does not match window length " + std::to_string(temporal.in_features()));
  }
  return temporal(x_transposed);
}

Tensor variable_attention_layer(const Tensor& tokens, const VariableAttentionLayer& layer,
                                Index num_heads, Tensor* attention) {
  const Tensor mixed = layer.output(
      attend(layer.query(tokens), layer.key(tokens), layer.value(tokens), num_heads, std::nullopt,
             attention));
  const Tensor h = layer.norm1(add(tokens, mixed));
  return layer.norm2(add(h, layer.ffn_out(relu(layer.ffn_in(h)))));
}

Tensor temporal_unfold(const Tensor& tokens, const Linear& unfold, Index channels, Index window) {
  if (unfold.out_features() != channels * window) {
    throw DimensionError("temporal_unfold: map produces " + std::to_string(unfold.out_features()) +
                         " values, expected D*L = " + std::to_string(channels * window));
  }
  return reshape(unfold(tokens), {tokens.dim(0), channels, window});
}

Tensor encode(const Tensor& x, const EncoderConfig& config, const EncoderParams& params,
              std::vector<Tensor>* attention) {
  if (x.rank() != 2 || x.dim(0) != config.window || x.dim(1) != config.num_vars) {
    throw DimensionError("encode: window " + shape_string(x.shape()) + " does not match (L,N) = (" +
                         std::to_string(config.window) + "," + std::to_string(config.num_vars) + ")");
  }
  if (params.layers.size() != config.num_layers) {
    throw ConfigError("encode: parameter stack depth does not match encoder.layers");
  }
  Tensor tokens = temporal_project(transpose(x, 0, 1), params.temporal);
  for (const VariableAttentionLayer& layer : params.layers) {
    Tensor weights;
    tokens = variable_attention_layer(tokens, layer, config.num_heads, attention ? &weights : nullptr);
    if (attention) attention->push_back(weights);
  }
  return temporal_unfold(tokens, params.unfold, config.channels, config.window);
}

}  // namespace seed
