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

#include <string>
#include <vector>

#include "seed/layers.hpp"

namespace seed {

struct EncoderConfig {
  Index num_vars = 1;     // N
  Index window = 96;      // L
  Index d_model = 32;     // d, token width
  Index num_layers = 2;   // stacked variable-attention layers
  Index num_heads = 4;
  Index ffn_dim = 64;
  Index channels = 4;     // D, unfolded feature channels per variable

  /// Throws ConfigError listing every violated constraint.
  void validate() const;
};

/// One post-norm block over variable tokens:
///   T <- LayerNorm(T + Attention(T)); T <- LayerNorm(T + FFN(T))
struct VariableAttentionLayer {
  Linear query;
  Linear key;
  Linear value;
  Linear output;
  LayerNormParams norm1;
  Linear ffn_in;
  Linear ffn_out;
  LayerNormParams norm2;
};

struct EncoderParams {
  Linear temporal;  // R^L -> R^d, shared by all variables
  std::vector<VariableAttentionLayer> layers;
  Linear unfold;    // R^d -> R^(D*L), shared by all variables

  static EncoderParams init(const EncoderConfig& config, ParameterSet& params, Rng& rng,
                            const std::string& prefix = "encoder.");
};

/// Per-variable trajectories [N, L] to variable tokens [N, d].
Tensor temporal_project(const Tensor& x_transposed, const Linear& temporal);

/// [N, d] -> [N, d]; attention runs across the N variable tokens.
Tensor variable_attention_layer(const Tensor& tokens, const VariableAttentionLayer& layer,
                                Index num_heads, Tensor* attention = nullptr);

/// Variable tokens [N, d] to the structural feature map [N, D, L].
Tensor temporal_unfold(const Tensor& tokens, const Linear& unfold, Index channels, Index window);

/**
 * Window x [L, N] to the structural feature map [N, D, L]:
 * transpose, temporal projection, the attention stack, then unfold.
 * `attention` collects each layer's [heads, N, N] weights when given.
 */
Tensor encode(const Tensor& x, const EncoderConfig& config, const EncoderParams& params,
              std::vector<Tensor>* attention = nullptr);

}  // namespace seed
