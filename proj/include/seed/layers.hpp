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

#include "seed/ops.hpp"
#include "seed/parameter.hpp"

namespace seed {

/// Affine layer y = x W^T + b with W: [out, in].
struct Linear {
  Tensor weight;
  Tensor bias;

  Tensor operator()(const Tensor& x) const { return linear(x, weight, bias); }
  Index in_features() const { return weight.dim(1); }
  Index out_features() const { return weight.dim(0); }
};

/// Registers `<name>.weight` and (optionally) `<name>.bias`, both uniform
/// in +-1/sqrt(in).
Linear make_linear(ParameterSet& params, const std::string& name, Index in, Index out, Rng& rng,
                   bool frozen = false, bool with_bias = true);

struct LayerNormParams {
  Tensor gamma;
  Tensor beta;

  Tensor operator()(const Tensor& x) const { return layer_norm(x, gamma, beta, x.rank() - 1); }
};

/// gamma = 1, beta = 0, registered as `<name>.gamma` / `<name>.beta`.
LayerNormParams make_layer_norm(ParameterSet& params, const std::string& name, Index dim,
                                bool frozen = false);

/**
 * Scaled dot-product attention split across heads.
 *
 * q: [Tq, d], k and v: [Tk, d]; d must divide by num_heads. Each head uses
 * softmax(q_h k_h^T / sqrt(d / num_heads)) v_h; head outputs are
 * concatenated back to [Tq, d]. With `causal_offset`, query i sees keys
 * j <= offset + i only. `weights`, when given, receives the
 * [num_heads, Tq, Tk] attention matrix.
 */
Tensor attend(const Tensor& q, const Tensor& k, const Tensor& v, Index num_heads,
              std::optional<Index> causal_offset = std::nullopt, Tensor* weights = nullptr);

}  // namespace seed
