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

#include "seed/layers.hpp"

#include <cmath>

#include "seed/errors.hpp"

namespace seed {

Linear make_linear(ParameterSet& params, const std::string& name, Index in, Index out, Rng& rng,
                   bool frozen, bool with_bias) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  Linear layer;
  layer.weight = params.add(name + ".weight", uniform_tensor({out, in}, bound, rng), frozen);
  if (with_bias) layer.bias = params.add(name + ".bias", uniform_tensor({out}, bound, rng), frozen);
  return layer;
}

LayerNormParams make_layer_norm(ParameterSet& params, const std::string& name, Index dim,
                                bool frozen) {
  return {params.add(name + ".gamma", Tensor::full({dim}, 1.0), frozen),
          params.add(name + ".beta", Tensor::zeros({dim}), frozen)};
}

Tensor attend(const Tensor& q, const Tensor& k, const Tensor& v, Index num_heads,
              std::optional<Index> causal_offset, Tensor* weights) {
  if (q.rank() != 2 || k.rank() != 2 || v.rank() != 2 || k.shape() != v.shape() ||
      q.dim(1) != k.dim(1)) {
    throw DimensionError("attend: q " + shape_string(q.shape()) + ", k " + shape_string(k.shape()) +
                         ", v " + shape_string(v.shape()));
  }
  const Index d = q.dim(1);
  if (num_heads == 0 || d % num_heads != 0) {
    throw DimensionError("attend: width " + std::to_string(d) + " not divisible by " +
                         std::to_string(num_heads) + " heads");
  }
  const Index head_dim = d / num_heads;
  const Index tq = q.dim(0);
  const Index tk = k.dim(0);
  const auto split_heads = [&](const Tensor& x, Index rows) {
    return permute(reshape(x, {rows, num_heads, head_dim}), {1, 0, 2});  // [h, T, dh]
  };
  const Tensor qh = split_heads(q, tq);
  const Tensor kt = permute(reshape(k, {tk, num_heads, head_dim}), {1, 2, 0});  // [h, dh, Tk]
  const Tensor vh = split_heads(v, tk);
  const Tensor scores = scale(matmul(qh, kt), 1.0 / std::sqrt(static_cast<double>(head_dim)));
  const Tensor w = causal_offset ? causal_softmax(scores, *causal_offset) : softmax(scores, 2);
  if (weights) *weights = w;
  return reshape(permute(matmul(w, vh), {1, 0, 2}), {tq, d});
}

}  // namespace seed
