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

#include "seed/patching.hpp"

#include <cmath>

#include "seed/errors.hpp"
#include "seed/ops.hpp"

namespace seed {

void PatchConfig::validate(Index window) const {
  std::string problems;
  const auto need = [&](bool ok, const std::string& what) {
    if (!ok) problems += (problems.empty() ? "" : "; ") + what;
  };
  need(patch_len >= 1, "patch.P must be >= 1");
  need(d_lm >= 1, "decoder.d_lm must be >= 1");
  need(window >= patch_len, "window.L must be >= patch.P");
  need(patch_len == 0 || max_patches >= window / patch_len,
       "patch.max_patches must be >= floor(L/P)");
  if (!problems.empty()) throw ConfigError(problems);
}

Index patch_count(Index window, Index patch_len) {
  if (patch_len == 0) throw ContractError("patch length must be >= 1");
  return window / patch_len;
}

PatchParams PatchParams::init(const PatchConfig& config, Index num_vars, Index channels,
                              ParameterSet& params, Rng& rng, const std::string& prefix) {
  const Index fan_in = config.patch_len * num_vars * channels;
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  PatchParams p;
  p.weight = params.add(prefix + "weight", uniform_tensor({config.d_lm, fan_in}, bound, rng));
  p.bias = params.add(prefix + "bias", uniform_tensor({config.d_lm}, bound, rng));
  p.positional =
      params.add(prefix + "positional", normal_tensor({config.max_patches, config.d_lm}, 0.02, rng));
  return p;
}

Tensor reshape_features(const Tensor& features) {
  if (features.rank() != 3) {
    throw DimensionError("reshape_features: expected [N, D, L], got " + shape_string(features.shape()));
  }
  const Index n = features.dim(0);
  const Index d = features.dim(1);
  const Index l = features.dim(2);
  return reshape(permute(features, {2, 0, 1}), {l, n * d});
}

Tensor restore_features(const Tensor& layout, Index num_vars, Index channels) {
  if (layout.rank() != 2 || layout.dim(1) != num_vars * channels) {
    throw DimensionError("restore_features: layout " + shape_string(layout.shape()) +
                         " does not hold N*D = " + std::to_string(num_vars * channels) + " columns");
  }
  return permute(reshape(layout, {layout.dim(0), num_vars, channels}), {1, 2, 0});
}

std::vector<Tensor> segment_patches(const Tensor& layout, Index patch_len) {
  if (layout.rank() != 2) throw DimensionError("segment_patches: layout must be rank 2");
  if (patch_len == 0 || layout.dim(0) < patch_len) {
    throw DimensionError("segment_patches: window of " + std::to_string(layout.dim(0)) +
                         " steps is shorter than patch length " + std::to_string(patch_len));
  }
  const Index count = patch_count(layout.dim(0), patch_len);
  std::vector<Tensor> patches;
  patches.reserve(count);
  for (Index i = 0; i < count; ++i) patches.push_back(slice(layout, 0, i * patch_len, (i + 1) * patch_len));
  return patches;
}

Tensor project_patch(const Tensor& patch, const Tensor& weight, const Tensor& bias) {
  if (weight.rank() != 2 || weight.dim(1) != patch.numel()) {
    throw DimensionError("project_patch: patch " + shape_string(patch.shape()) +
                         " does not match weight " + shape_string(weight.shape()));
  }
  return linear(reshape(patch, {patch.numel()}), weight, bias);
}

Tensor add_positional(const Tensor& z, Index index, const Tensor& table) {
  if (index >= table.dim(0)) {
    throw CapacityError("add_positional: patch index " + std::to_string(index) +
                        " exceeds positional table of " + std::to_string(table.dim(0)) + " rows");
  }
  return add(z, reshape(slice(table, 0, index, index + 1), {table.dim(1)}));
}

PatchSequence embed_patches(const Tensor& features, const PatchParams& params,
                            const PatchConfig& config) {
  const Tensor layout = reshape_features(features);
  const Index window = layout.dim(0);
  if (window < config.patch_len) {
    throw DimensionError("embed_patches: window of " + std::to_string(window) +
                         " steps is shorter than patch length " + std::to_string(config.patch_len));
  }
  const Index count = patch_count(window, config.patch_len);
  if (count > params.positional.dim(0)) {
    throw CapacityError("embed_patches: " + std::to_string(count) + " patches exceed table of " +
                        std::to_string(params.positional.dim(0)));
  }
  const Index width = config.patch_len * layout.dim(1);
  const Tensor kept = count * config.patch_len == window ? layout
                                                         : slice(layout, 0, 0, count * config.patch_len);
  const Tensor z = linear(reshape(kept, {count, width}), params.weight, params.bias);
  return {add(z, slice(params.positional, 0, 0, count)), count};
}

}  // namespace seed
