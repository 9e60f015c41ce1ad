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

#include "seed/parameter.hpp"

namespace seed {

struct PatchConfig {
  Index patch_len = 16;    // P
  Index d_lm = 64;         // decoder embedding width
  Index max_patches = 64;  // rows of the positional table

  void validate(Index window) const;
};

/// floor(L / P); the trailing L mod P steps are dropped.
Index patch_count(Index window, Index patch_len);

/// Projected, position-tagged patch tokens [M, d_lm].
struct PatchSequence {
  Tensor tokens;
  Index count = 0;
};

struct PatchParams {
  Tensor weight;      // [d_lm, P*N*D]
  Tensor bias;        // [d_lm]
  Tensor positional;  // [max_patches, d_lm], one learned row per patch index

  static PatchParams init(const PatchConfig& config, Index num_vars, Index channels,
                          ParameterSet& params, Rng& rng, const std::string& prefix = "patching.");
};

/**
 * Feature map [N, D, L] to the temporal layout [L, N*D]. Row t lists the D
 * channels of variable 0 at step t, then variable 1, and so on. Pure data
 * movement.
 */
Tensor reshape_features(const Tensor& features);
/// Inverse of reshape_features.
Tensor restore_features(const Tensor& layout, Index num_vars, Index channels);

/// Non-overlapping row blocks [P, N*D] of the temporal layout.
std::vector<Tensor> segment_patches(const Tensor& layout, Index patch_len);

/// z = W Flatten(p) + b, flattening time-major so that the channel order of
/// each row is kept.
Tensor project_patch(const Tensor& patch, const Tensor& weight, const Tensor& bias);

/// z + table[index]; CapacityError when index >= table rows.
Tensor add_positional(const Tensor& z, Index index, const Tensor& table);

/// Full stage: reshape, segment, project and add positions for all patches
/// in one batched product.
PatchSequence embed_patches(const Tensor& features, const PatchParams& params,
                            const PatchConfig& config);

}  // namespace seed
