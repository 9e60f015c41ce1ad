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

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "seed/errors.hpp"
#include "seed/gradcheck.hpp"
#include "seed/ops.hpp"
#include "seed/patching.hpp"

namespace seed {
namespace {

using testing::bitwise_equal;
using testing::random_tensor;
using testing::to_std;

TEST(ReshapeFeatures, SentinelOrderIsVariableMajorChannelMinor) {
  // T[n, d, 0] = 1 + 2n + d
  const Tensor t = Tensor::from_values({2, 2, 1}, {1.0, 2.0, 3.0, 4.0});
  const Tensor e = reshape_features(t);
  ASSERT_EQ(e.shape(), (Shape{1, 4}));
  EXPECT_EQ(to_std(e), (std::vector<double>{1.0, 2.0, 3.0, 4.0}));
}

TEST(ReshapeFeatures, IndexMapMatchesLoopOracle) {
  Rng rng(3);
  const Index n = 3, d = 2, l = 5;
  const Tensor t = random_tensor({n, d, l}, rng);
  const Tensor e = reshape_features(t);
  ASSERT_EQ(e.shape(), (Shape{l, n * d}));
  for (Index ti = 0; ti < l; ++ti)
    for (Index ni = 0; ni < n; ++ni)
      for (Index di = 0; di < d; ++di) EXPECT_EQ(e.at({ti, ni * d + di}), t.at({ni, di, ti}));
}

TEST(ReshapeFeatures, SingleChannelIsTranspose) {
  Rng rng(4);
  const Tensor t = random_tensor({1, 1, 7}, rng);
  const Tensor e = reshape_features(t);
  ASSERT_EQ(e.shape(), (Shape{7, 1}));
  EXPECT_EQ(to_std(e), to_std(t));
}

TEST(ReshapeFeatures, RoundTripIsBitwise) {
  Rng rng(5);
  const Tensor t = random_tensor({4, 3, 9}, rng);
  EXPECT_TRUE(bitwise_equal(restore_features(reshape_features(t), 4, 3), t));
}

TEST(SegmentPatches, CountIsFloorOfWindowOverLength) {
  EXPECT_EQ(patch_count(96, 16), 6u);
  EXPECT_EQ(patch_count(17, 16), 1u);
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const Index p = 1 + rng.below(20);
    const Index l = p + rng.below(60);
    const Tensor e = random_tensor({l, 2}, rng);
    const auto patches = segment_patches(e, p);
    ASSERT_EQ(patches.size(), l / p);
    for (const Tensor& patch : patches) ASSERT_EQ(patch.shape(), (Shape{p, 2}));
  }
}

TEST(SegmentPatches, ConcatenationReproducesKeptRows) {
  Rng rng(7);
  const Tensor e = random_tensor({17, 3}, rng);
  const auto patches = segment_patches(e, 4);
  ASSERT_EQ(patches.size(), 4u);
  EXPECT_TRUE(bitwise_equal(concat(patches, 0), slice(e, 0, 0, 16)));
}

TEST(SegmentPatches, ShortWindowRejected) {
  Rng rng(8);
  EXPECT_THROW(segment_patches(random_tensor({3, 2}, rng), 4), DimensionError);
}

TEST(SegmentPatches, ValuesAreMovedNotChanged) {
  Rng rng(9);
  const Tensor t = random_tensor({2, 3, 12}, rng);
  std::vector<double> before = to_std(t);
  std::vector<double> after;
  for (const Tensor& p : segment_patches(reshape_features(t), 4)) {
    const auto v = to_std(p);
    after.insert(after.end(), v.begin(), v.end());
  }
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  EXPECT_EQ(before, after);
}

TEST(ProjectPatch, ZeroWeightOrZeroPatchGivesBias) {
  Rng rng(10);
  const Tensor bias = random_tensor({5}, rng);
  const Tensor patch = random_tensor({2, 3}, rng);
  EXPECT_EQ(to_std(project_patch(patch, Tensor::zeros({5, 6}), bias)), to_std(bias));
  EXPECT_EQ(to_std(project_patch(Tensor::zeros({2, 3}), random_tensor({5, 6}, rng), bias)), to_std(bias));
}

TEST(ProjectPatch, MatchesDotProductOracle) {
  Rng rng(11);
  const Index p = 3, width = 4, out = 5;
  const Tensor patch = random_tensor({p, width}, rng);
  const Tensor w = random_tensor({out, p * width}, rng);
  const Tensor b = random_tensor({out}, rng);
  const Tensor z = project_patch(patch, w, b);
  for (Index o = 0; o < out; ++o) {
    double s = b.at({o});
    for (Index t = 0; t < p; ++t)
      for (Index c = 0; c < width; ++c) s += w.at({o, t * width + c}) * patch.at({t, c});
    EXPECT_NEAR(z.at({o}), s, 1e-12);
  }
  EXPECT_THROW(project_patch(patch, random_tensor({out, 7}, rng), b), DimensionError);
}

TEST(AddPositional, IdentityComplementAndCapacity) {
  Rng rng(12);
  const Tensor z = random_tensor({4}, rng);
  const Tensor table = random_tensor({3, 4}, rng);
  EXPECT_EQ(to_std(add_positional(z, 1, Tensor::zeros({3, 4}))), to_std(z));
  EXPECT_EQ(to_std(add_positional(Tensor::zeros({4}), 2, table)), to_std(slice(table, 0, 2, 3)));
  EXPECT_NE(to_std(add_positional(z, 0, table)), to_std(add_positional(z, 1, table)));
  EXPECT_THROW(add_positional(z, 3, table), CapacityError);
}

TEST(EmbedPatches, BatchedPathMatchesPerPatchPath) {
  PatchConfig config;
  config.patch_len = 4;
  config.d_lm = 6;
  config.max_patches = 8;
  ParameterSet params;
  Rng rng(13);
  const PatchParams pp = PatchParams::init(config, 2, 3, params, rng);
  const Tensor t = random_tensor({2, 3, 14}, rng);
  const PatchSequence seq = embed_patches(t, pp, config);
  ASSERT_EQ(seq.count, 3u);
  ASSERT_EQ(seq.tokens.shape(), (Shape{3, 6}));
  const auto patches = segment_patches(reshape_features(t), 4);
  for (Index i = 0; i < patches.size(); ++i) {
    const Tensor ref = add_positional(project_patch(patches[i], pp.weight, pp.bias), i, pp.positional);
    for (Index c = 0; c < 6; ++c) EXPECT_NEAR(seq.tokens.at({i, c}), ref.at({c}), 1e-12);
  }
}

TEST(EmbedPatches, CapacityAndConfigChecks) {
  PatchConfig config;
  config.patch_len = 2;
  config.d_lm = 3;
  config.max_patches = 2;
  EXPECT_THROW(config.validate(8), ConfigError);
  EXPECT_NO_THROW(config.validate(5));
  ParameterSet params;
  Rng rng(14);
  const PatchParams pp = PatchParams::init(config, 1, 1, params, rng);
  EXPECT_THROW(embed_patches(random_tensor({1, 1, 8}, rng), pp, config), CapacityError);
  EXPECT_THROW(embed_patches(random_tensor({1, 1, 1}, rng), pp, config), DimensionError);
}

TEST(EmbedPatches, GradientsMatchFiniteDifferences) {
  PatchConfig config;
  config.patch_len = 3;
  config.d_lm = 4;
  config.max_patches = 4;
  ParameterSet params;
  Rng rng(15);
  const PatchParams pp = PatchParams::init(config, 2, 2, params, rng);
  const Tensor t = random_tensor({2, 2, 7}, rng);
  const Tensor probe = random_tensor({2, 4}, rng);
  const auto loss = [&] { return sum(mul(embed_patches(t, pp, config).tokens, probe)); };
  // Row 2 and beyond of the positional table are unused by a two-patch window.
  const std::vector<Tensor> wrt{pp.weight, pp.bias};
  EXPECT_LT(gradcheck(loss, wrt).max_rel_error, 1e-4);
  EXPECT_LT(finite_difference_check(
                [&](const Tensor& in) { return sum(mul(embed_patches(in, pp, config).tokens, probe)); }, t),
            1e-4);
  const Tensor z = random_tensor({4}, rng);
  const Tensor zprobe = random_tensor({4}, rng);
  EXPECT_LT(finite_difference_check(
                [&](const Tensor& table) { return sum(mul(add_positional(z, 1, table), zprobe)); },
                random_tensor({3, 4}, rng)),
            1e-4);
}

}  // namespace
}  // namespace seed
