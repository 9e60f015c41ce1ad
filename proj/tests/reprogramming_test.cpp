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
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "seed/adam.hpp"
#include "seed/errors.hpp"
#include "seed/gradcheck.hpp"
#include "seed/ops.hpp"
#include "seed/reprogramming.hpp"

namespace seed {
namespace {

using testing::random_tensor;
using testing::softmax_oracle;
using testing::to_std;

TEST(PrototypeAttention, IdenticalPrototypesGiveUniformWeights) {
  Rng rng(1);
  const Tensor row = random_tensor({1, 5}, rng);
  const Tensor bank = concat({row, row, row, row}, 0);
  const Tensor alpha = prototype_attention(random_tensor({5}, rng), bank);
  for (double a : to_std(alpha)) EXPECT_NEAR(a, 0.25, 1e-15);
}

TEST(PrototypeAttention, SinglePrototypeHasWeightOne) {
  Rng rng(2);
  const Tensor alpha = prototype_attention(random_tensor({6}, rng), random_tensor({1, 6}, rng));
  EXPECT_EQ(to_std(alpha), std::vector<double>{1.0});
}

TEST(PrototypeAttention, TwoDimensionalExampleMatchesOracle) {
  const Tensor z = Tensor::from_values({2}, {1.0, 0.0});
  const Tensor bank = Tensor::from_values({2, 2}, {1.0, 0.0, 0.0, 1.0});
  const Tensor alpha = prototype_attention(z, bank);
  const auto expected = softmax_oracle({1.0 / std::sqrt(2.0), 0.0});
  EXPECT_NEAR(alpha.at({0}), static_cast<double>(expected[0]), 1e-15);
  EXPECT_NEAR(alpha.at({1}), static_cast<double>(expected[1]), 1e-15);
  EXPECT_NEAR(alpha.at({0}), 0.6697615493266569, 1e-15);
}

TEST(PrototypeAttention, RandomizedProbabilityVectors) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index k = 1 + rng.below(8);
    const Index d = 1 + rng.below(12);
    const Tensor bank = random_tensor({k, d}, rng, -3.0, 3.0);
    const Tensor z = random_tensor({d}, rng, -3.0, 3.0);
    const Tensor alpha = prototype_attention(z, bank);
    double total = 0.0;
    for (double a : to_std(alpha)) {
      ASSERT_GE(a, 0.0);
      ASSERT_LE(a, 1.0);
      total += a;
    }
    ASSERT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(PrototypeAttention, BatchedRowsMatchSingleTokens) {
  Rng rng(4);
  const Tensor bank = random_tensor({3, 4}, rng);
  const Tensor z = random_tensor({5, 4}, rng);
  const Tensor alpha = prototype_attention(z, bank);
  ASSERT_EQ(alpha.shape(), (Shape{5, 3}));
  for (Index m = 0; m < 5; ++m) {
    const Tensor single = prototype_attention(reshape(slice(z, 0, m, m + 1), {4}), bank);
    for (Index k = 0; k < 3; ++k) EXPECT_NEAR(alpha.at({m, k}), single.at({k}), 1e-15);
  }
}

TEST(PrototypeAttention, ArgmaxIgnoresDirectionsOrthogonalToPrototypes) {
  Rng rng(5);
  // Prototypes live in the first two coordinates; the third is orthogonal.
  const Tensor bank = Tensor::from_values({3, 3}, {1.0, 0.2, 0.0, -0.4, 0.9, 0.0, 0.3, -0.8, 0.0});
  for (int trial = 0; trial < 100; ++trial) {
    const Tensor z = random_tensor({3}, rng);
    const Tensor shifted = add(z, Tensor::from_values({3}, {0.0, 0.0, rng.uniform(-50.0, 50.0)}));
    const auto a = to_std(prototype_attention(z, bank));
    const auto b = to_std(prototype_attention(shifted, bank));
    EXPECT_EQ(std::max_element(a.begin(), a.end()) - a.begin(), std::max_element(b.begin(), b.end()) - b.begin());
    const auto scaled = to_std(prototype_attention(scale(z, rng.uniform(0.1, 40.0)), bank));
    for (double v : scaled) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Reprogram, SinglePrototypeCollapse) {
  Rng rng(6);
  const Tensor bank = random_tensor({1, 5}, rng);
  const Tensor out = reprogram(random_tensor({5}, rng, -10.0, 10.0), bank);
  EXPECT_EQ(to_std(out), to_std(bank));
}

TEST(Reprogram, EqualPrototypesReturnThatPoint) {
  const Tensor q = Tensor::from_values({1, 3}, {0.5, -0.25, 2.0});
  const Tensor bank = concat({q, q, q}, 0);
  Rng rng(7);
  const Tensor out = reprogram(random_tensor({3}, rng), bank);
  for (Index j = 0; j < 3; ++j) EXPECT_NEAR(out.at({j}), q.at({0, j}), 1e-15);
}

TEST(Reprogram, CoordinatesStayInsidePrototypeHull) {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index k = 1 + rng.below(8);
    const Index d = 1 + rng.below(10);
    const Tensor bank = random_tensor({k, d}, rng, -2.0, 2.0);
    const Tensor out = reprogram(random_tensor({d}, rng, -5.0, 5.0), bank);
    for (Index j = 0; j < d; ++j) {
      double lo = bank.at({0, j}), hi = lo;
      for (Index r = 1; r < k; ++r) {
        lo = std::min(lo, bank.at({r, j}));
        hi = std::max(hi, bank.at({r, j}));
      }
      ASSERT_GE(out.at({j}), lo - 1e-9);
      ASSERT_LE(out.at({j}), hi + 1e-9);
    }
  }
}

TEST(Reprogram, GradientsMatchFiniteDifferences) {
  Rng rng(9);
  Tensor bank = random_tensor({4, 6}, rng);
  bank.set_requires_grad(true);
  const Tensor z = random_tensor({3, 6}, rng);
  const Tensor probe = random_tensor({3, 6}, rng);
  const auto loss = [&] { return sum(mul(reprogram(z, bank), probe)); };
  EXPECT_LT(gradcheck(loss, std::vector<Tensor>{bank}).max_rel_error, 1e-4);
  EXPECT_LT(finite_difference_check([&](const Tensor& in) { return sum(mul(reprogram(in, bank), probe)); }, z),
            1e-4);
}

TEST(PrototypeBank, InitModes) {
  ParameterSet params;
  Rng rng(10);
  const PrototypeBank random = PrototypeBank::init(8, 16, params, rng);
  EXPECT_EQ(random.prototypes.shape(), (Shape{8, 16}));
  EXPECT_TRUE(random.prototypes.requires_grad());
  EXPECT_THROW(PrototypeBank::init(0, 16, params, rng, PrototypeInit::random, nullptr, "p0"), ConfigError);

  const Tensor table = random_tensor({256, 16}, rng);
  const PrototypeBank vocab = PrototypeBank::init(4, 16, params, rng, PrototypeInit::vocab, &table, "p1");
  for (Index r = 0; r < 4; ++r) {
    bool found = false;
    for (Index v = 0; v < 256 && !found; ++v) {
      bool same = true;
      for (Index c = 0; c < 16; ++c) same = same && vocab.prototypes.at({r, c}) == table.at({v, c});
      found = same;
    }
    EXPECT_TRUE(found) << "row " << r;
  }
  EXPECT_THROW(PrototypeBank::init(4, 16, params, rng, PrototypeInit::vocab, nullptr, "p2"), ContractError);
}

TEST(TaskPrompts, OnlyRegisteredTasksResolve) {
  ParameterSet params;
  Rng rng(11);
  const TaskPromptBank bank = TaskPromptBank::init({TaskId::forecast}, 4, 8, params, rng);
  EXPECT_EQ(bank.prompt(TaskId::forecast).shape(), (Shape{4, 8}));
  EXPECT_THROW(bank.prompt(TaskId::anomaly), ContractError);
  EXPECT_EQ(parse_task("imputation"), TaskId::imputation);
  EXPECT_THROW(parse_task("classify"), ConfigError);
  EXPECT_THROW(TaskPromptBank::init({TaskId::forecast}, 0, 8, params, rng), ConfigError);
}

TEST(TextPrompt, ConstantWindow) {
  const RowMatrix x = RowMatrix::Constant(10, 2, 1.5);
  const WindowStats s = window_statistics(x);
  EXPECT_EQ(s.trend, 0);
  EXPECT_EQ(s.min, 1.5);
  EXPECT_EQ(s.max, 1.5);
  EXPECT_EQ(s.mean, 1.5);
  EXPECT_EQ(s.median, 1.5);
  EXPECT_TRUE(s.lags.empty());
}

TEST(TextPrompt, RampTrendsUpAndDown) {
  RowMatrix x(20, 2);
  for (Index t = 0; t < 20; ++t) {
    x(t, 0) = 0.1 * static_cast<double>(t);
    x(t, 1) = 2.0 + 0.05 * static_cast<double>(t);
  }
  EXPECT_EQ(window_statistics(x).trend, 1);
  EXPECT_EQ(window_statistics(RowMatrix(-x)).trend, -1);
}

/// Brute-force biased autocorrelation argmax over lags 1..L/2.
Index best_lag_oracle(const std::vector<double>& s) {
  const std::size_t n = s.size();
  long double m = 0.0L;
  for (double v : s) m += v;
  m /= static_cast<long double>(n);
  Index best = 0;
  long double best_value = -1e300L;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    long double c = 0.0L;
    for (std::size_t t = 0; t + k < n; ++t) c += (s[t] - m) * (s[t + k] - m);
    if (c > best_value) {
      best_value = c;
      best = k;
    }
  }
  return best;
}

TEST(TextPrompt, SinusoidTopLagIsItsPeriod) {
  RowMatrix x(96, 1);
  std::vector<double> series(96);
  for (Index t = 0; t < 96; ++t) {
    x(t, 0) = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 12.0);
    series[t] = x(t, 0);
  }
  const WindowStats s = window_statistics(x);
  ASSERT_EQ(s.lags.size(), 3u);
  EXPECT_EQ(best_lag_oracle(series), 12u);
  EXPECT_EQ(s.lags[0], 12u);
}

TEST(TextPrompt, MedianAndRendering) {
  const RowMatrix x = (RowMatrix(4, 1) << 4.0, 1.0, 3.0, 2.0).finished();
  const TextPromptSpec spec = build_text_prompt(x, "{domain}|{instruction}|{min}|{max}|{mean}|{median}|{trend}",
                                                "power", "predict");
  EXPECT_EQ(spec.stats.median, 2.5);
  EXPECT_EQ(spec.rendered, "power|predict|1.000|4.000|2.500|2.500|downward");
  EXPECT_THROW(build_text_prompt(x, "{bogus}", "", ""), ConfigError);
  EXPECT_THROW(build_text_prompt(x, "{min", "", ""), ConfigError);
  EXPECT_NO_THROW(build_text_prompt(x, kDefaultPromptTemplate, "d", "i"));
}

TEST(TextPrompt, PureFunctionOfWindow) {
  Rng rng(12);
  RowMatrix x = testing::random_matrix(32, 3, rng);
  const RowMatrix copy = x;
  EXPECT_EQ(build_text_prompt(x, kDefaultPromptTemplate, "a", "b").rendered,
            build_text_prompt(copy, kDefaultPromptTemplate, "a", "b").rendered);
}

TEST(EmbedText, ByteLookup) {
  Rng rng(13);
  const Tensor table = random_tensor({256, 5}, rng);
  EXPECT_FALSE(embed_text("", table).has_value());
  const auto a = embed_text("A", table);
  ASSERT_TRUE(a.has_value());
  ASSERT_EQ(a->shape(), (Shape{1, 5}));
  EXPECT_EQ(to_std(*a), to_std(slice(table, 0, 65, 66)));
  EXPECT_TRUE(testing::bitwise_equal(*embed_text("hello", table), *embed_text("hello", table)));
  EXPECT_EQ(embed_text("\xff", table)->at({0, 0}), table.at({255, 0}));
}

TEST(AssembleSequence, LengthsAndOrder) {
  Rng rng(14);
  const Tensor task = random_tensor({1, 4}, rng);
  const Tensor patches = random_tensor({6, 4}, rng);
  const SemanticSequence seq = assemble_sequence(std::nullopt, task, patches);
  EXPECT_EQ(seq.length(), 7u);
  EXPECT_EQ(seq.tokens.shape(), (Shape{7, 4}));
  EXPECT_EQ(to_std(slice(seq.tokens, 0, 1, 7)), to_std(patches));

  const Tensor text = random_tensor({3, 4}, rng);
  const SemanticSequence full = assemble_sequence(text, task, patches);
  EXPECT_EQ(full.text_len, 3u);
  EXPECT_EQ(full.task_len, 1u);
  EXPECT_EQ(full.patch_len, 6u);
  EXPECT_EQ(to_std(slice(full.tokens, 0, 0, 3)), to_std(text));

  const Tensor swapped = concat({slice(patches, 0, 3, 6), slice(patches, 0, 0, 3)}, 0);
  EXPECT_EQ(to_std(slice(assemble_sequence(std::nullopt, task, swapped).tokens, 0, 1, 7)), to_std(swapped));
  EXPECT_THROW(assemble_sequence(std::nullopt, random_tensor({1, 3}, rng), patches), DimensionError);
}

TEST(Reprogram, OneAdamStepMovesPrototypesAndPrompts) {
  ParameterSet params;
  Rng rng(15);
  const Tensor frozen = params.add("decoder.table", random_tensor({256, 4}, rng), true);
  const PrototypeBank bank = PrototypeBank::init(3, 4, params, rng);
  const TaskPromptBank prompts = TaskPromptBank::init({TaskId::forecast}, 2, 4, params, rng);
  const auto before = params.snapshot();
  const std::uint64_t frozen_digest = params.digest("decoder.");
  params.zero_grad();
  const Tensor z = random_tensor({3, 4}, rng);
  const SemanticSequence seq = assemble_sequence(embed_text("x", frozen), prompts.prompt(TaskId::forecast),
                                                 reprogram(z, bank.prototypes));
  sum(mul(seq.tokens, random_tensor({6, 4}, rng))).backward();
  AdamState state;
  adam_step(params, state);
  const auto after = params.snapshot();
  EXPECT_EQ(params.digest("decoder."), frozen_digest);
  EXPECT_NE(before[1], after[1]);
  EXPECT_NE(before[2], after[2]);
}

}  // namespace
}  // namespace seed
