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

#include <span>
#include <vector>

#include "seed/tensor.hpp"

namespace seed {

// Elementwise arithmetic with NumPy-style broadcasting over trailing axes.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor square(const Tensor& a);
Tensor relu(const Tensor& a);

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
inline Tensor operator*(const Tensor& a, const Tensor& b) { return mul(a, b); }

/// Sum / mean of all entries, as a rank-0 tensor.
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

/**
 * Matrix product over the last two axes, a: [..., p, q], b: [..., q, r].
 * Leading (batch) axes broadcast; either operand may be plain rank 2.
 */
Tensor matmul(const Tensor& a, const Tensor& b);

/// Affine map on the last axis: x [..., in], weight [out, in], bias [out]
/// (bias may be undefined). Returns x * weight^T + bias.
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);

/// Softmax along `axis` with max subtraction. Throws NumericError on
/// non-finite input.
Tensor softmax(const Tensor& x, Index axis);

/**
 * Softmax over the last axis of scores [..., q, k] where query row i may
 * only see key columns j <= offset + i. Hidden entries are exactly zero and
 * never read.
 */
Tensor causal_softmax(const Tensor& scores, Index offset);

/// Normalizes every slice along `axis` by its mean and population variance,
/// then applies gamma * xhat + beta. gamma and beta have shape [extent].
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, Index axis,
                  double eps = 1e-5);

Tensor reshape(const Tensor& x, Shape shape);
Tensor permute(const Tensor& x, std::span<const Index> axes);
Tensor permute(const Tensor& x, std::initializer_list<Index> axes);
Tensor transpose(const Tensor& x, Index axis0, Index axis1);

Tensor concat(const std::vector<Tensor>& parts, Index axis);
/// Entries [begin, end) along `axis`.
Tensor slice(const Tensor& x, Index axis, Index begin, Index end);

/// Rows of table [V, d] at `ids`, giving [ids.size(), d].
Tensor gather_rows(const Tensor& table, std::span<const Index> ids);

/// mean((pred - target)^2)
Tensor mse_loss(const Tensor& pred, const Tensor& target);

bool all_finite(const Tensor& x);

}  // namespace seed
