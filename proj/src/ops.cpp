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

#include "seed/ops.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "seed/errors.hpp"

namespace seed {

namespace {

using detail::accumulate;
using detail::make_result;
using detail::Node;
using IndexMap = std::shared_ptr<const std::vector<Index>>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using MatrixMap = Eigen::Map<RowMatrix>;

struct AxisLayout {
  Index outer = 1;
  Index extent = 1;
  Index inner = 1;
  Index at(Index o, Index a, Index i) const { return (o * extent + a) * inner + i; }
};

AxisLayout axis_layout(const Shape& shape, Index axis, const char* op) {
  if (axis >= shape.size()) {
    throw DimensionError(std::string(op) + ": axis " + std::to_string(axis) +
                         " out of range for shape " + shape_string(shape));
  }
  AxisLayout layout;
  for (Index i = 0; i < axis; ++i) layout.outer *= shape[i];
  layout.extent = shape[axis];
  for (Index i = axis + 1; i < shape.size(); ++i) layout.inner *= shape[i];
  return layout;
}

Shape broadcast_shape(const Shape& a, const Shape& b, const char* op) {
  const Index rank = std::max(a.size(), b.size());
  Shape out(rank);
  for (Index i = 0; i < rank; ++i) {
    const Index ea = i < rank - a.size() ? 1 : a[i - (rank - a.size())];
    const Index eb = i < rank - b.size() ? 1 : b[i - (rank - b.size())];
    if (ea == eb || eb == 1) {
      out[i] = ea;
    } else if (ea == 1) {
      out[i] = eb;
    } else {
      throw DimensionError(std::string(op) + ": shapes " + shape_string(a) + " and " +
                           shape_string(b) + " are not broadcast-compatible");
    }
  }
  return out;
}

// Flat offset into `in` for every flat position of `out`.
std::vector<Index> broadcast_map(const Shape& in, const Shape& out) {
  const Index rank = out.size();
  const Index lead = rank - in.size();
  std::vector<Index> stride(rank, 0);
  Index s = 1;
  for (Index i = in.size(); i-- > 0;) {
    if (in[i] != 1) stride[i + lead] = s;
    s *= in[i];
  }
  const Index n = shape_numel(out);
  std::vector<Index> map(n);
  std::vector<Index> idx(rank, 0);
  Index cur = 0;
  for (Index flat = 0; flat < n; ++flat) {
    map[flat] = cur;
    for (Index ax = rank; ax-- > 0;) {
      ++idx[ax];
      cur += stride[ax];
      if (idx[ax] < out[ax]) break;
      cur -= stride[ax] * out[ax];
      idx[ax] = 0;
    }
  }
  return map;
}

enum class BinaryKind { add, sub, mul };

Tensor binary(const Tensor& a, const Tensor& b, BinaryKind kind) {
  if (a.shape() == b.shape()) {
    Vector v;
    switch (kind) {
      case BinaryKind::add: v = a.values() + b.values(); break;
      case BinaryKind::sub: v = a.values() - b.values(); break;
      case BinaryKind::mul: v = a.values().cwiseProduct(b.values()); break;
    }
    return make_result(a.shape(), std::move(v), {a, b}, [kind](Node& self) {
      Node& na = *self.inputs[0];
      Node& nb = *self.inputs[1];
      switch (kind) {
        case BinaryKind::add:
          accumulate(na, self.grad);
          accumulate(nb, self.grad);
          break;
        case BinaryKind::sub:
          accumulate(na, self.grad);
          accumulate(nb, -self.grad);
          break;
        case BinaryKind::mul:
          if (na.requires_grad) accumulate(na, self.grad.cwiseProduct(nb.value));
          if (nb.requires_grad) accumulate(nb, self.grad.cwiseProduct(na.value));
          break;
      }
    });
  }

  const char* name = kind == BinaryKind::add ? "add" : kind == BinaryKind::sub ? "sub" : "mul";
  Shape out = broadcast_shape(a.shape(), b.shape(), name);
  IndexMap ma = std::make_shared<const std::vector<Index>>(broadcast_map(a.shape(), out));
  IndexMap mb = std::make_shared<const std::vector<Index>>(broadcast_map(b.shape(), out));
  const Index n = shape_numel(out);
  const Vector& va = a.values();
  const Vector& vb = b.values();
  Vector v(static_cast<Eigen::Index>(n));
  for (Index i = 0; i < n; ++i) {
    const double x = va[(*ma)[i]];
    const double y = vb[(*mb)[i]];
    v[i] = kind == BinaryKind::add ? x + y : kind == BinaryKind::sub ? x - y : x * y;
  }
  return make_result(std::move(out), std::move(v), {a, b}, [kind, ma, mb](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    const Index n = ma->size();
    if (na.requires_grad) {
      Vector g = Vector::Zero(na.value.size());
      for (Index i = 0; i < n; ++i) {
        g[(*ma)[i]] += kind == BinaryKind::mul ? self.grad[i] * nb.value[(*mb)[i]] : self.grad[i];
      }
      accumulate(na, g);
    }
    if (nb.requires_grad) {
      Vector g = Vector::Zero(nb.value.size());
      for (Index i = 0; i < n; ++i) {
        const double gi = self.grad[i];
        g[(*mb)[i]] += kind == BinaryKind::mul ? gi * na.value[(*ma)[i]]
                       : kind == BinaryKind::sub ? -gi
                                                 : gi;
      }
      accumulate(nb, g);
    }
  });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) { return binary(a, b, BinaryKind::add); }
Tensor sub(const Tensor& a, const Tensor& b) { return binary(a, b, BinaryKind::sub); }
Tensor mul(const Tensor& a, const Tensor& b) { return binary(a, b, BinaryKind::mul); }

Tensor scale(const Tensor& a, double factor) {
  return make_result(a.shape(), a.values() * factor, {a},
                     [factor](Node& self) { accumulate(*self.inputs[0], self.grad * factor); });
}

Tensor square(const Tensor& a) {
  return make_result(a.shape(), a.values().array().square().matrix(), {a}, [](Node& self) {
    Node& in = *self.inputs[0];
    accumulate(in, 2.0 * self.grad.cwiseProduct(in.value));
  });
}

Tensor relu(const Tensor& a) {
  return make_result(a.shape(), a.values().cwiseMax(0.0), {a}, [](Node& self) {
    Node& in = *self.inputs[0];
    accumulate(in, (in.value.array() > 0.0).select(self.grad, 0.0).matrix());
  });
}

Tensor sum(const Tensor& a) {
  return make_result({}, Vector::Constant(1, a.values().sum()), {a}, [](Node& self) {
    Node& in = *self.inputs[0];
    accumulate(in, Vector::Constant(in.value.size(), self.grad[0]));
  });
}

Tensor mean(const Tensor& a) {
  const double n = static_cast<double>(a.numel());
  return make_result({}, Vector::Constant(1, a.values().sum() / n), {a}, [n](Node& self) {
    Node& in = *self.inputs[0];
    accumulate(in, Vector::Constant(in.value.size(), self.grad[0] / n));
  });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  const Shape& sa = a.shape();
  const Shape& sb = b.shape();
  auto mismatch = [&] {
    return DimensionError("matmul: shapes " + shape_string(sa) + " and " + shape_string(sb) +
                          " are incompatible");
  };
  if (sa.size() < 2 || sb.size() < 2) throw mismatch();
  const Index p = sa[sa.size() - 2];
  const Index q = sa.back();
  const Index r = sb.back();
  if (sb[sb.size() - 2] != q) throw mismatch();
  const Shape batch_a(sa.begin(), sa.end() - 2);
  const Shape batch_b(sb.begin(), sb.end() - 2);
  Shape batch;
  try {
    batch = broadcast_shape(batch_a, batch_b, "matmul");
  } catch (const DimensionError&) {
    throw mismatch();
  }
  IndexMap ma = std::make_shared<const std::vector<Index>>(broadcast_map(batch_a, batch));
  IndexMap mb = std::make_shared<const std::vector<Index>>(broadcast_map(batch_b, batch));

  Shape out = batch;
  out.push_back(p);
  out.push_back(r);
  const auto P = static_cast<Eigen::Index>(p);
  const auto Q = static_cast<Eigen::Index>(q);
  const auto R = static_cast<Eigen::Index>(r);
  Vector v(static_cast<Eigen::Index>(shape_numel(out)));
  for (Index bi = 0; bi < ma->size(); ++bi) {
    ConstMatrixMap A(a.values().data() + (*ma)[bi] * p * q, P, Q);
    ConstMatrixMap B(b.values().data() + (*mb)[bi] * q * r, Q, R);
    MatrixMap C(v.data() + bi * p * r, P, R);
    C.noalias() = A * B;
  }
  return make_result(std::move(out), std::move(v), {a, b}, [ma, mb, P, Q, R](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    Vector ga = na.requires_grad ? Vector::Zero(na.value.size()) : Vector();
    Vector gb = nb.requires_grad ? Vector::Zero(nb.value.size()) : Vector();
    for (Index bi = 0; bi < ma->size(); ++bi) {
      ConstMatrixMap G(self.grad.data() + bi * P * R, P, R);
      const Index oa = (*ma)[bi] * P * Q;
      const Index ob = (*mb)[bi] * Q * R;
      if (na.requires_grad) {
        ConstMatrixMap B(nb.value.data() + ob, Q, R);
        MatrixMap(ga.data() + oa, P, Q).noalias() += G * B.transpose();
      }
      if (nb.requires_grad) {
        ConstMatrixMap A(na.value.data() + oa, P, Q);
        MatrixMap(gb.data() + ob, Q, R).noalias() += A.transpose() * G;
      }
    }
    if (na.requires_grad) accumulate(na, ga);
    if (nb.requires_grad) accumulate(nb, gb);
  });
}

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  const Shape& sx = x.shape();
  const Shape& sw = weight.shape();
  if (sx.empty() || sw.size() != 2 || sw[1] != sx.back()) {
    throw DimensionError("linear: input " + shape_string(sx) + " does not match weight " +
                         shape_string(sw));
  }
  const bool has_bias = bias.defined();
  if (has_bias && (bias.rank() != 1 || bias.dim(0) != sw[0])) {
    throw DimensionError("linear: bias " + shape_string(bias.shape()) + " does not match weight " +
                         shape_string(sw));
  }
  const auto in = static_cast<Eigen::Index>(sw[1]);
  const auto outw = static_cast<Eigen::Index>(sw[0]);
  const auto rows = static_cast<Eigen::Index>(x.numel()) / in;
  Shape out = sx;
  out.back() = sw[0];
  Vector v(rows * outw);
  MatrixMap Y(v.data(), rows, outw);
  Y.noalias() = ConstMatrixMap(x.values().data(), rows, in) *
                ConstMatrixMap(weight.values().data(), outw, in).transpose();
  if (has_bias) Y.rowwise() += bias.values().transpose();

  std::vector<Tensor> inputs{x, weight};
  if (has_bias) inputs.push_back(bias);
  return make_result(std::move(out), std::move(v), inputs, [rows, in, outw](Node& self) {
    Node& nx = *self.inputs[0];
    Node& nw = *self.inputs[1];
    ConstMatrixMap G(self.grad.data(), rows, outw);
    if (nx.requires_grad) {
      RowMatrix gx = G * ConstMatrixMap(nw.value.data(), outw, in);
      accumulate(nx, Eigen::Map<const Vector>(gx.data(), gx.size()));
    }
    if (nw.requires_grad) {
      RowMatrix gw = G.transpose() * ConstMatrixMap(nx.value.data(), rows, in);
      accumulate(nw, Eigen::Map<const Vector>(gw.data(), gw.size()));
    }
    if (self.inputs.size() > 2 && self.inputs[2]->requires_grad) {
      accumulate(*self.inputs[2], G.colwise().sum().transpose());
    }
  });
}

Tensor softmax(const Tensor& x, Index axis) {
  const AxisLayout L = axis_layout(x.shape(), axis, "softmax");
  if (!all_finite(x)) throw NumericError("softmax: non-finite input");
  const Vector& in = x.values();
  Vector v(in.size());
  for (Index o = 0; o < L.outer; ++o) {
    for (Index i = 0; i < L.inner; ++i) {
      double peak = in[L.at(o, 0, i)];
      for (Index a = 1; a < L.extent; ++a) peak = std::max(peak, in[L.at(o, a, i)]);
      double total = 0.0;
      for (Index a = 0; a < L.extent; ++a) {
        const double e = std::exp(in[L.at(o, a, i)] - peak);
        v[L.at(o, a, i)] = e;
        total += e;
      }
      for (Index a = 0; a < L.extent; ++a) v[L.at(o, a, i)] /= total;
    }
  }
  return make_result(x.shape(), std::move(v), {x}, [L](Node& self) {
    const Vector& y = self.value;
    const Vector& g = self.grad;
    Vector gx(y.size());
    for (Index o = 0; o < L.outer; ++o) {
      for (Index i = 0; i < L.inner; ++i) {
        double dot = 0.0;
        for (Index a = 0; a < L.extent; ++a) dot += g[L.at(o, a, i)] * y[L.at(o, a, i)];
        for (Index a = 0; a < L.extent; ++a) {
          const Index k = L.at(o, a, i);
          gx[k] = y[k] * (g[k] - dot);
        }
      }
    }
    accumulate(*self.inputs[0], gx);
  });
}

Tensor causal_softmax(const Tensor& scores, Index offset) {
  const Shape& s = scores.shape();
  if (s.size() < 2) throw DimensionError("causal_softmax: needs rank >= 2, got " + shape_string(s));
  const Index tq = s[s.size() - 2];
  const Index tk = s.back();
  if (offset + tq > tk) {
    throw DimensionError("causal_softmax: offset " + std::to_string(offset) + " with " +
                         std::to_string(tq) + " queries exceeds " + std::to_string(tk) + " keys");
  }
  const Index blocks = scores.numel() / (tq * tk);
  const Vector& in = scores.values();
  Vector v = Vector::Zero(in.size());
  for (Index b = 0; b < blocks; ++b) {
    for (Index i = 0; i < tq; ++i) {
      const Index row = (b * tq + i) * tk;
      const Index visible = offset + i + 1;
      double peak = in[row];
      for (Index j = 0; j < visible; ++j) {
        if (!std::isfinite(in[row + j])) throw NumericError("causal_softmax: non-finite input");
        peak = std::max(peak, in[row + j]);
      }
      double total = 0.0;
      for (Index j = 0; j < visible; ++j) {
        v[row + j] = std::exp(in[row + j] - peak);
        total += v[row + j];
      }
      for (Index j = 0; j < visible; ++j) v[row + j] /= total;
    }
  }
  return make_result(s, std::move(v), {scores}, [blocks, tq, tk, offset](Node& self) {
    const Vector& y = self.value;
    const Vector& g = self.grad;
    Vector gx = Vector::Zero(y.size());
    for (Index b = 0; b < blocks; ++b) {
      for (Index i = 0; i < tq; ++i) {
        const Index row = (b * tq + i) * tk;
        const Index visible = offset + i + 1;
        double dot = 0.0;
        for (Index j = 0; j < visible; ++j) dot += g[row + j] * y[row + j];
        for (Index j = 0; j < visible; ++j) gx[row + j] = y[row + j] * (g[row + j] - dot);
      }
    }
    accumulate(*self.inputs[0], gx);
  });
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, Index axis,
                  double eps) {
  const AxisLayout L = axis_layout(x.shape(), axis, "layer_norm");
  const Shape expected{L.extent};
  if (gamma.shape() != expected || beta.shape() != expected) {
    throw DimensionError("layer_norm: gamma " + shape_string(gamma.shape()) + " / beta " +
                         shape_string(beta.shape()) + " must match axis extent " +
                         std::to_string(L.extent));
  }
  const Vector& in = x.values();
  const Vector& gv = gamma.values();
  const Vector& bv = beta.values();
  auto xhat = std::make_shared<Vector>(in.size());
  auto inv_std = std::make_shared<Vector>(static_cast<Eigen::Index>(L.outer * L.inner));
  Vector v(in.size());
  const double n = static_cast<double>(L.extent);
  for (Index o = 0; o < L.outer; ++o) {
    for (Index i = 0; i < L.inner; ++i) {
      double mu = 0.0;
      for (Index a = 0; a < L.extent; ++a) mu += in[L.at(o, a, i)];
      mu /= n;
      double var = 0.0;
      for (Index a = 0; a < L.extent; ++a) {
        const double d = in[L.at(o, a, i)] - mu;
        var += d * d;
      }
      var /= n;
      const double r = 1.0 / std::sqrt(var + eps);
      (*inv_std)[o * L.inner + i] = r;
      for (Index a = 0; a < L.extent; ++a) {
        const Index k = L.at(o, a, i);
        (*xhat)[k] = (in[k] - mu) * r;
        v[k] = gv[a] * (*xhat)[k] + bv[a];
      }
    }
  }
  return make_result(x.shape(), std::move(v), {x, gamma, beta}, [L, xhat, inv_std](Node& self) {
    Node& nx = *self.inputs[0];
    Node& ng = *self.inputs[1];
    Node& nb = *self.inputs[2];
    const Vector& g = self.grad;
    const Vector& gamma_v = ng.value;
    const double n = static_cast<double>(L.extent);
    Vector gx = nx.requires_grad ? Vector(nx.value.size()) : Vector();
    Vector gg = Vector::Zero(static_cast<Eigen::Index>(L.extent));
    Vector gb = Vector::Zero(static_cast<Eigen::Index>(L.extent));
    for (Index o = 0; o < L.outer; ++o) {
      for (Index i = 0; i < L.inner; ++i) {
        double sum_d = 0.0;
        double sum_dx = 0.0;
        for (Index a = 0; a < L.extent; ++a) {
          const Index k = L.at(o, a, i);
          const double d = g[k] * gamma_v[a];
          sum_d += d;
          sum_dx += d * (*xhat)[k];
          gg[a] += g[k] * (*xhat)[k];
          gb[a] += g[k];
        }
        if (nx.requires_grad) {
          const double r = (*inv_std)[o * L.inner + i];
          for (Index a = 0; a < L.extent; ++a) {
            const Index k = L.at(o, a, i);
            const double d = g[k] * gamma_v[a];
            gx[k] = r / n * (n * d - sum_d - (*xhat)[k] * sum_dx);
          }
        }
      }
    }
    if (nx.requires_grad) accumulate(nx, gx);
    accumulate(ng, gg);
    accumulate(nb, gb);
  });
}

Tensor reshape(const Tensor& x, Shape shape) {
  if (shape_numel(shape) != x.numel()) {
    throw DimensionError("reshape: cannot view " + shape_string(x.shape()) + " as " +
                         shape_string(shape));
  }
  return make_result(std::move(shape), x.values(), {x},
                     [](Node& self) { accumulate(*self.inputs[0], self.grad); });
}

Tensor permute(const Tensor& x, std::span<const Index> axes) {
  const Shape& in = x.shape();
  const Index rank = in.size();
  std::vector<bool> used(rank, false);
  if (axes.size() != rank) {
    throw DimensionError("permute: " + std::to_string(axes.size()) + " axes for shape " +
                         shape_string(in));
  }
  for (Index a : axes) {
    if (a >= rank || used[a]) throw DimensionError("permute: axes are not a permutation");
    used[a] = true;
  }
  std::vector<Index> in_stride(rank, 1);
  for (Index i = rank; i-- > 1;) in_stride[i - 1] = in_stride[i] * in[i];
  Shape out(rank);
  std::vector<Index> stride(rank);
  for (Index i = 0; i < rank; ++i) {
    out[i] = in[axes[i]];
    stride[i] = in_stride[axes[i]];
  }
  const Index n = x.numel();
  auto map = std::make_shared<std::vector<Index>>(n);
  std::vector<Index> idx(rank, 0);
  Index cur = 0;
  for (Index flat = 0; flat < n; ++flat) {
    (*map)[flat] = cur;
    for (Index ax = rank; ax-- > 0;) {
      ++idx[ax];
      cur += stride[ax];
      if (idx[ax] < out[ax]) break;
      cur -= stride[ax] * out[ax];
      idx[ax] = 0;
    }
  }
  const Vector& src = x.values();
  Vector v(src.size());
  for (Index flat = 0; flat < n; ++flat) v[flat] = src[(*map)[flat]];
  return make_result(std::move(out), std::move(v), {x}, [map](Node& self) {
    Vector g(self.grad.size());
    for (Index flat = 0; flat < map->size(); ++flat) g[(*map)[flat]] = self.grad[flat];
    accumulate(*self.inputs[0], g);
  });
}

Tensor permute(const Tensor& x, std::initializer_list<Index> axes) {
  return permute(x, std::span<const Index>(axes.begin(), axes.size()));
}

Tensor transpose(const Tensor& x, Index axis0, Index axis1) {
  std::vector<Index> axes(x.rank());
  for (Index i = 0; i < axes.size(); ++i) axes[i] = i;
  if (axis0 >= axes.size() || axis1 >= axes.size()) {
    throw DimensionError("transpose: axis out of range for " + shape_string(x.shape()));
  }
  std::swap(axes[axis0], axes[axis1]);
  return permute(x, axes);
}

Tensor concat(const std::vector<Tensor>& parts, Index axis) {
  if (parts.empty()) throw ContractError("concat: no tensors");
  const Shape& first = parts.front().shape();
  AxisLayout base = axis_layout(first, axis, "concat");
  auto extents = std::make_shared<std::vector<Index>>();
  Index total = 0;
  for (const Tensor& t : parts) {
    const Shape& s = t.shape();
    bool ok = s.size() == first.size();
    for (Index i = 0; ok && i < s.size(); ++i) ok = i == axis || s[i] == first[i];
    if (!ok) {
      throw DimensionError("concat: shape " + shape_string(s) + " does not match " +
                           shape_string(first) + " off axis " + std::to_string(axis));
    }
    extents->push_back(s[axis]);
    total += s[axis];
  }
  Shape out = first;
  out[axis] = total;
  const Index outer = base.outer;
  const Index inner = base.inner;
  Vector v(static_cast<Eigen::Index>(shape_numel(out)));
  Index start = 0;
  for (Index p = 0; p < parts.size(); ++p) {
    const Index e = (*extents)[p];
    const Vector& src = parts[p].values();
    for (Index o = 0; o < outer; ++o) {
      v.segment(static_cast<Eigen::Index>((o * total + start) * inner),
                static_cast<Eigen::Index>(e * inner)) =
          src.segment(static_cast<Eigen::Index>(o * e * inner), static_cast<Eigen::Index>(e * inner));
    }
    start += e;
  }
  return make_result(std::move(out), std::move(v), parts, [extents, outer, inner, total](Node& self) {
    Index start = 0;
    for (Index p = 0; p < self.inputs.size(); ++p) {
      const Index e = (*extents)[p];
      Node& in = *self.inputs[p];
      if (in.requires_grad) {
        Vector g(in.value.size());
        for (Index o = 0; o < outer; ++o) {
          g.segment(static_cast<Eigen::Index>(o * e * inner), static_cast<Eigen::Index>(e * inner)) =
              self.grad.segment(static_cast<Eigen::Index>((o * total + start) * inner),
                                static_cast<Eigen::Index>(e * inner));
        }
        accumulate(in, g);
      }
      start += e;
    }
  });
}

Tensor slice(const Tensor& x, Index axis, Index begin, Index end) {
  const AxisLayout L = axis_layout(x.shape(), axis, "slice");
  if (begin >= end || end > L.extent) {
    throw DimensionError("slice: range [" + std::to_string(begin) + "," + std::to_string(end) +
                         ") invalid for extent " + std::to_string(L.extent));
  }
  const Index e = end - begin;
  Shape out = x.shape();
  out[axis] = e;
  const Vector& src = x.values();
  Vector v(static_cast<Eigen::Index>(L.outer * e * L.inner));
  for (Index o = 0; o < L.outer; ++o) {
    v.segment(static_cast<Eigen::Index>(o * e * L.inner), static_cast<Eigen::Index>(e * L.inner)) =
        src.segment(static_cast<Eigen::Index>(L.at(o, begin, 0)),
                    static_cast<Eigen::Index>(e * L.inner));
  }
  return make_result(std::move(out), std::move(v), {x}, [L, begin, e](Node& self) {
    Node& in = *self.inputs[0];
    Vector g = Vector::Zero(in.value.size());
    for (Index o = 0; o < L.outer; ++o) {
      g.segment(static_cast<Eigen::Index>(L.at(o, begin, 0)), static_cast<Eigen::Index>(e * L.inner)) =
          self.grad.segment(static_cast<Eigen::Index>(o * e * L.inner),
                            static_cast<Eigen::Index>(e * L.inner));
    }
    accumulate(in, g);
  });
}

Tensor gather_rows(const Tensor& table, std::span<const Index> ids) {
  if (table.rank() != 2) throw DimensionError("gather_rows: table must be rank 2");
  if (ids.empty()) throw ContractError("gather_rows: no ids");
  const Index rows = table.dim(0);
  const Index width = table.dim(1);
  auto kept = std::make_shared<std::vector<Index>>(ids.begin(), ids.end());
  Vector v(static_cast<Eigen::Index>(ids.size() * width));
  for (Index r = 0; r < ids.size(); ++r) {
    if (ids[r] >= rows) {
      throw CapacityError("gather_rows: id " + std::to_string(ids[r]) + " outside table of " +
                          std::to_string(rows) + " rows");
    }
    v.segment(static_cast<Eigen::Index>(r * width), static_cast<Eigen::Index>(width)) =
        table.values().segment(static_cast<Eigen::Index>(ids[r] * width),
                               static_cast<Eigen::Index>(width));
  }
  return make_result({ids.size(), width}, std::move(v), {table}, [kept, width](Node& self) {
    Node& in = *self.inputs[0];
    Vector g = Vector::Zero(in.value.size());
    const auto w = static_cast<Eigen::Index>(width);
    for (Index r = 0; r < kept->size(); ++r) {
      g.segment(static_cast<Eigen::Index>((*kept)[r] * width), w) +=
          self.grad.segment(static_cast<Eigen::Index>(r * width), w);
    }
    accumulate(in, g);
  });
}

Tensor mse_loss(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape()) {
    throw DimensionError("mse_loss: prediction " + shape_string(pred.shape()) + " vs target " +
                         shape_string(target.shape()));
  }
  return mean(square(sub(pred, target)));
}

bool all_finite(const Tensor& x) { return x.values().allFinite(); }

}  // namespace seed
