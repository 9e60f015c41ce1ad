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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Tolerances are fixed constants below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "seed/diagnostics.hpp"
#include "seed/errors.hpp"
#include "seed/ops.hpp"
#include "seed/pipeline.hpp"

#ifndef SEED_SOURCE_DIR
#error "SEED_SOURCE_DIR must point at the repository root"
#endif

namespace {

using namespace seed;
using Clock = std::chrono::steady_clock;

constexpr double kGradTolerance = 1e-4;
constexpr double kGradSeconds = 60.0;
constexpr int kPropertyCases = 1000;
constexpr double kSumTolerance = 1e-9;
constexpr double kHullTolerance = 1e-9;
constexpr double kBaselineRatio = 0.8;
constexpr double kTrainSeconds = 600.0;
constexpr double kMetricTolerance = 1e-12;
constexpr int kMetricInstances = 100;

const std::filesystem::path kRoot = SEED_SOURCE_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

Tensor random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Vector v(static_cast<Eigen::Index>(shape_numel(shape)));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(lo, hi);
  return Tensor(std::move(shape), std::move(v));
}

RowMatrix random_matrix(Index rows, Index cols, Rng& rng) {
  RowMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
  return m;
}

bool stochastic_rows(const Tensor& w, Index row_len, std::string* why) {
  const auto data = w.data();
  for (Index r = 0; r * row_len < w.numel(); ++r) {
    double total = 0.0;
    for (Index c = 0; c < row_len; ++c) {
      const double v = data[r * row_len + c];
      if (!(v >= 0.0 && v <= 1.0)) {
        *why = "entry " + fmt("%.17g", v) + " outside [0,1]";
        return false;
      }
      total += v;
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
      *why = "row sum off by " + fmt("%.3e", total - 1.0);
      return false;
    }
  }
  return true;
}

std::string checkpoint_bytes(const Checkpoint& c) {
  std::ostringstream out;
  write_checkpoint(out, c);
  return out.str();
}

ExperimentConfig shipped_config() { return load_config(kRoot / "configs" / "synthetic.conf"); }

/// Short runs for the determinism and ablation checks.
ExperimentConfig quick_config() {
  ExperimentConfig c = shipped_config();
  c.stride = 16;
  c.train.max_epochs = 2;
  c.report_timing = false;
  return c;
}

// --- criteria ---------------------------------------------------------------

Outcome gradient_correctness() {
  Outcome o;
  const auto t0 = Clock::now();
  const ExperimentConfig toy = toy_config();
  o.require(toy.encoder.d_model <= 8 && toy.decoder.d_lm <= 16 && toy.reprog.num_prototypes <= 4 &&
                toy.window <= 16,
            "toy dimensions exceed N<=4, L<=16, d<=8, d_lm<=16, K<=4");
  double worst = 0.0;
  std::vector<std::string> seen;
  for (const ModuleGradCheck& c : gradient_checks("all")) {
    seen.push_back(c.module);
    worst = std::max(worst, c.report.max_rel_error);
    o.require(c.report.max_rel_error < kGradTolerance, c.module + " rel err " + fmt("%.3e", c.report.max_rel_error));
  }
  o.require(seen.size() == std::size(kGradCheckModules), "not every module was checked");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < kGradSeconds, "took " + fmt("%.1f", elapsed) + " s");
  if (o.pass) o.detail = std::to_string(seen.size()) + " checks, max rel err " + fmt("%.2e", worst) + ", " + fmt("%.2f", elapsed) + " s";
  return o;
}

Outcome normalization_invariants() {
  Outcome o;
  Rng rng(2);
  int attention_cases = 0, alpha_cases = 0;
  std::string why;
  for (int i = 0; i < kPropertyCases && o.pass; ++i) {
    EncoderConfig c;
    c.num_vars = 1 + rng.below(6);
    c.window = 4 + rng.below(8);
    c.num_heads = 1 + rng.below(3);
    c.d_model = c.num_heads * (1 + rng.below(4));
    c.ffn_dim = 8;
    c.channels = 1;
    c.num_layers = 1 + rng.below(2);
    ParameterSet params;
    const EncoderParams weights = EncoderParams::init(c, params, rng);
    std::vector<Tensor> attention;
    NoGradGuard guard;
    encode(random_tensor({c.window, c.num_vars}, rng, -4.0, 4.0), c, weights, &attention);
    for (const Tensor& w : attention) {
      if (!stochastic_rows(w, c.num_vars, &why)) o.require(false, "attention " + why);
    }
    ++attention_cases;
  }
  for (int i = 0; i < kPropertyCases && o.pass; ++i) {
    const Index k = 1 + rng.below(12);
    const Index d = 1 + rng.below(16);
    const Index m = 1 + rng.below(6);
    const Tensor alpha =
        prototype_attention(random_tensor({m, d}, rng, -5.0, 5.0), random_tensor({k, d}, rng, -5.0, 5.0));
    if (!stochastic_rows(alpha, k, &why)) o.require(false, "alpha " + why);
    ++alpha_cases;
  }
  if (o.pass) {
    o.detail = std::to_string(attention_cases) + " attention stacks, " + std::to_string(alpha_cases) + " alpha batches";
  }
  return o;
}

Outcome convex_hull() {
  Outcome o;
  Rng rng(3);
  double worst = 0.0;
  for (int i = 0; i < kPropertyCases; ++i) {
    const Index k = 1 + rng.below(10);
    const Index d = 1 + rng.below(16);
    const Tensor bank = random_tensor({k, d}, rng, -3.0, 3.0);
    const Tensor z = reprogram(random_tensor({d}, rng, -6.0, 6.0), bank);
    for (Index j = 0; j < d; ++j) {
      double lo = bank.at({0, j}), hi = lo;
      for (Index r = 1; r < k; ++r) {
        lo = std::min(lo, bank.at({r, j}));
        hi = std::max(hi, bank.at({r, j}));
      }
      worst = std::max({worst, lo - z.at({j}), z.at({j}) - hi});
    }
  }
  o.require(worst <= kHullTolerance, "hull violated by " + fmt("%.3e", worst));
  for (int i = 0; i < 50; ++i) {
    const Index d = 1 + rng.below(16);
    const Tensor p = random_tensor({1, d}, rng);
    const Tensor z = reprogram(random_tensor({d}, rng, -10.0, 10.0), p);
    for (Index j = 0; j < d; ++j) {
      if (z.at({j}) != p.at({0, j})) o.require(false, "K=1 output differs from the prototype");
    }
  }
  if (o.pass) o.detail = std::to_string(kPropertyCases) + " pairs, worst excursion " + fmt("%.2e", worst);
  return o;
}

struct TrainedRun {
  ExperimentConfig config;
  PreparedData data;
  TrainOutcome outcome;
  double seconds = 0.0;
};

Outcome freeze_contract(const TrainedRun& run) {
  Outcome o;
  const SeedModel init(run.config, run.data.series.num_vars());
  const auto trained = restore_model(run.outcome.checkpoint);
  o.require(run.outcome.result.decoder_unchanged, "training reported a decoder change");
  o.require(decoder_digest(init.params()) == decoder_digest(trained->params()), "decoder digest differs from init");
  const std::vector<std::string> groups{"encoder.", "patching.", "reprog.prototypes", "reprog.task.", "head."};
  std::vector<int> changed(groups.size(), 0);
  Index unchanged = 0;
  Index trainable_tensors = 0;
  for (std::size_t i = 0; i < init.params().size(); ++i) {
    const Parameter& a = init.params().items()[i];
    const Parameter& b = trained->params().items()[i];
    if (a.frozen) {
      if (!(a.tensor.values().array() == b.tensor.values().array()).all()) o.require(false, a.name + " moved");
      continue;
    }
    ++trainable_tensors;
    const bool moved = !(a.tensor.values().array() == b.tensor.values().array()).all();
    if (!moved) ++unchanged;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (a.name.rfind(groups[g], 0) == 0 && moved) ++changed[g];
    }
  }
  for (std::size_t g = 0; g < groups.size(); ++g) o.require(changed[g] > 0, groups[g] + " parameters never moved");
  o.require(unchanged == 0, std::to_string(unchanged) + " trainable tensors still at init");
  if (o.pass) {
    o.detail = "decoder digest unchanged; " +
               std::to_string(trainable_tensors) +
               " trainable tensors all moved";
  }
  return o;
}

Outcome patch_arithmetic() {
  Outcome o;
  Rng rng(5);
  const ExperimentConfig defaults;
  o.require(defaults.patch.patch_len == 16, "default P is not 16");
  o.require(patch_count(96, defaults.patch.patch_len) == 6, "L=96, P=16 does not give M=6");
  for (int i = 0; i < kPropertyCases; ++i) {
    const Index p = 1 + rng.below(32);
    const Index l = p + rng.below(200);
    if (patch_count(l, p) != l / p) o.require(false, "count formula");
    if (i % 20 == 0) {
      const Tensor layout = random_tensor({l, 2}, rng);
      if (segment_patches(layout, p).size() != l / p) o.require(false, "segment count");
    }
  }
  for (int i = 0; i < 100; ++i) {
    const Index n = 1 + rng.below(4), d = 1 + rng.below(4), l = 1 + rng.below(20);
    const Tensor t = random_tensor({n, d, l}, rng);
    const Tensor back = restore_features(reshape_features(t), n, d);
    for (Index j = 0; j < t.numel(); ++j) {
      if (std::bit_cast<std::uint64_t>(back.data()[j]) != std::bit_cast<std::uint64_t>(t.data()[j])) {
        o.require(false, "round trip not bitwise");
        break;
      }
    }
  }
  const Tensor sentinel = reshape_features(Tensor::from_values({2, 2, 1}, {1.0, 2.0, 3.0, 4.0}));
  o.require(sentinel.shape() == Shape{1, 4} && sentinel.at({0, 0}) == 1.0 && sentinel.at({0, 1}) == 2.0 &&
                sentinel.at({0, 2}) == 3.0 && sentinel.at({0, 3}) == 4.0,
            "sentinel order");
  ParameterSet params;
  PatchConfig pc = defaults.patch;
  const PatchParams pp = PatchParams::init(pc, 2, 3, params, rng);
  o.require(embed_patches(random_tensor({2, 3, 96}, rng), pp, pc).count == 6, "embed_patches count at L=96");
  if (o.pass) o.detail = "P=16, L=96 -> M=6; " + std::to_string(kPropertyCases) + " random (L,P)";
  return o;
}

Outcome causality() {
  Outcome o;
  ParameterSet params;
  const auto dec = FrozenDecoder::create(DecoderConfig{}, params);
  Rng rng(6);
  int checks = 0;
  for (int seq = 0; seq < 5; ++seq) {
    const Index len = 8 + rng.below(24);
    const Tensor tokens = random_tensor({len, dec->width()}, rng);
    const Tensor base = dec->decode(tokens);
    for (Index t : {Index{1}, len / 2, len - 1}) {
      Vector changed = tokens.values();
      for (Index i = t * dec->width(); i < len * dec->width(); ++i) changed[static_cast<Eigen::Index>(i)] += rng.uniform(-2.0, 2.0);
      const Tensor out = dec->decode(Tensor(tokens.shape(), changed));
      for (Index i = 0; i < t * dec->width(); ++i) {
        if (std::bit_cast<std::uint64_t>(out.data()[i]) != std::bit_cast<std::uint64_t>(base.data()[i])) {
          o.require(false, "position < " + std::to_string(t) + " changed");
          break;
        }
      }
      bool later_moved = false;
      for (Index i = t * dec->width(); i < len * dec->width(); ++i) later_moved |= out.data()[i] != base.data()[i];
      o.require(later_moved, "perturbation had no effect at t=" + std::to_string(t));
      ++checks;
    }
  }
  if (o.pass) o.detail = std::to_string(checks) + " perturbations at t in {1, mid, last}";
  return o;
}

Outcome end_to_end(const TrainedRun& run) {
  Outcome o;
  // Independent last-value baseline over the validation windows.
  double se = 0.0;
  Index count = 0;
  for (const WindowSample& w : run.data.val) {
    for (Eigen::Index h = 0; h < w.y.rows(); ++h)
      for (Eigen::Index c = 0; c < w.y.cols(); ++c) {
        const double e = w.x(w.x.rows() - 1, c) - w.y(h, c);
        se += e * e;
        ++count;
      }
  }
  const double naive = se / static_cast<double>(count);
  const double model = run.outcome.val.mse;
  o.require(run.data.series.num_vars() == 3 && run.data.series.num_rows() == 2000, "dataset is not N=3, T=2000");
  o.require(run.config.window == 96 && run.config.horizon == 24 && run.config.reprog.num_prototypes == 8 &&
                run.config.train.seed == 42,
            "config is not L=96, H=24, K=8, seed 42");
  o.require(model <= kBaselineRatio * naive, "val mse " + fmt("%.4f", model) + " > 0.8 x naive " + fmt("%.4f", naive));
  o.require(run.seconds < kTrainSeconds, "training took " + fmt("%.0f", run.seconds) + " s");
  o.detail = "val mse " + fmt("%.4f", model) + " vs naive " + fmt("%.4f", naive) + " (ratio " +
             fmt("%.3f", model / naive) + "), " + fmt("%.0f", run.seconds) + " s" +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome determinism(std::string* report_out, std::vector<ReportRow>* rows_out) {
  Outcome o;
  const ExperimentConfig c = quick_config();
  const std::string a = checkpoint_bytes(run_training(c).checkpoint);
  const std::string b = checkpoint_bytes(run_training(c).checkpoint);
  o.require(a == b, "checkpoints differ");
  const auto rows_a = run_ablation(c);
  const auto rows_b = run_ablation(c);
  std::ostringstream ra, rb;
  write_report_csv(ra, rows_a);
  write_report_csv(rb, rows_b);
  o.require(ra.str() == rb.str() && format_report_table(rows_a) == format_report_table(rows_b), "reports differ");
  *report_out = ra.str();
  *rows_out = rows_a;
  if (o.pass) o.detail = "checkpoints (" + std::to_string(a.size()) + " bytes) and ablation reports identical";
  return o;
}

Outcome ablation(const std::vector<ReportRow>& rows, const std::string& csv) {
  Outcome o;
  const std::vector<std::string> expected{"full", "no_reprogram", "no_encoder", "single_shot"};
  o.require(rows.size() == expected.size(), std::to_string(rows.size()) + " rows");
  for (std::size_t i = 0; i < std::min(rows.size(), expected.size()); ++i) {
    o.require(rows[i].variant == expected[i], "row " + std::to_string(i) + " is " + rows[i].variant);
    o.require(std::isfinite(rows[i].mse) && std::isfinite(rows[i].mae), rows[i].variant + " metrics not finite");
  }
  if (rows.size() == 4) {
    const ExperimentConfig c = quick_config();
    const Index k_params = c.reprog.num_prototypes * c.decoder.d_lm;
    o.require(rows[0].params_trainable - rows[1].params_trainable == k_params,
              "no_reprogram does not drop exactly K*d_lm parameters");
  }
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  o.require(line == "dataset,variant,mse,mae,train_time_s,params_trainable,params_frozen", "csv header");
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    for (int col : {2, 3}) {
      const std::string& s = cells.size() > 3 ? cells[col] : std::string();
      const auto dot = s.find('.');
      o.require(dot != std::string::npos && s.size() - dot - 1 == 3, "metric '" + s + "' not 3 decimals");
    }
  }
  if (o.pass) {
    o.detail = "4 rows:";
    for (const auto& r : rows) o.detail += " " + r.variant + "=" + format_metric(r.mse) + "/" + format_metric(r.mae);
  }
  return o;
}

Outcome metric_oracle() {
  Outcome o;
  Rng rng(10);
  double worst = 0.0;
  for (int i = 0; i < kMetricInstances; ++i) {
    const Index windows = 1 + rng.below(5), h = 1 + rng.below(6), n = 1 + rng.below(4);
    MetricAccumulator acc;
    long double sq = 0.0L, ab = 0.0L;
    for (Index w = 0; w < windows; ++w) {
      const RowMatrix p = random_matrix(h, n, rng) * rng.uniform(0.1, 5.0);
      const RowMatrix t = random_matrix(h, n, rng);
      acc.add(p, t);
      for (Index r = 0; r < h; ++r)
        for (Index c = 0; c < n; ++c) {
          const long double e = static_cast<long double>(p(r, c)) - t(r, c);
          sq += e * e;
          ab += e < 0 ? -e : e;
        }
    }
    const auto total = static_cast<long double>(windows * h * n);
    const Metrics m = acc.result();
    worst = std::max({worst, std::abs(m.mse - static_cast<double>(sq / total)),
                      std::abs(m.mae - static_cast<double>(ab / total))});
    o.require(m.mae <= std::sqrt(m.mse), "mae > sqrt(mse)");
  }
  // The evaluation path itself, on a toy model's own forecasts.
  const ExperimentConfig toy = toy_config();
  const SeedModel model(toy, 3);
  std::vector<WindowSample> windows;
  for (int i = 0; i < 10; ++i) windows.push_back({random_matrix(toy.window, 3, rng), random_matrix(toy.horizon, 3, rng), 0});
  const Metrics m = evaluate_windows(model, windows);
  long double sq = 0.0L, ab = 0.0L;
  Index total = 0;
  for (const WindowSample& w : windows) {
    NoGradGuard guard;
    const RowMatrix p = model.forward(w.x).to_matrix();
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      const long double e = static_cast<long double>(p.data()[j]) - w.y.data()[j];
      sq += e * e;
      ab += e < 0 ? -e : e;
      ++total;
    }
  }
  worst = std::max({worst, std::abs(m.mse - static_cast<double>(sq / total)),
                    std::abs(m.mae - static_cast<double>(ab / total))});
  o.require(m.mae <= std::sqrt(m.mse), "mae > sqrt(mse) on model output");
  o.require(worst < kMetricTolerance, "max deviation " + fmt("%.3e", worst));
  if (o.pass) o.detail = std::to_string(kMetricInstances) + " instances + evaluate path, max |delta| " + fmt("%.2e", worst);
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %-26s %s  (%s) [%.1f s]\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  };

  report(1, "gradient-correctness", gradient_correctness);
  report(2, "normalization-invariants", normalization_invariants);
  report(3, "convex-hull", convex_hull);

  TrainedRun run;
  std::string train_error;
  try {
    run.config = shipped_config();
    const RawSeries regenerated = synthetic_series(2000, 3, 42);
    run.data = prepare_data(run.config);
    if (!(run.data.series.values.array() == regenerated.values.array()).all()) {
      train_error = "data/synthetic.csv does not match the generator output";
    }
    const auto t0 = Clock::now();
    run.outcome = run_training(run.config, run.data);
    run.seconds = seconds_since(t0);
  } catch (const std::exception& e) {
    train_error = e.what();
  }
  const auto needs_run = [&](const std::function<Outcome(const TrainedRun&)>& f) {
    return [&, f] {
      if (!train_error.empty()) throw Error("training run failed: " + train_error);
      return f(run);
    };
  };

  report(4, "freeze-contract", needs_run(freeze_contract));
  report(5, "patch-arithmetic", patch_arithmetic);
  report(6, "causality", causality);
  report(7, "end-to-end-learning", needs_run(end_to_end));
  std::string csv;
  std::vector<ReportRow> rows;
  report(8, "determinism", [&] { return determinism(&csv, &rows); });
  report(9, "ablation-harness", [&] {
    if (rows.empty()) throw Error("no ablation rows were produced");
    Outcome o = ablation(rows, csv);
    std::printf("%s", format_report_table(rows).c_str());
    return o;
  });
  report(10, "metric-oracle", metric_oracle);

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
