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

#include "seed/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "seed/errors.hpp"

namespace seed {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::no_reprogram: return "no_reprogram";
    case Variant::no_encoder: return "no_encoder";
    case Variant::single_shot: return "single_shot";
  }
  return "full";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (variant_name(v) == name) return v;
  }
  throw ConfigError("unknown model.variant '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

Index to_index(const std::string& key, std::string_view v) {
  Index out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

double to_real(const std::string& key, std::string_view v) {
  try {
    return parse_double(v);
  } catch (const Error&) {
    throw ConfigError(key + ": expected a number, got '" + std::string(v) + "'");
  }
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + std::string(v) + "'");
}

std::vector<std::string_view> comma_list(std::string_view v) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = v.find(',', start);
    out.push_back(trim(v.substr(start, comma == v.npos ? v.npos : comma - start)));
    if (comma == v.npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view split_name(SplitMode m) {
  switch (m) {
    case SplitMode::ratio: return "ratio";
    case SplitMode::ett_hourly: return "ett_hourly";
    case SplitMode::ett_minutely: return "ett_minutely";
  }
  return "ratio";
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename Member>
Field index_field(Member member) {
  return {[member](ExperimentConfig& c, const std::string& k, std::string_view v) { member(c) = to_index(k, v); },
          [member](const ExperimentConfig& c) { return std::to_string(member(c)); }};
}

template <typename Member>
Field real_field(Member member) {
  return {[member](ExperimentConfig& c, const std::string& k, std::string_view v) { member(c) = to_real(k, v); },
          [member](const ExperimentConfig& c) { return format_double(member(c)); }};
}

template <typename Member>
Field bool_field(Member member) {
  return {[member](ExperimentConfig& c, const std::string& k, std::string_view v) { member(c) = to_bool(k, v); },
          [member](const ExperimentConfig& c) {
            return std::string(member(c) ? "true" : "false");
          }};
}

template <typename Member>
Field text_field(Member member) {
  return {[member](ExperimentConfig& c, const std::string&, std::string_view v) { member(c) = std::string(v); },
          [member](const ExperimentConfig& c) { return member(c); }};
}

#define SEED_MEMBER(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"data.path", text_field(SEED_MEMBER(data_path))},
      {"data.name", text_field(SEED_MEMBER(data_name))},
      {"data.time_column", text_field(SEED_MEMBER(schema.time_column))},
      {"data.nan_policy",
       {[](ExperimentConfig& c, const std::string& k, std::string_view v) {
          if (v == "reject") c.schema.nan_policy = NanPolicy::reject;
          else if (v == "drop_row") c.schema.nan_policy = NanPolicy::drop_row;
          else throw ConfigError(k + ": expected reject or drop_row");
        },
        [](const ExperimentConfig& c) {
          return std::string(c.schema.nan_policy == NanPolicy::reject ? "reject" : "drop_row");
        }}},
      {"data.split",
       {[](ExperimentConfig& c, const std::string& k, std::string_view v) {
          for (SplitMode m : {SplitMode::ratio, SplitMode::ett_hourly, SplitMode::ett_minutely}) {
            if (split_name(m) == v) {
              c.split.mode = m;
              return;
            }
          }
          throw ConfigError(k + ": expected ratio, ett_hourly or ett_minutely");
        },
        [](const ExperimentConfig& c) { return std::string(split_name(c.split.mode)); }}},
      {"data.ratios",
       {[](ExperimentConfig& c, const std::string& k, std::string_view v) {
          const auto parts = comma_list(v);
          if (parts.size() != 3) throw ConfigError(k + ": expected three comma-separated fractions");
          for (std::size_t i = 0; i < 3; ++i) c.split.ratios[i] = to_real(k, parts[i]);
        },
        [](const ExperimentConfig& c) {
          return format_double(c.split.ratios[0]) + "," + format_double(c.split.ratios[1]) + "," +
                 format_double(c.split.ratios[2]);
        }}},
      {"window.L", index_field(SEED_MEMBER(window))},
      {"window.H", index_field(SEED_MEMBER(horizon))},
      {"window.stride", index_field(SEED_MEMBER(stride))},
      {"window.eval_stride", index_field(SEED_MEMBER(eval_stride))},
      {"encoder.d", index_field(SEED_MEMBER(encoder.d_model))},
      {"encoder.layers", index_field(SEED_MEMBER(encoder.num_layers))},
      {"encoder.heads", index_field(SEED_MEMBER(encoder.num_heads))},
      {"encoder.ffn_dim", index_field(SEED_MEMBER(encoder.ffn_dim))},
      {"encoder.D", index_field(SEED_MEMBER(encoder.channels))},
      {"patch.P", index_field(SEED_MEMBER(patch.patch_len))},
      {"patch.max_patches", index_field(SEED_MEMBER(patch.max_patches))},
      {"reprog.K", index_field(SEED_MEMBER(reprog.num_prototypes))},
      {"reprog.task_len", index_field(SEED_MEMBER(reprog.task_len))},
      {"reprog.tasks",
       {[](ExperimentConfig& c, const std::string&, std::string_view v) {
          c.reprog.tasks.clear();
          for (auto name : comma_list(v)) c.reprog.tasks.push_back(parse_task(name));
        },
        [](const ExperimentConfig& c) {
          std::string out;
          for (TaskId t : c.reprog.tasks) out += (out.empty() ? "" : ",") + std::string(task_name(t));
          return out;
        }}},
      {"reprog.init",
       {[](ExperimentConfig& c, const std::string& k, std::string_view v) {
          if (v == "random") c.reprog.init = PrototypeInit::random;
          else if (v == "vocab") c.reprog.init = PrototypeInit::vocab;
          else throw ConfigError(k + ": expected random or vocab");
        },
        [](const ExperimentConfig& c) {
          return std::string(c.reprog.init == PrototypeInit::random ? "random" : "vocab");
        }}},
      {"reprog.text_prompt", bool_field(SEED_MEMBER(reprog.text_prompt))},
      {"reprog.template", text_field(SEED_MEMBER(reprog.template_path))},
      {"reprog.domain", text_field(SEED_MEMBER(reprog.domain))},
      {"reprog.instruction", text_field(SEED_MEMBER(reprog.instruction))},
      {"decoder.d_lm", index_field(SEED_MEMBER(decoder.d_lm))},
      {"decoder.layers", index_field(SEED_MEMBER(decoder.num_layers))},
      {"decoder.heads", index_field(SEED_MEMBER(decoder.num_heads))},
      {"decoder.ffn_dim", index_field(SEED_MEMBER(decoder.ffn_dim))},
      {"decoder.seed", index_field(SEED_MEMBER(decoder.seed))},
      {"decoder.mode",
       {[](ExperimentConfig& c, const std::string&, std::string_view v) { c.mode = parse_generation_mode(v); },
        [](const ExperimentConfig& c) { return std::string(generation_mode_name(c.mode)); }}},
      {"model.variant",
       {[](ExperimentConfig& c, const std::string&, std::string_view v) { c.variant = parse_variant(v); },
        [](const ExperimentConfig& c) { return std::string(variant_name(c.variant)); }}},
      {"train.lr", real_field(SEED_MEMBER(train.lr))},
      {"train.beta1", real_field(SEED_MEMBER(train.beta1))},
      {"train.beta2", real_field(SEED_MEMBER(train.beta2))},
      {"train.eps", real_field(SEED_MEMBER(train.eps))},
      {"train.batch_size", index_field(SEED_MEMBER(train.batch_size))},
      {"train.max_epochs", index_field(SEED_MEMBER(train.max_epochs))},
      {"train.patience", index_field(SEED_MEMBER(train.patience))},
      {"train.seed", index_field(SEED_MEMBER(train.seed))},
      {"eval.denormalized", bool_field(SEED_MEMBER(eval_denormalized))},
      {"eval.threads", index_field(SEED_MEMBER(eval_threads))},
      {"report.timing", bool_field(SEED_MEMBER(report_timing))},
  };
  return table;
}

#undef SEED_MEMBER

}  // namespace

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  const auto need = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  const auto collect = [&](const auto& check) {
    try {
      check();
    } catch (const ConfigError& e) {
      problems.emplace_back(e.what());
    }
  };
  need(window >= 1, "window.L must be >= 1");
  need(horizon >= 1, "window.H must be >= 1");
  need(stride >= 1, "window.stride must be >= 1");
  need(eval_stride >= 1, "window.eval_stride must be >= 1");
  collect([&] { split.validate(); });
  collect([&] {
    EncoderConfig e = encoder;
    e.window = window;
    e.num_vars = std::max<Index>(encoder.num_vars, 1);
    if (variant == Variant::no_encoder) e.num_layers = 0;
    e.validate();
  });
  collect([&] { patch.validate(window); });
  need(patch.d_lm == decoder.d_lm, "patch width must equal decoder.d_lm");
  collect([&] { decoder.validate(); });
  need(reprog.num_prototypes >= 1, "reprog.K must be >= 1");
  need(reprog.task_len >= 1, "reprog.task_len must be >= 1");
  need(!reprog.tasks.empty(), "reprog.tasks must name at least one task");
  need(reprog.tasks.empty() || reprog.tasks.front() == TaskId::forecast,
       "reprog.tasks must start with forecast");
  need(train.lr >= 0.0, "train.lr must be >= 0");
  need(train.beta1 >= 0.0 && train.beta1 < 1.0, "train.beta1 must lie in [0, 1)");
  need(train.beta2 >= 0.0 && train.beta2 < 1.0, "train.beta2 must lie in [0, 1)");
  need(train.eps > 0.0, "train.eps must be > 0");
  need(train.batch_size >= 1, "train.batch_size must be >= 1");
  need(train.max_epochs >= 1, "train.max_epochs must be >= 1");
  need(train.patience >= 1, "train.patience must be >= 1");
  need(eval_threads >= 1, "eval.threads must be >= 1");
  if (problems.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& p : problems) msg += "\n  - " + p;
  throw ConfigError(msg);
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(*this) + "\n";
  return out;
}

std::string ExperimentConfig::dataset_label() const {
  if (!data_name.empty()) return data_name;
  if (!data_path.empty()) return std::filesystem::path(data_path).stem().string();
  return "dataset";
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  ExperimentConfig config;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != body.npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == body.npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
    if (it == table.end()) {
      throw ConfigError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    if (auto [pos, inserted] = seen.emplace(key, number); !inserted) {
      throw ConfigError("config line " + std::to_string(number) + ": '" + key + "' already set on line " +
                        std::to_string(pos->second));
    }
    it->second.set(config, key, value);
  }
  config.patch.d_lm = config.decoder.d_lm;
  config.encoder.window = config.window;
  const auto resolve = [&](std::string& p) {
    if (!p.empty() && !base_dir.empty() && std::filesystem::path(p).is_relative()) {
      p = (base_dir / p).lexically_normal().string();
    }
  };
  resolve(config.data_path);
  resolve(config.reprog.template_path);
  return config;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.parent_path());
}

}  // namespace seed
