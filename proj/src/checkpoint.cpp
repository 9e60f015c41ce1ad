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

#include "seed/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "seed/errors.hpp"

namespace seed {

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw DataError("checkpoint truncated");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

std::string get_bytes(std::istream& in, std::uint64_t n) {
  std::string s(n, '\0');
  if (n && !in.read(s.data(), static_cast<std::streamsize>(n))) throw DataError("checkpoint truncated");
  return s;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint64_t>(out, ckpt.entries.size());
  for (const CheckpointEntry& e : ckpt.entries) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.shape.size()));
    for (Index extent : e.shape) put_le<std::uint64_t>(out, extent);
    put_le<std::uint8_t>(out, e.frozen ? 1 : 0);
  }
  for (const CheckpointEntry& e : ckpt.entries) {
    for (double v : e.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  put_le<std::uint64_t>(out, ckpt.metadata.size());
  out.write(ckpt.metadata.data(), static_cast<std::streamsize>(ckpt.metadata.size()));
  if (!out) throw DataError("checkpoint write failed");
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[sizeof(kCheckpointMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw DataError("not a checkpoint: bad magic");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  const auto count = get_le<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < count; ++i) {
    CheckpointEntry e;
    e.name = get_bytes(in, get_le<std::uint32_t>(in));
    const auto rank = get_le<std::uint32_t>(in);
    for (std::uint32_t r = 0; r < rank; ++r) e.shape.push_back(get_le<std::uint64_t>(in));
    const auto flag = get_le<std::uint8_t>(in);
    if (flag > 1) throw DataError("checkpoint: bad frozen flag for " + e.name);
    e.frozen = flag == 1;
    ckpt.entries.push_back(std::move(e));
  }
  for (CheckpointEntry& e : ckpt.entries) {
    e.values.resize(static_cast<Eigen::Index>(shape_numel(e.shape)));
    for (Eigen::Index k = 0; k < e.values.size(); ++k) {
      e.values[k] = std::bit_cast<double>(get_le<std::uint64_t>(in));
    }
  }
  ckpt.metadata = get_bytes(in, get_le<std::uint64_t>(in));
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

Checkpoint capture(const ParameterSet& params, std::string metadata) {
  Checkpoint ckpt;
  ckpt.metadata = std::move(metadata);
  for (const Parameter& p : params.items()) {
    ckpt.entries.push_back({p.name, p.tensor.shape(), p.frozen, p.tensor.values()});
  }
  return ckpt;
}

void apply(const Checkpoint& ckpt, ParameterSet& params) {
  if (ckpt.entries.size() != params.size()) {
    throw DataError("checkpoint holds " + std::to_string(ckpt.entries.size()) +
                    " parameters, model has " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const CheckpointEntry& e = ckpt.entries[i];
    Parameter& p = params.items()[i];
    if (e.name != p.name || e.shape != p.tensor.shape() || e.frozen != p.frozen) {
      throw DataError("checkpoint entry " + e.name + " " + shape_string(e.shape) +
                      " does not match model parameter " + p.name + " " +
                      shape_string(p.tensor.shape()));
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    params.items()[i].tensor.mutable_values() = ckpt.entries[i].values;
  }
}

}  // namespace seed
