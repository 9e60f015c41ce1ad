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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "seed/parameter.hpp"

namespace seed {

/**
 * Binary checkpoint container. All integers and floats little-endian.
 *
 *   "SEEDCKPT"                      8 bytes
 *   version                         u32 (currently 1)
 *   parameter count                 u64
 *   per parameter:
 *     name length, name             u32, UTF-8 bytes
 *     rank, extents                 u32, rank x u64
 *     frozen                        u8 (0 or 1)
 *   payloads                        f64 values, manifest order, row-major
 *   metadata length, metadata       u64, UTF-8 bytes (experiment config,
 *                                   normalization statistics)
 */
struct CheckpointEntry {
  std::string name;
  Shape shape;
  bool frozen = false;
  Vector values;
};

struct Checkpoint {
  std::vector<CheckpointEntry> entries;
  std::string metadata;
};

inline constexpr char kCheckpointMagic[8] = {'S', 'E', 'E', 'D', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

Checkpoint capture(const ParameterSet& params, std::string metadata = {});
/// Copies values into `params`. Names, order, shapes and frozen flags must
/// match exactly.
void apply(const Checkpoint& ckpt, ParameterSet& params);

}  // namespace seed
