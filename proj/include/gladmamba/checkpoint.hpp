// Copyright 2026 The gladmamba Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GLADMAMBA_CHECKPOINT_HPP
#define GLADMAMBA_CHECKPOINT_HPP

#include "gladmamba/layers.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gladmamba {

/// Flat named-tensor container plus string metadata.
///
/// On disk: the magic "GLADCKPT", a u32 version, the metadata pairs and the
/// tensors, all little-endian with doubles stored as raw IEEE-754 bits, so a
/// save/load cycle is bitwise exact.
struct Checkpoint {
  std::map<std::string, std::string> metadata;
  std::vector<std::pair<std::string, Matrix>> tensors;

  bool operator==(const Checkpoint& other) const;
};

/// Copies every parameter of `store` in creation order.
Checkpoint capture_params(const ParamStore& store, std::map<std::string, std::string> metadata = {});

/// Overwrites the values of `store` from `ckpt`. Names and shapes must match
/// one-to-one; throws FileFormatError otherwise.
void restore_params(ParamStore& store, const Checkpoint& ckpt);

/// Atomic (temp file then rename).
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gladmamba

#endif  // GLADMAMBA_CHECKPOINT_HPP
