// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slam/model/array.hpp"
#include "slam/model/config.hpp"

namespace slam::model {

struct Checkpoint {
  ModelConfig config;
  NamedArrays parameters;
  std::uint64_t training_step = 0;
  std::optional<NamedArrays> optimizer_state;
  std::string provenance;

  bool operator==(const Checkpoint&) const = default;
};

struct ParamSpec {
  std::string name;
  std::vector<std::size_t> shape;
};

// Every parameter the architecture declares for `config`, in a fixed order.
std::vector<ParamSpec> parameter_specs(const ModelConfig& config);

// Checks that the checkpoint holds exactly the declared parameters with the
// declared shapes. Throws FormatError otherwise.
void validate_checkpoint(const Checkpoint& ckpt);

// Storage precision of arrays in the checkpoint file. Values are always held
// as doubles in memory; kFloat32 narrows on write.
enum class DType : std::uint8_t { kFloat32 = 1, kFloat64 = 2 };

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt,
                      DType dtype = DType::kFloat64);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt,
                     DType dtype = DType::kFloat64);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Keyed-text form of a config ("key=value" lines); used inside the
// checkpoint header and by the recipe loader.
std::string serialize_config(const ModelConfig& config);
ModelConfig parse_config(const std::string& text);

}  // namespace slam::model
