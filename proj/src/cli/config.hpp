// Copyright 2026 The Authors.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cie/class_explainer.hpp"
#include "cie/corpus.hpp"
#include "cie/evaluator.hpp"
#include "cie/miner.hpp"
#include "cie/serialization.hpp"

namespace cie::cli {

enum class DataFormat { kCsv, kJsonl };

struct RunConfig {
  DataFormat format = DataFormat::kCsv;
  std::filesystem::path data;
  std::optional<std::filesystem::path> predictions;
  std::optional<std::filesystem::path> store;
  TabularSchema schema;
  BinningConfig binning;
  TextOptions text;
  std::optional<std::vector<std::string>> classes;
  MiningConfig mining;
  ObjectiveConfig objective;
  EvaluationOptions evaluation;
  std::size_t alternatives = 3;
  std::filesystem::path out_dir = ".";
  int threads = 1;

  // Throws ConfigError.
  void validate() const;
  // Everything that influences results. Thread count and output directory
  // are left out: they must not change any output byte.
  Json effective() const;
  // FNV-1a 64 of effective(), as 16 hex digits.
  std::string hash() const;
};

// Parses a config file. Relative paths are resolved against the file's
// directory; unknown keys are rejected.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const Json& json, const std::filesystem::path& base_dir);

// "5:50:5" (inclusive range) or "5,10,20".
std::vector<int> parse_k_grid(const std::string& text);
// Comma-separated, six non-negative numbers.
Weights parse_weights(const std::string& text);

}  // namespace cie::cli
