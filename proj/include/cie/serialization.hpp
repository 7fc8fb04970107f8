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

// JSON, CSV and fixed-width text forms of stores, explanations and reports.
// Key order is fixed so equal inputs serialize to equal bytes.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cie/class_explainer.hpp"
#include "cie/evaluator.hpp"
#include "cie/instance_explainer.hpp"
#include "cie/miner.hpp"
#include "json.hpp"

namespace cie {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

// Provenance stamped into every output file.
struct RunStamp {
  std::string tool_version = kToolVersion;
  std::string config_hash;
};

struct StoreInfo {
  std::string kind = "confident";  // or "frequent"
  std::vector<std::string> features;
  std::vector<std::size_t> class_counts;
  std::size_t num_instances = 0;
  Json mining = Json::object();
};

StoreInfo describe_store_source(const LabeledDataset& dataset, const MiningConfig& config,
                                const std::vector<std::string>& features = {});

Json store_to_json(const ConfidentItemsetStore& store, const StoreInfo& info,
                   const RunStamp& stamp);

struct LoadedStore {
  ConfidentItemsetStore store;
  StoreInfo info;
  RunStamp stamp;
};

// Accepts the full form written above or a bare {classes, itemsets} object;
// missing statistics default to 0. `extra_items` join the vocabulary so
// instances can be encoded alongside the stored itemsets. Throws LoadError.
LoadedStore store_from_json(const Json& json, const ItemList& extra_items = {});
LoadedStore read_store(const std::filesystem::path& path, const ItemList& extra_items = {});

// Per class: Itemset | Confidence | Class_support, fixed width.
std::string store_summary(const ConfidentItemsetStore& store, const RunStamp& stamp);

// One JSON object per explained instance. At most 1 + `alternatives`
// classes are listed, best first.
Json instance_explanation_json(std::size_t instance_id,
                               const std::optional<std::string>& predicted,
                               const InstanceExplanation& explanation,
                               const ConfidentItemsetStore& store, std::size_t alternatives,
                               const RunStamp& stamp);

// Side-by-side columns, approximated class on the left.
std::string instance_explanation_text(std::size_t instance_id,
                                      const std::optional<std::string>& predicted,
                                      const InstanceExplanation& explanation,
                                      const ConfidentItemsetStore& store,
                                      std::size_t alternatives);

Json class_explanations_json(const std::vector<ClassExplanation>& explanations,
                             const ConfidentItemsetStore& store,
                             const ObjectiveConfig& config, const RunStamp& stamp);

Json report_json(const EvaluationReport& report, const RunStamp& stamp);

// One row per method and K.
std::string report_csv(const EvaluationReport& report, const RunStamp& stamp);

// Writes via a temporary sibling and a rename, so readers never see a
// partial file. Throws LoadError on I/O failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// Pretty-printed JSON followed by a newline.
std::string dump(const Json& json);

}  // namespace cie
