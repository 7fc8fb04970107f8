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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cie/corpus.hpp"
#include "cie/miner.hpp"

namespace cie {

// Per class, ascending indices into store.of_class(q) of the itemsets
// contained in the instance.
using ClassMatches = std::vector<std::vector<std::size_t>>;

// The instance must be encoded in the store's vocabulary.
ClassMatches match_itemsets(std::span<const ItemId> instance,
                            const ConfidentItemsetStore& store);

// Sum of the matched itemsets' confidences, in index order.
double confidence_score(std::span<const std::size_t> matched, ClassId q,
                        const ConfidentItemsetStore& store);

// Ranking key of one class for one instance. A class with a higher score
// wins; ties go to the larger summed class_support, then to the
// lexicographically smaller label.
struct ClassScore {
  ClassId label = 0;
  double score = 0.0;
  double support = 0.0;
};

bool outranks(const ClassScore& a, const ClassScore& b,
              const std::vector<std::string>& labels);

struct ClassEvidence {
  ClassScore score;
  std::vector<std::size_t> itemsets;  // indices into store.of_class(label)
};

struct InstanceExplanation {
  // Classes with at least one match, best first.
  std::vector<ClassEvidence> ranked;
  // Empty when nothing matched (abstention).
  std::optional<ClassId> approximated;
};

InstanceExplanation explain_instance(std::span<const ItemId> instance,
                                     const ConfidentItemsetStore& store);

// Re-encodes an instance from another vocabulary into the store's one.
// Items the store has never seen cannot match and are dropped; tabular
// items naming a feature outside `known_features` (when non-empty) are a
// schema mismatch and throw LoadError.
ItemIds encode_for_store(const ItemList& items, const ConfidentItemsetStore& store,
                         const std::vector<std::string>& known_features = {});

}  // namespace cie
