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

// Per-class confident itemset mining.
//
// An itemset is confident for class q when its confidence
//
//     Count(ci, C_q) / Count(ci)
//
// reaches min_conf and every subset is confident too. Mining proceeds level
// by level: confident 1-itemsets first, then candidates of size K built by
// joining two confident (K-1)-itemsets that share their first K-2 items,
// kept when all their (K-1)-subsets are confident and their own confidence
// passes the threshold. It stops at max_K or when a level adds nothing.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cie/corpus.hpp"
#include "cie/item.hpp"

namespace cie {

enum class ConfidenceVariant {
  // P(C_q | ci) = Count(ci, C_q) / Count(ci), in [0, 1].
  kRule,
  // P(ci | C_q) / P(ci); unbounded, kept for comparison only.
  kLift,
};

struct MiningConfig {
  double min_conf = 0.7;
  int max_k = 3;
  // Floor on Count(ci, C_q); values below 1 behave as 1.
  int min_class_count = 1;
  ConfidenceVariant variant = ConfidenceVariant::kRule;

  void validate() const;
};

struct ConfidentItemset {
  ItemIds items;
  ClassId label = 0;
  double confidence = 0.0;
  double class_support = 0.0;
  double overall_support = 0.0;
  std::size_t count = 0;        // Count(ci)
  std::size_t class_count = 0;  // Count(ci, C_q)

  std::size_t size() const { return items.size(); }
};

// Per-class lists of itemsets over one vocabulary, each list in canonical
// order (size, then lexicographic).
class ConfidentItemsetStore {
 public:
  ConfidentItemsetStore(std::shared_ptr<const Vocabulary> vocabulary,
                        std::vector<std::string> classes,
                        std::vector<std::vector<ConfidentItemset>> per_class);

  std::size_t num_classes() const { return classes_.size(); }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<ConfidentItemset>& of_class(ClassId q) const {
    return per_class_.at(q);
  }
  std::size_t total_size() const;

  const Vocabulary& vocabulary() const { return *vocabulary_; }
  const std::shared_ptr<const Vocabulary>& shared_vocabulary() const {
    return vocabulary_;
  }

  // Indices of the itemsets of class q whose first item is `item`, ascending.
  std::span<const std::uint32_t> starting_with(ClassId q, ItemId item) const;

  // A store holding, per class, only the listed indices (ascending order
  // preserved).
  ConfidentItemsetStore select(
      const std::vector<std::vector<std::size_t>>& indices) const;

 private:
  std::shared_ptr<const Vocabulary> vocabulary_;
  std::vector<std::string> classes_;
  std::vector<std::vector<ConfidentItemset>> per_class_;
  // Per class: CSR index from first item to itemset positions.
  std::vector<std::vector<std::uint32_t>> first_offsets_;
  std::vector<std::vector<std::uint32_t>> first_entries_;
};

// Canonical itemset order: shorter first, then lexicographic by item id.
bool canonical_less(const ItemIds& a, const ItemIds& b);

std::size_t count_occurrences(std::span<const ItemId> itemset,
                              const LabeledDataset& dataset);
std::size_t count_occurrences(std::span<const ItemId> itemset, ClassId q,
                              const LabeledDataset& dataset);

// Throws UndefinedMeasureError when the itemset never occurs.
double confidence(std::span<const ItemId> itemset, ClassId q,
                  const LabeledDataset& dataset,
                  ConfidenceVariant variant = ConfidenceVariant::kRule);

struct Supports {
  double overall = 0.0;  // Count(ci) / M
  double within_class = 0.0;  // Count(ci, C_q) / M_q
};

Supports supports(std::span<const ItemId> itemset, ClassId q,
                  const LabeledDataset& dataset);

// Builds a fully populated record for any itemset occurring in class q.
ConfidentItemset describe_itemset(ItemIds itemset, ClassId q,
                                  const LabeledDataset& dataset,
                                  ConfidenceVariant variant = ConfidenceVariant::kRule);

// Classes are mined independently; `threads` > 1 runs them concurrently and
// gives the same store.
ConfidentItemsetStore mine_confident_itemsets(const LabeledDataset& dataset,
                                              const MiningConfig& config,
                                              int threads = 1);

// Classical Apriori keyed on class support, for the frequent-itemset
// baseline. Only itemsets occurring in class q are listed for q.
ConfidentItemsetStore mine_frequent_itemsets(const LabeledDataset& dataset,
                                             double min_support, int max_k,
                                             int threads = 1);

}  // namespace cie
