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

// Loading tabular and text corpora and encoding every instance as a set of
// items, plus the immutable dataset that pairs item-sets with black-box
// predictions.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cie/item.hpp"

namespace cie {

inline constexpr std::string_view kMissingCategory = "<missing>";

enum class ColumnType { kCategorical, kNumeric };

struct ColumnSpec {
  std::string name;
  ColumnType type = ColumnType::kCategorical;
};

struct TabularSchema {
  // Feature columns, in the order items are produced. CSV columns not listed
  // here (and not the prediction column) are ignored.
  std::vector<ColumnSpec> columns;
  std::optional<std::string> prediction_column;
  // Cells equal to one of these are missing; categorical ones become
  // <feature, =, <missing>>, numeric ones are a load error.
  std::vector<std::string> missing_values{"", "?"};
  char delimiter = ',';
};

// Cut points for one numeric feature.
//
// Integer features (edges e1 < ... < en) produce
//   <= e1, [e1+1, e2], ..., [e(n-1)+1, en], >= en+1
// so printed ranges are inclusive on both ends. Real-valued features produce
//   < e1, [e1, e2), ..., [e(n-1), en), >= en.
// Optional domain bounds reject values outside [min, max].
struct NumericBinning {
  std::vector<double> edges;
  bool integral = true;
  std::optional<double> min;
  std::optional<double> max;

  // Throws ConfigError on unsorted/empty edges or non-integer cuts of an
  // integer feature.
  void validate(const std::string& feature) const;
  // Exactly one range item per value. Throws LoadError when the value lies
  // outside the domain or is fractional for an integer feature.
  Item encode(const std::string& feature, double value) const;
  // Every range item, first to last.
  std::vector<Item> ranges(const std::string& feature) const;
};

using BinningConfig = std::map<std::string, NumericBinning>;

struct TabularData {
  std::vector<std::string> features;
  std::vector<ItemList> instances;
  // Filled only when the schema names a prediction column.
  std::vector<std::string> predictions;
};

// Reads a headed CSV (RFC 4180 quoting, surrounding blanks trimmed). Each
// record yields exactly one item per schema column. Errors name the 1-based
// data row and the column.
TabularData load_tabular(std::istream& csv, const TabularSchema& schema,
                         const BinningConfig& binning);

struct TextOptions {
  bool case_fold = true;
};

// Whitespace split, surrounding punctuation stripped, ASCII case folding
// unless disabled. Duplicates collapse.
ItemList tokenize(std::string_view text, const TextOptions& options);

struct TextData {
  std::vector<ItemList> instances;
  std::vector<std::string> predictions;
  std::vector<std::optional<std::string>> gold;
};

// JSON Lines with string fields `text`, `prediction` and optional `gold`.
// Blank lines are skipped; an empty text yields an empty item-set and a
// warning.
TextData load_text(std::istream& jsonl, const TextOptions& options);

// Sidecar prediction file: one label per non-empty line.
std::vector<std::string> read_labels(std::istream& in);

using ClassId = std::uint32_t;

// Instances as item-id sets plus the black-box label of each. Immutable;
// copies share the vocabulary.
class LabeledDataset {
 public:
  LabeledDataset(std::shared_ptr<const Vocabulary> vocabulary,
                 std::vector<ItemIds> instances,
                 std::vector<ClassId> predictions,
                 std::vector<std::string> classes,
                 std::vector<std::size_t> source_rows = {});

  std::size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }
  std::size_t num_classes() const { return classes_.size(); }

  const std::vector<std::string>& classes() const { return classes_; }
  const std::string& class_label(ClassId q) const { return classes_.at(q); }
  std::optional<ClassId> find_class(std::string_view label) const;
  std::size_t class_count(ClassId q) const { return class_counts_.at(q); }

  std::span<const ItemId> instance(std::size_t m) const { return instances_[m]; }
  const std::vector<ItemIds>& instances() const { return instances_; }
  ClassId prediction(std::size_t m) const { return predictions_[m]; }
  const std::vector<ClassId>& predictions() const { return predictions_; }
  // Row index in the file this instance was loaded from.
  std::size_t source_row(std::size_t m) const { return source_rows_[m]; }

  const Vocabulary& vocabulary() const { return *vocabulary_; }
  const std::shared_ptr<const Vocabulary>& shared_vocabulary() const {
    return vocabulary_;
  }

  // Rows in the given order; classes and vocabulary are kept.
  LabeledDataset subset(std::span<const std::size_t> rows) const;

 private:
  std::shared_ptr<const Vocabulary> vocabulary_;
  std::vector<ItemIds> instances_;
  std::vector<ClassId> predictions_;
  std::vector<std::string> classes_;
  std::vector<std::size_t> class_counts_;
  std::vector<std::size_t> source_rows_;
};

// Pairs item-sets with labels. Classes are taken from `classes` when given
// (unknown labels are an error), otherwise inferred in first-occurrence
// order. Without a vocabulary one is built from the instances.
LabeledDataset attach_predictions(
    std::span<const ItemList> instances, std::span<const std::string> labels,
    const std::optional<std::vector<std::string>>& classes = std::nullopt,
    std::shared_ptr<const Vocabulary> vocabulary = nullptr);

// Deterministic train/evaluation split (portable shuffle, so identical on
// every platform).
std::pair<LabeledDataset, LabeledDataset> split_dataset(
    const LabeledDataset& dataset, double train_fraction, std::uint64_t seed);

}  // namespace cie
