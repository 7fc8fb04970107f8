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

#include "cie/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "cie/error.hpp"
#include "cie/random.hpp"

namespace cie {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Reads one CSV record; returns false at end of input.
bool read_record(std::istream& in, char delim, std::vector<std::string>* cells) {
  cells->clear();
  int c = in.get();
  if (c == EOF) return false;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (; c != EOF; c = in.get()) {
    any = true;
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          cell += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
    } else if (ch == delim) {
      cells->push_back(std::move(cell));
      cell.clear();
    } else if (ch == '\n') {
      break;
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  if (!any) return false;
  cells->push_back(std::move(cell));
  return true;
}

bool is_blank_record(const std::vector<std::string>& cells) {
  return cells.size() == 1 && trim(cells[0]).empty();
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

}  // namespace

void NumericBinning::validate(const std::string& feature) const {
  if (edges.empty()) {
    throw ConfigError("binning for '" + feature + "' has no edges");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i])) {
      throw ConfigError("binning for '" + feature + "' has a non-finite edge");
    }
    if (integral && edges[i] != std::floor(edges[i])) {
      throw ConfigError("integer feature '" + feature +
                        "' has fractional edge " + format_number(edges[i]));
    }
    if (i > 0 && !(edges[i - 1] < edges[i])) {
      throw ConfigError("binning edges for '" + feature +
                        "' must be strictly increasing");
    }
  }
  if (min && max && *min > *max) {
    throw ConfigError("binning domain for '" + feature + "' has min > max");
  }
}

Item NumericBinning::encode(const std::string& feature, double value) const {
  if ((min && value < *min) || (max && value > *max)) {
    throw LoadError("value " + format_number(value) +
                    " outside declared bins of '" + feature + "'");
  }
  if (integral) {
    if (value != std::floor(value)) {
      throw LoadError("fractional value " + format_number(value) +
                      " for integer feature '" + feature + "'");
    }
    if (value <= edges.front()) return Item::at_most(feature, edges.front(), true);
    if (value > edges.back()) return Item::at_least(feature, edges.back() + 1, true);
    auto it = std::lower_bound(edges.begin(), edges.end(), value);
    return Item::in_range(feature, *(it - 1) + 1, *it, true, true);
  }
  if (value < edges.front()) return Item::below(feature, edges.front(), false);
  if (value >= edges.back()) return Item::at_least(feature, edges.back(), false);
  auto it = std::upper_bound(edges.begin(), edges.end(), value);
  return Item::in_range(feature, *(it - 1), *it, false, false);
}

std::vector<Item> NumericBinning::ranges(const std::string& feature) const {
  std::vector<Item> out;
  if (integral) {
    out.push_back(Item::at_most(feature, edges.front(), true));
    for (std::size_t i = 1; i < edges.size(); ++i) {
      out.push_back(Item::in_range(feature, edges[i - 1] + 1, edges[i], true, true));
    }
    out.push_back(Item::at_least(feature, edges.back() + 1, true));
  } else {
    out.push_back(Item::below(feature, edges.front(), false));
    for (std::size_t i = 1; i < edges.size(); ++i) {
      out.push_back(Item::in_range(feature, edges[i - 1], edges[i], false, false));
    }
    out.push_back(Item::at_least(feature, edges.back(), false));
  }
  return out;
}

TabularData load_tabular(std::istream& csv, const TabularSchema& schema,
                         const BinningConfig& binning) {
  std::vector<std::string> header;
  if (!read_record(csv, schema.delimiter, &header) || is_blank_record(header)) {
    throw LoadError("CSV input has no header row");
  }
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) {
    position.emplace(std::string(trim(header[i])), i);
  }

  TabularData data;
  std::vector<std::size_t> column_index;
  for (const auto& col : schema.columns) {
    if (col.name.find(", ") != std::string::npos) {
      throw ConfigError("feature name '" + col.name + "' must not contain \", \"");
    }
    auto it = position.find(col.name);
    if (it == position.end()) throw LoadError("missing column '" + col.name + "'");
    if (col.type == ColumnType::kNumeric) {
      auto b = binning.find(col.name);
      if (b == binning.end()) {
        throw ConfigError("numeric column '" + col.name + "' has no binning");
      }
      b->second.validate(col.name);
    }
    column_index.push_back(it->second);
    data.features.push_back(col.name);
  }
  std::optional<std::size_t> prediction_index;
  if (schema.prediction_column) {
    auto it = position.find(*schema.prediction_column);
    if (it == position.end()) {
      throw LoadError("missing prediction column '" + *schema.prediction_column + "'");
    }
    prediction_index = it->second;
  }

  auto is_missing = [&](std::string_view cell) {
    return std::find(schema.missing_values.begin(), schema.missing_values.end(),
                     cell) != schema.missing_values.end();
  };

  std::vector<std::string> cells;
  std::size_t row = 0;
  while (read_record(csv, schema.delimiter, &cells)) {
    if (is_blank_record(cells)) continue;
    ++row;
    if (cells.size() != header.size()) {
      throw LoadError("row " + std::to_string(row) + ": expected " +
                      std::to_string(header.size()) + " cells, got " +
                      std::to_string(cells.size()));
    }
    ItemList items;
    items.reserve(schema.columns.size());
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const ColumnSpec& col = schema.columns[c];
      std::string_view cell = trim(cells[column_index[c]]);
      if (col.type == ColumnType::kCategorical) {
        items.push_back(Item::categorical(
            col.name, is_missing(cell) ? std::string(kMissingCategory)
                                       : std::string(cell)));
        continue;
      }
      auto value = parse_double(cell);
      if (!value) {
        throw LoadError("row " + std::to_string(row) + ", column '" + col.name +
                        "': unparseable numeric cell '" + std::string(cell) + "'");
      }
      try {
        items.push_back(binning.at(col.name).encode(col.name, *value));
      } catch (const LoadError& e) {
        throw LoadError("row " + std::to_string(row) + ", column '" + col.name +
                        "': " + e.what());
      }
    }
    canonicalize(items);
    data.instances.push_back(std::move(items));
    if (prediction_index) {
      std::string label(trim(cells[*prediction_index]));
      if (label.empty()) {
        throw LoadError("row " + std::to_string(row) + ": empty prediction");
      }
      data.predictions.push_back(std::move(label));
    }
  }
  return data;
}

ItemList tokenize(std::string_view text, const TextOptions& options) {
  ItemList items;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view word = text.substr(start, i - start);
    while (!word.empty() && std::ispunct(static_cast<unsigned char>(word.front()))) {
      word.remove_prefix(1);
    }
    while (!word.empty() && std::ispunct(static_cast<unsigned char>(word.back()))) {
      word.remove_suffix(1);
    }
    if (word.empty()) continue;
    std::string token(word);
    if (options.case_fold) {
      for (char& ch : token) {
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      }
    }
    items.push_back(Item::token(std::move(token)));
  }
  canonicalize(items);
  return items;
}

TextData load_text(std::istream& jsonl, const TextOptions& options) {
  TextData data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(jsonl, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fail = [&](const std::string& why) {
      return LoadError("line " + std::to_string(line_no) + ": " + why);
    };
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw fail("malformed JSON");
    }
    if (!obj.is_object()) throw fail("expected a JSON object");
    auto text = obj.find("text");
    auto pred = obj.find("prediction");
    if (text == obj.end() || !text->is_string()) throw fail("missing string field 'text'");
    if (pred == obj.end() || !pred->is_string()) {
      throw fail("missing string field 'prediction'");
    }
    std::optional<std::string> gold;
    if (auto g = obj.find("gold"); g != obj.end()) {
      if (!g->is_string()) throw fail("field 'gold' must be a string");
      gold = g->get<std::string>();
    }
    ItemList items = tokenize(text->get<std::string>(), options);
    if (items.empty()) {
      warn("line " + std::to_string(line_no) + ": empty text, kept as an empty item-set");
    }
    data.instances.push_back(std::move(items));
    data.predictions.push_back(pred->get<std::string>());
    data.gold.push_back(std::move(gold));
  }
  return data;
}

std::vector<std::string> read_labels(std::istream& in) {
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view label = trim(line);
    if (!label.empty()) labels.emplace_back(label);
  }
  return labels;
}

LabeledDataset::LabeledDataset(std::shared_ptr<const Vocabulary> vocabulary,
                               std::vector<ItemIds> instances,
                               std::vector<ClassId> predictions,
                               std::vector<std::string> classes,
                               std::vector<std::size_t> source_rows)
    : vocabulary_(std::move(vocabulary)),
      instances_(std::move(instances)),
      predictions_(std::move(predictions)),
      classes_(std::move(classes)),
      class_counts_(classes_.size(), 0),
      source_rows_(std::move(source_rows)) {
  if (instances_.size() != predictions_.size()) {
    throw LoadError("dataset has " + std::to_string(instances_.size()) +
                    " instances but " + std::to_string(predictions_.size()) +
                    " predictions");
  }
  if (source_rows_.empty()) {
    source_rows_.resize(instances_.size());
    std::iota(source_rows_.begin(), source_rows_.end(), std::size_t{0});
  }
  for (ClassId p : predictions_) {
    if (p >= classes_.size()) throw LoadError("prediction outside class list");
    ++class_counts_[p];
  }
}

std::optional<ClassId> LabeledDataset::find_class(std::string_view label) const {
  for (std::size_t q = 0; q < classes_.size(); ++q) {
    if (classes_[q] == label) return static_cast<ClassId>(q);
  }
  return std::nullopt;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  std::vector<ItemIds> inst;
  std::vector<ClassId> pred;
  std::vector<std::size_t> src;
  inst.reserve(rows.size());
  for (std::size_t r : rows) {
    inst.push_back(instances_.at(r));
    pred.push_back(predictions_[r]);
    src.push_back(source_rows_[r]);
  }
  return LabeledDataset(vocabulary_, std::move(inst), std::move(pred), classes_,
                        std::move(src));
}

LabeledDataset attach_predictions(
    std::span<const ItemList> instances, std::span<const std::string> labels,
    const std::optional<std::vector<std::string>>& classes,
    std::shared_ptr<const Vocabulary> vocabulary) {
  if (instances.size() != labels.size()) {
    throw LoadError("length mismatch: " + std::to_string(instances.size()) +
                    " instances vs " + std::to_string(labels.size()) + " labels");
  }
  std::vector<std::string> class_list;
  if (classes) {
    class_list = *classes;
  } else {
    for (const auto& label : labels) {
      if (std::find(class_list.begin(), class_list.end(), label) == class_list.end()) {
        class_list.push_back(label);
      }
    }
  }
  std::unordered_map<std::string, ClassId> class_index;
  for (std::size_t q = 0; q < class_list.size(); ++q) {
    if (!class_index.emplace(class_list[q], static_cast<ClassId>(q)).second) {
      throw ConfigError("duplicate class '" + class_list[q] + "'");
    }
  }
  if (!vocabulary) vocabulary = Vocabulary::build(instances);

  std::vector<ItemIds> encoded;
  std::vector<ClassId> predictions;
  encoded.reserve(instances.size());
  for (std::size_t m = 0; m < instances.size(); ++m) {
    auto it = class_index.find(labels[m]);
    if (it == class_index.end()) {
      throw LoadError("label '" + labels[m] + "' at row " + std::to_string(m + 1) +
                      " is not in the class list");
    }
    predictions.push_back(it->second);
    try {
      encoded.push_back(vocabulary->encode(instances[m]));
    } catch (const std::out_of_range& e) {
      throw LoadError("row " + std::to_string(m + 1) + ": " + e.what());
    }
  }
  return LabeledDataset(std::move(vocabulary), std::move(encoded),
                        std::move(predictions), std::move(class_list));
}

std::pair<LabeledDataset, LabeledDataset> split_dataset(
    const LabeledDataset& dataset, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SeededRng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(dataset.size())));
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> eval(order.begin() + n_train, order.end());
  std::sort(train.begin(), train.end());
  std::sort(eval.begin(), eval.end());
  return {dataset.subset(train), dataset.subset(eval)};
}

}  // namespace cie
