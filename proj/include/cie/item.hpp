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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cie {

enum class ItemKind { kTabular, kToken };

// kLt only appears as the open-below first range of a real-valued feature.
enum class Operator { kEq, kLe, kGe, kLt, kInRange };

// An atomic predicate about an instance: a <feature, operator, value> triple
// for tabular data or a single token for text. Items compare by their
// canonical rendering, e.g. "<age, <=, 30>", "<hours-per-week, in, [46, 60]>",
// "<workclass, =, Private>" or "<where>".
class Item {
 public:
  static Item categorical(std::string feature, std::string value);
  static Item at_most(std::string feature, double bound, bool integral);
  static Item at_least(std::string feature, double bound, bool integral);
  static Item below(std::string feature, double bound, bool integral);
  // Requires lo <= hi. `hi_closed` selects "[lo, hi]" over "[lo, hi)".
  static Item in_range(std::string feature, double lo, double hi,
                       bool hi_closed, bool integral);
  static Item token(std::string text);

  ItemKind kind() const { return kind_; }
  Operator op() const { return op_; }
  const std::string& feature() const { return feature_; }
  // Category for kEq, token text for kToken.
  const std::string& value() const { return value_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool hi_closed() const { return hi_closed_; }
  bool integral() const { return integral_; }

  // True when a numeric value falls inside this item's range.
  bool contains(double v) const;

  const std::string& text() const { return text_; }

  friend bool operator==(const Item& a, const Item& b) {
    return a.text_ == b.text_;
  }
  friend auto operator<=>(const Item& a, const Item& b) {
    return a.text_ <=> b.text_;
  }

 private:
  Item() = default;
  void render();

  ItemKind kind_ = ItemKind::kToken;
  Operator op_ = Operator::kEq;
  std::string feature_;
  std::string value_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  bool hi_closed_ = true;
  bool integral_ = false;
  std::string text_;
};

// Inverse of Item::text(). Throws std::invalid_argument on malformed input.
Item parse_item(std::string_view text);

// Shortest round-trip decimal rendering ("60", "0.5", "-1e-07").
std::string format_number(double v);

// A set of distinct items in canonical (rendering) order.
using ItemList = std::vector<Item>;

// Sorts by rendering and drops duplicates.
void canonicalize(ItemList& items);

using ItemId = std::uint32_t;
// Sorted ascending, distinct. Because vocabulary ids follow rendering order,
// id order is canonical item order.
using ItemIds = std::vector<ItemId>;

// Immutable, rendering-sorted dictionary of items. Every dataset and store
// that exchange ItemIds must share one vocabulary.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<Item> items);

  // Collects the distinct items of every list.
  static std::shared_ptr<const Vocabulary> build(
      std::span<const ItemList> lists);

  std::size_t size() const { return items_.size(); }
  const Item& item(ItemId id) const { return items_[id]; }
  const std::vector<Item>& items() const { return items_; }

  std::optional<ItemId> find(std::string_view text) const;
  // Throws std::out_of_range when an item is missing.
  ItemIds encode(const ItemList& items) const;
  ItemList decode(std::span<const ItemId> ids) const;

  // "<a>, <b>" in canonical order.
  std::string render(std::span<const ItemId> ids) const;

 private:
  std::vector<Item> items_;
};

}  // namespace cie
