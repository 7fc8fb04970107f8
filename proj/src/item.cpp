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

#include "cie/item.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace cie {

namespace {

constexpr std::string_view kSep = ", ";

std::string format_bound(double v, bool integral) {
  if (integral) return std::to_string(static_cast<long long>(v));
  return format_number(v);
}

double parse_bound(std::string_view s, bool* integral) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad numeric bound '" + std::string(s) + "'");
  }
  *integral = s.find_first_of(".eEn") == std::string_view::npos;
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Item Item::categorical(std::string feature, std::string value) {
  Item item;
  item.kind_ = ItemKind::kTabular;
  item.op_ = Operator::kEq;
  item.feature_ = std::move(feature);
  item.value_ = std::move(value);
  item.render();
  return item;
}

Item Item::at_most(std::string feature, double bound, bool integral) {
  Item item;
  item.kind_ = ItemKind::kTabular;
  item.op_ = Operator::kLe;
  item.feature_ = std::move(feature);
  item.lo_ = -HUGE_VAL;
  item.hi_ = bound;
  item.integral_ = integral;
  item.render();
  return item;
}

Item Item::at_least(std::string feature, double bound, bool integral) {
  Item item;
  item.kind_ = ItemKind::kTabular;
  item.op_ = Operator::kGe;
  item.feature_ = std::move(feature);
  item.lo_ = bound;
  item.hi_ = HUGE_VAL;
  item.integral_ = integral;
  item.render();
  return item;
}

Item Item::below(std::string feature, double bound, bool integral) {
  Item item;
  item.kind_ = ItemKind::kTabular;
  item.op_ = Operator::kLt;
  item.feature_ = std::move(feature);
  item.lo_ = -HUGE_VAL;
  item.hi_ = bound;
  item.hi_closed_ = false;
  item.integral_ = integral;
  item.render();
  return item;
}

Item Item::in_range(std::string feature, double lo, double hi, bool hi_closed,
                    bool integral) {
  if (!(lo <= hi)) {
    throw std::invalid_argument("range [" + format_number(lo) + ", " +
                                format_number(hi) + "] has lo > hi");
  }
  Item item;
  item.kind_ = ItemKind::kTabular;
  item.op_ = Operator::kInRange;
  item.feature_ = std::move(feature);
  item.lo_ = lo;
  item.hi_ = hi;
  item.hi_closed_ = hi_closed;
  item.integral_ = integral;
  item.render();
  return item;
}

Item Item::token(std::string text) {
  Item item;
  item.kind_ = ItemKind::kToken;
  item.value_ = std::move(text);
  item.render();
  return item;
}

bool Item::contains(double v) const {
  if (kind_ != ItemKind::kTabular || op_ == Operator::kEq) return false;
  if (v < lo_) return false;
  return hi_closed_ ? v <= hi_ : v < hi_;
}

void Item::render() {
  if (kind_ == ItemKind::kToken) {
    text_ = "<" + value_ + ">";
    return;
  }
  std::string out = "<" + feature_ + ", ";
  switch (op_) {
    case Operator::kEq:
      out += "=, " + value_;
      break;
    case Operator::kLe:
      out += "<=, " + format_bound(hi_, integral_);
      break;
    case Operator::kGe:
      out += ">=, " + format_bound(lo_, integral_);
      break;
    case Operator::kLt:
      out += "<, " + format_bound(hi_, integral_);
      break;
    case Operator::kInRange:
      out += "in, [" + format_bound(lo_, integral_) + ", " +
             format_bound(hi_, integral_) + (hi_closed_ ? "]" : ")");
      break;
  }
  text_ = out + ">";
}

Item parse_item(std::string_view text) {
  if (text.size() < 3 || text.front() != '<' || text.back() != '>') {
    throw std::invalid_argument("item must look like <...>: '" +
                                std::string(text) + "'");
  }
  std::string_view inner = text.substr(1, text.size() - 2);
  auto first = inner.find(kSep);
  if (first == std::string_view::npos) return Item::token(std::string(inner));

  std::string feature(inner.substr(0, first));
  std::string_view rest = inner.substr(first + kSep.size());
  auto second = rest.find(kSep);
  if (second == std::string_view::npos) {
    throw std::invalid_argument("missing value in '" + std::string(text) + "'");
  }
  std::string_view op = rest.substr(0, second);
  std::string_view value = rest.substr(second + kSep.size());

  if (op == "=") return Item::categorical(feature, std::string(value));
  bool integral = false;
  if (op == "<=") return Item::at_most(feature, parse_bound(value, &integral), integral);
  if (op == ">=") return Item::at_least(feature, parse_bound(value, &integral), integral);
  if (op == "<") return Item::below(feature, parse_bound(value, &integral), integral);
  if (op == "in") {
    if (value.size() < 5 || value.front() != '[' ||
        (value.back() != ']' && value.back() != ')')) {
      throw std::invalid_argument("bad range in '" + std::string(text) + "'");
    }
    bool closed = value.back() == ']';
    std::string_view body = value.substr(1, value.size() - 2);
    auto comma = body.find(kSep);
    if (comma == std::string_view::npos) {
      throw std::invalid_argument("bad range in '" + std::string(text) + "'");
    }
    bool lo_int = false;
    bool hi_int = false;
    double lo = parse_bound(body.substr(0, comma), &lo_int);
    double hi = parse_bound(body.substr(comma + kSep.size()), &hi_int);
    return Item::in_range(feature, lo, hi, closed, lo_int && hi_int && closed);
  }
  throw std::invalid_argument("unknown operator '" + std::string(op) + "' in '" +
                              std::string(text) + "'");
}

void canonicalize(ItemList& items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
}

Vocabulary::Vocabulary(std::vector<Item> items) : items_(std::move(items)) {
  canonicalize(items_);
}

std::shared_ptr<const Vocabulary> Vocabulary::build(
    std::span<const ItemList> lists) {
  std::vector<Item> all;
  for (const auto& list : lists) all.insert(all.end(), list.begin(), list.end());
  return std::make_shared<const Vocabulary>(std::move(all));
}

std::optional<ItemId> Vocabulary::find(std::string_view text) const {
  auto it = std::lower_bound(
      items_.begin(), items_.end(), text,
      [](const Item& item, std::string_view t) { return item.text() < t; });
  if (it == items_.end() || it->text() != text) return std::nullopt;
  return static_cast<ItemId>(it - items_.begin());
}

ItemIds Vocabulary::encode(const ItemList& items) const {
  ItemIds ids;
  ids.reserve(items.size());
  for (const auto& item : items) {
    auto id = find(item.text());
    if (!id) throw std::out_of_range("item " + item.text() + " not in vocabulary");
    ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

ItemList Vocabulary::decode(std::span<const ItemId> ids) const {
  ItemList out;
  out.reserve(ids.size());
  for (ItemId id : ids) out.push_back(items_.at(id));
  return out;
}

std::string Vocabulary::render(std::span<const ItemId> ids) const {
  std::string out;
  for (ItemId id : ids) {
    if (!out.empty()) out += ", ";
    out += items_.at(id).text();
  }
  return out;
}

}  // namespace cie
