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

#include "cie/instance_explainer.hpp"

#include <algorithm>

#include "cie/error.hpp"

namespace cie {

ClassMatches match_itemsets(std::span<const ItemId> instance,
                            const ConfidentItemsetStore& store) {
  ClassMatches matches(store.num_classes());
  for (ClassId q = 0; q < store.num_classes(); ++q) {
    const auto& list = store.of_class(q);
    auto& out = matches[q];
    for (auto pos = instance.begin(); pos != instance.end(); ++pos) {
      for (std::uint32_t idx : store.starting_with(q, *pos)) {
        const ItemIds& items = list[idx].items;
        if (std::includes(pos, instance.end(), items.begin(), items.end())) {
          out.push_back(idx);
        }
      }
    }
    std::sort(out.begin(), out.end());
  }
  return matches;
}

double confidence_score(std::span<const std::size_t> matched, ClassId q,
                        const ConfidentItemsetStore& store) {
  const auto& list = store.of_class(q);
  double score = 0.0;
  for (std::size_t i : matched) score += list.at(i).confidence;
  return score;
}

bool outranks(const ClassScore& a, const ClassScore& b,
              const std::vector<std::string>& labels) {
  if (a.score != b.score) return a.score > b.score;
  if (a.support != b.support) return a.support > b.support;
  return labels[a.label] < labels[b.label];
}

InstanceExplanation explain_instance(std::span<const ItemId> instance,
                                     const ConfidentItemsetStore& store) {
  ClassMatches matches = match_itemsets(instance, store);
  InstanceExplanation out;
  for (ClassId q = 0; q < store.num_classes(); ++q) {
    if (matches[q].empty()) continue;
    ClassEvidence ev;
    ev.score.label = q;
    const auto& list = store.of_class(q);
    for (std::size_t i : matches[q]) {
      ev.score.score += list[i].confidence;
      ev.score.support += list[i].class_support;
    }
    ev.itemsets = std::move(matches[q]);
    out.ranked.push_back(std::move(ev));
  }
  std::sort(out.ranked.begin(), out.ranked.end(),
            [&](const ClassEvidence& a, const ClassEvidence& b) {
              return outranks(a.score, b.score, store.classes());
            });
  if (!out.ranked.empty()) out.approximated = out.ranked.front().score.label;
  return out;
}

ItemIds encode_for_store(const ItemList& items, const ConfidentItemsetStore& store,
                         const std::vector<std::string>& known_features) {
  ItemIds ids;
  for (const auto& item : items) {
    if (item.kind() == ItemKind::kTabular && !known_features.empty() &&
        std::find(known_features.begin(), known_features.end(), item.feature()) ==
            known_features.end()) {
      throw LoadError("schema mismatch: unknown feature in " + item.text());
    }
    if (auto id = store.vocabulary().find(item.text())) ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace cie
