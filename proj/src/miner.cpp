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

#include "cie/miner.hpp"

#include <algorithm>
#include <bit>
#include <functional>

#include "cie/error.hpp"
#include "cie/parallel.hpp"

namespace cie {

namespace {

using Word = std::uint64_t;

// Instance bitsets (tid-sets) for every vocabulary item and every class.
class OccurrenceIndex {
 public:
  explicit OccurrenceIndex(const LabeledDataset& dataset)
      : words_((dataset.size() + 63) / 64),
        items_(dataset.vocabulary().size() * words_, 0),
        classes_(dataset.num_classes() * words_, 0) {
    for (std::size_t m = 0; m < dataset.size(); ++m) {
      const Word bit = Word{1} << (m % 64);
      for (ItemId id : dataset.instance(m)) items_[id * words_ + m / 64] |= bit;
      classes_[dataset.prediction(m) * words_ + m / 64] |= bit;
    }
  }

  std::size_t words() const { return words_; }
  const Word* item(ItemId id) const { return items_.data() + id * words_; }
  const Word* cls(ClassId q) const { return classes_.data() + q * words_; }

 private:
  std::size_t words_;
  std::vector<Word> items_;
  std::vector<Word> classes_;
};

std::size_t popcount(const Word* a, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += std::popcount(a[i]);
  return c;
}

std::size_t popcount_and(const Word* a, const Word* b, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += std::popcount(a[i] & b[i]);
  return c;
}

struct Node {
  ItemIds items;
  std::vector<Word> tids;
  std::size_t count = 0;
  std::size_t class_count = 0;
};

// Decides whether a candidate with the given raw counts is kept.
using KeepFn = std::function<bool(std::size_t count, std::size_t class_count)>;

ConfidentItemset make_record(const Node& node, ClassId q,
                             const LabeledDataset& dataset,
                             ConfidenceVariant variant) {
  ConfidentItemset ci;
  ci.items = node.items;
  ci.label = q;
  ci.count = node.count;
  ci.class_count = node.class_count;
  const double m = static_cast<double>(dataset.size());
  const double mq = static_cast<double>(dataset.class_count(q));
  const double c = static_cast<double>(node.count);
  const double cq = static_cast<double>(node.class_count);
  ci.overall_support = c / m;
  ci.class_support = cq / mq;
  ci.confidence = variant == ConfidenceVariant::kRule ? cq / c : (cq / mq) / (c / m);
  return ci;
}

bool prefix_equal(const ItemIds& a, const ItemIds& b) {
  return std::equal(a.begin(), a.end() - 1, b.begin());
}

std::vector<ConfidentItemset> mine_class(const OccurrenceIndex& index,
                                         const LabeledDataset& dataset, ClassId q,
                                         int max_k, std::size_t floor,
                                         ConfidenceVariant variant,
                                         const KeepFn& keep) {
  std::vector<ConfidentItemset> out;
  const std::size_t words = index.words();
  const Word* mask = index.cls(q);

  std::vector<Node> level;
  for (ItemId id = 0; id < dataset.vocabulary().size(); ++id) {
    const Word* tids = index.item(id);
    std::size_t cq = popcount_and(tids, mask, words);
    if (cq < floor) continue;
    std::size_t c = popcount(tids, words);
    if (!keep(c, cq)) continue;
    level.push_back(Node{{id}, std::vector<Word>(tids, tids + words), c, cq});
  }
  for (const auto& node : level) out.push_back(make_record(node, q, dataset, variant));

  for (int k = 2; k <= max_k && level.size() > 1; ++k) {
    std::vector<Node> next;
    std::vector<ItemIds> keys;
    keys.reserve(level.size());
    for (const auto& node : level) keys.push_back(node.items);
    ItemIds subset;
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        if (!prefix_equal(level[i].items, level[j].items)) break;
        ItemIds candidate = level[i].items;
        candidate.push_back(level[j].items.back());

        // Dropping either of the two last items gives a parent; the other
        // (K-1)-subsets must be confident as well.
        bool closed = true;
        for (int drop = 0; drop + 2 < k && closed; ++drop) {
          subset.clear();
          for (int p = 0; p < k; ++p) {
            if (p != drop) subset.push_back(candidate[p]);
          }
          closed = std::binary_search(keys.begin(), keys.end(), subset);
        }
        if (!closed) continue;

        Node node;
        node.items = std::move(candidate);
        node.tids.resize(words);
        for (std::size_t w = 0; w < words; ++w) {
          node.tids[w] = level[i].tids[w] & level[j].tids[w];
        }
        node.class_count = popcount_and(node.tids.data(), mask, words);
        if (node.class_count < floor) continue;
        node.count = popcount(node.tids.data(), words);
        if (!keep(node.count, node.class_count)) continue;
        next.push_back(std::move(node));
      }
    }
    for (const auto& node : next) out.push_back(make_record(node, q, dataset, variant));
    level = std::move(next);
  }
  return out;
}

ConfidentItemsetStore mine_all(const LabeledDataset& dataset, int max_k,
                               std::size_t floor, ConfidenceVariant variant,
                               int threads,
                               const std::function<KeepFn(ClassId)>& keep_for) {
  OccurrenceIndex index(dataset);
  std::vector<std::vector<ConfidentItemset>> per_class(dataset.num_classes());
  parallel_for(per_class.size(), threads, [&](std::size_t q) {
    const auto label = static_cast<ClassId>(q);
    if (dataset.class_count(label) == 0) return;
    per_class[q] = mine_class(index, dataset, label, max_k, floor, variant,
                              keep_for(label));
  });
  return ConfidentItemsetStore(dataset.shared_vocabulary(), dataset.classes(),
                               std::move(per_class));
}

}  // namespace

void MiningConfig::validate() const {
  if (!(min_conf >= 0.0 && min_conf <= 1.0)) {
    throw ConfigError("min_conf must lie in [0, 1]");
  }
  if (max_k < 1) throw ConfigError("max_K must be at least 1");
  if (min_class_count < 0) throw ConfigError("min_class_count must be non-negative");
}

bool canonical_less(const ItemIds& a, const ItemIds& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

ConfidentItemsetStore::ConfidentItemsetStore(
    std::shared_ptr<const Vocabulary> vocabulary, std::vector<std::string> classes,
    std::vector<std::vector<ConfidentItemset>> per_class)
    : vocabulary_(std::move(vocabulary)),
      classes_(std::move(classes)),
      per_class_(std::move(per_class)) {
  per_class_.resize(classes_.size());
  const std::size_t v = vocabulary_->size();
  first_offsets_.resize(classes_.size());
  first_entries_.resize(classes_.size());
  for (std::size_t q = 0; q < classes_.size(); ++q) {
    auto& list = per_class_[q];
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
      return canonical_less(a.items, b.items);
    });
    auto& offsets = first_offsets_[q];
    auto& entries = first_entries_[q];
    offsets.assign(v + 1, 0);
    for (const auto& ci : list) {
      if (ci.items.empty()) throw Error("stored itemsets must be non-empty");
      if (ci.items.front() >= v) throw Error("stored item outside vocabulary");
      ++offsets[ci.items.front() + 1];
    }
    for (std::size_t i = 0; i < v; ++i) offsets[i + 1] += offsets[i];
    entries.resize(list.size());
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < list.size(); ++i) {
      entries[fill[list[i].items.front()]++] = static_cast<std::uint32_t>(i);
    }
  }
}

std::size_t ConfidentItemsetStore::total_size() const {
  std::size_t n = 0;
  for (const auto& list : per_class_) n += list.size();
  return n;
}

std::span<const std::uint32_t> ConfidentItemsetStore::starting_with(
    ClassId q, ItemId item) const {
  const auto& offsets = first_offsets_.at(q);
  if (item + 1 >= offsets.size()) return {};
  const auto& entries = first_entries_[q];
  return std::span<const std::uint32_t>(entries.data() + offsets[item],
                                        offsets[item + 1] - offsets[item]);
}

ConfidentItemsetStore ConfidentItemsetStore::select(
    const std::vector<std::vector<std::size_t>>& indices) const {
  std::vector<std::vector<ConfidentItemset>> chosen(classes_.size());
  for (std::size_t q = 0; q < classes_.size() && q < indices.size(); ++q) {
    for (std::size_t i : indices[q]) chosen[q].push_back(per_class_[q].at(i));
  }
  return ConfidentItemsetStore(vocabulary_, classes_, std::move(chosen));
}

std::size_t count_occurrences(std::span<const ItemId> itemset,
                              const LabeledDataset& dataset) {
  std::size_t n = 0;
  for (const auto& inst : dataset.instances()) {
    if (std::includes(inst.begin(), inst.end(), itemset.begin(), itemset.end())) ++n;
  }
  return n;
}

std::size_t count_occurrences(std::span<const ItemId> itemset, ClassId q,
                              const LabeledDataset& dataset) {
  std::size_t n = 0;
  for (std::size_t m = 0; m < dataset.size(); ++m) {
    if (dataset.prediction(m) != q) continue;
    auto inst = dataset.instance(m);
    if (std::includes(inst.begin(), inst.end(), itemset.begin(), itemset.end())) ++n;
  }
  return n;
}

double confidence(std::span<const ItemId> itemset, ClassId q,
                  const LabeledDataset& dataset, ConfidenceVariant variant) {
  const std::size_t c = count_occurrences(itemset, dataset);
  if (c == 0) {
    throw UndefinedMeasureError("confidence undefined: itemset " +
                                dataset.vocabulary().render(itemset) +
                                " never occurs");
  }
  const double cq = static_cast<double>(count_occurrences(itemset, q, dataset));
  if (variant == ConfidenceVariant::kRule) return cq / static_cast<double>(c);
  return (cq / static_cast<double>(dataset.class_count(q))) /
         (static_cast<double>(c) / static_cast<double>(dataset.size()));
}

Supports supports(std::span<const ItemId> itemset, ClassId q,
                  const LabeledDataset& dataset) {
  const std::size_t c = count_occurrences(itemset, dataset);
  if (c == 0) {
    throw UndefinedMeasureError("supports undefined: itemset " +
                                dataset.vocabulary().render(itemset) +
                                " never occurs");
  }
  if (dataset.class_count(q) == 0) {
    throw UndefinedMeasureError("class '" + dataset.class_label(q) + "' is empty");
  }
  return Supports{
      static_cast<double>(c) / static_cast<double>(dataset.size()),
      static_cast<double>(count_occurrences(itemset, q, dataset)) /
          static_cast<double>(dataset.class_count(q))};
}

ConfidentItemset describe_itemset(ItemIds itemset, ClassId q,
                                  const LabeledDataset& dataset,
                                  ConfidenceVariant variant) {
  ConfidentItemset ci;
  ci.confidence = confidence(itemset, q, dataset, variant);
  Supports s = supports(itemset, q, dataset);
  ci.overall_support = s.overall;
  ci.class_support = s.within_class;
  ci.count = count_occurrences(itemset, dataset);
  ci.class_count = count_occurrences(itemset, q, dataset);
  ci.items = std::move(itemset);
  ci.label = q;
  return ci;
}

ConfidentItemsetStore mine_confident_itemsets(const LabeledDataset& dataset,
                                              const MiningConfig& config,
                                              int threads) {
  config.validate();
  if (dataset.empty()) throw LoadError("cannot mine an empty dataset");
  const std::size_t floor =
      static_cast<std::size_t>(std::max(config.min_class_count, 1));
  const double m = static_cast<double>(dataset.size());
  return mine_all(dataset, config.max_k, floor, config.variant, threads,
                  [&](ClassId q) -> KeepFn {
                    const double mq = static_cast<double>(dataset.class_count(q));
                    if (config.variant == ConfidenceVariant::kRule) {
                      return [&config](std::size_t c, std::size_t cq) {
                        return static_cast<double>(cq) / static_cast<double>(c) >=
                               config.min_conf;
                      };
                    }
                    return [&config, m, mq](std::size_t c, std::size_t cq) {
                      return (static_cast<double>(cq) / mq) /
                                 (static_cast<double>(c) / m) >=
                             config.min_conf;
                    };
                  });
}

ConfidentItemsetStore mine_frequent_itemsets(const LabeledDataset& dataset,
                                             double min_support, int max_k,
                                             int threads) {
  if (!(min_support >= 0.0 && min_support <= 1.0)) {
    throw ConfigError("min_support must lie in [0, 1]");
  }
  if (max_k < 1) throw ConfigError("max_K must be at least 1");
  if (dataset.empty()) throw LoadError("cannot mine an empty dataset");
  return mine_all(dataset, max_k, 1, ConfidenceVariant::kRule, threads,
                  [&](ClassId q) -> KeepFn {
                    const double mq = static_cast<double>(dataset.class_count(q));
                    return [min_support, mq](std::size_t, std::size_t cq) {
                      return static_cast<double>(cq) / mq >= min_support;
                    };
                  });
}

}  // namespace cie
