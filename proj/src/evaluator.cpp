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

#include "cie/evaluator.hpp"

#include <algorithm>
#include <numeric>

#include "cie/error.hpp"
#include "cie/instance_explainer.hpp"
#include "cie/parallel.hpp"
#include "cie/random.hpp"

namespace cie {

namespace {

// Instance m in the store's vocabulary.
class Reencoder {
 public:
  Reencoder(const LabeledDataset& dataset, const ConfidentItemsetStore& store)
      : dataset_(dataset),
        store_(store),
        same_(&dataset.vocabulary() == &store.vocabulary()) {}

  std::span<const ItemId> operator()(std::size_t m) {
    if (same_) return dataset_.instance(m);
    buffer_ = encode_for_store(dataset_.vocabulary().decode(dataset_.instance(m)), store_);
    return buffer_;
  }

 private:
  const LabeledDataset& dataset_;
  const ConfidentItemsetStore& store_;
  bool same_;
  ItemIds buffer_;
};

void check_classes(const LabeledDataset& dataset, const ConfidentItemsetStore& store) {
  if (dataset.classes() != store.classes()) {
    throw ConfigError("dataset and store disagree on the class list");
  }
}

}  // namespace

FidelityResult measure_fidelity(const LabeledDataset& dataset,
                                const ConfidentItemsetStore& store) {
  if (dataset.empty()) {
    throw UndefinedMeasureError("fidelity is undefined on an empty dataset");
  }
  check_classes(dataset, store);
  Reencoder encode(dataset, store);
  std::size_t hits = 0;
  std::size_t abstained = 0;
  for (std::size_t m = 0; m < dataset.size(); ++m) {
    const auto e = explain_instance(encode(m), store);
    if (!e.approximated) {
      ++abstained;
    } else if (*e.approximated == dataset.prediction(m)) {
      ++hits;
    }
  }
  const double n = static_cast<double>(dataset.size());
  return {static_cast<double>(hits) / n, static_cast<double>(abstained) / n};
}

double instance_fidelity(const LabeledDataset& dataset,
                         const ConfidentItemsetStore& store) {
  return measure_fidelity(dataset, store).fidelity;
}

ConfidentItemsetStore explanation_store(std::span<const ClassExplanation> explanations,
                                        const ConfidentItemsetStore& store) {
  std::vector<std::vector<std::size_t>> keep(store.num_classes());
  for (const auto& ce : explanations) {
    if (ce.label >= store.num_classes()) throw Error("explanation label out of range");
    keep[ce.label].insert(keep[ce.label].end(), ce.itemsets.begin(), ce.itemsets.end());
  }
  return store.select(keep);
}

double classwise_fidelity(const LabeledDataset& dataset,
                          const ConfidentItemsetStore& explanations) {
  check_classes(dataset, explanations);
  std::size_t included = 0;
  for (ClassId q = 0; q < dataset.num_classes(); ++q) {
    if (dataset.class_count(q) == 0) {
      warn("class '" + dataset.class_label(q) +
           "' has no instances and is left out of the class-wise fidelity");
    } else {
      included += dataset.class_count(q);
    }
  }
  if (included == 0) {
    throw UndefinedMeasureError("class-wise fidelity is undefined on an empty dataset");
  }
  // With weights M_q / M the mean of per-class hit rates is the overall
  // hit rate.
  Reencoder encode(dataset, explanations);
  std::size_t hits = 0;
  for (std::size_t m = 0; m < dataset.size(); ++m) {
    const auto e = explain_instance(encode(m), explanations);
    if (e.approximated && *e.approximated == dataset.prediction(m)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(included);
}

double classwise_fidelity(const LabeledDataset& dataset,
                          std::span<const ClassExplanation> explanations,
                          const ConfidentItemsetStore& store) {
  return classwise_fidelity(dataset, explanation_store(explanations, store));
}

std::vector<ClassExplanation> explain_classes_lenient(const LabeledDataset& dataset,
                                                      const ConfidentItemsetStore& store,
                                                      const ObjectiveConfig& config,
                                                      int threads) {
  std::vector<ClassExplanation> out(store.num_classes());
  std::vector<std::string> failures(store.num_classes());
  parallel_for(out.size(), threads, [&](std::size_t i) {
    const auto q = static_cast<ClassId>(i);
    out[i].label = q;
    if (store.of_class(q).empty() || dataset.class_count(q) == 0) return;
    try {
      out[i] = optimize_class_explanation(q, dataset, store, config);
    } catch (const ConstraintError& e) {
      failures[i] = e.what();
    }
  });
  for (const auto& f : failures) {
    if (!f.empty()) warn(f + "; the class explanation is left empty");
  }
  return out;
}

std::vector<CurvePoint> descriptive_accuracy_curve(const LabeledDataset& train,
                                                   const LabeledDataset& evaluation,
                                                   const ConfidentItemsetStore& store,
                                                   const ObjectiveConfig& base,
                                                   std::span<const int> k_values,
                                                   int threads) {
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] < 0 || (i > 0 && k_values[i] <= k_values[i - 1])) {
      throw ConfigError("K values must be non-negative and strictly increasing");
    }
  }
  std::vector<CurvePoint> curve;
  for (int k : k_values) {
    CurvePoint p{k, 0.0};
    if (k > 0) {
      ObjectiveConfig config = base;
      config.theta1 = k;
      config.theta2 = k * base.theta3;
      const auto ces = explain_classes_lenient(train, store, config, threads);
      p.accuracy = classwise_fidelity(evaluation, ces, store);
    }
    curve.push_back(p);
  }
  return curve;
}

std::vector<GlobalItemset> build_global_explanation(
    const ConfidentItemsetStore& explanations, const LabeledDataset& dataset,
    std::size_t k) {
  Reencoder encode(dataset, explanations);
  std::vector<GlobalItemset> all;
  for (ClassId q = 0; q < explanations.num_classes(); ++q) {
    for (std::size_t i = 0; i < explanations.of_class(q).size(); ++i) {
      all.push_back({q, i, 0, 0, 0.0});
    }
  }
  // Per record: which candidates cover it.
  std::vector<std::size_t> offset(explanations.num_classes() + 1, 0);
  for (ClassId q = 0; q < explanations.num_classes(); ++q) {
    offset[q + 1] = offset[q] + explanations.of_class(q).size();
  }
  for (std::size_t m = 0; m < dataset.size(); ++m) {
    const ClassMatches matches = match_itemsets(encode(m), explanations);
    std::size_t total = 0;
    std::size_t only = 0;
    for (ClassId q = 0; q < matches.size(); ++q) {
      total += matches[q].size();
      for (std::size_t i : matches[q]) {
        only = offset[q] + i;
        ++all[only].coverage;
      }
    }
    if (total == 1) ++all[only].unique_coverage;
  }
  std::size_t max_cov = 0;
  for (const auto& g : all) max_cov = std::max(max_cov, g.coverage);
  for (auto& g : all) {
    if (g.coverage == 0) continue;
    g.score = 0.5 * static_cast<double>(g.coverage) / static_cast<double>(max_cov) +
              0.5 * static_cast<double>(g.unique_coverage) /
                  static_cast<double>(g.coverage);
  }
  std::vector<std::string> renderings;
  renderings.reserve(all.size());
  for (const auto& g : all) {
    renderings.push_back(
        explanations.vocabulary().render(explanations.of_class(g.label)[g.index].items));
  }
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ga = all[a];
    const auto& gb = all[b];
    if (ga.score != gb.score) return ga.score > gb.score;
    const double ca = explanations.of_class(ga.label)[ga.index].confidence;
    const double cb = explanations.of_class(gb.label)[gb.index].confidence;
    if (ca != cb) return ca > cb;
    if (renderings[a] != renderings[b]) return renderings[a] < renderings[b];
    return explanations.classes()[ga.label] < explanations.classes()[gb.label];
  });
  std::vector<GlobalItemset> out;
  for (std::size_t i = 0; i < order.size() && i < k; ++i) out.push_back(all[order[i]]);
  return out;
}

ConfidentItemsetStore global_store(const ConfidentItemsetStore& explanations,
                                   std::span<const GlobalItemset> ranked) {
  std::vector<std::vector<std::size_t>> keep(explanations.num_classes());
  for (const auto& g : ranked) keep[g.label].push_back(g.index);
  for (auto& k : keep) std::sort(k.begin(), k.end());
  return explanations.select(keep);
}

ConfidentItemsetStore greedy_baseline(const ConfidentItemsetStore& store, std::size_t k,
                                      bool warn_short) {
  std::vector<std::vector<std::size_t>> keep(store.num_classes());
  for (ClassId q = 0; q < store.num_classes(); ++q) {
    const auto& list = store.of_class(q);
    std::vector<std::size_t> singles;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].size() == 1) singles.push_back(i);
    }
    // Canonical order puts equal-length itemsets in item-id order, which is
    // rendering order, so a stable sort settles the last tie.
    std::stable_sort(singles.begin(), singles.end(), [&](std::size_t a, std::size_t b) {
      if (list[a].confidence != list[b].confidence) {
        return list[a].confidence > list[b].confidence;
      }
      return list[a].class_support > list[b].class_support;
    });
    if (singles.size() < k && warn_short) {
      warn("greedy baseline: class '" + store.classes()[q] + "' has only " +
           std::to_string(singles.size()) + " 1-itemsets (K = " + std::to_string(k) +
           ")");
    }
    singles.resize(std::min(singles.size(), k));
    std::sort(singles.begin(), singles.end());
    keep[q] = std::move(singles);
  }
  return store.select(keep);
}

ConfidentItemsetStore random_baseline(const LabeledDataset& dataset, std::size_t k,
                                      std::uint64_t seed, bool warn_short) {
  SeededRng rng(seed);
  std::vector<std::vector<ConfidentItemset>> per_class(dataset.num_classes());
  for (ClassId q = 0; q < dataset.num_classes(); ++q) {
    std::vector<char> seen(dataset.vocabulary().size(), 0);
    for (std::size_t m = 0; m < dataset.size(); ++m) {
      if (dataset.prediction(m) != q) continue;
      for (ItemId id : dataset.instance(m)) seen[id] = 1;
    }
    std::vector<ItemId> pool;
    for (ItemId id = 0; id < seen.size(); ++id) {
      if (seen[id]) pool.push_back(id);
    }
    if (pool.size() < k && warn_short) {
      warn("random baseline: class '" + dataset.class_label(q) + "' has only " +
           std::to_string(pool.size()) + " items (K = " + std::to_string(k) + ")");
    }
    const std::size_t take = std::min(pool.size(), k);
    // Partial Fisher-Yates: the first `take` slots are a uniform draw.
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + rng.below(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    std::sort(pool.begin(), pool.end());
    for (ItemId id : pool) per_class[q].push_back(describe_itemset({id}, q, dataset));
  }
  return ConfidentItemsetStore(dataset.shared_vocabulary(), dataset.classes(),
                               std::move(per_class));
}

ConfidentItemsetStore frequent_baseline(const ConfidentItemsetStore& frequent,
                                        std::size_t k, bool warn_short) {
  std::vector<std::vector<std::size_t>> keep(frequent.num_classes());
  for (ClassId q = 0; q < frequent.num_classes(); ++q) {
    const auto& list = frequent.of_class(q);
    std::vector<std::size_t> order(list.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (list[a].class_support != list[b].class_support) {
        return list[a].class_support > list[b].class_support;
      }
      return list[a].confidence > list[b].confidence;
    });
    if (order.size() < k && warn_short) {
      warn("frequent baseline: class '" + frequent.classes()[q] + "' has only " +
           std::to_string(order.size()) + " frequent itemsets (K = " +
           std::to_string(k) + ")");
    }
    order.resize(std::min(order.size(), k));
    std::sort(order.begin(), order.end());
    keep[q] = std::move(order);
  }
  return frequent.select(keep);
}

void EvaluationOptions::validate() const {
  static const std::vector<std::string> known{"cie", "greedy", "random", "frequent"};
  if (methods.empty()) throw ConfigError("no evaluation methods selected");
  for (const auto& m : methods) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw ConfigError("unknown evaluation method '" + m +
                        "' (expected cie, greedy, random or frequent)");
    }
    if (std::count(methods.begin(), methods.end(), m) > 1) {
      throw ConfigError("evaluation method '" + m + "' listed twice");
    }
  }
  if (k_grid.empty()) throw ConfigError("the K grid is empty");
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (k_grid[i] < 0 || (i > 0 && k_grid[i] <= k_grid[i - 1])) {
      throw ConfigError("K grid values must be non-negative and strictly increasing");
    }
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("split must lie strictly between 0 and 1");
  }
  if (!(min_support > 0.0 && min_support <= 1.0)) {
    throw ConfigError("min_support must lie in (0, 1]");
  }
}

namespace {

GlobalPoint global_point(const ConfidentItemsetStore& explained,
                         const LabeledDataset& evaluation, int k) {
  GlobalPoint g{k, 0, 0, 0.0};
  const auto ranked =
      build_global_explanation(explained, evaluation, static_cast<std::size_t>(k));
  const ConfidentItemsetStore chosen = global_store(explained, ranked);
  g.size = chosen.total_size();
  for (ClassId q = 0; q < chosen.num_classes(); ++q) {
    for (const auto& ci : chosen.of_class(q)) g.num_items += ci.size();
  }
  g.accuracy = instance_fidelity(evaluation, chosen);
  return g;
}

// Fills the curve, global points and single-number fidelities of a method
// whose explanation for a given K is produced by `select`.
template <typename SelectFn>
void measure_selection_method(MethodReport& report, const LabeledDataset& evaluation,
                              const EvaluationOptions& options, SelectFn&& select) {
  const ConfidentItemsetStore base = select(options.baseline_k, true);
  const FidelityResult f = measure_fidelity(evaluation, base);
  report.instance_fidelity = f.fidelity;
  report.abstention_rate = f.abstention_rate;
  report.classwise_fidelity = classwise_fidelity(evaluation, base);
  for (int k : options.k_grid) {
    CurvePoint p{k, 0.0};
    if (k > 0) p.accuracy = classwise_fidelity(evaluation, select(k, false));
    report.curve.push_back(p);
  }
  for (int k : options.k_grid) report.global.push_back(global_point(base, evaluation, k));
}

}  // namespace

EvaluationReport evaluate(const LabeledDataset& dataset, const std::string& name,
                          const MiningConfig& mining, const ObjectiveConfig& objective,
                          const EvaluationOptions& options) {
  options.validate();
  mining.validate();
  objective.validate(mining.max_k);
  auto [train, evaluation] = split_dataset(dataset, options.train_fraction, options.seed);
  if (train.empty() || evaluation.empty()) {
    throw ConfigError("the split leaves an empty training or evaluation part");
  }

  EvaluationReport report;
  report.dataset = name;
  report.seed = options.seed;
  report.train_fraction = options.train_fraction;
  report.train_size = train.size();
  report.evaluation_size = evaluation.size();

  const ConfidentItemsetStore store =
      mine_confident_itemsets(train, mining, options.threads);

  for (const auto& method : options.methods) {
    MethodReport r;
    r.method = method;
    if (method == "cie") {
      const FidelityResult f = measure_fidelity(evaluation, store);
      r.instance_fidelity = f.fidelity;
      r.abstention_rate = f.abstention_rate;
      const auto ces = explain_classes_lenient(train, store, objective, options.threads);
      const ConfidentItemsetStore explained = explanation_store(ces, store);
      r.classwise_fidelity = classwise_fidelity(evaluation, explained);
      r.curve = descriptive_accuracy_curve(train, evaluation, store, objective,
                                           options.k_grid, options.threads);
      for (int k : options.k_grid) r.global.push_back(global_point(explained, evaluation, k));
    } else if (method == "greedy") {
      measure_selection_method(r, evaluation, options, [&](std::size_t k, bool loud) {
        return greedy_baseline(store, k, loud);
      });
    } else if (method == "random") {
      measure_selection_method(r, evaluation, options, [&](std::size_t k, bool loud) {
        return random_baseline(train, k, options.seed, loud);
      });
    } else {
      const ConfidentItemsetStore frequent =
          mine_frequent_itemsets(train, options.min_support, mining.max_k, options.threads);
      measure_selection_method(r, evaluation, options, [&](std::size_t k, bool loud) {
        return frequent_baseline(frequent, k, loud);
      });
    }
    report.methods.push_back(std::move(r));
  }
  return report;
}

}  // namespace cie
