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

#include "cie/class_explainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cie/error.hpp"
#include "cie/evaluator.hpp"
#include "cie/parallel.hpp"
#include "cie/random.hpp"

namespace cie {

namespace {

bool shares_item(const ItemIds& a, const ItemIds& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

std::vector<ItemIds> gather(std::span<const std::size_t> selection, ClassId q,
                            const ConfidentItemsetStore& store) {
  std::vector<ItemIds> out;
  out.reserve(selection.size());
  for (std::size_t i : selection) out.push_back(store.of_class(q).at(i).items);
  return out;
}

// Visits every size-r subset of [0, n) in lexicographic order until fn
// returns true.
template <typename Fn>
bool for_each_combination(std::size_t n, std::size_t r, Fn&& fn) {
  if (r > n) return false;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    if (fn(std::span<const std::size_t>(idx))) return true;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

void ObjectiveConfig::validate(int max_k) const {
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("objective weights must be finite and non-negative");
    }
  }
  if (theta1 < 1 || theta2 < 1 || theta3 < 1) {
    throw ConfigError("theta1, theta2 and theta3 must be positive");
  }
  if (max_k > 0 && theta3 > max_k) {
    throw ConfigError("theta3 (" + std::to_string(theta3) +
                      ") exceeds the mining max_K (" + std::to_string(max_k) + ")");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ConfigError("delta must be positive");
  }
  if (k < 1) throw ConfigError("constraint count k must be positive");
}

InterpretabilityMeasures interpretability_measures(std::span<const ItemIds> itemsets) {
  InterpretabilityMeasures m;
  m.size = itemsets.size();
  for (std::size_t b = 0; b < itemsets.size(); ++b) {
    m.num_items += itemsets[b].size();
    m.max_length = std::max(m.max_length, itemsets[b].size());
    for (std::size_t h = b + 1; h < itemsets.size(); ++h) {
      if (shares_item(itemsets[b], itemsets[h])) ++m.itemset_overlap;
    }
  }
  return m;
}

std::size_t class_coverage(std::span<const ItemIds> itemsets, ClassId q,
                           const LabeledDataset& dataset) {
  std::size_t covered = 0;
  for (std::size_t m = 0; m < dataset.size(); ++m) {
    if (dataset.prediction(m) != q) continue;
    auto inst = dataset.instance(m);
    for (const auto& ci : itemsets) {
      if (std::includes(inst.begin(), inst.end(), ci.begin(), ci.end())) {
        ++covered;
        break;
      }
    }
  }
  return covered;
}

double class_fidelity(std::span<const std::size_t> selection, ClassId q,
                      const LabeledDataset& dataset,
                      const ConfidentItemsetStore& store) {
  if (dataset.class_count(q) == 0) {
    throw UndefinedMeasureError("fidelity undefined: class '" +
                                dataset.class_label(q) + "' has no instances");
  }
  std::vector<std::vector<std::size_t>> keep(store.num_classes());
  for (ClassId c = 0; c < store.num_classes(); ++c) {
    if (c == q) {
      keep[c].assign(selection.begin(), selection.end());
    } else {
      keep[c].resize(store.of_class(c).size());
      std::iota(keep[c].begin(), keep[c].end(), std::size_t{0});
    }
  }
  const ConfidentItemsetStore restricted = store.select(keep);
  std::size_t hits = 0;
  for (std::size_t m = 0; m < dataset.size(); ++m) {
    if (dataset.prediction(m) != q) continue;
    auto e = explain_instance(dataset.instance(m), restricted);
    if (e.approximated && *e.approximated == q) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(dataset.class_count(q));
}

bool is_feasible(const InterpretabilityMeasures& m, const ObjectiveConfig& config) {
  return m.size <= static_cast<std::size_t>(config.theta1) &&
         m.num_items <= static_cast<std::size_t>(config.theta2) &&
         m.max_length <= static_cast<std::size_t>(config.theta3);
}

Rewards rewards(const ExplanationMetrics& metrics, std::size_t class_size,
                const ObjectiveConfig& config) {
  const auto& im = metrics.interpretability;
  if (!is_feasible(im, config)) {
    throw ConstraintError("rewards are undefined for an infeasible explanation");
  }
  const double t1 = config.theta1;
  const double t2 = config.theta2;
  const double t3 = config.theta3;
  const double pairs = t1 * (t1 - 1.0) / 2.0;
  Rewards r{};
  r[0] = metrics.fidelity;
  r[1] = (t1 - static_cast<double>(im.size)) / t1;
  r[2] = (t2 - static_cast<double>(im.num_items)) / t2;
  r[3] = (t3 - static_cast<double>(im.max_length)) / t3;
  // With theta1 = 1 no pair can exist and the overlap reward is maximal.
  r[4] = pairs > 0.0 ? (pairs - static_cast<double>(im.itemset_overlap)) / pairs : 1.0;
  r[5] = class_size > 0
             ? static_cast<double>(metrics.coverage) / static_cast<double>(class_size)
             : 0.0;
  return r;
}

double objective(const Rewards& r, const ObjectiveConfig& config) {
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) total += config.weights[i] * r[i];
  return total;
}

ExplanationMetrics explanation_metrics(std::span<const std::size_t> selection,
                                       ClassId q, const LabeledDataset& dataset,
                                       const ConfidentItemsetStore& store) {
  const std::vector<ItemIds> itemsets = gather(selection, q, store);
  ExplanationMetrics m;
  m.fidelity = class_fidelity(selection, q, dataset, store);
  m.interpretability = interpretability_measures(itemsets);
  m.coverage = class_coverage(itemsets, q, dataset);
  return m;
}

ClassObjective::ClassObjective(ClassId q, const LabeledDataset& dataset,
                               const ConfidentItemsetStore& store,
                               const ObjectiveConfig& config)
    : q_(q), store_(store), config_(config), class_size_(dataset.class_count(q)) {
  if (class_size_ == 0) {
    throw UndefinedMeasureError("class '" + dataset.class_label(q) +
                                "' has no instances");
  }
  const auto& list = store.of_class(q);
  items_.reserve(list.size());
  for (const auto& ci : list) {
    items_.push_back(&ci.items);
    renderings_.push_back(store.vocabulary().render(ci.items));
  }
  covered_.resize(list.size());

  std::uint32_t row = 0;
  for (std::size_t m = 0; m < dataset.size(); ++m) {
    if (dataset.prediction(m) != q) continue;
    const ClassMatches matches = match_itemsets(dataset.instance(m), store);
    for (std::size_t c : matches[q]) covered_[c].push_back(row);
    ClassScore best;
    bool found = false;
    for (ClassId other = 0; other < store.num_classes(); ++other) {
      if (other == q || matches[other].empty()) continue;
      ClassScore s{other, 0.0, 0.0};
      for (std::size_t i : matches[other]) {
        s.score += store.of_class(other)[i].confidence;
        s.support += store.of_class(other)[i].class_support;
      }
      if (!found || outranks(s, best, store.classes())) {
        best = s;
        found = true;
      }
    }
    competitor_.push_back(best);
    has_competitor_.push_back(found ? 1 : 0);
    ++row;
  }
  score_.assign(class_size_, 0.0);
  support_.assign(class_size_, 0.0);
  hits_.assign(class_size_, 0);
}

bool ClassObjective::feasible(std::span<const std::size_t> selection) const {
  if (selection.size() > static_cast<std::size_t>(config_.theta1)) return false;
  std::size_t total = 0;
  for (std::size_t c : selection) {
    const std::size_t len = items_[c]->size();
    if (len > static_cast<std::size_t>(config_.theta3)) return false;
    total += len;
  }
  return total <= static_cast<std::size_t>(config_.theta2);
}

ExplanationMetrics ClassObjective::metrics(std::span<const std::size_t> selection) const {
  const auto& list = store_.of_class(q_);
  touched_.clear();
  for (std::size_t c : selection) {
    const double conf = list[c].confidence;
    const double sup = list[c].class_support;
    for (std::uint32_t r : covered_[c]) {
      if (hits_[r]++ == 0) touched_.push_back(r);
      score_[r] += conf;
      support_[r] += sup;
    }
  }
  std::size_t wins = 0;
  for (std::uint32_t r : touched_) {
    const ClassScore mine{q_, score_[r], support_[r]};
    if (!has_competitor_[r] || outranks(mine, competitor_[r], store_.classes())) ++wins;
    score_[r] = 0.0;
    support_[r] = 0.0;
    hits_[r] = 0;
  }

  ExplanationMetrics m;
  m.fidelity = static_cast<double>(wins) / static_cast<double>(class_size_);
  m.coverage = touched_.size();
  auto& im = m.interpretability;
  im.size = selection.size();
  for (std::size_t b = 0; b < selection.size(); ++b) {
    const ItemIds& a = *items_[selection[b]];
    im.num_items += a.size();
    im.max_length = std::max(im.max_length, a.size());
    for (std::size_t h = b + 1; h < selection.size(); ++h) {
      if (shares_item(a, *items_[selection[h]])) ++im.itemset_overlap;
    }
  }
  return m;
}

double ClassObjective::value(std::span<const std::size_t> selection) const {
  return objective(rewards(metrics(selection), class_size_, config_), config_);
}

ClassExplanation optimize_class_explanation(ClassId q, const LabeledDataset& dataset,
                                            const ConfidentItemsetStore& store,
                                            const ObjectiveConfig& config) {
  config.validate();
  const ClassObjective f(q, dataset, store, config);
  if (f.candidates() == 0) {
    throw ConstraintError("class '" + dataset.class_label(q) +
                          "' has no confident itemsets to choose from");
  }

  struct RoundResult {
    std::vector<std::size_t> set;
    double value = 0.0;
  };
  std::vector<RoundResult> results;
  std::vector<SearchMove> trace;

  std::vector<std::size_t> ground(f.candidates());
  std::iota(ground.begin(), ground.end(), std::size_t{0});

  for (int round = 0; round <= config.k && !ground.empty(); ++round) {
    const double n = static_cast<double>(ground.size());
    const double factor = 1.0 + config.delta / (n * n * n * n);

    // Seed: the feasible singleton with the largest objective; ties go to
    // the lexicographically smallest rendering.
    std::optional<std::size_t> seed;
    double seed_value = 0.0;
    for (std::size_t c : ground) {
      const std::size_t one[] = {c};
      if (!f.feasible(one)) continue;
      const double v = f.value(one);
      if (!seed || v > seed_value ||
          (v == seed_value && f.rendering(c) < f.rendering(*seed))) {
        seed = c;
        seed_value = v;
      }
    }
    if (!seed) {
      if (round == 0) {
        throw ConstraintError("no feasible singleton for class '" +
                              dataset.class_label(q) + "' (theta1=" +
                              std::to_string(config.theta1) + ", theta2=" +
                              std::to_string(config.theta2) + ", theta3=" +
                              std::to_string(config.theta3) + ")");
      }
      break;
    }

    std::vector<std::size_t> current{*seed};
    double value = seed_value;
    trace.push_back({round, MoveKind::kSeed, 0.0, value, factor});

    auto improves = [&](double candidate) {
      return candidate > value && candidate >= factor * value;
    };

    std::vector<std::size_t> trial;
    while (true) {
      bool moved = false;

      for (std::size_t pos = 0; pos < current.size() && !moved; ++pos) {
        trial = current;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(pos));
        const double v = f.value(trial);
        if (improves(v)) {
          trace.push_back({round, MoveKind::kDelete, value, v, factor});
          current = trial;
          value = v;
          moved = true;
        }
      }
      if (moved) continue;

      // Swap in one outside element while dropping up to k members, fewest
      // drops first.
      const std::size_t max_drop =
          std::min(static_cast<std::size_t>(config.k), current.size());
      for (std::size_t drop = 0; drop <= max_drop && !moved; ++drop) {
        for (std::size_t b : ground) {
          if (std::binary_search(current.begin(), current.end(), b)) continue;
          moved = for_each_combination(
              current.size(), drop, [&](std::span<const std::size_t> removed) {
                trial.clear();
                std::size_t r = 0;
                for (std::size_t i = 0; i < current.size(); ++i) {
                  if (r < removed.size() && removed[r] == i) {
                    ++r;
                    continue;
                  }
                  trial.push_back(current[i]);
                }
                trial.insert(std::upper_bound(trial.begin(), trial.end(), b), b);
                if (!f.feasible(trial)) return false;
                const double v = f.value(trial);
                if (!improves(v)) return false;
                trace.push_back({round, MoveKind::kSwap, value, v, factor});
                current = trial;
                value = v;
                return true;
              });
          if (moved) break;
        }
      }
      if (!moved) break;
    }

    results.push_back({current, value});
    std::vector<std::size_t> rest;
    std::set_difference(ground.begin(), ground.end(), current.begin(), current.end(),
                        std::back_inserter(rest));
    ground = std::move(rest);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].value > results[best].value) best = i;
  }

  ClassExplanation out;
  out.label = q;
  out.itemsets = results[best].set;
  out.metrics = f.metrics(out.itemsets);
  out.rewards = rewards(out.metrics, dataset.class_count(q), config);
  out.objective = objective(out.rewards, config);
  out.trace = std::move(trace);
  return out;
}

std::vector<ClassExplanation> explain_classes(const LabeledDataset& dataset,
                                              const ConfidentItemsetStore& store,
                                              const ObjectiveConfig& config,
                                              int threads) {
  std::vector<ClassExplanation> out(store.num_classes());
  parallel_for(out.size(), threads, [&](std::size_t i) {
    const auto q = static_cast<ClassId>(i);
    if (store.of_class(q).empty() || dataset.class_count(q) == 0) {
      out[i].label = q;
      return;
    }
    out[i] = optimize_class_explanation(q, dataset, store, config);
  });
  return out;
}

std::vector<Weights> default_weight_grid() {
  std::vector<Weights> grid;
  std::set<std::array<int, 6>> seen;
  std::array<int, 6> steps{};
  for (int code = 0; code < 15625; ++code) {
    int rest = code;
    for (int i = 5; i >= 0; --i) {
      steps[i] = rest % 5;
      rest /= 5;
    }
    int sum = std::accumulate(steps.begin(), steps.end(), 0);
    std::array<int, 6> reduced = steps;
    if (sum == 0) {
      reduced.fill(1);
      sum = 6;
    } else {
      int g = 0;
      for (int s : steps) g = std::gcd(g, s);
      for (int& s : reduced) s /= g;
      sum /= g;
    }
    if (!seen.insert(reduced).second) continue;
    Weights w{};
    for (std::size_t i = 0; i < 6; ++i) {
      w[i] = static_cast<double>(reduced[i]) / static_cast<double>(sum);
    }
    grid.push_back(w);
  }
  return grid;
}

WeightSelection cross_validate_weights(const LabeledDataset& dataset,
                                       const MiningConfig& mining,
                                       const ObjectiveConfig& base,
                                       const std::vector<Weights>& grid, int folds,
                                       std::uint64_t seed, int threads) {
  if (grid.empty()) throw ConfigError("weight grid is empty");
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (dataset.size() < static_cast<std::size_t>(folds)) {
    throw ConfigError("fewer instances than folds");
  }

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SeededRng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<double> totals(grid.size(), 0.0);
  int used = 0;
  for (int fold = 0; fold < folds; ++fold) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> held;
    for (std::size_t i = 0; i < order.size(); ++i) {
      (static_cast<int>(i % static_cast<std::size_t>(folds)) == fold ? held : train)
          .push_back(order[i]);
    }
    std::sort(train.begin(), train.end());
    std::sort(held.begin(), held.end());
    const LabeledDataset train_set = dataset.subset(train);
    const LabeledDataset held_set = dataset.subset(held);
    bool degenerate = false;
    for (ClassId q = 0; q < dataset.num_classes(); ++q) {
      if (dataset.class_count(q) == 0) continue;
      if (train_set.class_count(q) == 0 || held_set.class_count(q) == 0) {
        degenerate = true;
      }
    }
    if (degenerate) {
      warn("cross-validation fold " + std::to_string(fold + 1) +
           " skipped: a class is missing from one side of the split");
      continue;
    }
    ++used;
    const ConfidentItemsetStore store = mine_confident_itemsets(train_set, mining, threads);
    std::vector<double> scores(grid.size(), 0.0);
    parallel_for(grid.size(), threads, [&](std::size_t g) {
      ObjectiveConfig config = base;
      config.weights = grid[g];
      std::vector<ClassExplanation> ces;
      for (ClassId q = 0; q < store.num_classes(); ++q) {
        ClassExplanation ce;
        ce.label = q;
        if (!store.of_class(q).empty() && train_set.class_count(q) > 0) {
          try {
            ce = optimize_class_explanation(q, train_set, store, config);
          } catch (const ConstraintError&) {
            // No feasible singleton: the class stays unexplained.
          }
        }
        ces.push_back(std::move(ce));
      }
      scores[g] = classwise_fidelity(held_set, ces, store);
    });
    for (std::size_t g = 0; g < grid.size(); ++g) totals[g] += scores[g];
  }
  if (used == 0) throw ConfigError("every cross-validation fold was degenerate");

  WeightSelection out;
  out.config = base;
  std::size_t best = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    out.grid_scores.push_back(totals[g] / used);
    if (out.grid_scores[g] > out.grid_scores[best]) best = g;
  }
  out.config.weights = grid[best];
  out.heldout_fidelity = out.grid_scores[best];
  return out;
}

}  // namespace cie
