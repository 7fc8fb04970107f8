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

// Class-wise explanations: choose a subset CE_q of a class's confident
// itemsets that maximizes
//
//     w1*fidelity + w2*(t1 - size)/t1 + w3*(t2 - num_items)/t2
//       + w4*(t3 - max_length)/t3 + w5*(P - overlap)/P + w6*coverage/M_q
//
// with P = t1*(t1 - 1)/2, subject to size <= t1, num_items <= t2 and
// max_length <= t3. The search is an approximate local search run k + 1
// times on shrinking ground sets; each round starts from the best feasible
// singleton and applies delete or swap moves while they improve the
// objective by a factor of at least (1 + delta / n^4).

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cie/corpus.hpp"
#include "cie/instance_explainer.hpp"
#include "cie/miner.hpp"

namespace cie {

using Weights = std::array<double, 6>;

struct ObjectiveConfig {
  Weights weights{1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  int theta1 = 10;  // max itemsets
  int theta2 = 30;  // max total items
  int theta3 = 3;   // max itemset length
  double delta = 1e-3;
  int k = 3;  // constraint count; k + 1 search rounds, swaps drop <= k items

  // `max_k` is the mining max_K; theta3 may not exceed it.
  void validate(int max_k = 0) const;
};

struct InterpretabilityMeasures {
  std::size_t size = 0;
  std::size_t num_items = 0;
  std::size_t max_length = 0;
  // Unordered pairs of itemsets sharing at least one item.
  std::size_t itemset_overlap = 0;

  friend bool operator==(const InterpretabilityMeasures&,
                         const InterpretabilityMeasures&) = default;
};

InterpretabilityMeasures interpretability_measures(std::span<const ItemIds> itemsets);

// Number of class-q instances containing at least one of the itemsets.
std::size_t class_coverage(std::span<const ItemIds> itemsets, ClassId q,
                           const LabeledDataset& dataset);

// Fraction of class-q instances labelled q by the summed-confidence rule
// when class q's evidence is limited to `selection` (indices into
// store.of_class(q)) and every other class keeps its full store.
// Abstentions count as misses. Throws UndefinedMeasureError when M_q = 0.
double class_fidelity(std::span<const std::size_t> selection, ClassId q,
                      const LabeledDataset& dataset,
                      const ConfidentItemsetStore& store);

struct ExplanationMetrics {
  double fidelity = 0.0;
  InterpretabilityMeasures interpretability;
  std::size_t coverage = 0;

  friend bool operator==(const ExplanationMetrics&, const ExplanationMetrics&) = default;
};

using Rewards = std::array<double, 6>;

bool is_feasible(const InterpretabilityMeasures& m, const ObjectiveConfig& config);

// Normalized rewards, each in [0, 1] for feasible sets. Throws
// ConstraintError for an infeasible set.
Rewards rewards(const ExplanationMetrics& metrics, std::size_t class_size,
                const ObjectiveConfig& config);

double objective(const Rewards& rewards, const ObjectiveConfig& config);

// Metrics computed from scratch with the public measure functions.
ExplanationMetrics explanation_metrics(std::span<const std::size_t> selection,
                                       ClassId q, const LabeledDataset& dataset,
                                       const ConfidentItemsetStore& store);

// Precomputed evaluator of the objective for one class. Scratch buffers make
// it single-threaded; use one instance per worker.
class ClassObjective {
 public:
  ClassObjective(ClassId q, const LabeledDataset& dataset,
                 const ConfidentItemsetStore& store, const ObjectiveConfig& config);

  std::size_t candidates() const { return items_.size(); }
  // `selection` must be sorted ascending.
  bool feasible(std::span<const std::size_t> selection) const;
  ExplanationMetrics metrics(std::span<const std::size_t> selection) const;
  double value(std::span<const std::size_t> selection) const;
  const std::string& rendering(std::size_t c) const { return renderings_[c]; }

 private:
  ClassId q_;
  const ConfidentItemsetStore& store_;
  const ObjectiveConfig& config_;
  std::size_t class_size_;
  std::vector<const ItemIds*> items_;
  std::vector<std::string> renderings_;
  // Per candidate: positions (within the class-q rows) of covered instances.
  std::vector<std::vector<std::uint32_t>> covered_;
  // Per class-q row: strongest competing class, if any matched.
  std::vector<ClassScore> competitor_;
  std::vector<char> has_competitor_;

  mutable std::vector<double> score_;
  mutable std::vector<double> support_;
  mutable std::vector<std::uint32_t> hits_;
  mutable std::vector<std::uint32_t> touched_;
};

enum class MoveKind { kSeed, kDelete, kSwap };

struct SearchMove {
  int round = 0;
  MoveKind kind = MoveKind::kSeed;
  double before = 0.0;
  double after = 0.0;
  double factor = 1.0;  // required improvement factor in this round
};

struct ClassExplanation {
  ClassId label = 0;
  // Ascending indices into store.of_class(label).
  std::vector<std::size_t> itemsets;
  ExplanationMetrics metrics;
  Rewards rewards{};
  double objective = 0.0;
  // Accepted moves of every round, in order.
  std::vector<SearchMove> trace;
};

// Throws ConstraintError when no singleton is feasible, UndefinedMeasureError
// when class q has no instances.
ClassExplanation optimize_class_explanation(ClassId q, const LabeledDataset& dataset,
                                            const ConfidentItemsetStore& store,
                                            const ObjectiveConfig& config);

// One explanation per class with at least one stored itemset and one
// instance; other classes get an empty explanation. Classes run in parallel
// when threads > 1.
std::vector<ClassExplanation> explain_classes(const LabeledDataset& dataset,
                                              const ConfidentItemsetStore& store,
                                              const ObjectiveConfig& config,
                                              int threads = 1);

// {0, .25, .5, .75, 1}^6 normalized to sum 1 (all-zero becomes uniform),
// duplicates removed, first occurrence order kept.
std::vector<Weights> default_weight_grid();

struct WeightSelection {
  ObjectiveConfig config;
  double heldout_fidelity = 0.0;
  std::vector<double> grid_scores;  // mean held-out fidelity per grid entry
};

// k-fold selection of the weight vector with the best mean held-out
// class-wise fidelity. Each fold mines on its training part. Ties keep the
// earlier grid entry. Degenerate folds (a class absent from either part)
// are skipped with a warning.
WeightSelection cross_validate_weights(const LabeledDataset& dataset,
                                       const MiningConfig& mining,
                                       const ObjectiveConfig& base,
                                       const std::vector<Weights>& grid,
                                       int folds = 3, std::uint64_t seed = 42,
                                       int threads = 1);

}  // namespace cie
