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

// Fidelity measurements and the comparison baselines.
//
// Every method is reduced to a ConfidentItemsetStore holding the itemsets it
// would use, and instances are labelled from that store by the
// summed-confidence rule. Abstentions always count as mismatches.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cie/class_explainer.hpp"
#include "cie/corpus.hpp"
#include "cie/miner.hpp"

namespace cie {

struct FidelityResult {
  double fidelity = 0.0;
  double abstention_rate = 0.0;
};

// Throws UndefinedMeasureError on an empty dataset. The store may use a
// different vocabulary; instances are then re-encoded by item text.
FidelityResult measure_fidelity(const LabeledDataset& dataset,
                                const ConfidentItemsetStore& store);

double instance_fidelity(const LabeledDataset& dataset,
                         const ConfidentItemsetStore& store);

// Per class, only the itemsets of its explanation.
ConfidentItemsetStore explanation_store(std::span<const ClassExplanation> explanations,
                                        const ConfidentItemsetStore& store);

// Mean over classes of the fraction of class-q instances labelled q when
// every class is represented only by its explanation, weighted by M_q.
// Classes without instances are excluded with a warning.
double classwise_fidelity(const LabeledDataset& dataset,
                          const ConfidentItemsetStore& explanations);
double classwise_fidelity(const LabeledDataset& dataset,
                          std::span<const ClassExplanation> explanations,
                          const ConfidentItemsetStore& store);

// Class explanations for every class; a class whose optimization is
// infeasible gets an empty explanation and a warning.
std::vector<ClassExplanation> explain_classes_lenient(const LabeledDataset& dataset,
                                                      const ConfidentItemsetStore& store,
                                                      const ObjectiveConfig& config,
                                                      int threads = 1);

struct CurvePoint {
  int k = 0;
  double accuracy = 0.0;
};

// For each K, class explanations are optimized on `train` with theta1 = K
// and theta2 = K * theta3, and their class-wise fidelity is measured on
// `evaluation`. K = 0 scores 0. K values must be strictly increasing and
// non-negative.
std::vector<CurvePoint> descriptive_accuracy_curve(const LabeledDataset& train,
                                                   const LabeledDataset& evaluation,
                                                   const ConfidentItemsetStore& store,
                                                   const ObjectiveConfig& base,
                                                   std::span<const int> k_values,
                                                   int threads = 1);

struct GlobalItemset {
  ClassId label = 0;
  std::size_t index = 0;  // into explanations.of_class(label)
  std::size_t coverage = 0;
  std::size_t unique_coverage = 0;
  double score = 0.0;
};

// Scores every itemset of the class explanations over all dataset records:
//   0.5 * coverage / max_coverage + 0.5 * unique_coverage / coverage
// where unique_coverage counts records no other candidate covers. Ranked
// by score, then confidence, then rendering; the top K are returned.
std::vector<GlobalItemset> build_global_explanation(
    const ConfidentItemsetStore& explanations, const LabeledDataset& dataset,
    std::size_t k);

ConfidentItemsetStore global_store(const ConfidentItemsetStore& explanations,
                                   std::span<const GlobalItemset> ranked);

// Per class, the K 1-itemsets with the highest confidence (ties: larger
// class support, then rendering). Warns when a class has fewer.
ConfidentItemsetStore greedy_baseline(const ConfidentItemsetStore& store, std::size_t k,
                                      bool warn_short = true);

// Per class, K distinct items drawn uniformly from those occurring in the
// class, with their statistics on `dataset`. Warns when a class has fewer.
ConfidentItemsetStore random_baseline(const LabeledDataset& dataset, std::size_t k,
                                      std::uint64_t seed, bool warn_short = true);

// Per class, the K itemsets of a frequent-itemset store with the highest
// class support (ties: confidence, then canonical order).
ConfidentItemsetStore frequent_baseline(const ConfidentItemsetStore& frequent,
                                        std::size_t k, bool warn_short = true);

struct GlobalPoint {
  int k = 0;
  std::size_t size = 0;
  std::size_t num_items = 0;
  double accuracy = 0.0;
};

struct MethodReport {
  std::string method;
  double instance_fidelity = 0.0;
  double abstention_rate = 0.0;
  double classwise_fidelity = 0.0;
  std::vector<CurvePoint> curve;
  std::vector<GlobalPoint> global;
};

struct EvaluationOptions {
  std::vector<std::string> methods{"cie", "greedy", "random", "frequent"};
  std::vector<int> k_grid{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  double train_fraction = 0.8;
  std::uint64_t seed = 42;
  // K used for the baselines' single-number fidelities.
  std::size_t baseline_k = 10;
  double min_support = 0.05;  // frequent baseline
  int threads = 1;

  void validate() const;
};

struct EvaluationReport {
  std::string dataset;
  std::uint64_t seed = 0;
  double train_fraction = 0.0;
  std::size_t train_size = 0;
  std::size_t evaluation_size = 0;
  std::vector<MethodReport> methods;
};

// Splits, mines on the training part and measures every requested method
// on the evaluation part.
EvaluationReport evaluate(const LabeledDataset& dataset, const std::string& name,
                          const MiningConfig& mining, const ObjectiveConfig& objective,
                          const EvaluationOptions& options);

}  // namespace cie
