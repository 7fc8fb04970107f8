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


#include <algorithm>
#include <cmath>
#include <set>

#include "cie/class_explainer.hpp"
#include "cie/error.hpp"
#include "doctest.h"
#include "support/datasets.hpp"
#include "support/hand.hpp"
#include "support/oracles.hpp"

using namespace cie;

namespace {

// Index of the class-q itemset made of exactly these tokens.
std::size_t idx(const ConfidentItemsetStore& store, ClassId q,
                std::vector<std::string> tokens) {
  std::vector<std::string> want;
  for (const auto& t : tokens) want.push_back(Item::token(t).text());
  std::sort(want.begin(), want.end());
  const auto& cis = store.of_class(q);
  for (std::size_t i = 0; i < cis.size(); ++i) {
    std::vector<std::string> got;
    for (ItemId id : cis[i].items) got.push_back(store.vocabulary().item(id).text());
    std::sort(got.begin(), got.end());
    if (got == want) return i;
  }
  FAIL("itemset not in store");
  return 0;
}

// A: {a} {a,b} {b} {c};  B: {b} {c}
LabeledDataset small() {
  return testing::token_dataset({{"a"}, {"a", "b"}, {"b"}, {"c"}, {"b"}, {"c"}},
                                {"A", "A", "A", "A", "B", "B"});
}

ConfidentItemsetStore small_store(const LabeledDataset& ds) {
  MiningConfig cfg;
  cfg.min_conf = 0.5;
  return mine_confident_itemsets(ds, cfg);
}

ItemIds ids(const Vocabulary& v, std::vector<std::string> tokens) {
  ItemList l;
  for (auto& t : tokens) l.push_back(Item::token(t));
  canonicalize(l);
  return v.encode(l);
}

}  // namespace

TEST_CASE("interpretability measures count each overlapping pair once") {
  const auto ds = small();
  const auto& v = ds.vocabulary();
  {
    const std::vector<ItemIds> sets{ids(v, {"a", "b"}), ids(v, {"b", "c"}), ids(v, {"c"})};
    const auto m = interpretability_measures(sets);
    CHECK(m.size == 3);
    CHECK(m.num_items == 5);
    CHECK(m.max_length == 2);
    CHECK(m.itemset_overlap == 2);
  }
  {
    const std::vector<ItemIds> sets{ids(v, {"a"}), ids(v, {"a", "b"}), ids(v, {"a", "c"})};
    CHECK(interpretability_measures(sets).itemset_overlap == 3);
  }
  CHECK(interpretability_measures({}) == InterpretabilityMeasures{});
}

TEST_CASE("measures on the small hand fixtures") {
  const auto ds = testing::token_dataset({{"A", "B", "C", "D"}}, {"q"});
  const auto& v = ds.vocabulary();
  using testing::token_ids;
  {
    const std::vector<ItemIds> sets{token_ids(v, {"A"}), token_ids(v, {"B"})};
    CHECK(interpretability_measures(sets) == InterpretabilityMeasures{2, 2, 1, 0});
  }
  {
    const std::vector<ItemIds> sets{token_ids(v, {"A", "B"}), token_ids(v, {"B", "C"}),
                                    token_ids(v, {"D"})};
    CHECK(interpretability_measures(sets) == InterpretabilityMeasures{3, 5, 2, 1});
  }

  const auto cov = testing::coverage_fixture();
  const ClassId q = *cov.find_class("q");
  const std::vector<ItemIds> xy{token_ids(cov.vocabulary(), {"x"}),
                                token_ids(cov.vocabulary(), {"y"})};
  CHECK(class_coverage(xy, q, cov) == 3);
  CHECK(class_coverage({}, q, cov) == 0);
  const std::vector<ItemIds> everywhere{token_ids(cov.vocabulary(), {"x"})};
  CHECK(class_coverage(everywhere, *cov.find_class("r"), cov) == 1);

  const auto fx = testing::fidelity_fixture();
  const std::vector<std::size_t> a{0};
  CHECK(class_fidelity(a, 0, fx.dataset, fx.store) == 0.75);
  CHECK(class_fidelity({}, 0, fx.dataset, fx.store) == 0.0);
}

TEST_CASE("reward examples") {
  ObjectiveConfig cfg;
  const Rewards empty = rewards(ExplanationMetrics{}, 5, cfg);
  CHECK(empty == Rewards{0, 1, 1, 1, 1, 0});

  cfg.theta1 = 2;
  cfg.theta2 = 4;
  cfg.theta3 = 2;
  ExplanationMetrics full;
  full.interpretability = {2, 4, 2, 0};
  const Rewards bound = rewards(full, 5, cfg);
  CHECK(bound[1] == 0.0);
  CHECK(bound[2] == 0.0);
  CHECK(bound[3] == 0.0);
  CHECK(bound[4] == 1.0);

  cfg.weights = {0, 0, 0, 0, 0, 0};
  CHECK(objective(bound, cfg) == 0.0);
}

TEST_CASE("coverage and fidelity on a hand-worked store") {
  const auto ds = small();
  const auto store = small_store(ds);
  const ClassId A = *ds.find_class("A");
  // Class A keeps {a} (1), {b} (2/3), {c} (1/2), {a,b} (1); class B keeps {c} (1/2).
  REQUIRE(store.of_class(A).size() == 4);
  REQUIRE(store.of_class(*ds.find_class("B")).size() == 1);

  const std::vector<std::size_t> a{idx(store, A, {"a"})};
  std::vector<std::size_t> ab{idx(store, A, {"a"}), idx(store, A, {"b"})};
  std::sort(ab.begin(), ab.end());
  std::vector<std::size_t> abc{idx(store, A, {"a"}), idx(store, A, {"b"}), idx(store, A, {"c"})};
  std::sort(abc.begin(), abc.end());

  const std::vector<ItemIds> just_a{ids(ds.vocabulary(), {"a"})};
  CHECK(class_coverage(just_a, A, ds) == 2);
  // {a} names rows 0 and 1; row 2 abstains, row 3 goes to B.
  CHECK(class_fidelity(a, A, ds, store) == doctest::Approx(0.5));
  CHECK(class_fidelity(ab, A, ds, store) == doctest::Approx(0.75));
  // {c}: both classes score 1/2, B has the larger class support (1/2 vs 1/4).
  CHECK(class_fidelity(abc, A, ds, store) == doctest::Approx(0.75));
  CHECK(class_fidelity({}, A, ds, store) == 0.0);

  const auto m = explanation_metrics(abc, A, ds, store);
  CHECK(m.coverage == 4);
  CHECK(m.interpretability.size == 3);
}

TEST_CASE("fidelity of a class without instances is undefined") {
  const auto ds = testing::token_dataset({{"a"}}, {"A"}, std::vector<std::string>{"A", "B"});
  const auto store = small_store(ds);
  CHECK_THROWS_AS(class_fidelity({}, 1, ds, store), UndefinedMeasureError);
}

TEST_CASE("reward arithmetic") {
  ObjectiveConfig cfg;
  ExplanationMetrics m;
  m.fidelity = 0.5;
  m.interpretability = {2, 3, 2, 1};
  m.coverage = 3;
  const Rewards r = rewards(m, 4, cfg);
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r[1] == doctest::Approx(0.8));
  CHECK(r[2] == doctest::Approx(0.9));
  CHECK(r[3] == doctest::Approx(1.0 / 3));
  CHECK(r[4] == doctest::Approx(44.0 / 45));
  CHECK(r[5] == doctest::Approx(0.75));
  CHECK(objective(r, cfg) == doctest::Approx(oracle::objective_value(m, 4, cfg)));

  cfg.weights = {1, 0, 0, 0, 0, 0};
  CHECK(objective(r, cfg) == doctest::Approx(0.5));

  ObjectiveConfig one = cfg;
  one.theta1 = 1;
  m.interpretability = {1, 1, 1, 0};
  CHECK(rewards(m, 4, one)[4] == 1.0);

  m.interpretability = {2, 3, 4, 1};
  CHECK_FALSE(is_feasible(m.interpretability, ObjectiveConfig{}));
  CHECK_THROWS_AS(rewards(m, 4, ObjectiveConfig{}), ConstraintError);
}

TEST_CASE("objective config validation") {
  ObjectiveConfig c;
  CHECK_NOTHROW(c.validate(3));
  c.theta3 = 4;
  CHECK_THROWS_AS(c.validate(3), ConfigError);
  CHECK_NOTHROW(c.validate(0));
  c = {};
  c.weights[2] = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.theta1 = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.delta = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.k = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("incremental objective matches the from-scratch measures") {
  SeededRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = testing::random_dataset(rng, 40, 6, 3);
    MiningConfig mc;
    mc.min_conf = 0.35;
    const auto store = mine_confident_itemsets(ds, mc);
    ObjectiveConfig cfg;
    cfg.theta1 = 4;
    cfg.theta2 = 8;
    for (ClassId q = 0; q < ds.num_classes(); ++q) {
      if (ds.class_count(q) == 0) continue;
      const ClassObjective obj(q, ds, store, cfg);
      const std::size_t n = store.of_class(q).size();
      for (int s = 0; s < 10; ++s) {
        std::vector<std::size_t> sel;
        for (std::size_t i = 0; i < n; ++i) {
          if (rng.below(3) == 0) sel.push_back(i);
        }
        const auto fast = obj.metrics(sel);
        CHECK(fast == explanation_metrics(sel, q, ds, store));
        if (oracle::satisfies(fast.interpretability, cfg)) {
          CHECK(obj.value(sel) ==
                doctest::Approx(oracle::objective_value(fast, ds.class_count(q), cfg)));
        }
      }
    }
  }
}

TEST_CASE("optimizer stays between the best singleton and the exhaustive optimum") {
  SeededRng rng(77);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto ds = testing::random_dataset(rng, 30, 5, 2);
    MiningConfig mc;
    mc.min_conf = 0.55;
    mc.max_k = 2;
    const auto store = mine_confident_itemsets(ds, mc);
    ObjectiveConfig cfg;
    cfg.theta1 = 3;
    cfg.theta2 = 5;
    cfg.theta3 = 2;
    for (ClassId q = 0; q < ds.num_classes(); ++q) {
      const std::size_t n = store.of_class(q).size();
      if (n == 0 || n > 10 || ds.class_count(q) == 0) continue;
      const auto ce = optimize_class_explanation(q, ds, store, cfg);
      const auto ex = oracle::exhaustive_optimum(q, ds, store, cfg);
      CHECK(oracle::satisfies(ce.metrics.interpretability, cfg));
      CHECK(ce.objective <= ex.best + 1e-12);
      CHECK(ce.objective >= ex.best_singleton - 1e-12);
      CHECK(ce.objective >= 0.25 * ex.best);
      CHECK(ce.metrics == explanation_metrics(ce.itemsets, q, ds, store));
      CHECK(std::is_sorted(ce.itemsets.begin(), ce.itemsets.end()));
      for (const auto& mv : ce.trace) {
        if (mv.kind == MoveKind::kSeed) continue;
        CHECK(mv.after > mv.before);
        CHECK(mv.after >= mv.factor * mv.before);
        // Later rounds search a smaller ground set, so their factor is larger.
        const double first = 1.0 + cfg.delta / std::pow(double(n), 4);
        if (mv.round == 0) CHECK(mv.factor == doctest::Approx(first));
        CHECK(mv.factor >= first);
      }
      ++checked;
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("single candidate is returned as is") {
  const auto ds = testing::token_dataset({{"a"}, {"a"}, {"b"}}, {"A", "A", "B"});
  MiningConfig mc;
  mc.min_conf = 0.9;
  const auto store = mine_confident_itemsets(ds, mc);
  REQUIRE(store.of_class(0).size() == 1);
  const auto ce = optimize_class_explanation(0, ds, store, ObjectiveConfig{});
  CHECK(ce.itemsets == std::vector<std::size_t>{0});
  CHECK(ce.metrics.fidelity == 1.0);
  CHECK(ce.metrics.coverage == 2);
}

TEST_CASE("no feasible singleton is a constraint error") {
  const auto ds = testing::token_dataset({{"a", "b"}, {"a", "b"}, {"c"}}, {"A", "A", "B"});
  MiningConfig mc;
  mc.min_conf = 0.9;
  const auto all = mine_confident_itemsets(ds, mc);
  // Keep only the pair so every candidate is longer than theta3.
  const auto store = all.select({{idx(all, 0, {"a", "b"})}, {}});
  ObjectiveConfig cfg;
  cfg.theta3 = 1;
  CHECK_THROWS_AS(optimize_class_explanation(0, ds, store, cfg), ConstraintError);
  CHECK_THROWS_AS(explain_classes(ds, store, cfg), ConstraintError);
}

TEST_CASE("relaxing theta1 never lowers the exhaustive optimum's fidelity reward") {
  SeededRng rng(5);
  const auto ds = testing::random_dataset(rng, 40, 5, 2);
  MiningConfig mc;
  mc.min_conf = 0.5;
  mc.max_k = 2;
  const auto store = mine_confident_itemsets(ds, mc);
  REQUIRE(store.of_class(0).size() <= 12);
  ObjectiveConfig cfg;
  cfg.weights = {1, 0, 0, 0, 0, 0};
  cfg.theta2 = 100;
  double prev = -1;
  for (int t1 = 1; t1 <= 5; ++t1) {
    cfg.theta1 = t1;
    const double best = oracle::exhaustive_optimum(0, ds, store, cfg).best;
    CHECK(best >= prev);
    prev = best;
  }
}

TEST_CASE("class explanations do not depend on the thread count") {
  const auto ds = testing::noisy_rule_dataset(3, 400, 0.2);
  MiningConfig mc;
  mc.min_conf = 0.3;
  const auto store = mine_confident_itemsets(ds, mc);
  const auto one = explain_classes(ds, store, ObjectiveConfig{}, 1);
  const auto four = explain_classes(ds, store, ObjectiveConfig{}, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t q = 0; q < one.size(); ++q) {
    CHECK(one[q].itemsets == four[q].itemsets);
    CHECK(one[q].objective == four[q].objective);
  }
}

TEST_CASE("weight grid") {
  const auto grid = default_weight_grid();
  std::set<Weights> seen(grid.begin(), grid.end());
  CHECK(seen.size() == grid.size());
  const Weights uniform{1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  CHECK(grid.front() == uniform);
  for (const auto& w : grid) {
    double sum = 0;
    for (double x : w) {
      CHECK(x >= 0);
      sum += x;
    }
    CHECK(sum == doctest::Approx(1.0));
  }
  // Directions of non-zero vectors in {0..4}^6, plus the all-zero code.
  std::set<std::array<int, 6>> directions;
  for (int code = 1; code < 15625; ++code) {
    std::array<int, 6> v{};
    int c = code, g = 0;
    for (int i = 0; i < 6; ++i, c /= 5) {
      v[i] = c % 5;
      g = std::gcd(g, v[i]);
    }
    for (int& x : v) x /= g;
    directions.insert(v);
  }
  CHECK(grid.size() == directions.size());
}

TEST_CASE("cross-validation with trivial grids") {
  const auto ds = testing::noisy_rule_dataset(12, 200, 0.0);
  MiningConfig mc;
  mc.min_conf = 0.5;
  const Weights uniform{1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  CHECK(cross_validate_weights(ds, mc, ObjectiveConfig{}, {uniform}).config.weights == uniform);
  // On noise-free data both reach fidelity 1; the tie keeps the first.
  const Weights fid{1, 0, 0, 0, 0, 0};
  const auto tie = cross_validate_weights(ds, mc, ObjectiveConfig{}, {fid, uniform});
  CHECK(tie.grid_scores[0] == tie.grid_scores[1]);
  CHECK(tie.config.weights == fid);
}

TEST_CASE("cross-validation picks a grid entry and is reproducible") {
  const auto ds = testing::noisy_rule_dataset(11, 300, 0.1);
  MiningConfig mc;
  mc.min_conf = 0.4;
  const std::vector<Weights> grid{{1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}, {0.5, 0, 0, 0, 0, 0.5}};
  const auto a = cross_validate_weights(ds, mc, ObjectiveConfig{}, grid, 3, 7);
  const auto b = cross_validate_weights(ds, mc, ObjectiveConfig{}, grid, 3, 7, 4);
  CHECK(a.grid_scores == b.grid_scores);
  CHECK(a.config.weights == b.config.weights);
  REQUIRE(a.grid_scores.size() == 3);
  const auto best = std::max_element(a.grid_scores.begin(), a.grid_scores.end());
  CHECK(a.config.weights == grid[best - a.grid_scores.begin()]);
  CHECK(a.heldout_fidelity == *best);
  // Fidelity-only weighting should not lose to size-only weighting.
  CHECK(a.grid_scores[0] >= a.grid_scores[1]);
}
