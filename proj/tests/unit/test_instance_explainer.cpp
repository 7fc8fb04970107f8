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


#include <cmath>
#include <fstream>

#include "cie/error.hpp"
#include "cie/instance_explainer.hpp"
#include "cie/serialization.hpp"
#include "doctest.h"
#include "support/datasets.hpp"
#include "support/printed.hpp"

using namespace cie;
using cie::testing::fixture;

using cie::testing::explain_with;
using cie::testing::question_rows;
using cie::testing::census_rows;
using cie::testing::label_of;
using cie::testing::all_of;

TEST_CASE("question record (a): where is the stadium") {
  const auto e = explain_with("question_a_store.json", question_rows(), 0);
  REQUIRE(e.explanation.approximated);
  CHECK(e.classes[*e.explanation.approximated] == "LOC:other");
  REQUIRE(e.explanation.ranked.size() == 2);
  CHECK(std::abs(e.explanation.ranked[0].score.score - 2.555) <= 0.005);
  CHECK(e.explanation.ranked[0].itemsets.size() == 3);
  CHECK(label_of(e, 1) == "NUM:count");
  CHECK(std::abs(e.explanation.ranked[1].score.score - 0.666) <= 0.005);
}

TEST_CASE("question record (b): mispredicted mountain question") {
  const auto e = explain_with("question_b_store.json", question_rows(), 1);
  REQUIRE(e.explanation.approximated);
  CHECK(label_of(e, 0) == "LOC:mount");
  CHECK(std::abs(e.explanation.ranked[0].score.score - 0.666) <= 0.005);
  CHECK(label_of(e, 1) == "NUM:date");
  CHECK(std::abs(e.explanation.ranked[1].score.score - 0.661) <= 0.005);
}

TEST_CASE("census records: single and two-column explanations") {
  const auto rows = census_rows();
  const auto a = explain_with("census_a_store.json", rows, 0);
  REQUIRE(a.explanation.ranked.size() == 1);
  CHECK(label_of(a, 0) == "<=50K");
  CHECK(std::abs(a.explanation.ranked[0].score.score - 4.203) <= 0.005);
  CHECK(a.explanation.ranked[0].itemsets.size() == 5);

  const auto b = explain_with("census_b_store.json", rows, 1);
  REQUIRE(b.explanation.ranked.size() == 2);
  CHECK(label_of(b, 0) == "<=50K");
  CHECK(std::abs(b.explanation.ranked[0].score.score - 3.099) <= 0.005);
  CHECK(label_of(b, 1) == ">50K");
  CHECK(std::abs(b.explanation.ranked[1].score.score - 1.161) <= 0.005);
}

TEST_CASE("confidence_score sums in index order") {
  const LoadedStore s = read_store(fixture("census_a_store.json"));
  const std::vector<std::size_t> all{0, 1, 2, 3, 4};
  double expected = 0;
  for (std::size_t i : all) expected += s.store.of_class(0)[i].confidence;
  CHECK(confidence_score(all, 0, s.store) == expected);
}

TEST_CASE("abstention when nothing matches") {
  const auto rows = question_rows();
  const LoadedStore loaded = read_store(fixture("question_a_store.json"), all_of(rows));
  const auto e = explain_instance(encode_for_store(rows[1], loaded.store), loaded.store);
  CHECK_FALSE(e.approximated);
  CHECK(e.ranked.empty());
}

TEST_CASE("tie rule: class support, then label") {
  const Json store = Json::parse(R"({
    "classes": ["b", "a", "c"],
    "itemsets": [
      {"class": "b", "items": ["<t>"], "confidence": 0.5, "class_support": 0.2},
      {"class": "a", "items": ["<t>"], "confidence": 0.5, "class_support": 0.2},
      {"class": "c", "items": ["<t>"], "confidence": 0.5, "class_support": 0.1}
    ]})");
  const LoadedStore s = store_from_json(store);
  const auto e = explain_instance(encode_for_store({Item::token("t")}, s.store), s.store);
  REQUIRE(e.approximated);
  CHECK(s.store.classes()[*e.approximated] == "a");
  CHECK(s.store.classes()[e.ranked[1].score.label] == "b");
  CHECK(s.store.classes()[e.ranked[2].score.label] == "c");

  CHECK(outranks({0, 1.0, 0.0}, {1, 0.9, 5.0}, s.store.classes()));
  CHECK(outranks({0, 1.0, 0.3}, {1, 1.0, 0.2}, s.store.classes()));
}

TEST_CASE("matching agrees with a direct subset scan") {
  SeededRng rng(8);
  const auto ds = testing::random_dataset(rng, 60, 8, 3);
  MiningConfig cfg;
  cfg.min_conf = 0.4;
  const auto store = mine_confident_itemsets(ds, cfg);
  for (std::size_t m = 0; m < ds.size(); ++m) {
    const auto inst = ds.instance(m);
    const ClassMatches got = match_itemsets(inst, store);
    for (ClassId q = 0; q < store.num_classes(); ++q) {
      std::vector<std::size_t> want;
      for (std::size_t i = 0; i < store.of_class(q).size(); ++i) {
        const auto& items = store.of_class(q)[i].items;
        if (std::includes(inst.begin(), inst.end(), items.begin(), items.end())) {
          want.push_back(i);
        }
      }
      CHECK(got[q] == want);
    }
  }
}

TEST_CASE("unknown tabular features are a schema mismatch") {
  const LoadedStore s = read_store(fixture("census_a_store.json"));
  const std::vector<std::string> known{"workclass"};
  CHECK_THROWS_AS(encode_for_store({Item::categorical("colour", "red")}, s.store, known),
                  LoadError);
  // Unseen values of a known feature simply cannot match.
  CHECK(encode_for_store({Item::categorical("workclass", "Never-worked")}, s.store, known)
            .empty());
}
