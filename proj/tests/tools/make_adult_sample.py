#!/usr/bin/env python3
# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes tests/fixtures/adult_sample.csv and adult_sample.gbdt.txt.

The census data itself is not redistributed here, so the sample is drawn
from a hand-written generator with the same 14 columns and plausible value
ranges. A 100-tree gradient boosting classifier is fit to the generated
income label and its predictions become the black-box labels.
"""

import csv
import pathlib

import numpy as np
from sklearn.ensemble import GradientBoostingClassifier

WORKCLASS = ["Private", "Self-emp-not-inc", "Self-emp-inc", "Federal-gov", "Local-gov"]
EDUCATION = [("HS-grad", 9), ("Some-college", 10), ("Assoc-acdm", 12),
             ("Bachelors", 13), ("Masters", 14), ("11th", 7), ("Doctorate", 16)]
MARITAL = ["Never-married", "Married-civ-spouse", "Divorced", "Separated", "Widowed"]
OCCUPATION = ["Tech-support", "Craft-repair", "Other-service", "Sales",
              "Exec-managerial", "Prof-specialty", "Adm-clerical"]
RELATIONSHIP = {"Married-civ-spouse": ["Husband", "Wife"],
                "default": ["Not-in-family", "Own-child", "Unmarried"]}
RACE = ["White", "Black", "Asian-Pac-Islander", "Other"]
COUNTRY = ["United-States", "Mexico", "India", "Germany"]
COLUMNS = ["age", "workclass", "fnlwgt", "education", "education-num", "marital-status",
           "occupation", "sex", "race", "hours-per-week", "relationship", "capital-gain",
           "capital-loss", "native-country", "income"]


def main(n=600, seed=42):
    rng = np.random.default_rng(seed)
    rows, features = [], []
    for _ in range(n):
        age = int(rng.integers(17, 80))
        edu, edu_num = EDUCATION[rng.integers(len(EDUCATION))]
        marital = MARITAL[rng.integers(len(MARITAL))]
        sex = "Male" if rng.random() < 0.67 else "Female"
        if marital == "Married-civ-spouse":
            rel = "Husband" if sex == "Male" else "Wife"
        else:
            rel = RELATIONSHIP["default"][rng.integers(3)]
        hours = int(np.clip(rng.normal(41, 11), 5, 95))
        gain = int(rng.choice([0, 0, 0, 0, 0, 0, 0, 0, 3103, 7688, 15024]))
        loss = int(rng.choice([0] * 18 + [1902, 1977]))
        occ = OCCUPATION[rng.integers(len(OCCUPATION))]
        wc = WORKCLASS[rng.choice(len(WORKCLASS), p=[0.7, 0.1, 0.05, 0.05, 0.1])]
        score = (0.04 * (min(age, 60) - 30) + 0.35 * (edu_num - 10)
                 + 1.6 * (marital == "Married-civ-spouse") + 0.03 * (hours - 40)
                 + 2.5 * (gain > 5000) + 0.8 * (occ in ("Exec-managerial", "Prof-specialty"))
                 + rng.normal(0, 0.8) - 2.6)
        income = ">50K" if score > 0 else "<=50K"
        rows.append([age, wc, int(rng.integers(20000, 400000)), edu, edu_num, marital, occ,
                     sex, RACE[rng.choice(4, p=[0.8, 0.1, 0.05, 0.05])], hours, rel, gain,
                     loss, COUNTRY[rng.choice(4, p=[0.85, 0.07, 0.04, 0.04])], income])
        features.append([age, edu_num, hours, gain, loss,
                         marital == "Married-civ-spouse", sex == "Male",
                         occ in ("Exec-managerial", "Prof-specialty")])
    x = np.array(features, dtype=float)
    y = np.array([r[-1] for r in rows])
    model = GradientBoostingClassifier(n_estimators=100, random_state=seed)
    half = n // 2
    model.fit(x[:half], y[:half])
    predictions = model.predict(x)

    out = pathlib.Path(__file__).resolve().parents[1] / "fixtures"
    with (out / "adult_sample.csv").open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(COLUMNS)
        w.writerows(rows)
    (out / "adult_sample.gbdt.txt").write_text("".join(p + "\n" for p in predictions))


if __name__ == "__main__":
    main()
