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

#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>

#include "cie/error.hpp"

namespace cie::cli {

namespace {

namespace fs = std::filesystem;

void only_keys(const Json& obj, const std::string& where,
               std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
    }
  }
}

fs::path resolve(const Json& j, const fs::path& base) {
  fs::path p(j.get<std::string>());
  if (p.is_relative()) p = base / p;
  return p.lexically_normal();
}

template <typename T>
void read(const Json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = it->template get<T>();
}

const char* column_type_name(ColumnType t) {
  return t == ColumnType::kNumeric ? "numeric" : "categorical";
}

int parse_int(std::string_view s, const std::string& what) {
  int v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ConfigError("bad integer '" + std::string(s) + "' in " + what);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

RunConfig config_from_json(const Json& j, const fs::path& base) {
  RunConfig c;
  try {
    only_keys(j, "", {"format", "data", "predictions", "prediction_column", "store",
                      "schema", "binning", "text", "classes", "mining", "objective",
                      "evaluation", "explain", "out_dir", "threads"});
    if (auto it = j.find("format"); it != j.end()) {
      const auto f = it->get<std::string>();
      if (f == "csv") {
        c.format = DataFormat::kCsv;
      } else if (f == "jsonl") {
        c.format = DataFormat::kJsonl;
      } else {
        throw ConfigError("format must be 'csv' or 'jsonl', got '" + f + "'");
      }
    }
    if (j.contains("data")) c.data = resolve(j["data"], base);
    if (j.contains("predictions")) c.predictions = resolve(j["predictions"], base);
    if (j.contains("store")) c.store = resolve(j["store"], base);
    if (j.contains("out_dir")) c.out_dir = resolve(j["out_dir"], base);
    if (j.contains("prediction_column")) {
      c.schema.prediction_column = j["prediction_column"].get<std::string>();
    }
    if (auto it = j.find("schema"); it != j.end()) {
      only_keys(*it, "schema", {"columns", "missing_values", "delimiter"});
      for (const auto& col : it->value("columns", Json::array())) {
        only_keys(col, "schema.columns[]", {"name", "type"});
        ColumnSpec spec;
        spec.name = col.at("name").get<std::string>();
        const auto type = col.value("type", std::string("categorical"));
        if (type == "numeric") {
          spec.type = ColumnType::kNumeric;
        } else if (type != "categorical") {
          throw ConfigError("column '" + spec.name + "' has unknown type '" + type + "'");
        }
        c.schema.columns.push_back(std::move(spec));
      }
      read(*it, "missing_values", c.schema.missing_values);
      if (it->contains("delimiter")) {
        const auto d = (*it)["delimiter"].get<std::string>();
        if (d.size() != 1) throw ConfigError("schema.delimiter must be one character");
        c.schema.delimiter = d[0];
      }
    }
    if (auto it = j.find("binning"); it != j.end()) {
      if (!it->is_object()) throw ConfigError("'binning' must be an object");
      for (const auto& [feature, spec] : it->items()) {
        only_keys(spec, "binning." + feature, {"edges", "integral", "min", "max"});
        NumericBinning b;
        b.edges = spec.at("edges").get<std::vector<double>>();
        read(spec, "integral", b.integral);
        if (spec.contains("min")) b.min = spec["min"].get<double>();
        if (spec.contains("max")) b.max = spec["max"].get<double>();
        c.binning[feature] = std::move(b);
      }
    }
    if (auto it = j.find("text"); it != j.end()) {
      only_keys(*it, "text", {"case_fold"});
      read(*it, "case_fold", c.text.case_fold);
    }
    if (j.contains("classes")) c.classes = j["classes"].get<std::vector<std::string>>();
    if (auto it = j.find("mining"); it != j.end()) {
      only_keys(*it, "mining", {"min_conf", "max_k", "min_class_count", "confidence"});
      read(*it, "min_conf", c.mining.min_conf);
      read(*it, "max_k", c.mining.max_k);
      read(*it, "min_class_count", c.mining.min_class_count);
      if (it->contains("confidence")) {
        const auto v = (*it)["confidence"].get<std::string>();
        if (v == "rule") {
          c.mining.variant = ConfidenceVariant::kRule;
        } else if (v == "lift") {
          c.mining.variant = ConfidenceVariant::kLift;
        } else {
          throw ConfigError("mining.confidence must be 'rule' or 'lift'");
        }
      }
    }
    if (auto it = j.find("objective"); it != j.end()) {
      only_keys(*it, "objective", {"weights", "theta1", "theta2", "theta3", "delta", "k"});
      read(*it, "weights", c.objective.weights);
      read(*it, "theta1", c.objective.theta1);
      read(*it, "theta2", c.objective.theta2);
      read(*it, "theta3", c.objective.theta3);
      read(*it, "delta", c.objective.delta);
      read(*it, "k", c.objective.k);
    }
    if (auto it = j.find("evaluation"); it != j.end()) {
      only_keys(*it, "evaluation",
                {"methods", "k_grid", "split", "seed", "baseline_k", "min_support"});
      auto& e = c.evaluation;
      read(*it, "methods", e.methods);
      if (it->contains("k_grid")) {
        const auto& g = (*it)["k_grid"];
        e.k_grid = g.is_string() ? parse_k_grid(g.get<std::string>())
                                 : g.get<std::vector<int>>();
      }
      read(*it, "split", e.train_fraction);
      read(*it, "seed", e.seed);
      read(*it, "baseline_k", e.baseline_k);
      read(*it, "min_support", e.min_support);
    }
    if (auto it = j.find("explain"); it != j.end()) {
      only_keys(*it, "explain", {"alternatives"});
      read(*it, "alternatives", c.alternatives);
    }
    read(j, "threads", c.threads);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

void RunConfig::validate() const {
  if (data.empty()) throw ConfigError("no data file given (config 'data' or --data)");
  if (format == DataFormat::kCsv && schema.columns.empty()) {
    throw ConfigError("CSV data needs schema.columns");
  }
  for (const auto& [feature, b] : binning) b.validate(feature);
  mining.validate();
  objective.validate(mining.max_k);
  evaluation.validate();
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

Json RunConfig::effective() const {
  Json j;
  j["format"] = format == DataFormat::kCsv ? "csv" : "jsonl";
  j["data"] = data.generic_string();
  j["predictions"] = predictions ? Json(predictions->generic_string()) : Json(nullptr);
  j["store"] = store ? Json(store->generic_string()) : Json(nullptr);
  j["prediction_column"] =
      schema.prediction_column ? Json(*schema.prediction_column) : Json(nullptr);
  Json cols = Json::array();
  for (const auto& col : schema.columns) {
    cols.push_back({{"name", col.name}, {"type", column_type_name(col.type)}});
  }
  j["schema"] = {{"columns", cols},
                 {"missing_values", schema.missing_values},
                 {"delimiter", std::string(1, schema.delimiter)}};
  Json bins = Json::object();
  for (const auto& [feature, b] : binning) {
    Json e{{"edges", b.edges}, {"integral", b.integral}};
    e["min"] = b.min ? Json(*b.min) : Json(nullptr);
    e["max"] = b.max ? Json(*b.max) : Json(nullptr);
    bins[feature] = std::move(e);
  }
  j["binning"] = std::move(bins);
  j["text"] = {{"case_fold", text.case_fold}};
  j["classes"] = classes ? Json(*classes) : Json(nullptr);
  j["mining"] = {{"min_conf", mining.min_conf},
                 {"max_k", mining.max_k},
                 {"min_class_count", mining.min_class_count},
                 {"confidence", mining.variant == ConfidenceVariant::kRule ? "rule" : "lift"}};
  j["objective"] = {{"weights", objective.weights}, {"theta1", objective.theta1},
                    {"theta2", objective.theta2},   {"theta3", objective.theta3},
                    {"delta", objective.delta},     {"k", objective.k}};
  j["evaluation"] = {{"methods", evaluation.methods},
                     {"k_grid", evaluation.k_grid},
                     {"split", evaluation.train_fraction},
                     {"seed", evaluation.seed},
                     {"baseline_k", evaluation.baseline_k},
                     {"min_support", evaluation.min_support}};
  j["explain"] = {{"alternatives", alternatives}};
  return j;
}

std::string RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : effective().dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<int> parse_k_grid(const std::string& text) {
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("K grid range must be start:stop:step");
    const int start = parse_int(parts[0], "K grid");
    const int stop = parse_int(parts[1], "K grid");
    const int step = parse_int(parts[2], "K grid");
    if (step <= 0 || start > stop) throw ConfigError("K grid range is empty: " + text);
    for (int k = start; k <= stop; k += step) out.push_back(k);
  } else {
    for (auto part : split(text, ',')) out.push_back(parse_int(part, "K grid"));
  }
  return out;
}

Weights parse_weights(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 6) throw ConfigError("--weights needs six comma-separated numbers");
  Weights w{};
  for (std::size_t i = 0; i < 6; ++i) {
    double v = 0;
    auto [end, ec] = std::from_chars(parts[i].data(), parts[i].data() + parts[i].size(), v);
    if (ec != std::errc() || end != parts[i].data() + parts[i].size()) {
      throw ConfigError("bad weight '" + std::string(parts[i]) + "'");
    }
    w[i] = v;
  }
  return w;
}

}  // namespace cie::cli
