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

#include "cie/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cie/error.hpp"

namespace cie {

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Display width of UTF-8 text, one column per code point.
std::size_t width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string pad(const std::string& s, std::size_t w) {
  const std::size_t have = width(s);
  return have >= w ? s : s + std::string(w - have, ' ');
}

std::string pad_left(const std::string& s, std::size_t w) {
  const std::size_t have = width(s);
  return have >= w ? s : std::string(w - have, ' ') + s;
}

Json items_json(const ItemIds& ids, const Vocabulary& vocab) {
  Json out = Json::array();
  for (ItemId id : ids) out.push_back(vocab.item(id).text());
  return out;
}

const char* variant_name(ConfidenceVariant v) {
  return v == ConfidenceVariant::kRule ? "rule" : "lift";
}

Json stamp_json(const RunStamp& stamp) {
  Json j;
  j["tool_version"] = stamp.tool_version;
  j["config_hash"] = stamp.config_hash;
  return j;
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->template get<T>();
}

}  // namespace

StoreInfo describe_store_source(const LabeledDataset& dataset, const MiningConfig& config,
                                const std::vector<std::string>& features) {
  StoreInfo info;
  info.features = features;
  for (ClassId q = 0; q < dataset.num_classes(); ++q) {
    info.class_counts.push_back(dataset.class_count(q));
  }
  info.num_instances = dataset.size();
  info.mining["min_conf"] = config.min_conf;
  info.mining["max_k"] = config.max_k;
  info.mining["min_class_count"] = config.min_class_count;
  info.mining["confidence"] = variant_name(config.variant);
  return info;
}

Json store_to_json(const ConfidentItemsetStore& store, const StoreInfo& info,
                   const RunStamp& stamp) {
  Json j = stamp_json(stamp);
  j["kind"] = info.kind;
  j["mining"] = info.mining;
  j["features"] = info.features;
  j["classes"] = store.classes();
  j["class_counts"] = info.class_counts;
  j["num_instances"] = info.num_instances;
  Json list = Json::array();
  for (ClassId q = 0; q < store.num_classes(); ++q) {
    for (const auto& ci : store.of_class(q)) {
      Json e;
      e["class"] = store.classes()[q];
      e["items"] = items_json(ci.items, store.vocabulary());
      e["confidence"] = ci.confidence;
      e["class_support"] = ci.class_support;
      e["overall_support"] = ci.overall_support;
      e["count"] = ci.count;
      e["class_count"] = ci.class_count;
      list.push_back(std::move(e));
    }
  }
  j["itemsets"] = std::move(list);
  return j;
}

LoadedStore store_from_json(const Json& j, const ItemList& extra_items) {
  try {
    if (!j.is_object()) throw LoadError("store must be a JSON object");
    if (!j.contains("classes") || !j.contains("itemsets")) {
      throw LoadError("store needs 'classes' and 'itemsets'");
    }
    const auto classes = j.at("classes").get<std::vector<std::string>>();
    const auto& entries = j.at("itemsets");
    if (!entries.is_array()) throw LoadError("'itemsets' must be an array");

    std::vector<ItemList> parsed;
    parsed.reserve(entries.size() + 1);
    for (const auto& e : entries) {
      ItemList items;
      for (const auto& text : e.at("items")) items.push_back(parse_item(text.get<std::string>()));
      if (items.empty()) throw LoadError("empty itemset in store");
      parsed.push_back(std::move(items));
    }
    parsed.push_back(extra_items);
    auto vocab = Vocabulary::build(parsed);

    std::vector<std::vector<ConfidentItemset>> per_class(classes.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      const auto label = e.at("class").get<std::string>();
      auto pos = std::find(classes.begin(), classes.end(), label);
      if (pos == classes.end()) throw LoadError("itemset names unknown class '" + label + "'");
      ConfidentItemset ci;
      ci.label = static_cast<ClassId>(pos - classes.begin());
      ci.items = vocab->encode(parsed[i]);
      std::sort(ci.items.begin(), ci.items.end());
      if (std::adjacent_find(ci.items.begin(), ci.items.end()) != ci.items.end()) {
        throw LoadError("itemset repeats an item: " + vocab->render(ci.items));
      }
      ci.confidence = e.at("confidence").get<double>();
      if (!std::isfinite(ci.confidence)) throw LoadError("non-finite confidence");
      ci.class_support = field_or<double>(e, "class_support", 0.0);
      ci.overall_support = field_or<double>(e, "overall_support", 0.0);
      ci.count = field_or<std::size_t>(e, "count", 0);
      ci.class_count = field_or<std::size_t>(e, "class_count", 0);
      per_class[ci.label].push_back(std::move(ci));
    }

    StoreInfo info;
    info.kind = field_or<std::string>(j, "kind", "confident");
    info.features = field_or<std::vector<std::string>>(j, "features", {});
    info.class_counts = field_or<std::vector<std::size_t>>(j, "class_counts", {});
    info.num_instances = field_or<std::size_t>(j, "num_instances", 0);
    if (j.contains("mining")) info.mining = j.at("mining");
    RunStamp stamp;
    stamp.tool_version = field_or<std::string>(j, "tool_version", "");
    stamp.config_hash = field_or<std::string>(j, "config_hash", "");
    return {ConfidentItemsetStore(vocab, classes, std::move(per_class)), std::move(info),
            std::move(stamp)};
  } catch (const Json::exception& e) {
    throw LoadError(std::string("malformed store: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw LoadError(std::string("malformed store item: ") + e.what());
  }
}

LoadedStore read_store(const std::filesystem::path& path, const ItemList& extra_items) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open store file '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw LoadError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    return store_from_json(j, extra_items);
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

std::string store_summary(const ConfidentItemsetStore& store, const RunStamp& stamp) {
  std::ostringstream out;
  out << "# tool_version " << stamp.tool_version << "  config_hash " << stamp.config_hash
      << "\n";
  for (ClassId q = 0; q < store.num_classes(); ++q) {
    const auto& list = store.of_class(q);
    std::vector<std::string> rendered;
    std::size_t w = width("Itemset");
    for (const auto& ci : list) {
      rendered.push_back(store.vocabulary().render(ci.items));
      w = std::max(w, width(rendered.back()));
    }
    out << "\nClass: " << store.classes()[q] << " (" << list.size() << " itemsets)\n";
    out << pad("Itemset", w) << "  " << pad_left("Confidence", 10) << "  "
        << pad_left("Class_support", 13) << "\n";
    out << std::string(w + 27, '-') << "\n";
    for (std::size_t i = 0; i < list.size(); ++i) {
      out << pad(rendered[i], w) << "  " << pad_left(fixed3(list[i].confidence), 10) << "  "
          << pad_left(fixed3(list[i].class_support), 13) << "\n";
    }
  }
  return out.str();
}

Json instance_explanation_json(std::size_t instance_id,
                               const std::optional<std::string>& predicted,
                               const InstanceExplanation& explanation,
                               const ConfidentItemsetStore& store, std::size_t alternatives,
                               const RunStamp& stamp) {
  Json j;
  j["instance_id"] = instance_id;
  j["predicted_by_blackbox"] = predicted ? Json(*predicted) : Json(nullptr);
  j["approximated"] = explanation.approximated
                          ? Json(store.classes()[*explanation.approximated])
                          : Json(nullptr);
  Json classes = Json::array();
  for (std::size_t r = 0; r < explanation.ranked.size() && r <= alternatives; ++r) {
    const auto& ev = explanation.ranked[r];
    Json c;
    c["label"] = store.classes()[ev.score.label];
    c["score"] = ev.score.score;
    Json sets = Json::array();
    for (std::size_t i : ev.itemsets) {
      const auto& ci = store.of_class(ev.score.label)[i];
      Json s;
      s["items"] = items_json(ci.items, store.vocabulary());
      s["confidence"] = ci.confidence;
      sets.push_back(std::move(s));
    }
    c["itemsets"] = std::move(sets);
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  j["tool_version"] = stamp.tool_version;
  j["config_hash"] = stamp.config_hash;
  return j;
}

std::string instance_explanation_text(std::size_t instance_id,
                                      const std::optional<std::string>& predicted,
                                      const InstanceExplanation& explanation,
                                      const ConfidentItemsetStore& store,
                                      std::size_t alternatives) {
  std::ostringstream out;
  out << "Instance " << instance_id << "\n";
  out << "Predicted by black-box: " << (predicted ? *predicted : "-") << "\n";
  out << "Approximated: "
      << (explanation.approximated ? store.classes()[*explanation.approximated]
                                   : std::string("(abstain)"))
      << "\n";
  const std::size_t ncols = std::min(explanation.ranked.size(), alternatives + 1);
  if (ncols == 0) return out.str();

  // Each column: header, sub-header, then itemset/confidence rows.
  struct Column {
    std::vector<std::pair<std::string, std::string>> rows;
    std::string header;
    std::size_t width = 0;
  };
  std::vector<Column> cols(ncols);
  std::size_t height = 0;
  for (std::size_t c = 0; c < ncols; ++c) {
    const auto& ev = explanation.ranked[c];
    auto& col = cols[c];
    col.header = "Class: " + store.classes()[ev.score.label] + " Score: " +
                 fixed3(ev.score.score);
    col.rows.emplace_back("Itemset", "Confidence");
    for (std::size_t i : ev.itemsets) {
      const auto& ci = store.of_class(ev.score.label)[i];
      col.rows.emplace_back(store.vocabulary().render(ci.items), fixed3(ci.confidence));
    }
    std::size_t left = 0;
    for (const auto& [a, b] : col.rows) left = std::max(left, width(a));
    for (auto& [a, b] : col.rows) a = pad(a, left) + "  " + pad_left(b, 10);
    col.width = std::max(left + 12, width(col.header));
    height = std::max(height, col.rows.size());
  }
  auto line = [&](auto&& cell) {
    std::string s;
    for (std::size_t c = 0; c < ncols; ++c) {
      s += pad(cell(c), cols[c].width);
      if (c + 1 < ncols) s += "    ";
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out << s << "\n";
  };
  line([&](std::size_t c) { return cols[c].header; });
  for (std::size_t r = 0; r < height; ++r) {
    line([&](std::size_t c) {
      return r < cols[c].rows.size() ? cols[c].rows[r].first : std::string();
    });
  }
  return out.str();
}

Json class_explanations_json(const std::vector<ClassExplanation>& explanations,
                             const ConfidentItemsetStore& store,
                             const ObjectiveConfig& config, const RunStamp& stamp) {
  Json j = stamp_json(stamp);
  Json echo;
  echo["weights"] = config.weights;
  echo["theta1"] = config.theta1;
  echo["theta2"] = config.theta2;
  echo["theta3"] = config.theta3;
  echo["delta"] = config.delta;
  echo["k"] = config.k;
  j["config_echo"] = std::move(echo);
  Json list = Json::array();
  for (const auto& ce : explanations) {
    Json c;
    c["class"] = store.classes()[ce.label];
    Json sets = Json::array();
    for (std::size_t i : ce.itemsets) {
      const auto& ci = store.of_class(ce.label)[i];
      Json s;
      s["items"] = items_json(ci.items, store.vocabulary());
      s["confidence"] = ci.confidence;
      s["class_support"] = ci.class_support;
      sets.push_back(std::move(s));
    }
    c["itemsets"] = std::move(sets);
    const auto& im = ce.metrics.interpretability;
    Json m;
    m["fidelity"] = ce.metrics.fidelity;
    m["size"] = im.size;
    m["num_items"] = im.num_items;
    m["max_length"] = im.max_length;
    m["itemset_overlap"] = im.itemset_overlap;
    m["coverage"] = ce.metrics.coverage;
    c["metrics"] = std::move(m);
    c["rewards"] = ce.rewards;
    c["objective"] = ce.objective;
    c["moves"] = ce.trace.size();
    list.push_back(std::move(c));
  }
  j["classes"] = std::move(list);
  return j;
}

Json report_json(const EvaluationReport& report, const RunStamp& stamp) {
  Json j = stamp_json(stamp);
  j["dataset"] = report.dataset;
  j["seed"] = report.seed;
  Json split;
  split["train_fraction"] = report.train_fraction;
  split["train_size"] = report.train_size;
  split["evaluation_size"] = report.evaluation_size;
  split["note"] = "split ratio and seed are configurable defaults, not prescribed values";
  j["split"] = std::move(split);
  Json methods = Json::array();
  for (const auto& m : report.methods) {
    Json e;
    e["method"] = m.method;
    e["instance_fidelity"] = m.instance_fidelity;
    e["classwise_fidelity"] = m.classwise_fidelity;
    e["abstention_rate"] = m.abstention_rate;
    Json curve = Json::array();
    for (const auto& p : m.curve) {
      Json c;
      c["K"] = p.k;
      c["descriptive_accuracy"] = p.accuracy;
      curve.push_back(std::move(c));
    }
    e["curve"] = std::move(curve);
    Json global = Json::array();
    for (const auto& g : m.global) {
      Json c;
      c["K"] = g.k;
      c["size"] = g.size;
      c["num_items"] = g.num_items;
      c["descriptive_accuracy"] = g.accuracy;
      global.push_back(std::move(c));
    }
    e["global"] = std::move(global);
    methods.push_back(std::move(e));
  }
  j["methods"] = std::move(methods);
  return j;
}

std::string report_csv(const EvaluationReport& report, const RunStamp& stamp) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream out;
  out << "dataset,method,K,descriptive_accuracy,global_size,global_num_items,"
         "global_accuracy,instance_fidelity,classwise_fidelity,abstention_rate,seed,"
         "config_hash,tool_version\n";
  for (const auto& m : report.methods) {
    for (std::size_t i = 0; i < m.curve.size(); ++i) {
      const auto& p = m.curve[i];
      out << quote(report.dataset) << ',' << m.method << ',' << p.k << ','
          << format_number(p.accuracy) << ',';
      if (i < m.global.size()) {
        out << m.global[i].size << ',' << m.global[i].num_items << ','
            << format_number(m.global[i].accuracy);
      } else {
        out << ",,";
      }
      out << ',' << format_number(m.instance_fidelity) << ','
          << format_number(m.classwise_fidelity) << ',' << format_number(m.abstention_rate)
          << ',' << report.seed << ',' << stamp.config_hash << ',' << stamp.tool_version
          << '\n';
    }
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw LoadError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw LoadError("cannot move output into place at '" + path.string() + "'");
  }
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace cie
