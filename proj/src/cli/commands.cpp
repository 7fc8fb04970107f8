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

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cie/error.hpp"
#include "cli/cli.hpp"
#include "cli/config.hpp"

namespace cie::cli {

namespace {

namespace fs = std::filesystem;

struct Inputs {
  std::vector<ItemList> instances;
  std::optional<std::vector<std::string>> labels;
  std::vector<std::string> features;  // tabular only
};

std::ifstream open_input(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(std::string("cannot open ") + what + " '" + path.string() + "'");
  return in;
}

Inputs load_inputs(const RunConfig& config) {
  Inputs in;
  auto data = open_input(config.data, "data file");
  if (config.format == DataFormat::kCsv) {
    TabularData t = load_tabular(data, config.schema, config.binning);
    in.instances = std::move(t.instances);
    in.features = std::move(t.features);
    if (config.schema.prediction_column) in.labels = std::move(t.predictions);
  } else {
    TextData t = load_text(data, config.text);
    in.instances = std::move(t.instances);
    in.labels = std::move(t.predictions);
  }
  if (config.predictions) {
    auto p = open_input(*config.predictions, "predictions file");
    in.labels = read_labels(p);
  }
  return in;
}

const std::vector<std::string>& require_labels(const Inputs& in) {
  if (!in.labels) {
    throw ConfigError("black-box predictions are required: set 'predictions' or "
                      "'prediction_column'");
  }
  return *in.labels;
}

fs::path store_path(const RunConfig& config) {
  return config.store ? *config.store : config.out_dir / "store.json";
}

ItemList all_items(const std::vector<ItemList>& instances) {
  ItemList items;
  for (const auto& inst : instances) items.insert(items.end(), inst.begin(), inst.end());
  canonicalize(items);
  return items;
}

void prepare_out_dir(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw LoadError("cannot create output directory '" + config.out_dir.string() + "'");
}

void cmd_mine(const RunConfig& config, std::ostream& out) {
  const Inputs in = load_inputs(config);
  const LabeledDataset ds = attach_predictions(in.instances, require_labels(in), config.classes);
  const ConfidentItemsetStore store = mine_confident_itemsets(ds, config.mining, config.threads);
  const RunStamp stamp{kToolVersion, config.hash()};
  const std::string json =
      dump(store_to_json(store, describe_store_source(ds, config.mining, in.features), stamp));
  const std::string summary = store_summary(store, stamp);
  prepare_out_dir(config);
  const fs::path target = store_path(config);
  write_file_atomic(target, json);
  write_file_atomic(config.out_dir / "store_summary.txt", summary);
  out << "mined " << store.total_size() << " itemsets over " << store.num_classes()
      << " classes -> " << target.string() << "\n";
}

void cmd_explain(const RunConfig& config, const std::vector<std::size_t>& ids, bool all,
                 bool text, std::ostream& out) {
  if (all == !ids.empty()) throw ConfigError("give either --instance or --all");
  const Inputs in = load_inputs(config);
  const LoadedStore loaded = read_store(store_path(config), all_items(in.instances));
  const ConfidentItemsetStore& store = loaded.store;
  if (in.labels && in.labels->size() != in.instances.size()) {
    throw LoadError(std::to_string(in.instances.size()) + " instances but " +
                    std::to_string(in.labels->size()) + " predictions");
  }

  std::vector<std::size_t> selected = ids;
  if (all) {
    selected.resize(in.instances.size());
    for (std::size_t i = 0; i < selected.size(); ++i) selected[i] = i;
  }
  const RunStamp stamp{kToolVersion, config.hash()};
  std::string jsonl;
  std::string rendered;
  for (std::size_t id : selected) {
    if (id >= in.instances.size()) {
      throw UnknownInstanceError("unknown instance id " + std::to_string(id) + " (data has " +
                                 std::to_string(in.instances.size()) + " instances)");
    }
    const ItemIds encoded = encode_for_store(in.instances[id], store, loaded.info.features);
    const InstanceExplanation e = explain_instance(encoded, store);
    std::optional<std::string> predicted;
    if (in.labels) predicted = (*in.labels)[id];
    jsonl += instance_explanation_json(id, predicted, e, store, config.alternatives, stamp)
                 .dump() +
             "\n";
    if (text) {
      if (!rendered.empty()) rendered += "\n";
      rendered += instance_explanation_text(id, predicted, e, store, config.alternatives);
    }
  }
  prepare_out_dir(config);
  write_file_atomic(config.out_dir / "explanations.jsonl", jsonl);
  if (text) {
    write_file_atomic(config.out_dir / "explanations.txt",
                      "# tool_version " + stamp.tool_version + "  config_hash " +
                          stamp.config_hash + "\n\n" + rendered);
  }
  out << "explained " << selected.size() << " instances\n";
}

void cmd_explain_class(RunConfig config, bool select_weights, int folds, std::ostream& out) {
  const Inputs in = load_inputs(config);
  const LoadedStore loaded = read_store(store_path(config), all_items(in.instances));
  const ConfidentItemsetStore& store = loaded.store;
  const LabeledDataset ds = attach_predictions(in.instances, require_labels(in),
                                               store.classes(), store.shared_vocabulary());
  if (select_weights) {
    const WeightSelection chosen =
        cross_validate_weights(ds, config.mining, config.objective, default_weight_grid(),
                               folds, config.evaluation.seed, config.threads);
    config.objective = chosen.config;
  }
  const auto explanations = explain_classes(ds, store, config.objective, config.threads);
  const RunStamp stamp{kToolVersion, config.hash()};
  Json j = class_explanations_json(explanations, store, config.objective, stamp);
  j["seed"] = config.evaluation.seed;
  j["weights_selected_by_cross_validation"] = select_weights;
  prepare_out_dir(config);
  write_file_atomic(config.out_dir / "class_explanations.json", dump(j));
  out << "explained " << explanations.size() << " classes\n";
}

void cmd_evaluate(RunConfig config, std::ostream& out) {
  const Inputs in = load_inputs(config);
  const LabeledDataset ds = attach_predictions(in.instances, require_labels(in), config.classes);
  config.evaluation.threads = config.threads;
  const EvaluationReport report = evaluate(ds, config.data.filename().string(), config.mining,
                                           config.objective, config.evaluation);
  const RunStamp stamp{kToolVersion, config.hash()};
  const std::string json = dump(report_json(report, stamp));
  const std::string csv = report_csv(report, stamp);
  prepare_out_dir(config);
  write_file_atomic(config.out_dir / "report.json", json);
  write_file_atomic(config.out_dir / "report.csv", csv);
  out << "evaluated " << report.methods.size() << " methods on " << report.evaluation_size
      << " held-out instances\n";
}

std::vector<std::string> split_methods(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confident itemset explanations for black-box classifier predictions", "cie"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  std::string config_path;
  std::optional<std::string> data, predictions, format, store, out_dir, weights;
  std::optional<double> min_conf, delta;
  std::optional<int> max_k, theta1, theta2, theta3, threads;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--data", data, "Input data file (CSV or JSON Lines)");
  app.add_option("--predictions", predictions, "Sidecar file with one label per line");
  app.add_option("--format", format, "csv or jsonl");
  app.add_option("--store", store, "Store file (default: <out-dir>/store.json)");
  app.add_option("--min-conf", min_conf, "Minimum confidence");
  app.add_option("--max-k", max_k, "Maximum itemset length");
  app.add_option("--theta1", theta1, "Maximum number of itemsets per class explanation");
  app.add_option("--theta2", theta2, "Maximum total items per class explanation");
  app.add_option("--theta3", theta3, "Maximum itemset length in a class explanation");
  app.add_option("--weights", weights, "Six comma-separated objective weights");
  app.add_option("--delta", delta, "Local-search improvement parameter");
  app.add_option("--seed", seed, "Seed for the split and the random baseline");
  app.add_option("--threads", threads, "Worker threads (output does not depend on it)");
  app.add_option("--out-dir", out_dir, "Output directory");

  auto* mine = app.add_subcommand("mine", "Mine confident itemsets");

  auto* explain = app.add_subcommand("explain", "Explain individual predictions");
  std::vector<std::size_t> instance_ids;
  bool explain_all = false;
  bool text = false;
  explain->add_option("--instance", instance_ids, "0-based instance row (repeatable)");
  explain->add_flag("--all", explain_all, "Explain every instance");
  explain->add_flag("--text", text, "Also write a side-by-side text rendering");

  auto* explain_class = app.add_subcommand("explain-class", "Build class-wise explanations");
  bool select_weights = false;
  int folds = 3;
  explain_class->add_flag("--select-weights", select_weights,
                          "Choose weights by cross-validated class-wise fidelity");
  explain_class->add_option("--folds", folds, "Cross-validation folds");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Measure fidelity of every method");
  std::optional<std::string> methods, k_grid;
  std::optional<double> split;
  std::optional<std::size_t> baseline_k;
  evaluate_cmd->add_option("--methods", methods, "Comma list of cie,greedy,random,frequent");
  evaluate_cmd->add_option("--k-grid", k_grid, "start:stop:step or a comma list");
  evaluate_cmd->add_option("--split", split, "Training fraction");
  evaluate_cmd->add_option("--baseline-k", baseline_k, "K for baseline fidelities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  WarningSink previous = set_warning_sink([&err](const std::string& msg) {
    err << "warning: " << msg << "\n";
  });
  struct Restore {
    WarningSink sink;
    ~Restore() { set_warning_sink(std::move(sink)); }
  } restore{std::move(previous)};

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (data) config.data = *data;
    if (predictions) config.predictions = fs::path(*predictions);
    if (store) config.store = fs::path(*store);
    if (out_dir) config.out_dir = *out_dir;
    if (format) {
      if (*format == "csv") {
        config.format = DataFormat::kCsv;
      } else if (*format == "jsonl") {
        config.format = DataFormat::kJsonl;
      } else {
        throw ConfigError("--format must be csv or jsonl");
      }
    }
    if (min_conf) config.mining.min_conf = *min_conf;
    if (max_k) config.mining.max_k = *max_k;
    if (theta1) config.objective.theta1 = *theta1;
    if (theta2) config.objective.theta2 = *theta2;
    if (theta3) config.objective.theta3 = *theta3;
    if (weights) config.objective.weights = parse_weights(*weights);
    if (delta) config.objective.delta = *delta;
    if (seed) config.evaluation.seed = *seed;
    if (threads) config.threads = *threads;
    if (methods) config.evaluation.methods = split_methods(*methods);
    if (k_grid) config.evaluation.k_grid = parse_k_grid(*k_grid);
    if (split) config.evaluation.train_fraction = *split;
    if (baseline_k) config.evaluation.baseline_k = *baseline_k;
    config.validate();

    if (mine->parsed()) {
      cmd_mine(config, out);
    } else if (explain->parsed()) {
      cmd_explain(config, instance_ids, explain_all, text, out);
    } else if (explain_class->parsed()) {
      cmd_explain_class(config, select_weights, folds, out);
    } else if (evaluate_cmd->parsed()) {
      cmd_evaluate(config, out);
    }
    return kExitOk;
  } catch (const UnknownInstanceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnknownInstance;
  } catch (const ConstraintError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace cie::cli
