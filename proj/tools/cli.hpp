// Copyright 2026 The Reinflect Authors. All Rights Reserved.
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

// Command-line front end: sample, train, predict, evaluate, oracle, compare.
// Exit status 0 on success, 1 on usage errors, 2 on data errors.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "reinflect/reinflect.hpp"

namespace reinflect::cli {

namespace fs = std::filesystem;

inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kDataError = 2;

/// Bad flags or flag combinations.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string in;
  std::string out;
  std::string rules;
  std::string test_path;
  std::string lexicon;
  std::string weights;
  std::string msd_map;
  std::vector<std::string> gold;
  std::vector<std::string> preds;
  std::vector<std::string> train;
  std::string language;
  SplitSpec split;
  std::optional<int> track;
  double alpha = 0.05;
  std::size_t jobs = 1;
};

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Stages output files next to their destinations and renames them into
/// place on commit. Anything not committed is removed.
class OutputTransaction {
 public:
  OutputTransaction() = default;
  OutputTransaction(const OutputTransaction&) = delete;
  OutputTransaction& operator=(const OutputTransaction&) = delete;

  ~OutputTransaction() {
    std::error_code ec;
    for (const auto& [tmp, dest] : staged_) fs::remove(tmp, ec);
  }

  void stage(const fs::path& dest, const std::string& content) {
    fs::path tmp = dest;
    tmp += ".tmp-" + std::to_string(staged_.size());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw UsageError("cannot write '" + dest.string() + "'");
      staged_.emplace_back(tmp, dest);
      out << content;
      out.flush();
      if (!out) throw DataError("failed writing '" + dest.string() + "'");
    }
  }

  void commit() {
    for (const auto& [tmp, dest] : staged_) fs::rename(tmp, dest);
    staged_.clear();
  }

 private:
  std::vector<std::pair<fs::path, fs::path>> staged_;
};

namespace detail {

/// "finnish-train-low" -> "finnish".
inline std::string language_from_path(const std::string& path) {
  const std::string stem = fs::path(path).filename().string();
  return stem.substr(0, stem.find('-'));
}

inline std::string language_or_default(const RunConfig& cfg,
                                       const std::string& path) {
  std::string lang = cfg.language.empty() ? language_from_path(path) : cfg.language;
  if (lang.empty()) throw UsageError("cannot infer a language; pass --language");
  return lang;
}

/// Splits "KEY=PATH". A bare existing path yields an empty key.
inline std::pair<std::string, std::string> keyed_path(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || fs::exists(arg)) return {"", arg};
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

inline std::vector<std::string> read_predictions(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<std::string> out;
  const auto rows = reinflect::detail::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      utf8::validate(rows[i]);
    } catch (const Utf8Error& e) {
      throw ParseError(i + 1, path + ": " + e.what());
    }
    out.emplace_back(rows[i]);
  }
  return out;
}

inline std::string lines_of(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    out += s;
    out += '\n';
  }
  return out;
}

inline std::string format_p(double p) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(6) << p;
  return out.str();
}

inline Track track_of(int track) {
  if (track != 1 && track != 2) throw UsageError("--track must be 1 or 2");
  return track == 1 ? Track::kOne : Track::kTwo;
}

inline std::vector<AnnotatedSentence> targets_only(std::vector<AnnotatedSentence> s) {
  std::erase_if(s, [](const AnnotatedSentence& x) { return !x.target_index; });
  return s;
}

}  // namespace detail

// --- Commands --------------------------------------------------------------

inline int run_sample(const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) throw UsageError("sample needs --out DIR");
  const std::string lang = detail::language_or_default(cfg, cfg.in);
  const fs::path dir(cfg.out);
  if (!fs::is_directory(dir)) throw UsageError("--out must be an existing directory");
  OutputTransaction tx;

  if (cfg.track) {
    const Track track = detail::track_of(*cfg.track);
    if (cfg.msd_map.empty() || cfg.lexicon.empty()) {
      throw UsageError("context sampling needs --msd-map and --lexicon");
    }
    const auto table = MsdMappingTable::parse(read_file(cfg.msd_map));
    const Lexicon lexicon(parse_triples(read_file(cfg.lexicon), ParseMode::kTrain));
    const auto sentences = read_ud_corpus(read_file(cfg.in), table, lang);
    const auto candidates = select_candidates(sentences, lexicon);
    Rng rng(cfg.split.seed);
    std::vector<AnnotatedSentence> chosen;
    for (const auto& c : candidates) {
      const auto pick = c.positions[rng.below(c.positions.size())];
      auto s = mark_target(sentences[c.sentence], pick);
      chosen.push_back(track == Track::kTwo ? strip_to_track2(std::move(s)) : std::move(s));
    }
    const fs::path dest = dir / (lang + "-track" + std::to_string(*cfg.track));
    tx.stage(dest, format_context_corpus(chosen));
    tx.commit();
    out << lang << ": " << chosen.size() << " candidate sentences of "
        << sentences.size() << " -> " << dest.string() << '\n';
    return kOk;
  }

  const Dataset data = parse_triples(read_file(cfg.in), ParseMode::kTrain, lang);
  WeightMap weights;
  if (!cfg.weights.empty()) weights = parse_weights(read_file(cfg.weights));
  const WeightedPool pool = make_pool(data, weights);
  const Splits splits = sample_splits(pool, cfg.split, lang);

  const auto emit = [&](const std::string& suffix, const Dataset& d, bool omitted) {
    if (omitted) {
      out << lang << "-" << suffix << ": omitted (pool too small)\n";
      return;
    }
    tx.stage(dir / (lang + "-" + suffix), format_triples(d));
    out << lang << "-" << suffix << ": " << d.size() << '\n';
  };
  emit("train-low", splits.low, false);
  emit("train-medium", splits.medium, splits.plan.medium_omitted);
  emit("train-high", splits.high, splits.plan.high_omitted);
  emit("dev", splits.dev, false);
  emit("test", splits.test, false);
  tx.commit();
  return kOk;
}

inline int run_train(const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) throw UsageError("train needs --out");
  const std::string lang = detail::language_or_default(cfg, cfg.in);
  const RuleTable table = train(parse_triples(read_file(cfg.in), ParseMode::kTrain, lang));
  OutputTransaction tx;
  tx.stage(cfg.out, serialize(table));
  tx.commit();
  out << lang << ": " << table.size() << " rules over " << table.entries().size()
      << " MSDs\n";
  return kOk;
}

inline int run_predict(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::string> predictions;
  if (cfg.track) {
    const std::string lang = detail::language_or_default(cfg, cfg.in);
    const auto sentences = parse_context_corpus(read_file(cfg.in),
                                                detail::track_of(*cfg.track));
    for (const auto& s : detail::targets_only(sentences)) {
      predictions.push_back(copy_baseline(s, lang));
    }
  } else {
    if (cfg.rules.empty()) throw UsageError("predict needs --rules (or --track for context)");
    const RuleTable table = parse_rule_table(read_file(cfg.rules));
    const Dataset test = parse_triples(read_file(cfg.in), ParseMode::kTest);
    for (const auto& t : test.triples) predictions.push_back(apply(table, t.lemma, t.msd));
  }
  if (cfg.out.empty()) {
    out << detail::lines_of(predictions);
  } else {
    OutputTransaction tx;
    tx.stage(cfg.out, detail::lines_of(predictions));
    tx.commit();
  }
  return kOk;
}

/// Collects gold, predictions and training data per language from the
/// KEY=PATH style flags shared by evaluate, oracle and compare.
inline std::vector<LanguageInput> gather_inputs(const RunConfig& cfg) {
  if (cfg.gold.empty()) throw UsageError("--gold is required");
  std::map<std::string, LanguageInput> by_lang;
  std::map<std::string, Dataset> gold_sets;
  for (const auto& g : cfg.gold) {
    auto [lang, path] = detail::keyed_path(g);
    if (lang.empty()) lang = detail::language_or_default(cfg, path);
    if (by_lang.count(lang)) throw UsageError("gold for '" + lang + "' given twice");
    LanguageInput in;
    in.language = lang;
    if (cfg.track) {
      auto sentences = detail::targets_only(
          parse_context_corpus(read_file(path), detail::track_of(*cfg.track)));
      bool all_plausible = true;
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (!sentences[i].gold_form) {
          throw DataError(path + ": target " + std::to_string(i + 1) +
                          " carries no gold form");
        }
        in.gold.push_back(*sentences[i].gold_form);
        all_plausible = all_plausible && sentences[i].plausible_forms.has_value();
      }
      if (all_plausible) in.plausible = std::move(sentences);
    } else {
      Dataset gold = parse_triples(read_file(path), ParseMode::kTrain, lang);
      in.gold = gold_forms(gold);
      gold_sets.emplace(lang, std::move(gold));
    }
    by_lang.emplace(lang, std::move(in));
  }
  const auto only_language = [&]() -> std::string {
    if (by_lang.size() != 1) {
      throw UsageError("several gold languages: name them as SYSTEM:LANG=PATH");
    }
    return by_lang.begin()->first;
  };

  for (const auto& p : cfg.preds) {
    auto [key, path] = detail::keyed_path(p);
    std::string system = key;
    std::string lang;
    if (const auto colon = key.find(':'); colon != std::string::npos) {
      system = key.substr(0, colon);
      lang = key.substr(colon + 1);
    }
    if (system.empty()) system = fs::path(path).filename().string();
    if (lang.empty()) lang = only_language();
    const auto it = by_lang.find(lang);
    if (it == by_lang.end()) throw UsageError("no gold for language '" + lang + "'");
    it->second.systems.push_back({system, detail::read_predictions(path)});
  }

  for (const auto& t : cfg.train) {
    if (cfg.track) throw UsageError("--train (oracle-fc) applies to triple data only");
    auto [lang, path] = detail::keyed_path(t);
    if (lang.empty()) lang = only_language();
    const auto it = by_lang.find(lang);
    if (it == by_lang.end()) throw UsageError("no gold for language '" + lang + "'");
    const Dataset train_set = parse_triples(read_file(path), ParseMode::kTrain, lang);
    it->second.feature_combination =
        feature_combination_correctness(train_set, gold_sets.at(lang));
  }

  std::vector<LanguageInput> out;
  for (auto& [lang, in] : by_lang) out.push_back(std::move(in));
  return out;
}

inline int run_evaluate(const RunConfig& cfg, std::ostream& out) {
  const EvalReport report = build_report(gather_inputs(cfg), cfg.alpha, cfg.jobs);
  const std::string tsv = to_tsv(report);
  if (cfg.out.empty()) {
    out << tsv;
    return kOk;
  }
  OutputTransaction tx;
  tx.stage(cfg.out + ".tsv", tsv);
  tx.stage(cfg.out + ".json", to_json(report).dump(2) + "\n");
  tx.commit();
  return kOk;
}

inline int run_oracle(const RunConfig& cfg, std::ostream& out) {
  if (cfg.train.size() != 1 || cfg.test_path.empty()) {
    throw UsageError("oracle needs one --train and one --test");
  }
  const std::string lang = detail::language_or_default(cfg, cfg.test_path);
  const Dataset train_set = parse_triples(read_file(cfg.train.front()), ParseMode::kTrain, lang);
  const Dataset test_set = parse_triples(read_file(cfg.test_path), ParseMode::kTrain, lang);
  std::string text = "oracle\tlanguage\taccuracy\n";
  text += "oracle-fc\t" + lang + '\t' +
          fixed2(oracle_feature_combination(train_set, test_set)) + '\n';
  if (!cfg.preds.empty()) {
    std::vector<PredictionSet> systems;
    for (const auto& p : cfg.preds) {
      auto [system, path] = detail::keyed_path(p);
      if (system.empty()) system = fs::path(path).filename().string();
      systems.push_back({system, detail::read_predictions(path)});
    }
    text += "oracle-e\t" + lang + '\t' + fixed2(oracle_ensemble(test_set, systems)) + '\n';
  }
  if (cfg.out.empty()) {
    out << text;
  } else {
    OutputTransaction tx;
    tx.stage(cfg.out, text);
    tx.commit();
  }
  return kOk;
}

/// Pairwise sign-test matrix for one language, plus tests against the
/// oracles and the resulting table marks.
inline int run_compare(const RunConfig& cfg, std::ostream& out) {
  auto inputs = gather_inputs(cfg);
  if (inputs.size() != 1) throw UsageError("compare works on one language at a time");
  const LanguageInput& in = inputs.front();
  if (in.systems.empty()) throw UsageError("compare needs at least one --preds");
  const LanguageResult result = evaluate_language(in, cfg.alpha);

  std::string text =
      "# exact two-sided sign test; agreeing items discarded; alpha=" +
      fixed2(cfg.alpha) + "\n";
  text += "system\taccuracy";
  for (const auto& s : in.systems) text += '\t' + s.system_id;
  text += "\toracle-fc\toracle-e\tmarks\n";
  for (const auto& a : in.systems) {
    text += a.system_id + '\t' + fixed2(result.scores.at(a.system_id).accuracy);
    for (const auto& b : in.systems) {
      double p = 1.0;
      if (a.system_id < b.system_id) p = result.p_values.at({a.system_id, b.system_id});
      if (b.system_id < a.system_id) p = result.p_values.at({b.system_id, a.system_id});
      text += '\t' + detail::format_p(p);
    }
    const Marks& m = result.marks.at(a.system_id);
    text += '\t' + (m.p_vs_oracle_fc ? detail::format_p(*m.p_vs_oracle_fc) : std::string("-"));
    text += '\t' + (m.p_vs_oracle_e ? detail::format_p(*m.p_vs_oracle_e) : std::string("-"));
    text += '\t' + format_marks(m) + '\n';
  }
  if (cfg.out.empty()) {
    out << text;
  } else {
    OutputTransaction tx;
    tx.stage(cfg.out, text);
    tx.commit();
  }
  return kOk;
}

inline int run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "sample") return run_sample(cfg, out);
  if (cfg.command == "train") return run_train(cfg, out);
  if (cfg.command == "predict") return run_predict(cfg, out);
  if (cfg.command == "evaluate") return run_evaluate(cfg, out);
  if (cfg.command == "oracle") return run_oracle(cfg, out);
  if (cfg.command == "compare") return run_compare(cfg, out);
  throw UsageError("unknown command '" + cfg.command + "'");
}

// --- Argument parsing ------------------------------------------------------

inline int main_with_args(const std::vector<std::string>& args,
                          std::ostream& out = std::cout,
                          std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Morphological reinflection baselines and evaluation"};
  app.require_subcommand(1);

  auto* sample = app.add_subcommand("sample", "draw nested train/dev/test splits");
  sample->add_option("--in", cfg.in, "UniMorph triples (or CoNLL-U with --track)")
      ->required()
      ->check(CLI::ExistingFile);
  sample->add_option("--out", cfg.out, "output directory")->required();
  sample->add_option("--weights", cfg.weights, "lemma/MSD/form/weight TSV")
      ->check(CLI::ExistingFile);
  sample->add_option("--seed", cfg.split.seed, "generator seed");
  sample->add_option("--low", cfg.split.low);
  sample->add_option("--medium", cfg.split.medium);
  sample->add_option("--high", cfg.split.high);
  sample->add_option("--dev", cfg.split.dev);
  sample->add_option("--test", cfg.split.test);
  sample->add_flag("!--no-scale-down", cfg.split.scale_down,
                   "fail instead of shrinking the splits for small pools");
  sample->add_option("--track", cfg.track, "build a task-2 corpus for track 1 or 2");
  sample->add_option("--msd-map", cfg.msd_map, "UD -> UniMorph mapping table")
      ->check(CLI::ExistingFile);
  sample->add_option("--lexicon", cfg.lexicon, "UniMorph triples for candidate selection")
      ->check(CLI::ExistingFile);

  auto* train_cmd = app.add_subcommand("train", "extract baseline rules");
  train_cmd->add_option("--in", cfg.in)->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", cfg.out, "rule table")->required();

  auto* predict = app.add_subcommand("predict", "inflect test items");
  predict->add_option("--in", cfg.in)->required()->check(CLI::ExistingFile);
  predict->add_option("--rules", cfg.rules)->check(CLI::ExistingFile);
  predict->add_option("--out", cfg.out);
  predict->add_option("--track", cfg.track, "context corpus: copy baseline");

  auto* evaluate = app.add_subcommand("evaluate", "score systems, write TSV and JSON");
  evaluate->add_option("--gold", cfg.gold, "[LANG=]PATH")->required();
  evaluate->add_option("--preds", cfg.preds, "[SYSTEM[:LANG]=]PATH");
  evaluate->add_option("--train", cfg.train, "[LANG=]PATH, enables oracle-fc");
  evaluate->add_option("--out", cfg.out, "report prefix (PREFIX.tsv, PREFIX.json)");
  evaluate->add_option("--track", cfg.track, "gold files are context corpora");
  evaluate->add_option("--alpha", cfg.alpha)->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--jobs", cfg.jobs)->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "oracle-fc and oracle-e accuracies");
  oracle->add_option("--train", cfg.train)->required()->check(CLI::ExistingFile);
  oracle->add_option("--test", cfg.test_path, "gold test triples")
      ->required()
      ->check(CLI::ExistingFile);
  oracle->add_option("--preds", cfg.preds, "[SYSTEM=]PATH");
  oracle->add_option("--out", cfg.out);

  auto* compare = app.add_subcommand("compare", "pairwise sign tests and table marks");
  compare->add_option("--gold", cfg.gold)->required();
  compare->add_option("--preds", cfg.preds, "[SYSTEM=]PATH")->required();
  compare->add_option("--train", cfg.train, "enables the oracle-fc comparison");
  compare->add_option("--out", cfg.out);
  compare->add_option("--alpha", cfg.alpha)->check(CLI::Range(0.0, 1.0));

  for (auto* sub : {sample, train_cmd, predict, evaluate, oracle, compare}) {
    sub->add_option("--language", cfg.language, "language identifier");
  }

  std::vector<std::string> argv_store{"reinflect"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    return run(cfg, out);
  } catch (const UsageError& e) {
    err << "reinflect: usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "reinflect: error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace reinflect::cli
