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

// TSV and JSON renderings of an EvalReport.

#pragma once

#include <iomanip>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reinflect/detail/strings.hpp"
#include "reinflect/evaluator.hpp"

namespace reinflect {

/// Two decimals, independent of the global locale.
inline std::string fixed2(double value) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::fixed << std::setprecision(2) << value;
  return out.str();
}

inline std::string format_marks(const Marks& m) {
  std::vector<std::string> parts;
  if (m.bold) parts.emplace_back("bold");
  if (m.dagger) parts.emplace_back("dagger");
  if (m.double_dagger) parts.emplace_back("double_dagger");
  return parts.empty() ? "-" : detail::join(parts, ",");
}

/// Rows "system language accuracy avg_levenshtein marks". Oracle rows carry
/// "-" for edit distance; the macro-average rows use language "ALL" and the
/// mark "partial" when a system skipped languages.
inline std::string to_tsv(const EvalReport& report) {
  std::string out;
  out += "# sign test: exact two-sided binomial; items where both systems are "
         "right or both wrong are discarded; alpha=" +
         fixed2(report.alpha) + "\n";
  out += "system\tlanguage\taccuracy\tavg_levenshtein\tmarks\n";
  const auto row = [&](const std::string& system, const std::string& language,
                       const std::string& acc, const std::string& lev,
                       const std::string& marks) {
    out += system + '\t' + language + '\t' + acc + '\t' + lev + '\t' + marks + '\n';
  };
  for (const auto& lang : report.languages) {
    if (lang.oracle_fc) row("oracle-fc", lang.language, fixed2(*lang.oracle_fc), "-", "-");
    if (lang.oracle_e) row("oracle-e", lang.language, fixed2(*lang.oracle_e), "-", "-");
    for (const auto& [system, s] : lang.scores) {
      const auto m = lang.marks.find(system);
      row(system, lang.language, fixed2(s.accuracy), fixed2(s.avg_levenshtein),
          m == lang.marks.end() ? "-" : format_marks(m->second));
    }
  }
  if (report.oracle_fc) row("oracle-fc", "ALL", fixed2(*report.oracle_fc), "-", "-");
  if (report.oracle_e) row("oracle-e", "ALL", fixed2(*report.oracle_e), "-", "-");
  for (const auto& [system, agg] : report.aggregate) {
    row(system, "ALL", fixed2(agg.accuracy), fixed2(agg.avg_levenshtein),
        agg.partial ? "partial" : "-");
  }
  return out;
}

inline nlohmann::ordered_json to_json(const EvalReport& report) {
  using nlohmann::ordered_json;
  ordered_json root;
  root["sign_test"] = "exact two-sided binomial, agreeing items discarded";
  root["alpha"] = report.alpha;
  ordered_json langs = ordered_json::array();
  for (const auto& lang : report.languages) {
    ordered_json l;
    l["language"] = lang.language;
    l["items"] = lang.items;
    l["oracle_e"] = lang.oracle_e ? ordered_json(*lang.oracle_e) : ordered_json();
    l["oracle_fc"] = lang.oracle_fc ? ordered_json(*lang.oracle_fc) : ordered_json();
    ordered_json systems = ordered_json::object();
    for (const auto& [system, s] : lang.scores) {
      ordered_json entry;
      entry["accuracy"] = s.accuracy;
      entry["avg_levenshtein"] = s.avg_levenshtein;
      if (const auto r = lang.relaxed.find(system); r != lang.relaxed.end()) {
        entry["relaxed_accuracy"] = r->second;
      }
      if (const auto m = lang.marks.find(system); m != lang.marks.end()) {
        const Marks& mk = m->second;
        entry["bold"] = mk.bold;
        entry["dagger"] = mk.dagger;
        entry["double_dagger"] = mk.double_dagger;
        entry["p_vs_best"] = mk.p_vs_best;
        entry["p_vs_oracle_e"] =
            mk.p_vs_oracle_e ? ordered_json(*mk.p_vs_oracle_e) : ordered_json();
        entry["p_vs_oracle_fc"] =
            mk.p_vs_oracle_fc ? ordered_json(*mk.p_vs_oracle_fc) : ordered_json();
      }
      systems[system] = entry;
    }
    l["systems"] = systems;
    ordered_json pairs = ordered_json::array();
    for (const auto& [key, p] : lang.p_values) {
      pairs.push_back({{"a", key.first}, {"b", key.second}, {"p", p}});
    }
    l["p_values"] = pairs;
    langs.push_back(l);
  }
  root["languages"] = langs;
  ordered_json agg = ordered_json::object();
  for (const auto& [system, a] : report.aggregate) {
    agg[system] = {{"accuracy", a.accuracy},
                   {"avg_levenshtein", a.avg_levenshtein},
                   {"languages", a.languages},
                   {"partial", a.partial}};
  }
  root["aggregate"] = agg;
  root["oracle_e"] = report.oracle_e ? ordered_json(*report.oracle_e) : ordered_json();
  root["oracle_fc"] = report.oracle_fc ? ordered_json(*report.oracle_fc) : ordered_json();
  return root;
}

}  // namespace reinflect
