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

// Scoring and analysis: per-form accuracy, mean edit distance, relaxed
// accuracy against plausible forms, ensemble and feature-combination
// oracles, and exact sign tests between systems.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reinflect/data_model.hpp"
#include "reinflect/error.hpp"
#include "reinflect/utf8.hpp"

namespace reinflect {

struct PredictionSet {
  std::string system_id;
  std::vector<std::string> predictions;
};

/// Unit-cost edit distance over Unicode scalar values.
inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  const std::u32string ua = utf8::decode(a);
  const std::u32string ub = utf8::decode(b);
  return levenshtein(std::u32string_view(ua), std::u32string_view(ub));
}

struct Score {
  double accuracy = 0;         // percentage points
  double avg_levenshtein = 0;
  std::size_t items = 0;
};

namespace detail {

inline void check_lengths(std::size_t gold, std::size_t preds,
                          std::string_view who) {
  if (gold != preds) {
    throw DataError(std::string(who) + ": " + std::to_string(preds) +
                    " predictions for " + std::to_string(gold) + " gold items");
  }
}

}  // namespace detail

inline std::vector<std::string> gold_forms(const Dataset& gold) {
  std::vector<std::string> forms;
  forms.reserve(gold.size());
  for (const auto& t : gold.triples) forms.push_back(t.form);
  return forms;
}

/// Per-item exact-match indicators.
inline std::vector<bool> correctness(std::span<const std::string> gold,
                                     const PredictionSet& preds) {
  detail::check_lengths(gold.size(), preds.predictions.size(), preds.system_id);
  std::vector<bool> out(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    out[i] = preds.predictions[i] == gold[i];
  }
  return out;
}

inline Score score(std::span<const std::string> gold, const PredictionSet& preds) {
  detail::check_lengths(gold.size(), preds.predictions.size(), preds.system_id);
  if (gold.empty()) throw DataError("nothing to score: empty gold set");
  std::size_t correct = 0;
  std::size_t distance = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    correct += preds.predictions[i] == gold[i];
    distance += levenshtein(std::string_view(preds.predictions[i]),
                            std::string_view(gold[i]));
  }
  const auto n = static_cast<double>(gold.size());
  return {100.0 * static_cast<double>(correct) / n,
          static_cast<double>(distance) / n, gold.size()};
}

inline Score score(const Dataset& gold, const PredictionSet& preds) {
  const auto forms = gold_forms(gold);
  return score(std::span<const std::string>(forms), preds);
}

/// Percentage of predictions found in the item's plausible-form set.
inline double score_relaxed(std::span<const AnnotatedSentence> gold,
                            const PredictionSet& preds) {
  detail::check_lengths(gold.size(), preds.predictions.size(), preds.system_id);
  if (gold.empty()) throw DataError("nothing to score: empty gold set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].plausible_forms) {
      throw DataError("item " + std::to_string(i + 1) +
                      " has no plausible-form set");
    }
    correct += gold[i].plausible_forms->count(preds.predictions[i]);
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(gold.size());
}

/// Keeps items with at most `max_alternatives` plausible forms.
inline std::vector<AnnotatedSentence> filter_plausible(
    std::span<const AnnotatedSentence> items, std::size_t max_alternatives = 5) {
  std::vector<AnnotatedSentence> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].plausible_forms) {
      throw DataError("item " + std::to_string(i + 1) +
                      " has no plausible-form set");
    }
    if (items[i].plausible_forms->size() <= max_alternatives) {
      out.push_back(items[i]);
    }
  }
  return out;
}

// --- Oracles ---------------------------------------------------------------

inline double percent(const std::vector<bool>& correct) {
  if (correct.empty()) throw DataError("nothing to score: empty gold set");
  const auto hits = std::count(correct.begin(), correct.end(), true);
  return 100.0 * static_cast<double>(hits) / static_cast<double>(correct.size());
}

/// Correct on an item iff any system is.
inline std::vector<bool> ensemble_correctness(std::span<const std::string> gold,
                                              std::span<const PredictionSet> systems) {
  if (systems.empty()) throw DataError("the ensemble oracle needs a system");
  std::vector<bool> out(gold.size(), false);
  for (const auto& system : systems) {
    const auto c = correctness(gold, system);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] || c[i];
  }
  return out;
}

inline double oracle_ensemble(const Dataset& gold,
                              std::span<const PredictionSet> systems) {
  const auto forms = gold_forms(gold);
  return percent(ensemble_correctness(forms, systems));
}

/// Correct on an item iff its exact MSD bundle occurs in training.
inline std::vector<bool> feature_combination_correctness(const Dataset& train,
                                                         const Dataset& test) {
  std::set<Msd> seen;
  for (const auto& t : train.triples) seen.insert(t.msd);
  std::vector<bool> out;
  out.reserve(test.size());
  for (const auto& t : test.triples) out.push_back(seen.count(t.msd) > 0);
  return out;
}

inline double oracle_feature_combination(const Dataset& train, const Dataset& test) {
  return percent(feature_combination_correctness(train, test));
}

// --- Significance ----------------------------------------------------------

/// Two-sided exact binomial probability of a split at least as uneven as
/// (k, n - k) under p = 1/2, clamped to 1.
inline double binomial_two_sided(std::size_t n, std::size_t k) {
  if (n == 0) return 1.0;
  k = std::min(k, n - k);
  double tail;
  if (n <= 62) {
    std::uint64_t c = 1;
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i <= k; ++i) {
      sum += c;
      c = c * (n - i) / (i + 1);
    }
    tail = std::ldexp(static_cast<double>(sum), -static_cast<int>(n));
  } else {
    // Walk down from the largest term to keep the sum in range.
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    long double term = std::exp(static_cast<long double>(
        std::lgamma(nd + 1) - std::lgamma(kd + 1) - std::lgamma(nd - kd + 1) -
        nd * std::log(2.0)));
    long double sum = 0;
    for (std::size_t i = k + 1; i-- > 0;) {
      sum += term;
      if (i == 0) break;
      term *= static_cast<long double>(i) / static_cast<long double>(n - i + 1);
    }
    tail = static_cast<double>(sum);
  }
  return std::min(1.0, 2.0 * tail);
}

/// Exact sign test on paired correctness indicators. Items where both sides
/// agree (both right or both wrong) are discarded.
inline double sign_test(const std::vector<bool>& a, const std::vector<bool>& b) {
  detail::check_lengths(a.size(), b.size(), "sign test");
  std::size_t a_wins = 0;
  std::size_t b_wins = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && !b[i]) ++a_wins;
    if (b[i] && !a[i]) ++b_wins;
  }
  return binomial_two_sided(a_wins + b_wins, std::min(a_wins, b_wins));
}

inline double sign_test(const Dataset& gold, const PredictionSet& a,
                        const PredictionSet& b) {
  const auto forms = gold_forms(gold);
  return sign_test(correctness(forms, a), correctness(forms, b));
}

struct Marks {
  bool bold = false;           // best system or not significantly worse
  bool dagger = false;         // significantly better than oracle-fc
  bool double_dagger = false;  // not significantly different from oracle-e
  double p_vs_best = 1.0;
  std::optional<double> p_vs_oracle_fc;
  std::optional<double> p_vs_oracle_e;
};

/// Per-item correctness of the two oracles. Either may be absent.
struct OracleVectors {
  std::optional<std::vector<bool>> ensemble;
  std::optional<std::vector<bool>> feature_combination;
};

/// Table marks for every system. The best system is the one with the
/// highest accuracy (first listed wins ties).
inline std::map<std::string, Marks> significance_marks(
    std::span<const std::string> gold, std::span<const PredictionSet> systems,
    const OracleVectors& oracles, double alpha = 0.05) {
  std::map<std::string, Marks> out;
  if (systems.empty()) return out;
  std::vector<std::vector<bool>> correct;
  for (const auto& s : systems) correct.push_back(correctness(gold, s));

  std::size_t best = 0;
  for (std::size_t i = 1; i < systems.size(); ++i) {
    if (percent(correct[i]) > percent(correct[best])) best = i;
  }

  const auto hits = [](const std::vector<bool>& v) {
    return std::count(v.begin(), v.end(), true);
  };
  for (std::size_t i = 0; i < systems.size(); ++i) {
    Marks m;
    m.p_vs_best = i == best ? 1.0 : sign_test(correct[best], correct[i]);
    m.bold = i == best || m.p_vs_best >= alpha;
    if (oracles.feature_combination) {
      m.p_vs_oracle_fc = sign_test(correct[i], *oracles.feature_combination);
      m.dagger = *m.p_vs_oracle_fc < alpha &&
                 hits(correct[i]) > hits(*oracles.feature_combination);
    }
    if (oracles.ensemble) {
      m.p_vs_oracle_e = sign_test(correct[i], *oracles.ensemble);
      m.double_dagger = *m.p_vs_oracle_e >= alpha;
    }
    out[systems[i].system_id] = m;
  }
  return out;
}

inline std::map<std::string, Marks> significance_marks(
    const Dataset& gold, std::span<const PredictionSet> systems,
    const OracleVectors& oracles, double alpha = 0.05) {
  const auto forms = gold_forms(gold);
  return significance_marks(std::span<const std::string>(forms), systems,
                            oracles, alpha);
}

// --- Reports ---------------------------------------------------------------

/// Everything needed to score one language.
struct LanguageInput {
  std::string language;
  std::vector<std::string> gold;
  std::vector<PredictionSet> systems;
  /// Per-item oracle-fc correctness, when training data is known.
  std::optional<std::vector<bool>> feature_combination;
  /// Plausible-form sets for relaxed accuracy, aligned with `gold`.
  std::optional<std::vector<AnnotatedSentence>> plausible;
};

struct LanguageResult {
  std::string language;
  std::size_t items = 0;
  std::map<std::string, Score> scores;
  std::map<std::string, double> relaxed;
  std::optional<double> oracle_e;
  std::optional<double> oracle_fc;
  /// Keyed by (system_a, system_b) with system_a < system_b.
  std::map<std::pair<std::string, std::string>, double> p_values;
  std::map<std::string, Marks> marks;
};

struct Aggregate {
  double accuracy = 0;
  double avg_levenshtein = 0;
  std::size_t languages = 0;
  bool partial = false;  // did not cover every language
};

/// Macro averages weight every language equally. Systems missing a language
/// are averaged over what they cover and flagged partial.
struct EvalReport {
  double alpha = 0.05;
  std::vector<LanguageResult> languages;
  std::map<std::string, Aggregate> aggregate;
  std::optional<double> oracle_e;
  std::optional<double> oracle_fc;
};

inline LanguageResult evaluate_language(const LanguageInput& in, double alpha) {
  LanguageResult out;
  out.language = in.language;
  out.items = in.gold.size();
  const std::span<const std::string> gold(in.gold);
  const std::span<const PredictionSet> systems(in.systems);

  std::set<std::string> ids;
  for (const auto& s : systems) {
    if (!ids.insert(s.system_id).second) {
      throw DataError("system '" + s.system_id + "' listed twice for " + in.language);
    }
    out.scores[s.system_id] = score(gold, s);
    if (in.plausible) out.relaxed[s.system_id] = score_relaxed(*in.plausible, s);
  }
  std::vector<std::vector<bool>> correct;
  for (const auto& s : systems) correct.push_back(correctness(gold, s));
  for (std::size_t i = 0; i < systems.size(); ++i) {
    for (std::size_t j = 0; j < systems.size(); ++j) {
      if (systems[i].system_id < systems[j].system_id) {
        out.p_values[{systems[i].system_id, systems[j].system_id}] =
            sign_test(correct[i], correct[j]);
      }
    }
  }

  OracleVectors oracles;
  if (!systems.empty()) {
    oracles.ensemble = ensemble_correctness(gold, systems);
    out.oracle_e = percent(*oracles.ensemble);
  }
  if (in.feature_combination) {
    detail::check_lengths(gold.size(), in.feature_combination->size(), "oracle-fc");
    oracles.feature_combination = in.feature_combination;
    out.oracle_fc = percent(*in.feature_combination);
  }
  out.marks = significance_marks(gold, systems, oracles, alpha);
  return out;
}

/// Scores every language (up to `jobs` at a time) and reduces the macro
/// averages. Languages are reported in name order.
inline EvalReport build_report(const std::vector<LanguageInput>& inputs,
                               double alpha = 0.05, std::size_t jobs = 1) {
  EvalReport report;
  report.alpha = alpha;
  jobs = std::max<std::size_t>(jobs, 1);
  std::vector<LanguageResult> results(inputs.size());
  for (std::size_t start = 0; start < inputs.size(); start += jobs) {
    const std::size_t end = std::min(inputs.size(), start + jobs);
    std::vector<std::future<LanguageResult>> pending;
    for (std::size_t i = start + 1; i < end; ++i) {
      pending.push_back(std::async(std::launch::async, evaluate_language,
                                   std::cref(inputs[i]), alpha));
    }
    results[start] = evaluate_language(inputs[start], alpha);
    for (std::size_t i = start + 1; i < end; ++i) {
      results[i] = pending[i - start - 1].get();
    }
  }
  std::sort(results.begin(), results.end(),
            [](const auto& a, const auto& b) { return a.language < b.language; });
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].language == results[i - 1].language) {
      throw DataError("language '" + results[i].language + "' given twice");
    }
  }

  std::map<std::string, std::pair<double, double>> sums;
  double e_sum = 0, fc_sum = 0;
  std::size_t e_n = 0, fc_n = 0;
  for (const auto& lang : results) {
    for (const auto& [system, s] : lang.scores) {
      auto& agg = report.aggregate[system];
      sums[system].first += s.accuracy;
      sums[system].second += s.avg_levenshtein;
      ++agg.languages;
    }
    if (lang.oracle_e) e_sum += *lang.oracle_e, ++e_n;
    if (lang.oracle_fc) fc_sum += *lang.oracle_fc, ++fc_n;
  }
  for (auto& [system, agg] : report.aggregate) {
    const auto n = static_cast<double>(agg.languages);
    agg.accuracy = sums[system].first / n;
    agg.avg_levenshtein = sums[system].second / n;
    agg.partial = agg.languages < results.size();
  }
  if (e_n) report.oracle_e = e_sum / static_cast<double>(e_n);
  if (fc_n) report.oracle_fc = fc_sum / static_cast<double>(fc_n);
  report.languages = std::move(results);
  return report;
}

}  // namespace reinflect
