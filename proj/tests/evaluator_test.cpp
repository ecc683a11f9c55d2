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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "reinflect/evaluator.hpp"
#include "reinflect/report.hpp"

namespace reinflect {
namespace {

Dataset gold_set(const std::vector<std::string>& forms) {
  Dataset d{"xx", {}};
  for (std::size_t i = 0; i < forms.size(); ++i) {
    d.triples.push_back({"l" + std::to_string(i), Msd::parse("N"), forms[i]});
  }
  return d;
}

// Predictions that are right exactly where `mask` is true.
PredictionSet system_from(const std::string& id, const std::vector<std::string>& gold,
                          const std::vector<bool>& mask) {
  PredictionSet p{id, {}};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    p.predictions.push_back(mask[i] ? gold[i] : gold[i] + "#");
  }
  return p;
}

std::vector<std::string> numbered(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

// --- levenshtein -----------------------------------------------------------

TEST(LevenshteinTest, Examples) {
  EXPECT_EQ(levenshtein("kodista", "kodista"), 0u);
  EXPECT_EQ(levenshtein("", "abc"), 3u);
  EXPECT_EQ(levenshtein("kitten", "sitting"), 3u);
  EXPECT_EQ(levenshtein("kitten", "sitting"),
            oracle::brute_force_levenshtein(U"kitten", U"sitting"));
  EXPECT_EQ(levenshtein("Häuser", "Haus"), 3u);  // scalars, not bytes
}

TEST(LevenshteinTest, MetricPropertiesAgainstBruteForce) {
  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = oracle::random_unicode(gen, 10);
    const auto b = oracle::random_unicode(gen, 10);
    const auto c = oracle::random_unicode(gen, 10);
    const std::size_t ab = levenshtein(a, b);
    EXPECT_EQ(ab, oracle::brute_force_levenshtein(a, b));
    EXPECT_EQ(ab, levenshtein(b, a));
    EXPECT_EQ(ab == 0, a == b);
    EXPECT_LE(levenshtein(a, c), ab + levenshtein(b, c));
  }
}

// --- score -----------------------------------------------------------------

TEST(ScoreTest, PerfectAndHandComputed) {
  const Dataset gold = gold_set({"kodista", "luodista"});
  const Score perfect = score(gold, {"s", {"kodista", "luodista"}});
  EXPECT_DOUBLE_EQ(perfect.accuracy, 100.0);
  EXPECT_DOUBLE_EQ(perfect.avg_levenshtein, 0.0);
  const Score half = score(gold, {"s", {"kodista", "luodistaxx"}});
  EXPECT_DOUBLE_EQ(half.accuracy, 50.0);
  EXPECT_DOUBLE_EQ(half.avg_levenshtein, 1.0);
}

TEST(ScoreTest, CopyBaselineOnConstructedSet) {
  Dataset gold{"xx", {}};
  PredictionSet copy{"copy", {}};
  std::size_t distance = 0;
  for (int i = 0; i < 10; ++i) {
    const std::string lemma = "talo" + std::to_string(i);
    const std::string form = i < 3 ? lemma : lemma + std::string(i, 'n');
    gold.triples.push_back({lemma, Msd::parse("N;PL"), form});
    copy.predictions.push_back(lemma);
    distance += form.size() - lemma.size();
  }
  const Score s = score(gold, copy);
  EXPECT_DOUBLE_EQ(s.accuracy, 30.0);
  EXPECT_DOUBLE_EQ(s.avg_levenshtein, distance / 10.0);
}

TEST(ScoreTest, Errors) {
  EXPECT_THROW(score(gold_set({"a"}), {"s", {}}), DataError);
  EXPECT_THROW(score(gold_set({}), {"s", {}}), DataError);
}

TEST(ScoreTest, FullAccuracyIffZeroDistance) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> gold, preds;
    for (int i = 0; i < 5; ++i) {
      gold.push_back(utf8::encode(oracle::random_unicode(gen, 3)));
      preds.push_back(gen() % 3 ? gold.back() : utf8::encode(oracle::random_unicode(gen, 3)));
    }
    const Score s = score(std::span<const std::string>(gold), {"s", preds});
    EXPECT_EQ(s.accuracy == 100.0, s.avg_levenshtein == 0.0);
  }
}

// --- relaxed accuracy ------------------------------------------------------

AnnotatedSentence plausible_item(std::set<std::string> forms) {
  AnnotatedSentence s;
  s.tokens.push_back({"", std::string("dog"), std::nullopt});
  s.target_index = 0;
  s.gold_form = *forms.begin();
  s.plausible_forms = std::move(forms);
  return s;
}

TEST(RelaxedTest, CountsAnyPlausibleForm) {
  const std::vector<AnnotatedSentence> items{plausible_item({"dog", "dogs"}),
                                             plausible_item({"cats"})};
  EXPECT_DOUBLE_EQ(score_relaxed(items, {"s", {"dogs", "cats"}}), 100.0);
  EXPECT_DOUBLE_EQ(score_relaxed(items, {"s", {"dog", "cat"}}), 50.0);
  std::vector<AnnotatedSentence> missing{AnnotatedSentence{}};
  EXPECT_THROW(score_relaxed(missing, {"s", {"x"}}), DataError);
}

TEST(RelaxedTest, FilterKeepsAtMostFiveAlternatives) {
  const std::vector<AnnotatedSentence> items{
      plausible_item({"a", "b", "c", "d", "e", "f"}), plausible_item({"a"}),
      plausible_item({"a", "b", "c", "d", "e"})};
  const auto kept = filter_plausible(items);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].plausible_forms->size(), 1u);
  EXPECT_EQ(kept[1].plausible_forms->size(), 5u);
  EXPECT_TRUE(filter_plausible(std::vector<AnnotatedSentence>{}).empty());
}

// --- oracles ---------------------------------------------------------------

TEST(OracleEnsembleTest, Examples) {
  const auto forms = numbered(4);
  const Dataset gold = gold_set(forms);
  const std::vector<PredictionSet> one{system_from("a", forms, {1, 0, 1, 0})};
  EXPECT_DOUBLE_EQ(oracle_ensemble(gold, one), 50.0);
  const std::vector<PredictionSet> halves{system_from("a", forms, {1, 1, 0, 0}),
                                          system_from("b", forms, {0, 0, 1, 1})};
  EXPECT_DOUBLE_EQ(oracle_ensemble(gold, halves), 100.0);
  EXPECT_THROW(oracle_ensemble(gold, std::vector<PredictionSet>{}), DataError);
}

TEST(OracleEnsembleTest, MatchesUnionCount) {
  std::mt19937_64 gen(37);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen() % 30;
    const auto forms = numbered(n);
    std::vector<PredictionSet> systems;
    std::vector<bool> any(n, false);
    for (int s = 0; s < 3; ++s) {
      std::vector<bool> mask(n);
      for (std::size_t i = 0; i < n; ++i) mask[i] = gen() % 2, any[i] = any[i] || mask[i];
      systems.push_back(system_from("s" + std::to_string(s), forms, mask));
    }
    const double expected = 100.0 * std::count(any.begin(), any.end(), true) / n;
    EXPECT_DOUBLE_EQ(oracle_ensemble(gold_set(forms), systems), expected);
  }
}

TEST(OracleFeatureCombinationTest, SeventySevenPercent) {
  Dataset train{"xx", {}};
  Dataset test{"xx", {}};
  for (int i = 0; i < 10; ++i) train.triples.push_back({"a", Msd::parse("V;T" + std::to_string(i)), "b"});
  for (int i = 0; i < 100; ++i) {
    const std::string tag = i < 77 ? "T" + std::to_string(i % 10) : "U" + std::to_string(i);
    test.triples.push_back({"c", Msd::parse("V;" + tag), "d"});
  }
  EXPECT_DOUBLE_EQ(oracle_feature_combination(train, test), 77.0);
  EXPECT_DOUBLE_EQ(oracle_feature_combination(train, train), 100.0);
  EXPECT_DOUBLE_EQ(oracle_feature_combination(Dataset{"xx", {}}, test), 0.0);
  // Bundles compare as whole sequences, not tag sets.
  const Dataset swapped{"xx", {{"c", Msd::parse("T0;V"), "d"}}};
  EXPECT_DOUBLE_EQ(oracle_feature_combination(train, swapped), 0.0);
}

// --- sign test -------------------------------------------------------------

TEST(SignTestTest, Examples) {
  const std::vector<bool> a(8, true), b(8, false);
  EXPECT_DOUBLE_EQ(sign_test(a, b), 2.0 / 256);
  EXPECT_DOUBLE_EQ(sign_test(a, a), 1.0);
  const std::vector<bool> c{1, 1, 1, 0, 0, 0}, d{0, 0, 0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(sign_test(c, d), 1.0);
  EXPECT_THROW(sign_test(a, c), DataError);
}

TEST(SignTestTest, MatchesPascalOracle) {
  for (std::size_t n = 0; n <= 40; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      EXPECT_NEAR(binomial_two_sided(n, k), oracle::pascal_sign_test(n, k), 1e-15)
          << n << "," << k;
    }
  }
  // Large n takes the log-space path.
  for (std::size_t n : {63, 100, 500}) {
    for (std::size_t k = 0; k <= n; k += 7) {
      const double want = oracle::pascal_sign_test(n, k);
      EXPECT_NEAR(binomial_two_sided(n, k), want, 1e-9 * std::max(want, 1e-300))
          << n << "," << k;
    }
  }
}

TEST(SignTestTest, SymmetricInArguments) {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<bool> a(50), b(50);
    for (std::size_t i = 0; i < 50; ++i) a[i] = gen() % 2, b[i] = gen() % 3 == 0;
    EXPECT_DOUBLE_EQ(sign_test(a, b), sign_test(b, a));
  }
}

// --- marks -----------------------------------------------------------------

TEST(MarksTest, SingleSystemIsBold) {
  const auto forms = numbered(3);
  const std::vector<PredictionSet> systems{system_from("only", forms, {1, 0, 0})};
  const auto m = significance_marks(gold_set(forms), systems, {});
  EXPECT_TRUE(m.at("only").bold);
  EXPECT_FALSE(m.at("only").dagger);
}

TEST(MarksTest, DaggerAndDoubleDagger) {
  const auto forms = numbered(12);
  std::vector<bool> mask(12, true);
  mask[9] = mask[10] = mask[11] = false;
  const std::vector<bool> fc(12, false);  // 9 discordant items, all won by the system
  const std::vector<PredictionSet> systems{system_from("sys", forms, mask)};
  OracleVectors oracles;
  oracles.feature_combination = fc;
  oracles.ensemble = mask;
  const Marks m = significance_marks(gold_set(forms), systems, oracles).at("sys");
  EXPECT_TRUE(m.dagger);
  EXPECT_DOUBLE_EQ(*m.p_vs_oracle_fc, 2.0 / 512);
  EXPECT_TRUE(m.double_dagger);
  EXPECT_DOUBLE_EQ(*m.p_vs_oracle_e, 1.0);
}

TEST(MarksTest, SignificantlyWorseSystemLosesBold) {
  const auto forms = numbered(20);
  std::vector<bool> strong(20, true), weak(20, false), close(20, true);
  close[0] = false;
  const std::vector<PredictionSet> systems{system_from("strong", forms, strong),
                                           system_from("weak", forms, weak),
                                           system_from("close", forms, close)};
  const auto m = significance_marks(gold_set(forms), systems, {});
  EXPECT_TRUE(m.at("strong").bold);
  EXPECT_FALSE(m.at("weak").bold);
  EXPECT_TRUE(m.at("close").bold);
}

// --- reports ---------------------------------------------------------------

TEST(BuildReportTest, MacroAverageAndPartialSystems) {
  LanguageInput fin{"fin", {"a", "b"}, {{"x", {"a", "b"}}, {"y", {"a", "c"}}}};
  LanguageInput deu{"deu", {"a", "b", "c", "d"}, {{"x", {"a", "z", "z", "z"}}}};
  deu.feature_combination = std::vector<bool>{true, true, false, false};
  const EvalReport r = build_report({fin, deu}, 0.05, 2);
  ASSERT_EQ(r.languages.size(), 2u);
  EXPECT_EQ(r.languages[0].language, "deu");
  EXPECT_DOUBLE_EQ(r.aggregate.at("x").accuracy, (100.0 + 25.0) / 2);
  EXPECT_FALSE(r.aggregate.at("x").partial);
  EXPECT_TRUE(r.aggregate.at("y").partial);
  EXPECT_EQ(r.aggregate.at("y").languages, 1u);
  EXPECT_DOUBLE_EQ(*r.oracle_fc, 50.0);
  EXPECT_DOUBLE_EQ(*r.oracle_e, (100.0 + 25.0) / 2);
  EXPECT_EQ(r.languages[1].p_values.count({"x", "y"}), 1u);
  EXPECT_THROW(build_report({fin, fin}), DataError);
}

TEST(BuildReportTest, JobsDoNotChangeResults) {
  std::vector<LanguageInput> inputs;
  for (int l = 0; l < 7; ++l) {
    LanguageInput in{"l" + std::to_string(l), numbered(10), {}};
    in.systems.push_back({"s", numbered(10)});
    in.systems.back().predictions[l] = "?";
    inputs.push_back(in);
  }
  EXPECT_EQ(to_tsv(build_report(inputs, 0.05, 1)), to_tsv(build_report(inputs, 0.05, 4)));
}

TEST(ReportTest, TsvAndJsonLayout) {
  LanguageInput fin{"fin", {"kodista", "luodista"}, {{"base", {"kodista", "luoti"}}}};
  fin.feature_combination = std::vector<bool>{true, true};
  const EvalReport r = build_report({fin});
  const std::string tsv = to_tsv(r);
  EXPECT_NE(tsv.find("system\tlanguage\taccuracy\tavg_levenshtein\tmarks\n"), std::string::npos);
  EXPECT_NE(tsv.find("oracle-fc\tfin\t100.00\t-\t-\n"), std::string::npos);
  EXPECT_NE(tsv.find("base\tfin\t50.00\t2.00\tbold,double_dagger\n"), std::string::npos);
  EXPECT_NE(tsv.find("base\tALL\t50.00\t2.00\t-\n"), std::string::npos);
  const auto json = to_json(r);
  EXPECT_DOUBLE_EQ(json["languages"][0]["systems"]["base"]["accuracy"].get<double>(), 50.0);
  EXPECT_TRUE(json["languages"][0]["systems"]["base"]["bold"].get<bool>());
  EXPECT_EQ(json["aggregate"]["base"]["languages"].get<int>(), 1);
}

TEST(ReportTest, FixedTwoDecimals) {
  EXPECT_EQ(fixed2(77.0), "77.00");
  EXPECT_EQ(fixed2(1.0 / 3), "0.33");
}

}  // namespace
}  // namespace reinflect
