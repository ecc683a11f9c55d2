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
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "reinflect/evaluator.hpp"
#include "reinflect/rule_engine.hpp"

namespace reinflect {
namespace {

const Msd kElative = Msd::parse("N;IN+ABL;SG");

std::vector<oracle::Op> ops_of(const Alignment& a) {
  std::vector<oracle::Op> out;
  for (const auto& p : a.pairs) {
    switch (p.op()) {
      case EditOp::kMatch: out.push_back(oracle::Op::kMatch); break;
      case EditOp::kSubstitute: out.push_back(oracle::Op::kSub); break;
      case EditOp::kDelete: out.push_back(oracle::Op::kDel); break;
      case EditOp::kInsert: out.push_back(oracle::Op::kIns); break;
    }
  }
  return out;
}

std::set<Rule> suffix_rules(std::initializer_list<std::pair<const char*, const char*>> rules) {
  std::set<Rule> out;
  for (const auto& [lhs, rhs] : rules) out.insert({RuleKind::kSuffix, lhs, rhs});
  return out;
}

// --- align -----------------------------------------------------------------

TEST(AlignTest, KotiKodista) {
  const Alignment a = align("koti", "kodista");
  const std::vector<AlignedPair> expected{
      {U"k", U"k"}, {U"o", U"o"}, {U"t", U"d"}, {U"i", U"i"},
      {U"", U"s"},  {U"", U"t"},  {U"", U"a"}};
  EXPECT_EQ(a.pairs, expected);
  // Brute force over every edit script: this one is the cheapest and the
  // preferred one under match < substitute < delete < insert.
  EXPECT_EQ(ops_of(a), oracle::preferred_script(U"koti", U"kodista"));
  EXPECT_EQ(a.cost(), oracle::brute_force_levenshtein(U"koti", U"kodista"));
}

TEST(AlignTest, Identity) {
  const Alignment a = align("abc", "abc");
  ASSERT_EQ(a.pairs.size(), 3u);
  for (const auto& p : a.pairs) EXPECT_EQ(p.op(), EditOp::kMatch);
}

// Unit costs make this a 6-edit alignment that keeps "au" at the start;
// deleting the "auf" prefix would cost at least 9.
TEST(AlignTest, SeparableVerbIsMinimumCost) {
  const Alignment a = align("aufbauen", "baust auf");
  EXPECT_EQ(a.cost(), 6u);
  EXPECT_EQ(a.cost(), oracle::brute_force_levenshtein(U"aufbauen", U"baust auf"));
  EXPECT_EQ(ops_of(a), oracle::preferred_script(U"aufbauen", U"baust auf"));
  EXPECT_EQ(a.lemma(), U"aufbauen");
  EXPECT_EQ(a.form(), U"baust auf");
}

TEST(AlignTest, MatchesPreferredScriptOracle) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> len(1, 6);
  std::uniform_int_distribution<int> ch(0, 2);
  for (int trial = 0; trial < 400; ++trial) {
    std::u32string a(len(gen), U'a'), b(len(gen), U'a');
    for (auto& c : a) c = U'a' + ch(gen);
    for (auto& c : b) c = U'a' + ch(gen);
    EXPECT_EQ(ops_of(align(a, b)), oracle::preferred_script(a, b))
        << utf8::encode(a) << " / " << utf8::encode(b);
  }
}

TEST(AlignTest, ConservationAndMinimality) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto a = oracle::random_unicode(gen, 8, 1);
    const auto b = oracle::random_unicode(gen, 8, 1);
    const Alignment al = align(a, b);
    EXPECT_EQ(al.lemma(), a);
    EXPECT_EQ(al.form(), b);
    for (const auto& p : al.pairs) {
      EXPECT_LE(p.lemma.size(), 1u);
      EXPECT_LE(p.form.size(), 1u);
      EXPECT_FALSE(p.lemma.empty() && p.form.empty());
    }
    EXPECT_EQ(al.cost(), levenshtein(a, b));
  }
}

// --- extract_rules ---------------------------------------------------------

TEST(ExtractRulesTest, KotiWorkedExample) {
  const auto rules = extract_rules(Triple{"koti", kElative, "kodista"});
  const std::set<Rule> got(rules.begin(), rules.end());
  EXPECT_EQ(got, suffix_rules({{"", "sta"},
                               {"i", "ista"},
                               {"ti", "dista"},
                               {"oti", "odista"},
                               {"koti", "kodista"}}));
  EXPECT_EQ(rules.size(), 5u);
}

TEST(ExtractRulesTest, UnchangedWordGivesIdentityRules) {
  const auto rules = extract_rules("walk", "walk");
  const std::set<Rule> got(rules.begin(), rules.end());
  EXPECT_EQ(got, suffix_rules({{"", ""}, {"k", "k"}, {"lk", "lk"}, {"alk", "alk"},
                               {"walk", "walk"}}));
}

TEST(ExtractRulesTest, PrefixChange) {
  const auto rules = extract_rules("spielen", "gespielt");
  const std::set<Rule> got(rules.begin(), rules.end());
  EXPECT_TRUE(got.count({RuleKind::kPrefix, "", "ge"}));
  EXPECT_TRUE(got.count({RuleKind::kPrefix, "s", "ges"}));
  EXPECT_EQ(std::count_if(rules.begin(), rules.end(),
                          [](const Rule& r) { return r.kind == RuleKind::kPrefix; }),
            2);
  EXPECT_TRUE(got.count({RuleKind::kSuffix, "en", "t"}));
  EXPECT_TRUE(got.count({RuleKind::kSuffix, "spielen", "spielt"}));
}

TEST(ExtractRulesTest, SeparableVerb) {
  const Triple t{"aufbauen", Msd::parse("V;IND;PRS;2;SG"), "baust auf"};
  const auto rules = extract_rules(t);
  const bool has_prefix = std::any_of(rules.begin(), rules.end(), [](const Rule& r) {
    return r.kind == RuleKind::kPrefix;
  });
  EXPECT_TRUE(has_prefix);
  const bool appends_auf = std::any_of(rules.begin(), rules.end(), [](const Rule& r) {
    return r.kind == RuleKind::kSuffix && r.rhs.ends_with(" auf");
  });
  EXPECT_TRUE(appends_auf);
  EXPECT_EQ(apply(train(Dataset{"deu", {t}}), t.lemma, t.msd), "baust auf");
}

// --- train -----------------------------------------------------------------

TEST(TrainTest, SingleTriple) {
  const RuleTable table = train(Dataset{"fin", {{"koti", kElative, "kodista"}}});
  EXPECT_EQ(table.size(), 5u);
  EXPECT_EQ(table.language(), "fin");
  for (const auto& [lhs, rhs] : {std::pair{"", "sta"}, {"i", "ista"}, {"ti", "dista"},
                                 {"oti", "odista"}, {"koti", "kodista"}}) {
    EXPECT_EQ(table.count(kElative, {RuleKind::kSuffix, lhs, rhs}), 1u);
  }
}

TEST(TrainTest, RepeatedTripleDoublesCounts) {
  const Triple t{"koti", kElative, "kodista"};
  const RuleTable table = train(Dataset{"fin", {t, t}});
  EXPECT_EQ(table.size(), 5u);
  EXPECT_EQ(table.count(kElative, {RuleKind::kSuffix, "oti", "odista"}), 2u);
}

TEST(TrainTest, SharedLhsKeepsBothRhs) {
  const Msd msd = Msd::parse("N;PL");
  const RuleTable table =
      train(Dataset{"x", {{"kati", msd, "katin"}, {"mosi", msd, "mosia"}}});
  EXPECT_EQ(table.count(msd, {RuleKind::kSuffix, "i", "in"}), 1u);
  EXPECT_EQ(table.count(msd, {RuleKind::kSuffix, "i", "ia"}), 1u);
  EXPECT_EQ(table.find(msd)->suffix.at("i").size(), 2u);
}

TEST(TrainTest, EveryMsdHasEmptySuffixRule) {
  const RuleTable table = train(Dataset{"x", {{"go", Msd::parse("V;PST"), "went"},
                                              {"abc", Msd::parse("N"), "xabc"}}});
  for (const auto& [msd, rules] : table.entries()) {
    EXPECT_TRUE(rules.suffix.count("")) << msd;
    for (const auto& [lhs, counts] : rules.suffix) {
      for (const auto& [rhs, c] : counts) EXPECT_GE(c, 1u);
    }
  }
}

TEST(TrainTest, Errors) {
  EXPECT_THROW(train(Dataset{}), DataError);
  EXPECT_THROW(train(Dataset{"x", {{"a", Msd::parse("N"), ""}}}), DataError);
}

// --- apply -----------------------------------------------------------------

TEST(ApplyTest, LuotiBecomesLuodista) {
  const RuleTable table = train(Dataset{"fin", {{"koti", kElative, "kodista"}}});
  const Application app = explain(table, "luoti", kElative);
  EXPECT_EQ(app.output, "luodista");
  ASSERT_TRUE(app.suffix);
  EXPECT_EQ(describe(*app.suffix), "oti$ -> odista$");
  EXPECT_FALSE(app.prefix);
}

TEST(ApplyTest, UnseenMsdCopiesLemma) {
  const RuleTable table = train(Dataset{"fin", {{"koti", kElative, "kodista"}}});
  EXPECT_EQ(apply(table, "luoti", Msd::parse("N;IN+ABL;PL")), "luoti");
  EXPECT_EQ(apply(RuleTable{}, "anything", kElative), "anything");
}

TEST(ApplyTest, FrequencyBreaksTies) {
  RuleTable table;
  const Msd msd = Msd::parse("N;IN+ABL;SG");
  table.add(msd, {RuleKind::kSuffix, "", "sta"});
  table.add(msd, {RuleKind::kSuffix, "i", "ista"}, 3);
  table.add(msd, {RuleKind::kSuffix, "i", "in"}, 1);
  EXPECT_EQ(apply(table, "pappi", msd), "pappista");
  table.add(msd, {RuleKind::kSuffix, "i", "in"}, 5);
  EXPECT_EQ(apply(table, "pappi", msd), "pappin");
}

TEST(ApplyTest, LexicographicRhsAfterFrequency) {
  RuleTable table;
  const Msd msd = Msd::parse("N");
  table.add(msd, {RuleKind::kSuffix, "a", "ab"}, 2);
  table.add(msd, {RuleKind::kSuffix, "a", "aa"}, 2);
  EXPECT_EQ(apply(table, "xa", msd), "xaa");
}

TEST(ApplyTest, PrefixRulesAfterSuffix) {
  const Msd msd = Msd::parse("V;V.PTCP;PST");
  const RuleTable table = train(Dataset{"deu", {{"spielen", msd, "gespielt"},
                                                 {"machen", msd, "gemacht"}}});
  EXPECT_EQ(apply(table, "kaufen", msd), "gekauft");
  const Application app = explain(table, "lachen", msd);
  EXPECT_EQ(app.output, "gelacht");
  ASSERT_TRUE(app.prefix);
  EXPECT_EQ(app.prefix->rhs, "ge");
}

// apply(train({t}), t.lemma, t.msd) == t.form
TEST(ApplyTest, TrainingFidelityProperty) {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> alpha(0, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    std::u32string lemma, form;
    if (trial % 2) {
      lemma = oracle::random_unicode(gen, 12, 1);
      form = oracle::random_unicode(gen, 12, 1);
    } else {
      // Small alphabet so lemma and form overlap a lot.
      std::uniform_int_distribution<int> len(1, 12);
      lemma.assign(len(gen), U'a');
      form.assign(len(gen), U'a');
      for (auto& c : lemma) c = U'a' + alpha(gen);
      for (auto& c : form) c = U'a' + alpha(gen);
    }
    const Triple t{utf8::encode(lemma), Msd::parse("X;Y"), utf8::encode(form)};
    EXPECT_EQ(apply(train(Dataset{"x", {t}}), t.lemma, t.msd), t.form)
        << t.lemma << " -> " << t.form;
  }
}

// Adding a longer matching lhs never makes the applied rule shorter.
TEST(ApplyTest, LongestMatchDominanceProperty) {
  std::mt19937_64 gen(23);
  std::uniform_int_distribution<int> ch(0, 2);
  std::uniform_int_distribution<int> len(0, 6);
  std::uniform_int_distribution<int> count(1, 4);
  const Msd msd = Msd::parse("N");
  const auto word = [&](int n) {
    std::u32string s(n, U'a');
    for (auto& c : s) c = U'a' + ch(gen);
    return utf8::encode(s);
  };
  for (int trial = 0; trial < 500; ++trial) {
    RuleTable table;
    for (int r = 0; r < 6; ++r) {
      table.add(msd, {RuleKind::kSuffix, word(len(gen)), word(len(gen))}, count(gen));
    }
    const std::string lemma = word(1 + len(gen));
    const Application before = explain(table, lemma, msd);
    const std::size_t before_len = before.suffix ? utf8::length(before.suffix->lhs) : 0;
    const std::size_t lemma_len = utf8::length(lemma);
    if (before_len >= lemma_len) continue;
    const std::size_t k = before_len + 1 + gen() % (lemma_len - before_len);
    const auto scalars = utf8::decode(lemma);
    const std::string longer = utf8::encode(scalars.substr(scalars.size() - k));
    table.add(msd, {RuleKind::kSuffix, longer, word(len(gen))});
    const Application after = explain(table, lemma, msd);
    ASSERT_TRUE(after.suffix);
    EXPECT_GE(utf8::length(after.suffix->lhs), k);
  }
}

// --- serialization ---------------------------------------------------------

TEST(RuleTableIoTest, GoldenKoti) {
  const RuleTable table = train(Dataset{"fin", {{"koti", kElative, "kodista"}}});
  EXPECT_EQ(serialize(table),
            "N;IN+ABL;SG\tsuffix\t\tsta\t1\n"
            "N;IN+ABL;SG\tsuffix\ti\tista\t1\n"
            "N;IN+ABL;SG\tsuffix\tkoti\tkodista\t1\n"
            "N;IN+ABL;SG\tsuffix\toti\todista\t1\n"
            "N;IN+ABL;SG\tsuffix\tti\tdista\t1\n");
}

TEST(RuleTableIoTest, RoundTripAndDeterminism) {
  const Msd ptcp = Msd::parse("V;V.PTCP;PST");
  const Dataset data{"deu", {{"spielen", ptcp, "gespielt"},
                             {"machen", ptcp, "gemacht"},
                             {"aufbauen", Msd::parse("V;IND;PRS;2;SG"), "baust auf"},
                             {"Haus", Msd::parse("N;NOM;PL"), "Häuser"}}};
  const std::string text = serialize(train(data));
  EXPECT_EQ(text, serialize(train(data)));
  const RuleTable reread = parse_rule_table(text);
  EXPECT_EQ(serialize(reread), text);
  EXPECT_EQ(apply(reread, "kaufen", ptcp), "gekauft");
}

TEST(RuleTableIoTest, RejectsMalformedLines) {
  EXPECT_THROW(parse_rule_table("N\tsuffix\ta\tb\n"), ParseError);
  EXPECT_THROW(parse_rule_table("N\tinfix\ta\tb\t1\n"), ParseError);
  EXPECT_THROW(parse_rule_table("N\tsuffix\ta\tb\t0\n"), ParseError);
  EXPECT_THROW(parse_rule_table("N\tsuffix\ta\tb\tx\n"), ParseError);
  EXPECT_THROW(parse_rule_table("N\tsuffix\ta\tb\t1\nN\tsuffix\ta\tb\t2\n"), ParseError);
}

}  // namespace
}  // namespace reinflect
