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

// Data construction for inflection in context: UD -> UniMorph tag
// conversion, candidate sentence selection against a UniMorph lexicon, the
// track-2 view of a sentence, and the copy baseline.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "reinflect/data_model.hpp"
#include "reinflect/detail/strings.hpp"
#include "reinflect/error.hpp"

namespace reinflect {

/// Deterministic UD -> UniMorph conversion rules, loaded from a file.
///
///   Number=Plur<TAB>PL<TAB>20      feature to tag, sorted by rank
///   Gender=Fem<TAB>-                feature dropped
///   POS:NOUN<TAB>N                  part of speech
class MsdMappingTable {
 public:
  struct FeatureRule {
    std::optional<std::string> tag;  // nullopt: dropped
    int rank = 0;
  };

  void add_pos(std::string ud_pos, std::string tag) {
    pos_[std::move(ud_pos)] = std::move(tag);
  }
  void add_feature(std::string ud_feature, std::optional<std::string> tag,
                   int rank = 0) {
    features_[std::move(ud_feature)] = {std::move(tag), rank};
  }

  const std::string* pos(std::string_view ud_pos) const {
    const auto it = pos_.find(std::string(ud_pos));
    return it == pos_.end() ? nullptr : &it->second;
  }
  const FeatureRule* feature(std::string_view ud_feature) const {
    const auto it = features_.find(std::string(ud_feature));
    return it == features_.end() ? nullptr : &it->second;
  }

  static MsdMappingTable parse(std::string_view text) {
    MsdMappingTable table;
    const auto rows = detail::lines(detail::strip_bom(text));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::size_t line_no = i + 1;
      const std::string_view row = rows[i];
      if (row.empty() || row.front() == '#') continue;
      const auto cols = detail::split(row, '\t');
      if (row.substr(0, 4) == "POS:") {
        if (cols.size() != 2 || cols[0].size() == 4 || cols[1].empty()) {
          throw ParseError(line_no, "expected POS:<UDPOS><TAB><TAG>");
        }
        table.add_pos(std::string(cols[0].substr(4)), std::string(cols[1]));
        continue;
      }
      if (cols.size() < 2 || cols.size() > 3 ||
          cols[0].find('=') == std::string_view::npos || cols[1].empty()) {
        throw ParseError(line_no, "expected KEY=VALUE<TAB>TAG|-<TAB>rank");
      }
      std::optional<std::string> tag;
      if (cols[1] != "-") {
        tag = std::string(cols[1]);
        if (cols.size() != 3) throw ParseError(line_no, "mapped feature needs a rank");
      }
      int rank = 0;
      if (cols.size() == 3) {
        try {
          std::size_t used = 0;
          const std::string r(cols[2]);
          rank = std::stoi(r, &used);
          if (used != r.size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
          throw ParseError(line_no, "rank must be an integer");
        }
      }
      table.add_feature(std::string(cols[0]), std::move(tag), rank);
    }
    return table;
  }

 private:
  std::map<std::string, std::string> pos_;
  std::map<std::string, FeatureRule> features_;
};

/// POS tag first, then mapped feature tags by (rank, tag). Unmapped or
/// dropped features vanish; duplicate tags collapse.
inline Msd convert_msd(std::string_view ud_pos, std::string_view ud_feats,
                       const MsdMappingTable& table) {
  const std::string* pos = table.pos(ud_pos);
  if (!pos) throw DataError("no UniMorph mapping for UD POS '" + std::string(ud_pos) + "'");
  std::vector<std::pair<int, std::string>> ranked;
  if (ud_feats != "_" && !ud_feats.empty()) {
    for (auto feat : detail::split(ud_feats, '|')) {
      if (feat.find('=') == std::string_view::npos) {
        throw DataError("malformed UD feature '" + std::string(feat) + "'");
      }
      const auto* rule = table.feature(feat);
      if (rule && rule->tag) ranked.emplace_back(rule->rank, *rule->tag);
    }
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::string> tags{*pos};
  for (auto& [rank, tag] : ranked) {
    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) {
      tags.push_back(std::move(tag));
    }
  }
  return Msd(std::move(tags));
}

/// Reads FORM, LEMMA, UPOS and FEATS from CoNLL-U rows, converts the tags
/// and normalizes lemmas for `language`. Multiword-token ranges and empty
/// nodes are skipped, as are all other columns. The result is track-1 style
/// with no target slot.
inline std::vector<AnnotatedSentence> read_ud_corpus(std::string_view text,
                                                     const MsdMappingTable& table,
                                                     std::string_view language = {}) {
  std::vector<AnnotatedSentence> out;
  AnnotatedSentence current;
  const auto flush = [&] {
    if (!current.tokens.empty()) out.push_back(std::move(current));
    current = {};
  };
  const auto rows = detail::lines(detail::strip_bom(text));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view row = rows[i];
    if (row.empty()) {
      flush();
      continue;
    }
    if (row.front() == '#') continue;
    try {
      utf8::validate(row);
    } catch (const Utf8Error& e) {
      throw ParseError(line_no, e.what());
    }
    const auto cols = detail::split(row, '\t');
    if (cols.size() != 10) {
      throw ParseError(line_no, "expected 10 CoNLL-U columns, found " +
                                    std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;
    try {
      current.tokens.push_back(Token{std::string(cols[1]),
                                     normalize_lemma(cols[2], language),
                                     convert_msd(cols[3], cols[5], table)});
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  flush();
  return out;
}

/// UniMorph triples indexed for exact (form, lemma, MSD) membership.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(const Dataset& data) {
    for (const auto& t : data.triples) add(t);
  }

  void add(const Triple& t) {
    tables_[{t.lemma, t.msd.str()}].insert(t.form);
  }

  bool contains(std::string_view form, std::string_view lemma, const Msd& msd) const {
    const auto it = tables_.find({std::string(lemma), msd.str()});
    return it != tables_.end() && it->second.count(std::string(form)) > 0;
  }

  /// Forms listed for one paradigm cell; empty when unknown.
  std::set<std::string> forms(std::string_view lemma, const Msd& msd) const {
    const auto it = tables_.find({std::string(lemma), msd.str()});
    return it == tables_.end() ? std::set<std::string>{} : it->second;
  }

 private:
  std::map<std::pair<std::string, std::string>, std::set<std::string>> tables_;
};

struct Candidate {
  std::size_t sentence = 0;  // index into the input
  std::vector<std::size_t> positions;
};

/// Sentences containing at least one token whose (form, lemma, MSD) is in
/// the lexicon, with every such position.
inline std::vector<Candidate> select_candidates(
    std::span<const AnnotatedSentence> sentences, const Lexicon& lexicon) {
  std::vector<Candidate> out;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    Candidate c{s, {}};
    const auto& tokens = sentences[s].tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      if (sentences[s].target_index == i || !t.lemma || !t.msd) continue;
      if (lexicon.contains(t.surface, *t.lemma, *t.msd)) c.positions.push_back(i);
    }
    if (!c.positions.empty()) out.push_back(std::move(c));
  }
  return out;
}

/// Covers the token at `position`: its surface becomes the gold form, which
/// is also the only plausible form until annotators add more.
inline AnnotatedSentence mark_target(AnnotatedSentence sentence, std::size_t position) {
  if (position >= sentence.tokens.size()) throw DataError("target position out of range");
  Token& t = sentence.tokens[position];
  if (!t.lemma) throw DataError("target token has no lemma");
  if (sentence.target_index) throw DataError("sentence already has a target");
  sentence.gold_form = t.surface;
  sentence.plausible_forms = std::set<std::string>{t.surface};
  sentence.target_index = position;
  t.surface.clear();
  return sentence;
}

/// Drops every MSD and every lemma except the target's.
inline AnnotatedSentence strip_to_track2(AnnotatedSentence sentence) {
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    Token& t = sentence.tokens[i];
    t.msd.reset();
    if (sentence.target_index != i) t.lemma.reset();
  }
  return sentence;
}

/// Predicts the (normalized) target lemma.
inline std::string copy_baseline(const AnnotatedSentence& sentence,
                                 std::string_view language) {
  const Token* target = sentence.target();
  if (!target || !target->lemma) throw DataError("sentence has no target slot");
  return normalize_lemma(*target->lemma, language);
}

}  // namespace reinflect
