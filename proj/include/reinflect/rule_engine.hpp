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

// Rule-based inflection baseline. Each training pair (lemma, form) is
// aligned character by character; suffix rules "lhs$ -> rhs$" are read off
// every lemma suffix, and prefix rules "^lhs -> ^rhs" off a changed word
// start. At prediction time the longest matching lhs wins, ties going to the
// most frequent rhs.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reinflect/data_model.hpp"
#include "reinflect/detail/strings.hpp"
#include "reinflect/error.hpp"
#include "reinflect/utf8.hpp"

namespace reinflect {

// --- Alignment -------------------------------------------------------------

enum class EditOp { kMatch, kSubstitute, kDelete, kInsert };

/// One alignment column. Each side holds zero or one scalar.
struct AlignedPair {
  std::u32string lemma;
  std::u32string form;

  EditOp op() const noexcept {
    if (lemma.empty()) return EditOp::kInsert;
    if (form.empty()) return EditOp::kDelete;
    return lemma == form ? EditOp::kMatch : EditOp::kSubstitute;
  }

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

struct Alignment {
  std::vector<AlignedPair> pairs;

  std::size_t cost() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(pairs.begin(), pairs.end(), [](const AlignedPair& p) {
          return p.op() != EditOp::kMatch;
        }));
  }
  std::u32string lemma() const {
    std::u32string s;
    for (const auto& p : pairs) s += p.lemma;
    return s;
  }
  std::u32string form() const {
    std::u32string s;
    for (const auto& p : pairs) s += p.form;
    return s;
  }
};

/// Minimum edit distance alignment with unit costs. Among optimal
/// alignments, columns are chosen from the word start with preference
/// match > substitute > delete > insert, which leaves unmatched material at
/// the word end.
inline Alignment align(std::u32string_view lemma, std::u32string_view form) {
  const std::size_t n = lemma.size();
  const std::size_t m = form.size();
  // dist[i][j]: edit distance between lemma[i:] and form[j:].
  std::vector<std::size_t> dist((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& {
    return dist[i * (m + 1) + j];
  };
  for (std::size_t i = n + 1; i-- > 0;) {
    for (std::size_t j = m + 1; j-- > 0;) {
      if (i == n || j == m) {
        at(i, j) = (n - i) + (m - j);
        continue;
      }
      at(i, j) = std::min({at(i + 1, j + 1) + (lemma[i] == form[j] ? 0 : 1),
                           at(i + 1, j) + 1, at(i, j + 1) + 1});
    }
  }

  Alignment out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    const std::size_t here = at(i, j);
    if (i < n && j < m && at(i + 1, j + 1) + (lemma[i] == form[j] ? 0 : 1) == here) {
      out.pairs.push_back({std::u32string(1, lemma[i]), std::u32string(1, form[j])});
      ++i, ++j;
    } else if (i < n && at(i + 1, j) + 1 == here) {
      out.pairs.push_back({std::u32string(1, lemma[i]), {}});
      ++i;
    } else {
      out.pairs.push_back({{}, std::u32string(1, form[j])});
      ++j;
    }
  }
  return out;
}

inline Alignment align(std::string_view lemma, std::string_view form) {
  return align(std::u32string_view(utf8::decode(lemma)),
               std::u32string_view(utf8::decode(form)));
}

// --- Rules -----------------------------------------------------------------

enum class RuleKind { kSuffix, kPrefix };

inline std::string_view to_string(RuleKind kind) noexcept {
  return kind == RuleKind::kSuffix ? "suffix" : "prefix";
}

/// A rewrite anchored at the word end (suffix) or start (prefix). The anchor
/// is implied by the kind and never stored in the strings.
struct Rule {
  RuleKind kind;
  std::string lhs;
  std::string rhs;

  friend bool operator==(const Rule&, const Rule&) = default;
  friend auto operator<=>(const Rule&, const Rule&) = default;
};

/// "ti$ -> dista$" or "^ge -> ^" style rendering, for diagnostics.
inline std::string describe(const Rule& rule) {
  if (rule.kind == RuleKind::kSuffix) {
    return rule.lhs + "$ -> " + rule.rhs + "$";
  }
  return "^" + rule.lhs + " -> ^" + rule.rhs;
}

namespace detail {

inline std::string lemma_side(const std::vector<AlignedPair>& pairs,
                              std::size_t begin, std::size_t end) {
  std::u32string s;
  for (std::size_t i = begin; i < end; ++i) s += pairs[i].lemma;
  return utf8::encode(s);
}

inline std::string form_side(const std::vector<AlignedPair>& pairs,
                             std::size_t begin, std::size_t end) {
  std::u32string s;
  for (std::size_t i = begin; i < end; ++i) s += pairs[i].form;
  return utf8::encode(s);
}

}  // namespace detail

/// Rules witnessed by one training pair.
///
/// The word start is a changed prefix region when the alignment opens with
/// non-matching columns and matches somewhere later. That region (plus the
/// first matching column as anchor) yields prefix rules for every lemma
/// prefix length 0..=p. The remaining columns yield suffix rules for every
/// lemma suffix length 0..=n'; each rhs is the form material aligned to the
/// suffix, running to the end of the form.
inline std::vector<Rule> extract_rules(std::string_view lemma,
                                       std::string_view form) {
  const Alignment alignment = align(lemma, form);
  const auto& pairs = alignment.pairs;

  std::size_t first_match = pairs.size();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].op() == EditOp::kMatch) {
      first_match = i;
      break;
    }
  }
  const bool has_prefix = first_match > 0 && first_match < pairs.size();
  const std::size_t rest = has_prefix ? first_match : 0;

  std::vector<Rule> rules;

  std::vector<std::size_t> lemma_cols;
  for (std::size_t i = rest; i < pairs.size(); ++i) {
    if (!pairs[i].lemma.empty()) lemma_cols.push_back(i);
  }
  const std::size_t len = lemma_cols.size();
  for (std::size_t k = 0; k <= len; ++k) {
    std::size_t start;
    if (k == len) {
      start = rest;
    } else if (k == 0) {
      start = lemma_cols.back() + 1;
    } else {
      start = lemma_cols[len - k];
    }
    rules.push_back({RuleKind::kSuffix,
                     detail::lemma_side(pairs, start, pairs.size()),
                     detail::form_side(pairs, start, pairs.size())});
  }

  if (has_prefix) {
    std::vector<std::size_t> head_cols;
    for (std::size_t i = 0; i <= first_match; ++i) {
      if (!pairs[i].lemma.empty()) head_cols.push_back(i);
    }
    for (std::size_t j = 0; j <= head_cols.size(); ++j) {
      const std::size_t end = j == 0 ? head_cols.front() : head_cols[j - 1] + 1;
      rules.push_back({RuleKind::kPrefix, detail::lemma_side(pairs, 0, end),
                       detail::form_side(pairs, 0, end)});
    }
  }
  return rules;
}

inline std::vector<Rule> extract_rules(const Triple& triple) {
  return extract_rules(triple.lemma, triple.form);
}

// --- Rule table ------------------------------------------------------------

/// Trained rules keyed by MSD, kind and lhs, with witness counts per rhs.
/// Immutable once trained; lookups are safe from many threads.
class RuleTable {
 public:
  using Counts = std::map<std::string, std::uint64_t>;  // rhs -> count
  using ByLhs = std::map<std::string, Counts>;

  struct MsdRules {
    ByLhs suffix;
    ByLhs prefix;

    const ByLhs& of(RuleKind kind) const noexcept {
      return kind == RuleKind::kSuffix ? suffix : prefix;
    }
    ByLhs& of(RuleKind kind) noexcept {
      return kind == RuleKind::kSuffix ? suffix : prefix;
    }
  };

  RuleTable() = default;
  explicit RuleTable(std::string language) : language_(std::move(language)) {}

  const std::string& language() const noexcept { return language_; }

  void add(const Msd& msd, const Rule& rule, std::uint64_t count = 1) {
    if (count == 0) throw DataError("rule counts must be positive");
    by_msd_[msd.str()].of(rule.kind)[rule.lhs][rule.rhs] += count;
  }

  const MsdRules* find(const Msd& msd) const {
    const auto it = by_msd_.find(msd.str());
    return it == by_msd_.end() ? nullptr : &it->second;
  }

  /// 0 when the rule was never witnessed.
  std::uint64_t count(const Msd& msd, const Rule& rule) const {
    const MsdRules* rules = find(msd);
    if (!rules) return 0;
    const ByLhs& by_lhs = rules->of(rule.kind);
    const auto lhs = by_lhs.find(rule.lhs);
    if (lhs == by_lhs.end()) return 0;
    const auto rhs = lhs->second.find(rule.rhs);
    return rhs == lhs->second.end() ? 0 : rhs->second;
  }

  /// Number of distinct (MSD, kind, lhs, rhs) entries.
  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (const auto& [msd, rules] : by_msd_) {
      for (const auto& [lhs, counts] : rules.suffix) n += counts.size();
      for (const auto& [lhs, counts] : rules.prefix) n += counts.size();
    }
    return n;
  }

  /// Keyed by canonical MSD text.
  const std::map<std::string, MsdRules>& entries() const noexcept {
    return by_msd_;
  }

 private:
  std::string language_;
  std::map<std::string, MsdRules> by_msd_;
};

inline RuleTable train(const Dataset& data) {
  if (data.empty()) throw DataError("cannot train on an empty dataset");
  RuleTable table(data.language);
  for (std::size_t i = 0; i < data.triples.size(); ++i) {
    const Triple& t = data.triples[i];
    if (!t.has_form()) {
      throw DataError("training triple " + std::to_string(i + 1) +
                      " has no inflected form");
    }
    for (const Rule& rule : extract_rules(t)) table.add(t.msd, rule);
  }
  return table;
}

// --- Application -----------------------------------------------------------

/// Outcome of apply() together with the rules that produced it.
struct Application {
  std::string output;
  std::optional<Rule> suffix;
  std::optional<Rule> prefix;
};

namespace detail {

// Byte offsets of every scalar boundary in a valid UTF-8 string, including
// 0 and s.size().
inline std::vector<std::size_t> boundaries(std::string_view s) {
  std::vector<std::size_t> out{0};
  std::size_t pos = 0;
  while (pos < s.size()) {
    utf8::detail::next(s, pos);
    out.push_back(pos);
  }
  return out;
}

// Highest count wins; equal counts go to the lexicographically smallest rhs.
inline const std::string& best_rhs(const RuleTable::Counts& counts) {
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

}  // namespace detail

/// Applies the best suffix rule for `msd`, then the best prefix rule whose
/// lhs starts the intermediate result. Unseen MSDs copy the lemma.
inline Application explain(const RuleTable& table, std::string_view lemma,
                           const Msd& msd) {
  Application out{std::string(lemma), std::nullopt, std::nullopt};
  const RuleTable::MsdRules* rules = table.find(msd);
  if (!rules) return out;

  {
    const auto cuts = detail::boundaries(out.output);
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      const std::string_view lhs = std::string_view(out.output).substr(cuts[c]);
      const auto it = rules->suffix.find(std::string(lhs));
      if (it == rules->suffix.end()) continue;
      const std::string& rhs = detail::best_rhs(it->second);
      out.suffix = Rule{RuleKind::kSuffix, it->first, rhs};
      out.output = out.output.substr(0, cuts[c]) + rhs;
      break;
    }
  }
  if (!rules->prefix.empty()) {
    const auto cuts = detail::boundaries(out.output);
    for (std::size_t c = cuts.size(); c-- > 0;) {
      const std::string_view lhs =
          std::string_view(out.output).substr(0, cuts[c]);
      const auto it = rules->prefix.find(std::string(lhs));
      if (it == rules->prefix.end()) continue;
      const std::string& rhs = detail::best_rhs(it->second);
      out.prefix = Rule{RuleKind::kPrefix, it->first, rhs};
      out.output = rhs + out.output.substr(cuts[c]);
      break;
    }
  }
  return out;
}

inline std::string apply(const RuleTable& table, std::string_view lemma,
                         const Msd& msd) {
  return explain(table, lemma, msd).output;
}

// --- Serialization ---------------------------------------------------------

/// One "MSD\tkind\tlhs\trhs\tcount" line per entry, lines sorted bytewise.
inline std::string serialize(const RuleTable& table) {
  std::vector<std::string> lines;
  lines.reserve(table.size());
  for (const auto& [msd, rules] : table.entries()) {
    for (RuleKind kind : {RuleKind::kSuffix, RuleKind::kPrefix}) {
      for (const auto& [lhs, counts] : rules.of(kind)) {
        for (const auto& [rhs, count] : counts) {
          std::string line = msd;
          line += '\t';
          line += to_string(kind);
          line += '\t';
          line += lhs;
          line += '\t';
          line += rhs;
          line += '\t';
          line += std::to_string(count);
          lines.push_back(std::move(line));
        }
      }
    }
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

inline RuleTable parse_rule_table(std::string_view text,
                                  std::string language = {}) {
  RuleTable table(std::move(language));
  const auto rows = detail::lines(detail::strip_bom(text));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (rows[i].empty()) continue;
    try {
      utf8::validate(rows[i]);
    } catch (const Utf8Error& e) {
      throw ParseError(line_no, e.what());
    }
    const auto cols = detail::split(rows[i], '\t');
    if (cols.size() != 5) {
      throw ParseError(line_no, "expected 5 TAB-separated columns, found " +
                                    std::to_string(cols.size()));
    }
    RuleKind kind;
    if (cols[1] == "suffix") {
      kind = RuleKind::kSuffix;
    } else if (cols[1] == "prefix") {
      kind = RuleKind::kPrefix;
    } else {
      throw ParseError(line_no, "unknown rule kind '" + std::string(cols[1]) + "'");
    }
    std::uint64_t count = 0;
    const std::string count_text(cols[4]);
    if (count_text.empty() ||
        count_text.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError(line_no, "count must be a positive integer");
    }
    try {
      count = std::stoull(count_text);
    } catch (const std::exception&) {
      throw ParseError(line_no, "count out of range");
    }
    if (count == 0) throw ParseError(line_no, "count must be a positive integer");
    try {
      const Msd msd = Msd::parse(cols[0]);
      Rule rule{kind, std::string(cols[2]), std::string(cols[3])};
      if (table.count(msd, rule) != 0) {
        throw ParseError(line_no, "duplicate rule entry");
      }
      table.add(msd, rule, count);
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return table;
}

}  // namespace reinflect
