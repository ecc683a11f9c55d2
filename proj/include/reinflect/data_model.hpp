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

// Domain types and readers/writers for UniMorph triple files and the
// three-column context corpora used for inflection in context.

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reinflect/detail/strings.hpp"
#include "reinflect/error.hpp"
#include "reinflect/utf8.hpp"

namespace reinflect {

/// Morphosyntactic description: an ordered bundle of UniMorph tags whose
/// first element is the part of speech. Canonical text is the tags joined
/// by ';'. Equality is exact sequence equality.
class Msd {
 public:
  explicit Msd(std::vector<std::string> tags) : tags_(std::move(tags)) {
    if (tags_.empty()) throw DataError("MSD must contain at least one tag");
    for (const auto& tag : tags_) {
      if (tag.empty()) throw DataError("MSD contains an empty tag");
      if (tag.find_first_of("; \t\r\n") != std::string::npos) {
        throw DataError("MSD tag '" + tag + "' contains a separator");
      }
    }
  }

  static Msd parse(std::string_view text) {
    std::vector<std::string> tags;
    for (auto part : detail::split(text, ';')) tags.emplace_back(part);
    return Msd(std::move(tags));
  }

  const std::vector<std::string>& tags() const noexcept { return tags_; }
  const std::string& pos() const noexcept { return tags_.front(); }
  std::string str() const { return detail::join(tags_, ";"); }

  friend auto operator<=>(const Msd&, const Msd&) = default;
  friend bool operator==(const Msd&, const Msd&) = default;

 private:
  std::vector<std::string> tags_;
};

/// One (lemma, MSD, form) item. In covered test data the form is unknown and
/// left empty; a legitimate form is never empty.
struct Triple {
  std::string lemma;
  Msd msd;
  std::string form;

  bool has_form() const noexcept { return !form.empty(); }

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct Dataset {
  std::string language;
  std::vector<Triple> triples;

  std::size_t size() const noexcept { return triples.size(); }
  bool empty() const noexcept { return triples.empty(); }
};

enum class ParseMode { kTrain, kTest };

/// Reads a TAB-separated triple file. Train mode requires exactly three
/// columns. Test mode accepts two or three and ignores the third, so the
/// returned triples carry no form. Blank lines are skipped.
inline Dataset parse_triples(std::string_view text, ParseMode mode,
                             std::string language = {}) {
  Dataset out{std::move(language), {}};
  text = detail::strip_bom(text);
  const auto rows = detail::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view row = rows[i];
    if (row.empty()) continue;
    try {
      utf8::validate(row);
    } catch (const Utf8Error& e) {
      throw ParseError(line_no, e.what());
    }
    const auto cols = detail::split(row, '\t');
    const bool ok = mode == ParseMode::kTrain
                        ? cols.size() == 3
                        : cols.size() == 2 || cols.size() == 3;
    if (!ok) {
      throw ParseError(line_no, "expected " +
                                    std::string(mode == ParseMode::kTrain
                                                    ? "3"
                                                    : "2 or 3") +
                                    " TAB-separated columns, found " +
                                    std::to_string(cols.size()));
    }
    if (cols[0].empty()) throw ParseError(line_no, "empty lemma");
    std::string form;
    if (mode == ParseMode::kTrain) {
      if (cols[2].empty()) throw ParseError(line_no, "empty form");
      form = std::string(cols[2]);
    }
    try {
      out.triples.push_back(
          Triple{std::string(cols[0]), Msd::parse(cols[1]), std::move(form)});
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

/// Inverse of parse_triples: one "lemma\tMSD\tform" line per triple, or
/// "lemma\tMSD" for triples without a form.
inline std::string format_triples(const Dataset& data) {
  std::string out;
  for (const auto& t : data.triples) {
    out += t.lemma;
    out += '\t';
    out += t.msd.str();
    if (t.has_form()) {
      out += '\t';
      out += t.form;
    }
    out += '\n';
  }
  return out;
}

// --- Context corpora -------------------------------------------------------

struct Token {
  std::string surface;  // empty for the covered target slot
  std::optional<std::string> lemma;
  std::optional<Msd> msd;

  friend bool operator==(const Token&, const Token&) = default;
};

/// A sentence for inflection in context. At most one token is the target
/// slot; when gold data is known it is carried alongside the set of
/// contextually plausible forms (which always contains the gold form).
struct AnnotatedSentence {
  std::vector<Token> tokens;
  std::optional<std::size_t> target_index;
  std::optional<std::string> gold_form;
  std::optional<std::set<std::string>> plausible_forms;

  const Token* target() const noexcept {
    return target_index ? &tokens[*target_index] : nullptr;
  }

  friend bool operator==(const AnnotatedSentence&,
                         const AnnotatedSentence&) = default;
};

enum class Track { kOne = 1, kTwo = 2 };

namespace detail {

inline std::optional<std::string> field(std::string_view col) {
  if (col == "_" || col.empty()) return std::nullopt;
  return std::string(col);
}

}  // namespace detail

/// Reads a blank-line-separated corpus with rows FORM, LEMMA, MSD ("_" for
/// absent). The row with FORM "_" and a lemma is the target slot; it may
/// carry a fourth column "gold|alt|..." listing the gold form followed by
/// other plausible forms. Lines that start with '#' and contain no TAB are
/// comments.
///
/// Track 1 requires lemma and MSD on every non-target token. Track 2 rejects
/// any MSD.
inline std::vector<AnnotatedSentence> parse_context_corpus(std::string_view text,
                                                           Track track) {
  std::vector<AnnotatedSentence> out;
  std::optional<AnnotatedSentence> current;
  auto flush = [&] {
    if (current && !current->tokens.empty()) out.push_back(std::move(*current));
    current.reset();
  };

  text = detail::strip_bom(text);
  const auto rows = detail::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view row = rows[i];
    if (row.empty()) {
      flush();
      continue;
    }
    if (row.front() == '#' && row.find('\t') == std::string_view::npos) {
      continue;
    }
    try {
      utf8::validate(row);
    } catch (const Utf8Error& e) {
      throw ParseError(line_no, e.what());
    }
    const auto cols = detail::split(row, '\t');
    if (cols.size() != 3 && cols.size() != 4) {
      throw ParseError(line_no, "expected 3 TAB-separated columns, found " +
                                    std::to_string(cols.size()));
    }
    if (!current) current.emplace();

    Token token;
    token.lemma = detail::field(cols[1]);
    if (auto msd = detail::field(cols[2])) {
      if (track == Track::kTwo) {
        throw ParseError(line_no, "track 2 corpora carry no MSD annotation");
      }
      try {
        token.msd = Msd::parse(*msd);
      } catch (const DataError& e) {
        throw ParseError(line_no, e.what());
      }
    }
    const bool is_target = cols[0] == "_" && token.lemma.has_value();
    if (is_target) {
      if (current->target_index) {
        throw ParseError(line_no, "second target slot in one sentence");
      }
      current->target_index = current->tokens.size();
      if (cols.size() == 4) {
        const auto forms = detail::split(cols[3], '|');
        std::set<std::string> plausible;
        for (auto f : forms) {
          if (f.empty()) throw ParseError(line_no, "empty plausible form");
          plausible.emplace(f);
        }
        current->gold_form = std::string(forms.front());
        current->plausible_forms = std::move(plausible);
      }
    } else {
      if (cols.empty() || cols[0].empty()) {
        throw ParseError(line_no, "empty FORM column");
      }
      if (cols.size() == 4) {
        throw ParseError(line_no, "only the target row may list plausible forms");
      }
      token.surface = std::string(cols[0]);
      if (track == Track::kOne && (!token.lemma || !token.msd)) {
        throw ParseError(line_no,
                         "track 1 tokens must carry both lemma and MSD");
      }
    }
    current->tokens.push_back(std::move(token));
  }
  flush();
  return out;
}

/// Writes sentences in the format parse_context_corpus reads. Sentences are
/// separated by one blank line.
inline std::string format_context_corpus(
    std::span<const AnnotatedSentence> sentences) {
  std::string out;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto& sentence = sentences[s];
    if (s) out += '\n';
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      const Token& tok = sentence.tokens[i];
      const bool is_target = sentence.target_index == i;
      out += is_target ? std::string("_") : tok.surface;
      out += '\t';
      out += tok.lemma.value_or("_");
      out += '\t';
      out += tok.msd ? tok.msd->str() : std::string("_");
      if (is_target && sentence.gold_form) {
        out += '\t';
        out += *sentence.gold_form;
        if (sentence.plausible_forms) {
          for (const auto& f : *sentence.plausible_forms) {
            if (f != *sentence.gold_form) {
              out += '|';
              out += f;
            }
          }
        }
      }
      out += '\n';
    }
  }
  return out;
}

// --- Lemma normalization ---------------------------------------------------

namespace detail {

inline bool is_language(std::string_view language,
                        std::initializer_list<std::string_view> names) {
  const std::string lower = ascii_lower(language);
  for (auto n : names) {
    if (lower == n) return true;
  }
  return false;
}

}  // namespace detail

/// Finnish lemmas lose their '#' compound boundaries; Russian lemmas are
/// lowercased with the Unicode simple mapping. Other languages pass through.
inline std::string normalize_lemma(std::string_view lemma,
                                   std::string_view language) {
  if (detail::is_language(language, {"fi", "fin", "finnish"})) {
    std::string out;
    out.reserve(lemma.size());
    for (char c : lemma) {
      if (c != '#') out.push_back(c);
    }
    return out;
  }
  if (detail::is_language(language, {"ru", "rus", "russian"})) {
    return utf8::to_lower(lemma);
  }
  return std::string(lemma);
}

}  // namespace reinflect
