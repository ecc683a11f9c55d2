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

// UTF-8 codec over Unicode scalar values. Every string operation in the
// library (alignment, rules, edit distance) works on the decoded scalars.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "reinflect/detail/case_table.hpp"
#include "reinflect/error.hpp"

namespace reinflect::utf8 {

namespace detail {

// Returns the scalar at `pos` and advances `pos`, or throws Utf8Error.
// Rejects overlong encodings, surrogates and values above U+10FFFF.
inline char32_t next(std::string_view s, std::size_t& pos) {
  const std::size_t start = pos;
  const auto byte = [&](std::size_t i) {
    return static_cast<std::uint8_t>(s[i]);
  };
  const std::uint8_t lead = byte(pos);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  std::size_t len;
  char32_t cp;
  char32_t min;
  if ((lead & 0xE0) == 0xC0) {
    len = 2, cp = lead & 0x1F, min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3, cp = lead & 0x0F, min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4, cp = lead & 0x07, min = 0x10000;
  } else {
    throw Utf8Error(start);
  }
  if (start + len > s.size()) throw Utf8Error(start);
  for (std::size_t i = 1; i < len; ++i) {
    const std::uint8_t b = byte(start + i);
    if ((b & 0xC0) != 0x80) throw Utf8Error(start);
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    throw Utf8Error(start);
  }
  pos += len;
  return cp;
}

}  // namespace detail

inline std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) out.push_back(detail::next(s, pos));
  return out;
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append(out, cp);
  return out;
}

/// Throws Utf8Error (offset relative to `s`) if `s` is not valid UTF-8.
inline void validate(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) detail::next(s, pos);
}

inline bool is_valid(std::string_view s) noexcept {
  try {
    validate(s);
    return true;
  } catch (const Utf8Error&) {
    return false;
  }
}

/// Number of scalar values in a valid UTF-8 string.
inline std::size_t length(std::string_view s) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    detail::next(s, pos);
    ++n;
  }
  return n;
}

/// Unicode simple lowercase mapping of one scalar.
constexpr char32_t to_lower(char32_t cp) noexcept {
  for (const auto& run : reinflect::detail::kLowerRuns) {
    if (run.first > cp) break;
    if (cp <= run.last && (cp - run.first) % run.stride == 0) {
      return static_cast<char32_t>(static_cast<std::int32_t>(cp) + run.delta);
    }
  }
  return cp;
}

inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) append(out, to_lower(detail::next(s, pos)));
  return out;
}

}  // namespace reinflect::utf8
