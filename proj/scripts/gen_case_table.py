#!/usr/bin/env python3
# Copyright 2026 The Reinflect Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates include/reinflect/detail/case_table.hpp.

Emits the Unicode simple lowercase mapping as runs of (first, last, stride,
delta): every code point c in [first, last] with (c - first) % stride == 0
maps to c + delta.
"""
import os
import sys
import unicodedata


def simple_lower(cp):
    lower = chr(cp).lower()
    # U+0130 is the only code point whose full mapping has more than one
    # scalar; its simple mapping is the first one.
    return ord(lower[0])


def main():
    pairs = []
    for cp in range(0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        lo = simple_lower(cp)
        if lo != cp:
            pairs.append((cp, lo - cp))

    runs = []
    for cp, delta in pairs:
        if runs:
            first, last, stride, d = runs[-1]
            if d == delta:
                gap = cp - last
                if first == last and gap in (1, 2):
                    runs[-1] = (first, cp, gap, d)
                    continue
                if gap == stride:
                    runs[-1] = (first, cp, stride, d)
                    continue
        runs.append((cp, cp, 1, delta))

    out = sys.stdout
    header = os.path.join(os.path.dirname(os.path.abspath(__file__)), "license_header.txt")
    with open(header, encoding="utf-8") as f:
        out.write(f.read().rstrip("\n") + "\n\n")
    out.write("// Generated by scripts/gen_case_table.py from Unicode %s. Do not edit.\n"
              % unicodedata.unidata_version)
    out.write("#pragma once\n\n#include <array>\n#include <cstdint>\n\n")
    out.write("namespace reinflect::detail {\n\n")
    out.write("struct CaseRun {\n  char32_t first;\n  char32_t last;\n"
              "  std::uint8_t stride;\n  std::int32_t delta;\n};\n\n")
    out.write("inline constexpr std::array<CaseRun, %d> kLowerRuns = {{\n" % len(runs))
    for first, last, stride, delta in runs:
        out.write("    {0x%04X, 0x%04X, %d, %d},\n" % (first, last, stride, delta))
    out.write("}};\n\n}  // namespace reinflect::detail\n")


if __name__ == "__main__":
    main()
