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

// Train/dev/test split construction: frequency-weighted draws without
// replacement, nested low/medium/high training prefixes, and a shuffled
// dev/test tail.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "reinflect/data_model.hpp"
#include "reinflect/detail/strings.hpp"
#include "reinflect/error.hpp"

namespace reinflect {

/// Seeded 64-bit generator. The engine is the standard MT19937-64, whose
/// output sequence is fixed by the C++ standard; the conversions below avoid
/// the implementation-defined std:: distributions so splits are identical on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

struct WeightedItem {
  Triple triple;
  double weight = 1.0;
};

/// Triples with relative (unnormalized) sampling weights.
class WeightedPool {
 public:
  explicit WeightedPool(std::vector<WeightedItem> items)
      : items_(std::move(items)) {
    bool any_positive = false;
    for (const auto& item : items_) {
      if (!std::isfinite(item.weight) || item.weight < 0) {
        throw DataError("weights must be finite and non-negative");
      }
      any_positive = any_positive || item.weight > 0;
    }
    if (!any_positive) {
      throw DataError("pool needs at least one strictly positive weight");
    }
  }

  const std::vector<WeightedItem>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }

 private:
  std::vector<WeightedItem> items_;
};

/// Weight lookup keyed by (lemma, MSD text, form).
using WeightMap = std::map<std::tuple<std::string, std::string, std::string>, double>;

/// Reads "lemma\tMSD\tform\tweight" rows.
inline WeightMap parse_weights(std::string_view text) {
  WeightMap out;
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
    if (cols.size() != 4) {
      throw ParseError(line_no, "expected 4 TAB-separated columns, found " +
                                    std::to_string(cols.size()));
    }
    double weight = 0;
    try {
      std::size_t used = 0;
      const std::string w(cols[3]);
      weight = std::stod(w, &used);
      if (used != w.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw ParseError(line_no, "weight is not a number");
    }
    if (!std::isfinite(weight) || weight < 0) {
      throw ParseError(line_no, "weight must be finite and non-negative");
    }
    try {
      out[{std::string(cols[0]), Msd::parse(cols[1]).str(),
           std::string(cols[2])}] = weight;
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

/// Builds a pool from a dataset, dropping repeated triples (first occurrence
/// wins). Triples missing from `weights` get weight 1.
inline WeightedPool make_pool(const Dataset& data, const WeightMap& weights = {}) {
  std::vector<WeightedItem> items;
  std::set<Triple> seen;
  for (const auto& t : data.triples) {
    if (!seen.insert(t).second) continue;
    const auto it = weights.find({t.lemma, t.msd.str(), t.form});
    items.push_back({t, it == weights.end() ? 1.0 : it->second});
  }
  return WeightedPool(std::move(items));
}

struct SplitSpec {
  std::size_t low = 100;
  std::size_t medium = 1000;
  std::size_t high = 10000;
  std::size_t dev = 1000;
  std::size_t test = 1000;
  std::uint64_t seed = 0;
  /// Shrink the plan instead of failing when the pool is too small.
  bool scale_down = true;
  /// Dev/test are never halved below this size.
  std::size_t min_eval = 50;

  std::size_t total() const noexcept { return high + dev + test; }

  void validate() const {
    if (!(low <= medium && medium <= high)) {
      throw DataError("split sizes must satisfy low <= medium <= high");
    }
  }
};

/// Sizes actually drawn once scale-down has been applied. Omitted regimes
/// have their datasets left empty.
struct SplitPlan {
  std::size_t low = 0;
  std::size_t medium = 0;
  std::size_t high = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
  bool medium_omitted = false;
  bool high_omitted = false;

  std::size_t train_draws() const noexcept {
    return high_omitted ? (medium_omitted ? low : medium) : high;
  }
  std::size_t total() const noexcept { return train_draws() + dev + test; }
};

/// Fits the requested sizes to a pool of `available` items. Drops the high
/// regime first, then halves dev/test toward the floor, then drops the
/// medium regime (retrying the halving from the requested dev/test sizes).
inline SplitPlan plan_splits(const SplitSpec& spec, std::size_t available) {
  spec.validate();
  SplitPlan plan{spec.low, spec.medium, spec.high, spec.dev, spec.test};
  if (plan.total() <= available) return plan;
  if (!spec.scale_down) {
    throw DataError("pool has " + std::to_string(available) +
                    " triples but the split needs " +
                    std::to_string(plan.total()) + " (short by " +
                    std::to_string(plan.total() - available) + ")");
  }

  const auto halve = [&](SplitPlan p) {
    p.dev = spec.dev;
    p.test = spec.test;
    while (p.total() > available &&
           (p.dev > spec.min_eval || p.test > spec.min_eval)) {
      p.dev = std::max(std::min(p.dev, spec.min_eval), p.dev / 2);
      p.test = std::max(std::min(p.test, spec.min_eval), p.test / 2);
    }
    return p;
  };

  plan.high_omitted = true;
  plan.high = 0;
  if (plan.total() <= available) return plan;
  plan = halve(plan);
  if (plan.total() <= available) return plan;

  plan.medium_omitted = true;
  plan.medium = 0;
  plan = halve(plan);
  if (plan.total() <= available) return plan;

  throw DataError("pool has " + std::to_string(available) +
                  " triples, too few even after scaling down (needs " +
                  std::to_string(plan.total()) + ")");
}

struct Splits {
  SplitPlan plan;
  Dataset low;
  Dataset medium;
  Dataset high;
  Dataset dev;
  Dataset test;
};

/// Indices of the pool in weighted draw order, `count` draws long.
/// Each draw picks a remaining item with probability proportional to its
/// weight. Zero-weight items are only reached once every positive-weight
/// item is gone, and are then drawn uniformly.
inline std::vector<std::size_t> weighted_order(const WeightedPool& pool,
                                               std::size_t count, Rng& rng) {
  const auto& items = pool.items();
  const std::size_t n = items.size();
  if (count > n) throw DataError("cannot draw more items than the pool holds");

  // Fenwick tree over the remaining weights.
  std::vector<double> tree(n + 1, 0.0);
  std::vector<double> weight(n);
  std::vector<std::size_t> zero_weight;
  std::size_t positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    weight[i] = items[i].weight;
    if (weight[i] > 0) {
      ++positive;
      for (std::size_t k = i + 1; k <= n; k += k & (0 - k)) tree[k] += weight[i];
    } else {
      zero_weight.push_back(i);
    }
  }
  std::size_t top = 1;
  while (top * 2 <= n) top *= 2;

  std::vector<std::size_t> order;
  order.reserve(count);
  while (order.size() < count) {
    if (positive == 0) {
      const auto j = static_cast<std::size_t>(rng.below(zero_weight.size()));
      order.push_back(zero_weight[j]);
      zero_weight.erase(zero_weight.begin() + static_cast<std::ptrdiff_t>(j));
      continue;
    }
    double total = 0;
    for (std::size_t k = n; k > 0; k -= k & (0 - k)) total += tree[k];
    double target = rng.unit() * total;
    std::size_t pos = 0;
    for (std::size_t step = top; step > 0; step /= 2) {
      if (pos + step <= n && tree[pos + step] <= target) {
        pos += step;
        target -= tree[pos];
      }
    }
    // Rounding in the tree can land on a spent slot; fall back to the
    // nearest remaining positive item.
    std::size_t pick = std::min(pos, n - 1);
    if (weight[pick] <= 0) {
      std::size_t down = pick;
      while (down > 0 && weight[down] <= 0) --down;
      if (weight[down] > 0) {
        pick = down;
      } else {
        while (weight[pick] <= 0) ++pick;
      }
    }
    order.push_back(pick);
    for (std::size_t k = pick + 1; k <= n; k += k & (0 - k)) {
      tree[k] -= weight[pick];
    }
    weight[pick] = 0;
    --positive;
  }
  return order;
}

/// Draws the nested training sets and the dev/test pair. Training sets are
/// prefixes of the draw sequence; the final dev+test draws are reshuffled
/// uniformly and split dev first.
inline Splits sample_splits(const WeightedPool& pool, const SplitSpec& spec,
                            std::string language = {}) {
  const SplitPlan plan = plan_splits(spec, pool.size());
  Rng rng(spec.seed);
  const auto order = weighted_order(pool, plan.total(), rng);

  Splits out;
  out.plan = plan;
  for (Dataset* d : {&out.low, &out.medium, &out.high, &out.dev, &out.test}) {
    d->language = language;
  }
  const auto take = [&](Dataset& d, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      d.triples.push_back(pool.items()[order[i]].triple);
    }
  };
  take(out.low, 0, plan.low);
  if (!plan.medium_omitted) take(out.medium, 0, plan.medium);
  if (!plan.high_omitted) take(out.high, 0, plan.high);

  std::vector<std::size_t> tail(order.begin() + static_cast<std::ptrdiff_t>(plan.train_draws()),
                                order.end());
  rng.shuffle(tail);
  for (std::size_t i = 0; i < tail.size(); ++i) {
    (i < plan.dev ? out.dev : out.test)
        .triples.push_back(pool.items()[tail[i]].triple);
  }
  return out;
}

}  // namespace reinflect
