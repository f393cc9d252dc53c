//
// Copyright 2026 the mupir authors
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
//
#pragma once

#include "mupir/core.hpp"
#include "mupir/random.hpp"
#include "mupir/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

// Distributional privacy checks. A source is blind to the desired index
// exactly when its query-set distribution is the same for every theta. On
// instances small enough to enumerate every random outcome, that identity is
// testable with exact rational probabilities, and the mutual information
// between the observed set and theta is exactly zero iff the distributions
// coincide. Larger instances fall back to seeded sampling.

namespace mupir {

/// Distribution of one source's query set over the generator's randomness,
/// for a fixed desired index. Keys are canonical serializations.
struct QueryDistribution {
  std::uint32_t K = 0;
  std::uint32_t S = 0;
  std::uint32_t source = 0;
  std::uint32_t theta = 0;
  std::map<std::string, Rational> support;
};

/// Order-independent text form of a query set: term lists sorted, ids
/// dropped, indices 1-based, rendered as a nested JSON array.
inline std::string canonical_query_key(const std::vector<QueryElement>& elements) {
  std::vector<std::vector<BitRef>> sets;
  sets.reserve(elements.size());
  for (const auto& e : elements) sets.push_back(e.terms);
  std::sort(sets.begin(), sets.end());
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) out << ',';
    out << '[';
    for (std::size_t j = 0; j < sets[i].size(); ++j) {
      if (j) out << ',';
      out << '[' << sets[i][j].message + 1 << ',' << sets[i][j].position + 1 << ']';
    }
    out << ']';
  }
  out << ']';
  return out.str();
}

/// Collapse raw storage positions to per-message ranks (the order pattern of
/// the positions, not their values). Sampling can cover this quotient space;
/// the raw-position space is far too large to estimate from samples.
inline std::vector<QueryElement> rank_relabeled(const std::vector<QueryElement>& elements) {
  std::map<std::uint32_t, std::vector<std::uint32_t>> positions;
  for (const auto& e : elements)
    for (const auto& t : e.terms) positions[t.message].push_back(t.position);
  std::map<std::uint32_t, std::map<std::uint32_t, std::uint32_t>> rank;
  for (auto& [m, ps] : positions) {
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    for (std::uint32_t i = 0; i < ps.size(); ++i) rank[m][ps[i]] = i;
  }
  std::vector<QueryElement> out = elements;
  for (auto& e : out)
    for (auto& t : e.terms) t.position = rank[t.message][t.position];
  return out;
}

/// Plan source driven by external randomness; the seam that lets tests run
/// the enumeration against deliberately modified generators.
using PlanGenerator = std::function<RetrievalPlan(RandomSource&)>;

/// Exhaustive distribution of `source`'s query set under `generator`,
/// enumerating every outcome of the generator's draw tape. The number of
/// outcomes (permutations times per-source orderings) must not exceed
/// `bound`.
inline QueryDistribution enumerate_distribution_with(std::uint32_t K, std::uint32_t S,
                                                     std::uint32_t source, std::uint32_t theta,
                                                     const PlanGenerator& generator,
                                                     std::uint64_t bound = 1000000) {
  if (source >= S) throw ConfigError("enumerate_distribution: source out of range");
  if (theta >= K) throw ConfigError("enumerate_distribution: theta out of range");
  QueryDistribution dist;
  dist.K = K;
  dist.S = S;
  dist.source = source;
  dist.theta = theta;

  TapeRandom tape;
  RetrievalPlan plan = generator(tape);
  BigInt outcomes = 1;
  for (const std::uint64_t r : tape.radices()) outcomes *= r;
  if (outcomes > bound)
    throw ConfigError("enumerate_distribution: outcome space too large; use sampled mode");

  const Rational p = Rational(1) / Rational(outcomes);
  dist.support[canonical_query_key(plan.query_sets[source])] += p;
  while (tape.advance()) {
    tape.rewind();
    plan = generator(tape);
    dist.support[canonical_query_key(plan.query_sets[source])] += p;
  }
  return dist;
}

/// Exhaustive distribution under the honest generator.
inline QueryDistribution enumerate_distribution(std::uint32_t K, std::uint32_t S,
                                                std::uint32_t source, std::uint32_t theta,
                                                std::uint64_t bound = 1000000) {
  const SystemConfig config{K, 1, S};
  return enumerate_distribution_with(
      K, S, source, theta,
      [&](RandomSource& rng) { return generate_plan(config, theta, rng); }, bound);
}

/// Empirical distribution over `count` seeded plans, on the rank-relabeled
/// quotient space. A smoke test for instances beyond the exhaustive bound;
/// never a substitute for it.
inline QueryDistribution enumerate_distribution_sampled(std::uint32_t K, std::uint32_t S,
                                                        std::uint32_t source, std::uint32_t theta,
                                                        std::uint32_t count, std::uint64_t seed) {
  if (source >= S) throw ConfigError("enumerate_distribution: source out of range");
  if (theta >= K) throw ConfigError("enumerate_distribution: theta out of range");
  if (count == 0) throw ConfigError("enumerate_distribution: sample count must be positive");
  const SystemConfig config{K, 1, S};
  QueryDistribution dist;
  dist.K = K;
  dist.S = S;
  dist.source = source;
  dist.theta = theta;
  const Rational p(1, count);
  for (std::uint32_t i = 0; i < count; ++i) {
    SeededRandom rng(seed + i);
    const RetrievalPlan plan = generate_plan(config, theta, rng);
    dist.support[canonical_query_key(rank_relabeled(plan.query_sets[source]))] += p;
  }
  return dist;
}

/// Total-variation distance between two distributions over the same key
/// space, as an exact rational.
inline Rational total_variation(const QueryDistribution& a, const QueryDistribution& b) {
  Rational sum = 0;
  auto abs_diff = [](const Rational& x, const Rational& y) {
    return x >= y ? x - y : y - x;
  };
  for (const auto& [key, pa] : a.support) {
    const auto it = b.support.find(key);
    sum += abs_diff(pa, it == b.support.end() ? Rational(0) : it->second);
  }
  for (const auto& [key, pb] : b.support) {
    if (a.support.find(key) == a.support.end()) sum += pb;
  }
  return sum / 2;
}

struct MutualInformation {
  bool exact_zero = false;  // distributions identical as exact rational maps
  double bits = 0.0;        // numeric estimate when not exactly zero
};

/// I(Q_s; theta) under a uniform prior on theta. Exactly zero iff the K
/// per-theta distributions are identical maps; otherwise a floating-point
/// diagnostic value.
inline MutualInformation mutual_information_with_theta(
    const std::vector<QueryDistribution>& distributions) {
  if (distributions.empty())
    throw ConfigError("mutual_information: no distributions");
  const std::uint32_t K = distributions.front().K;
  if (distributions.size() != K)
    throw ConfigError("mutual_information: need one distribution per message index");
  for (std::uint32_t i = 0; i < K; ++i) {
    const QueryDistribution& d = distributions[i];
    if (d.K != K || d.S != distributions.front().S ||
        d.source != distributions.front().source || d.theta != i)
      throw ConfigError("mutual_information: mismatched distribution parameters");
  }

  bool identical = true;
  for (std::uint32_t i = 1; i < K && identical; ++i)
    identical = distributions[i].support == distributions.front().support;
  if (identical) return MutualInformation{true, 0.0};

  std::map<std::string, double> marginal;
  for (const auto& d : distributions)
    for (const auto& [key, p] : d.support)
      marginal[key] += p.convert_to<double>() / K;
  double bits = 0.0;
  for (const auto& d : distributions) {
    for (const auto& [key, p] : d.support) {
      const double pq_given_theta = p.convert_to<double>();
      if (pq_given_theta <= 0.0) continue;
      bits += (pq_given_theta / K) * std::log2(pq_given_theta / marginal[key]);
    }
  }
  return MutualInformation{false, bits};
}

/// True iff every source's shape has exactly (S-1)^(k-1) elements per
/// k-subset of messages, the structural prerequisite of per-source privacy.
inline bool shape_symmetry_check(const RetrievalPlan& plan) {
  const std::uint32_t K = plan.config.K;
  const std::uint32_t S = plan.sources();
  if (K >= 63) throw ConfigError("shape_symmetry_check: K too large for subset masks");

  CanonicalShape expected;
  if (S == 1) {
    for (std::uint32_t m = 0; m < K; ++m) expected[std::uint64_t{1} << m] = 1;
  } else {
    const std::uint64_t all = (std::uint64_t{1} << K) - 1;
    for (std::uint64_t mask = 1; mask <= all; ++mask) {
      std::uint64_t count = 1;
      for (int k = __builtin_popcountll(mask); k > 1; --k) count *= S - 1;
      expected[mask] = count;
    }
  }
  for (const auto& set : plan.query_sets)
    if (canonical_shape(set) != expected) return false;
  return true;
}

}  // namespace mupir
