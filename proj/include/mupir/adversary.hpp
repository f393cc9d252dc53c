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
#include "mupir/scheme.hpp"
#include "mupir/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

// Brute-force index inference against observed query sets. Elements are
// treated as characteristic vectors over the K*L-dimensional GF(2) index
// space, so XOR of two elements is the symmetric difference of their term
// sets. A tally beta[m] counts how often a known singleton of message m is
// exposed, either directly or as the XOR of two observed elements.
//
// The single-set analysis XORs elements only within one query set; on an
// honest set every message scores identically, so the verdict is a tie.
// The cross-user analysis XORs elements across different users' sets, which
// strips side information off the desired-message sums and breaks the tie.

namespace mupir {

/// Lookup table of all K*L singleton index vectors, keyed by the flattened
/// index message*L + position.
struct SingletonCatalog {
  std::uint32_t K = 0;
  std::uint32_t L = 0;

  std::uint64_t size() const { return std::uint64_t{K} * L; }
  bool in_range(const BitRef& t) const { return t.message < K && t.position < L; }
  std::uint32_t message_of_flat(std::uint64_t flat) const {
    return static_cast<std::uint32_t>(flat / L);
  }
};

struct AttackReport {
  std::vector<std::uint64_t> beta;        // per-message identified-bit tally
  bool tie = false;                       // max attained by two or more messages
  std::uint32_t verdict = 0;              // argmax of beta; meaningful when !tie
  std::vector<std::uint32_t> tied_indices;  // all argmax messages
  std::uint64_t comparisons = 0;
};

namespace detail {

/// Sorted flattened index vector of one element.
inline std::vector<std::uint64_t> flatten(const QueryElement& e, const SingletonCatalog& catalog) {
  std::vector<std::uint64_t> v;
  v.reserve(e.terms.size());
  for (const BitRef& t : e.terms) {
    if (!catalog.in_range(t))
      throw ProtocolError("adversary: bit reference outside catalog range");
    v.push_back(std::uint64_t{t.message} * catalog.L + t.position);
  }
  std::sort(v.begin(), v.end());
  return v;
}

/// Symmetric difference of two sorted index vectors.
inline std::vector<std::uint64_t> xor_elements(const std::vector<std::uint64_t>& a,
                                               const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  return out;
}

inline void finalize_verdict(AttackReport& r) {
  const std::uint64_t best = r.beta.empty() ? 0 : *std::max_element(r.beta.begin(), r.beta.end());
  r.tied_indices.clear();
  for (std::uint32_t m = 0; m < r.beta.size(); ++m)
    if (r.beta[m] == best) r.tied_indices.push_back(m);
  r.tie = r.tied_indices.size() >= 2;
  r.verdict = r.tied_indices.empty() ? 0 : r.tied_indices.front();
}

}  // namespace detail

/// Single-set analysis. Singletons score directly; every other element is
/// XORed against every other member of the same set and scores when the
/// result is a singleton. `comparisons` counts the XOR-and-lookup operations
/// actually executed.
inline AttackReport infer_single_user(const std::vector<QueryElement>& query_set,
                                      const SingletonCatalog& catalog) {
  AttackReport r;
  r.beta.assign(catalog.K, 0);
  std::vector<std::vector<std::uint64_t>> flat;
  flat.reserve(query_set.size());
  for (const auto& e : query_set) flat.push_back(detail::flatten(e, catalog));

  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (flat[i].size() == 1) {
      ++r.beta[catalog.message_of_flat(flat[i][0])];
      continue;
    }
    for (std::size_t j = 0; j < flat.size(); ++j) {
      if (j == i) continue;
      ++r.comparisons;
      const auto x = detail::xor_elements(flat[i], flat[j]);
      if (x.size() == 1) ++r.beta[catalog.message_of_flat(x[0])];
    }
  }
  detail::finalize_verdict(r);
  return r;
}

/// Cross-user analysis. For each user u, each element of u's set is held
/// against every other user u': a singleton scores once per u', anything
/// else is XORed against each element of u''s set and scores on singleton
/// results. `comparisons` counts every cross-user element pair examined.
inline AttackReport infer_cross_user(
    const std::vector<std::pair<std::uint32_t, std::vector<QueryElement>>>& sets_by_user,
    const SingletonCatalog& catalog) {
  AttackReport r;
  r.beta.assign(catalog.K, 0);
  std::vector<std::vector<std::vector<std::uint64_t>>> flat;
  flat.reserve(sets_by_user.size());
  for (const auto& [user, set] : sets_by_user) {
    std::vector<std::vector<std::uint64_t>> fs;
    fs.reserve(set.size());
    for (const auto& e : set) fs.push_back(detail::flatten(e, catalog));
    flat.push_back(std::move(fs));
  }

  for (std::size_t u = 0; u < flat.size(); ++u) {
    for (const auto& alpha : flat[u]) {
      for (std::size_t v = 0; v < flat.size(); ++v) {
        if (v == u) continue;
        r.comparisons += flat[v].size();
        if (alpha.size() == 1) {
          ++r.beta[catalog.message_of_flat(alpha[0])];
          continue;
        }
        for (const auto& alpha_prime : flat[v]) {
          const auto x = detail::xor_elements(alpha, alpha_prime);
          if (x.size() == 1) ++r.beta[catalog.message_of_flat(x[0])];
        }
      }
    }
  }
  detail::finalize_verdict(r);
  return r;
}

/// Group a database's observed deliveries by presenting user, for the
/// cross-user analysis.
inline std::vector<std::pair<std::uint32_t, std::vector<QueryElement>>> group_by_user(
    const std::vector<Delivery>& deliveries) {
  std::vector<std::pair<std::uint32_t, std::vector<QueryElement>>> out;
  for (const Delivery& d : deliveries) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const auto& p) { return p.first == d.user; });
    if (it == out.end()) {
      out.emplace_back(d.user, d.elements);
    } else {
      it->second.insert(it->second.end(), d.elements.begin(), d.elements.end());
    }
  }
  return out;
}

struct SweepPoint {
  std::uint32_t K = 0;
  std::uint32_t S = 0;
  std::uint64_t n = 0;       // total observed elements per analysis
  double mean_comparisons = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double slope = 0.0;  // least-squares slope of log(comparisons) vs log(n)
};

/// Runs honest single-database transcripts at each size, executes the
/// cross-user analysis, and fits the growth exponent of the comparison
/// count against total input length.
inline SweepResult complexity_sweep(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& sizes,
                                    std::uint32_t trials, std::uint64_t base_seed = 1) {
  if (trials == 0) throw ConfigError("complexity_sweep: trials must be positive");
  SweepResult result;
  std::uint64_t seed = base_seed;
  for (const auto& [K, S] : sizes) {
    const SystemConfig config{K, 1, S};  // N=1: the one database sees every set
    const std::uint32_t L = block_length_checked(S, K);
    SweepPoint point;
    point.K = K;
    point.S = S;
    double total = 0.0;
    std::uint64_t n = 0;
    for (std::uint32_t t = 0; t < trials; ++t, ++seed) {
      SeededRandom message_rng(seed ^ 0x9e3779b97f4a7c15ULL);
      const std::uint32_t theta = K == 1 ? 0 : static_cast<std::uint32_t>(t % K);
      const MessageSet messages = random_messages(K, L, message_rng);
      const Transcript transcript = run_retrieval(config, theta, messages, seed);
      const auto grouped = group_by_user(observed_sets(transcript, 0));
      const AttackReport report = infer_cross_user(grouped, SingletonCatalog{K, L});
      total += static_cast<double>(report.comparisons);
      n = 0;
      for (const auto& [user, set] : grouped) n += set.size();
    }
    point.n = n;
    point.mean_comparisons = total / trials;
    result.points.push_back(point);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const SweepPoint& p : result.points) {
    if (p.n == 0 || p.mean_comparisons <= 0.0) continue;
    const double x = std::log(static_cast<double>(p.n));
    const double y = std::log(p.mean_comparisons);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    const double denom = m * sxx - sx * sx;
    if (denom != 0.0) result.slope = (m * sxy - sx * sy) / denom;
  }
  return result;
}

}  // namespace mupir
