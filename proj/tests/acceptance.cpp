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
// Acceptance harness: seven end-to-end checks printed one per line as
// PASS/FAIL. Exits with the number of failed checks, so 0 means the build
// delivers every headline property. All rate and probability comparisons
// are exact rational equalities; nothing here is tolerance-based except
// the final growth-exponent fit, whose band is stated on its line.

#include "mupir/mupir.hpp"

#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace mupir;

constexpr std::uint64_t kMessageSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kSeeds = 100;

int failures = 0;

void criterion(int index, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    ok = false;
    detail += std::string(detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  std::cout << (ok ? "PASS" : "FAIL") << ": " << index << ". " << detail << "\n";
  if (!ok) ++failures;
}

MessageSet drawn_messages(std::uint32_t K, std::uint32_t L, std::uint64_t seed) {
  SeededRandom rng(seed ^ kMessageSalt);
  return random_messages(K, L, rng);
}

// The reference instance (K=2, N=1, U=2): four-bit messages, six answer
// bits, rate exactly 2/3, and exact recovery of the first message.
bool check_reference_instance(std::string& detail) {
  const SystemConfig config{2, 1, 2};
  const Rational expected(2, 3);
  bool ok = expected == capacity(2, 2);
  for (std::uint64_t seed = 1; seed <= 10 && ok; ++seed) {
    const MessageSet ws = drawn_messages(2, 4, seed);
    const Transcript t = run_retrieval(config, 0, ws, seed);
    ok = t.block_bits == 4 && t.download_bits == 6 && t.rate == expected &&
         t.rate == capacity(2, 2) && t.recovered == ws.messages[0];
  }
  detail = "reference instance K=2 N=1 U=2: L=4, D=6, rate=2/3 equals capacity, "
           "first message recovered exactly (10 seeds)";
  return ok;
}

// Shared sweep over the full configuration grid: every K in 1..4 and every
// (N,U) with S=N+U-1 in 1..5, all theta, kSeeds seeds each. Feeds the
// capacity-equality check and the decode-correctness count.
struct GridOutcome {
  bool rates_exact = true;
  bool cardinalities_exact = true;
  std::uint64_t runs = 0;
  std::uint64_t decode_failures = 0;
  std::uint32_t configs = 0;
};

GridOutcome sweep_grid() {
  GridOutcome out;
  for (std::uint32_t K = 1; K <= 4; ++K) {
    for (std::uint32_t S = 1; S <= 5; ++S) {
      for (std::uint32_t N = 1; N <= S; ++N) {
        const std::uint32_t U = S - N + 1;
        const SystemConfig config{K, N, U};
        ++out.configs;
        const std::uint32_t L = block_length_checked(S, K);
        const Rational cap = capacity(S, K);
        const BigInt q = query_cardinality(S, K);
        for (std::uint32_t theta = 0; theta < K; ++theta) {
          for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
            const MessageSet ws = drawn_messages(K, L, seed);
            const Transcript t = run_retrieval(config, theta, ws, seed);
            ++out.runs;
            if (t.rate != cap) out.rates_exact = false;
            std::uint32_t sets_seen = 0;
            for (const auto& db : t.deliveries)
              for (const Delivery& d : db) {
                ++sets_seen;
                if (BigInt(d.elements.size()) != q) out.cardinalities_exact = false;
              }
            if (sets_seen != S) out.cardinalities_exact = false;
            if (t.recovered != ws.messages[theta]) ++out.decode_failures;
          }
        }
      }
    }
  }
  return out;
}

const GridOutcome& grid() {
  static const GridOutcome out = sweep_grid();
  return out;
}

bool check_capacity_grid(std::string& detail) {
  const GridOutcome& g = grid();
  std::ostringstream ss;
  ss << "capacity grid: transcript rate equals capacity exactly (never above) and "
        "every source's query set has the closed-form cardinality, across "
     << g.configs << " configs (K in 1..4, S in 1..5)";
  detail = ss.str();
  return g.rates_exact && g.cardinalities_exact;
}

bool check_decode_correctness(std::string& detail) {
  const GridOutcome& g = grid();
  std::ostringstream ss;
  ss << "decode correctness: " << g.decode_failures << " reconstruction failures in "
     << g.runs << " runs (" << kSeeds << " seeds x full grid x every theta)";
  detail = ss.str();
  return g.decode_failures == 0;
}

// Shared sweep over one representative config per (S,K) class. Query plans
// depend on (N,U) only through S, so these plans are byte-identical to the
// ones any same-S grid config draws from the same seed.
struct PlanOutcome {
  bool shapes_symmetric = true;
  std::uint64_t plans = 0;
  bool beta_uniform = true;
  bool ties_complete = true;  // K >= 2 source views always tie
  std::uint64_t source_views = 0;
};

PlanOutcome sweep_plans() {
  PlanOutcome out;
  for (std::uint32_t K = 1; K <= 4; ++K) {
    for (std::uint32_t S = 1; S <= 5; ++S) {
      const SystemConfig config{K, 1, S};
      const std::uint32_t L = block_length_checked(S, K);
      const SingletonCatalog catalog{K, L};
      for (std::uint32_t theta = 0; theta < K; ++theta) {
        for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
          SeededRandom rng(seed);
          const RetrievalPlan plan = generate_plan(config, theta, rng);
          ++out.plans;
          if (!shape_symmetry_check(plan)) out.shapes_symmetric = false;
          for (std::uint32_t s = 0; s < S; ++s) {
            const AttackReport r = infer_single_user(plan.query_sets[s], catalog);
            ++out.source_views;
            for (std::uint64_t b : r.beta)
              if (b != r.beta.front()) out.beta_uniform = false;
            if (K >= 2 && !r.tie) out.ties_complete = false;
            if (K == 1 && (r.tie || r.verdict != 0)) out.ties_complete = false;
          }
        }
      }
    }
  }
  return out;
}

const PlanOutcome& plans() {
  static const PlanOutcome out = sweep_plans();
  return out;
}

bool check_privacy(std::string& detail) {
  bool identical = true;
  bool mi_zero = true;
  for (std::uint32_t source = 0; source < 2; ++source) {
    std::vector<QueryDistribution> dists;
    for (std::uint32_t theta = 0; theta < 2; ++theta)
      dists.push_back(enumerate_distribution(2, 2, source, theta));
    identical = identical && dists[0].support == dists[1].support;
    mi_zero = mi_zero && mutual_information_with_theta(dists).exact_zero;
  }
  const PlanOutcome& p = plans();
  std::ostringstream ss;
  ss << "privacy: exhaustive K=2 S=2 per-source distributions identical across "
        "theta with mutual information exactly 0; shape symmetry held on "
     << p.plans << " plans covering the grid (one (S,K) representative per "
        "equal-S config class)";
  detail = ss.str();
  return identical && mi_zero && p.shapes_symmetric;
}

bool check_per_source_futility(std::string& detail) {
  const PlanOutcome& p = plans();
  std::ostringstream ss;
  ss << "per-source analysis futility: uniform beta on all " << p.source_views
     << " honest source views, 100% tie rate for K >= 2 (" << kSeeds
     << " seeds, every theta, one (S,K) representative per equal-S config class)";
  detail = ss.str();
  return p.beta_uniform && p.ties_complete;
}

bool check_cross_user_success(std::string& detail) {
  std::uint64_t runs = 0;
  std::uint64_t hits = 0;
  for (std::uint32_t K = 2; K <= 4; ++K) {
    for (std::uint32_t S = 2; S <= 5; ++S) {
      const SystemConfig config{K, 1, S};
      const std::uint32_t L = block_length_checked(S, K);
      const SingletonCatalog catalog{K, L};
      for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const std::uint32_t theta = static_cast<std::uint32_t>(seed % K);
        const MessageSet ws = drawn_messages(K, L, seed);
        const Transcript t = run_retrieval(config, theta, ws, seed);
        const auto grouped = group_by_user(observed_sets(t, 0));
        const AttackReport r = infer_cross_user(grouped, catalog);
        ++runs;
        if (!r.tie && r.verdict == theta && grouped.size() == S) ++hits;
      }
    }
  }

  // Hand-checkable reference sets: singletons a1, b1 plus the paired sum
  // a3+b2 from one user; a2, b2 and a4+b1 from the other.
  const std::vector<QueryElement> user0 = {
      QueryElement{0, {BitRef{0, 0}}},
      QueryElement{1, {BitRef{1, 0}}},
      QueryElement{4, {BitRef{0, 2}, BitRef{1, 1}}},
  };
  const std::vector<QueryElement> user1 = {
      QueryElement{2, {BitRef{0, 1}}},
      QueryElement{3, {BitRef{1, 1}}},
      QueryElement{5, {BitRef{0, 3}, BitRef{1, 0}}},
  };
  const AttackReport ref =
      infer_cross_user({{0, user0}, {1, user1}}, SingletonCatalog{2, 4});
  const bool ref_ok = ref.beta == std::vector<std::uint64_t>{4, 2} && !ref.tie &&
                      ref.verdict == 0 && ref.comparisons == 18;

  std::ostringstream ss;
  ss << "cross-user identification: verdict equals theta on " << hits << "/" << runs
     << " honest single-database runs (K in 2..4, S in 2..5); reference instance "
        "beta = [4,2]";
  detail = ss.str();
  return hits == runs && ref_ok;
}

bool check_quadratic_cost(std::string& detail) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> sizes;
  for (std::uint32_t S = 2; S <= 6; ++S) sizes.emplace_back(2, S);
  const SweepResult sweep = complexity_sweep(sizes, 3, 1);
  const bool ok = sweep.slope >= 1.7 && sweep.slope <= 2.3;
  std::ostringstream ss;
  ss.precision(4);
  ss << std::fixed << "quadratic analysis cost: log-log slope " << sweep.slope
     << " within 2.0 +/- 0.3 (K=2, S in 2..6, n up to "
     << (sweep.points.empty() ? 0 : sweep.points.back().n) << ")";
  detail = ss.str();
  return ok;
}

}  // namespace

int main() {
  criterion(1, check_reference_instance);
  criterion(2, check_capacity_grid);
  criterion(3, check_decode_correctness);
  criterion(4, check_privacy);
  criterion(5, check_per_source_futility);
  criterion(6, check_cross_user_success);
  criterion(7, check_quadratic_cost);
  return failures;
}
