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

#include <algorithm>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

// Capacity-achieving query plans. A plan asks every source the same shaped
// mix of k-sums so no single source can tell which message is wanted, and
// reuses answers to pure undesired sums as side information so each k-sum
// containing the desired message pays for exactly one new desired bit.
//
// Construction, for K messages, S sources, L = S^K bits per message:
//   - the requester draws one secret uniform permutation per message;
//     "fresh bit i of message m" is the bit at permuted position i,
//     consumed in increasing i;
//   - round 1: every source gets one fresh singleton of every message;
//   - round k >= 2: per source s and k-subset M of messages,
//       * if M contains the desired index, (S-1)^(k-1) elements, each a new
//         fresh desired bit joined with one round-(k-1) pure sum of type
//         M minus the desired message generated at a source s' != s; each
//         pure instance is consumed exactly once by each of the other S-1
//         sources, paired in generation order;
//       * otherwise (S-1)^(k-1) elements of entirely new fresh bits, the
//         side information consumed one round later;
//   - element ids are assigned in generation order, then each source's list
//     is shuffled.
//
// Every source ends up with exactly (S-1)^(k-1) elements per k-subset,
// sum_{k} C(K,k)(S-1)^(k-1) in total, and the desired message's S^K fresh
// bits are each consumed exactly once.

namespace mupir {

/// How one desired fresh bit is recovered: XOR the carrier's answer with the
/// side-information answers (empty for round-1 singletons, exactly one pure
/// undesired sum from another source otherwise).
struct LedgerEntry {
  std::uint32_t carrier = 0;
  std::vector<std::uint32_t> side_info;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

/// Ledger entry per desired fresh bit index i in [L].
using DecodeLedger = std::vector<LedgerEntry>;

/// A full query plan: per-source query sets, the requester's secret
/// permutations, and the decode ledger.
struct RetrievalPlan {
  SystemConfig config;
  std::uint32_t theta = 0;
  std::uint32_t block_bits = 0;  // L = S^K
  // permutations[m][i] = physical storage position of fresh bit i of message m
  std::vector<std::vector<std::uint32_t>> permutations;
  std::vector<std::vector<QueryElement>> query_sets;  // one list per source
  DecodeLedger ledger;
  std::vector<std::uint32_t> fresh_consumed;  // per-message fresh-bit count

  std::uint32_t sources() const { return config.sources(); }

  /// Total answer bits the plan downloads, D = sum_s |Q(s)|.
  std::uint64_t download_count() const {
    std::uint64_t d = 0;
    for (const auto& set : query_sets) d += set.size();
    return d;
  }
};

/// One source's answers: element id -> XOR of the addressed stored bits.
struct AnswerSheet {
  std::uint32_t source = 0;
  std::map<std::uint32_t, std::uint8_t> bits;

  friend bool operator==(const AnswerSheet&, const AnswerSheet&) = default;
};

/// Multiset of (message-subset, element count) describing a query set with
/// positions, order and ids discarded. Subsets are bitmasks over messages.
using CanonicalShape = std::map<std::uint64_t, std::uint64_t>;

inline CanonicalShape canonical_shape(const std::vector<QueryElement>& elements) {
  CanonicalShape shape;
  for (const auto& e : elements) {
    std::uint64_t mask = 0;
    for (const auto& t : e.terms) mask |= std::uint64_t{1} << t.message;
    ++shape[mask];
  }
  return shape;
}

namespace detail {

/// Lexicographic k-subset enumeration over {0..n-1}.
inline bool next_combination(std::vector<std::uint32_t>& c, std::uint32_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] + (k - i) < n) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

inline RetrievalPlan generate_plan(const SystemConfig& config, std::uint32_t theta,
                                   RandomSource& rng) {
  const std::uint32_t K = config.K;
  const std::uint32_t S = config.sources();
  if (theta >= K) throw ConfigError("generate_plan: theta out of range");
  if (K > 64) throw ConfigError("generate_plan: K above 64 is unsupported");
  const std::uint32_t L = block_length_checked(S, K);

  RetrievalPlan plan;
  plan.config = config;
  plan.theta = theta;
  plan.block_bits = L;
  plan.permutations.reserve(K);
  for (std::uint32_t m = 0; m < K; ++m)
    plan.permutations.push_back(random_permutation(L, rng));

  std::vector<std::uint32_t> cursor(K, 0);
  auto next_fresh = [&](std::uint32_t m) {
    if (cursor[m] >= L) throw std::logic_error("generate_plan: fresh bits exhausted");
    return BitRef{m, plan.permutations[m][cursor[m]++]};
  };

  plan.query_sets.assign(S, {});
  plan.ledger.assign(L, LedgerEntry{});
  std::vector<std::uint8_t> ledger_set(L, 0);
  std::uint32_t next_id = 0;

  auto add_element = [&](std::uint32_t s, std::vector<BitRef> terms) -> std::size_t {
    std::sort(terms.begin(), terms.end());
    plan.query_sets[s].push_back(QueryElement{next_id++, std::move(terms)});
    return plan.query_sets[s].size() - 1;
  };
  auto record_desired = [&](std::uint32_t fresh_index, std::uint32_t carrier_id,
                            std::vector<std::uint32_t> side) {
    plan.ledger[fresh_index] = LedgerEntry{carrier_id, std::move(side)};
    ledger_set[fresh_index] = 1;
  };

  // Pure undesired sums awaiting consumption, per message-subset mask and
  // generating source, as indices into that source's (unshuffled) list.
  std::unordered_map<std::uint64_t, std::vector<std::vector<std::size_t>>> pure;

  // Round 1: one fresh singleton of every message at every source.
  for (std::uint32_t s = 0; s < S; ++s) {
    for (std::uint32_t m = 0; m < K; ++m) {
      const std::uint32_t fresh_index = cursor[m];
      const BitRef bit = next_fresh(m);
      const std::size_t idx = add_element(s, {bit});
      const std::uint32_t id = plan.query_sets[s][idx].id;
      if (m == theta) {
        record_desired(fresh_index, id, {});
      } else {
        auto& slots = pure[std::uint64_t{1} << m];
        slots.resize(S);
        slots[s].push_back(idx);
      }
    }
  }

  // Rounds 2..K.
  for (std::uint32_t k = 2; k <= K; ++k) {
    std::vector<std::uint32_t> subset(k);
    for (std::uint32_t i = 0; i < k; ++i) subset[i] = i;
    do {
      std::uint64_t mask = 0;
      for (std::uint32_t m : subset) mask |= std::uint64_t{1} << m;
      const bool desired = (mask >> theta) & 1;

      if (desired) {
        const std::uint64_t side_mask = mask & ~(std::uint64_t{1} << theta);
        auto it = pure.find(side_mask);
        for (std::uint32_t s = 0; s < S; ++s) {
          for (std::uint32_t other = 0; other < S; ++other) {
            if (other == s || it == pure.end()) continue;
            for (const std::size_t pure_idx : it->second[other]) {
              const QueryElement& side = plan.query_sets[other][pure_idx];
              const std::uint32_t fresh_index = cursor[theta];
              std::vector<BitRef> terms = side.terms;
              terms.push_back(next_fresh(theta));
              const std::size_t idx = add_element(s, std::move(terms));
              record_desired(fresh_index, plan.query_sets[s][idx].id, {side.id});
            }
          }
        }
      } else {
        std::uint64_t instances = 1;
        for (std::uint32_t i = 1; i < k; ++i) instances *= S - 1;
        auto& slots = pure[mask];
        slots.resize(S);
        for (std::uint32_t s = 0; s < S; ++s) {
          for (std::uint64_t j = 0; j < instances; ++j) {
            std::vector<BitRef> terms;
            terms.reserve(k);
            for (std::uint32_t m : subset) terms.push_back(next_fresh(m));
            slots[s].push_back(add_element(s, std::move(terms)));
          }
        }
      }
    } while (detail::next_combination(subset, K));
  }

  if (cursor[theta] != L)
    throw std::logic_error("generate_plan: desired fresh bits not fully consumed");
  for (std::uint32_t i = 0; i < L; ++i)
    if (!ledger_set[i])
      throw std::logic_error("generate_plan: ledger entry missing");

  for (std::uint32_t s = 0; s < S; ++s) fisher_yates(plan.query_sets[s], rng);
  plan.fresh_consumed = std::move(cursor);
  return plan;
}

/// Answer a query set over the stored messages: each element's answer is the
/// XOR of its addressed bits.
inline AnswerSheet evaluate_answers(const MessageSet& messages,
                                    const std::vector<QueryElement>& elements,
                                    std::uint32_t source) {
  AnswerSheet sheet;
  sheet.source = source;
  for (const auto& e : elements) {
    std::uint8_t acc = 0;
    for (const auto& t : e.terms) {
      if (t.message >= messages.count() || t.position >= messages.length())
        throw ProtocolError("evaluate_answers: bit reference out of range");
      acc ^= messages.messages[t.message][t.position];
    }
    sheet.bits[e.id] = acc;
  }
  return sheet;
}

/// Reassemble the desired message from the S answer sheets: each ledger
/// entry XORs the carrier answer against its side information, then the
/// fresh-bit values are unpermuted into storage order.
inline BitVector decode(const RetrievalPlan& plan, const std::vector<AnswerSheet>& sheets) {
  const std::uint32_t S = plan.sources();
  const std::uint32_t L = plan.block_bits;
  if (sheets.size() != S)
    throw ProtocolError("decode: expected one answer sheet per source");

  std::unordered_map<std::uint32_t, std::uint8_t> answer;
  answer.reserve(plan.download_count());
  for (std::uint32_t s = 0; s < S; ++s) {
    const AnswerSheet* sheet = nullptr;
    for (const auto& candidate : sheets)
      if (candidate.source == s) sheet = &candidate;
    if (sheet == nullptr)
      throw ProtocolError("decode: missing answer sheet for a source");
    const auto& set = plan.query_sets[s];
    if (sheet->bits.size() != set.size())
      throw ProtocolError("decode: answer sheet size mismatch");
    for (const auto& e : set) {
      const auto it = sheet->bits.find(e.id);
      if (it == sheet->bits.end())
        throw ProtocolError("decode: missing answer bit");
      answer.emplace(e.id, it->second);
    }
  }

  if (plan.ledger.size() != L)
    throw std::logic_error("decode: ledger length mismatch");
  BitVector recovered(L, 0);
  for (std::uint32_t i = 0; i < L; ++i) {
    const LedgerEntry& entry = plan.ledger[i];
    const auto carrier = answer.find(entry.carrier);
    if (carrier == answer.end())
      throw std::logic_error("decode: ledger references unknown carrier");
    std::uint8_t v = carrier->second;
    for (const std::uint32_t id : entry.side_info) {
      const auto side = answer.find(id);
      if (side == answer.end())
        throw std::logic_error("decode: ledger references unknown side info");
      v ^= side->second;
    }
    recovered[plan.permutations[plan.theta][i]] = v;
  }
  return recovered;
}

/// Uniformly random messages: K messages of L bits each.
inline MessageSet random_messages(std::uint32_t K, std::uint32_t L, RandomSource& rng) {
  MessageSet set;
  set.messages.assign(K, BitVector(L, 0));
  for (auto& w : set.messages)
    for (auto& b : w) b = rng.bit();
  return set;
}

}  // namespace mupir
