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
// Narrated walkthrough of the smallest interesting instance: two messages,
// one database, two users. A fixed randomness tape pins the permutations to
// identity and skips the final shuffles, so the printed plan is the
// canonical hand-checkable one.

#include "mupir/mupir.hpp"

#include <iostream>
#include <string>

using namespace mupir;

namespace {

std::string term_name(const BitRef& t) {
  return std::string(1, static_cast<char>('a' + t.message)) + std::to_string(t.position + 1);
}

std::string element_name(const QueryElement& e) {
  std::string out;
  for (std::size_t i = 0; i < e.terms.size(); ++i) {
    if (i) out += "+";
    out += term_name(e.terms[i]);
  }
  return out;
}

std::string bits_string(const BitVector& v) {
  std::string out;
  for (std::uint8_t b : v) out += static_cast<char>('0' + b);
  return out;
}

}  // namespace

int main() {
  const SystemConfig config{2, 1, 2};
  const std::uint32_t S = config.sources();
  const std::uint32_t L = block_length_checked(S, config.K);

  std::cout << "Two messages of " << L << " bits each, one database, two users.\n"
            << "Sources: " << S << " (the database plus one helper), capacity "
            << rational_to_string(capacity(S, config.K)) << ".\n\n";

  // Identity permutations: each Fisher-Yates draw returns its own index, and
  // the two final per-source shuffles do the same.
  TapeRandom tape({3, 2, 1, 3, 2, 1, 2, 1, 2, 1});
  const RetrievalPlan plan = generate_plan(config, 0, tape);

  std::cout << "The requester wants message a and builds one query set per source.\n"
            << "Each set holds one singleton per message plus one paired sum whose\n"
            << "b-term repeats a singleton the *other* source answers:\n\n";
  for (std::uint32_t s = 0; s < S; ++s) {
    std::cout << "  source " << s + 1 << " is asked:";
    for (const QueryElement& e : plan.query_sets[s]) std::cout << " {" << element_name(e) << "}";
    std::cout << "\n";
  }

  MessageSet ws;
  ws.messages.push_back(from_hex("b", L));  // a = 1011
  ws.messages.push_back(from_hex("6", L));  // b = 0110
  std::cout << "\nStored messages: a = " << bits_string(ws.messages[0]) << ", b = "
            << bits_string(ws.messages[1]) << ".\n\nAnswers returned:\n";

  std::vector<AnswerSheet> sheets;
  for (std::uint32_t s = 0; s < S; ++s) {
    sheets.push_back(evaluate_answers(ws, plan.query_sets[s], s));
    std::cout << "  source " << s + 1 << ":";
    for (const QueryElement& e : plan.query_sets[s])
      std::cout << " " << element_name(e) << "="
                << static_cast<int>(sheets.back().bits.at(e.id));
    std::cout << "\n";
  }

  std::cout << "\nDecoding: singleton answers are used as-is; each paired sum is\n"
            << "XORed with the other source's matching b singleton:\n";
  const auto find_element = [&](std::uint32_t id) -> const QueryElement& {
    for (const auto& set : plan.query_sets)
      for (const QueryElement& e : set)
        if (e.id == id) return e;
    throw ProtocolError("element id not in plan");
  };
  for (std::uint32_t i = 0; i < L; ++i) {
    const LedgerEntry& entry = plan.ledger[i];
    std::cout << "  bit " << i + 1 << " of a = answer{"
              << element_name(find_element(entry.carrier)) << "}";
    for (std::uint32_t side : entry.side_info)
      std::cout << " XOR answer{" << element_name(find_element(side)) << "}";
    std::cout << "\n";
  }

  const BitVector recovered = decode(plan, sheets);
  std::cout << "\nRecovered a = " << bits_string(recovered) << " ("
            << (recovered == ws.messages[0] ? "correct" : "WRONG") << "), "
            << plan.download_count() << " bits downloaded for " << L
            << " recovered: rate " << rational_to_string(rate_of(L, plan.download_count()))
            << ".\n\n";

  const SingletonCatalog catalog{config.K, L};
  std::cout << "What each source can infer alone (per-set analysis):\n";
  for (std::uint32_t s = 0; s < S; ++s) {
    const AttackReport r = infer_single_user(plan.query_sets[s], catalog);
    std::cout << "  source " << s + 1 << ": beta = [" << r.beta[0] << "," << r.beta[1]
              << "] -> " << (r.tie ? "tie, learns nothing" : "identified") << "\n";
  }

  std::cout << "\nWhat one database seeing BOTH users' sets can infer:\n";
  const AttackReport cross = infer_cross_user(
      {{0, plan.query_sets[0]}, {1, plan.query_sets[1]}}, catalog);
  std::cout << "  beta = [" << cross.beta[0] << "," << cross.beta[1] << "] -> "
            << (cross.tie ? "tie" : std::string("message ") +
                                        static_cast<char>('a' + cross.verdict) +
                                        " identified")
            << " after " << cross.comparisons << " comparisons.\n"
            << "\nCross-referencing users breaks the privacy that any single query\n"
            << "set preserves, which is why disjoint helper routing matters.\n";
  return 0;
}
