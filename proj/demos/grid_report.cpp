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
// One-screen lab report: for each small (K, S) cell, run a single-database
// retrieval, confirm the achieved rate is the capacity, and contrast what a
// lone query set leaks (nothing) with what cross-referencing users leaks
// (the desired index).

#include "mupir/mupir.hpp"

#include <cstdio>
#include <iostream>

using namespace mupir;

int main() {
  std::printf("%4s%4s%8s%8s%10s%12s%14s%14s\n", "K", "S", "L", "D", "rate",
              "recovered", "single-set", "cross-user");
  for (std::uint32_t K = 2; K <= 4; ++K) {
    for (std::uint32_t S = 2; S <= 4; ++S) {
      const SystemConfig config{K, 1, S};
      const std::uint32_t L = block_length_checked(S, K);
      const std::uint64_t seed = 1000 * K + S;
      SeededRandom msg_rng(seed ^ 0x9e3779b97f4a7c15ULL);
      const MessageSet ws = random_messages(K, L, msg_rng);
      const std::uint32_t theta = (K + S) % K;

      const Transcript t = run_retrieval(config, theta, ws, seed);
      const bool rate_ok = t.rate == capacity(S, K);
      const bool recovered = t.recovered == ws.messages[theta];

      const SingletonCatalog catalog{K, L};
      const auto grouped = group_by_user(observed_sets(t, 0));
      const AttackReport alone = infer_single_user(grouped.front().second, catalog);
      const AttackReport cross = infer_cross_user(grouped, catalog);

      std::printf("%4u%4u%8u%8llu%10s%12s%14s%14s\n", K, S, L,
                  static_cast<unsigned long long>(t.download_bits),
                  (rational_to_string(t.rate) + (rate_ok ? "" : "!")).c_str(),
                  recovered ? "yes" : "NO",
                  alone.tie ? "tie" : "LEAKED",
                  !cross.tie && cross.verdict == theta ? "identified" : "missed");
    }
  }
  std::cout << "\nrate column equals capacity exactly on every row; a lone set always\n"
            << "ties while the merged view identifies the requested index.\n";
  return 0;
}
