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

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace mupir {

/// Uniform draw source. Everything randomized in this library (permutations,
/// query-set shuffles, helper routing, message bits) pulls from this
/// interface, so a run is reproducible from a seed and, for the privacy lab,
/// every reachable outcome can be enumerated by driving the draws directly.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  /// Uniform integer in [0, bound). bound must be >= 1.
  virtual std::uint64_t uniform_below(std::uint64_t bound) = 0;

  std::uint8_t bit() { return static_cast<std::uint8_t>(uniform_below(2)); }
};

/// mt19937_64 behind rejection sampling. The modulo-rejection keeps draws
/// exactly uniform and independent of std::uniform_int_distribution, whose
/// output is not pinned by the standard.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t uniform_below(std::uint64_t bound) override {
    if (bound == 0) throw std::invalid_argument("uniform_below: zero bound");
    if (bound == 1) return 0;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

/// A replayable tape of draw outcomes. The first pass records each draw's
/// radix and answers 0; advance() then steps the tape through every possible
/// outcome vector in mixed-radix order. Valid for generators whose draw
/// sequence does not depend on the drawn values, which holds for plan
/// generation: the radix vector is fixed by (K, S).
class TapeRandom final : public RandomSource {
 public:
  TapeRandom() = default;

  /// Fixed tape: replays exactly these digits, checking radices as it goes.
  explicit TapeRandom(std::vector<std::uint64_t> digits)
      : digits_(std::move(digits)), fixed_(true) {}

  std::uint64_t uniform_below(std::uint64_t bound) override {
    if (bound == 0) throw std::invalid_argument("uniform_below: zero bound");
    if (cursor_ == radices_.size()) {
      radices_.push_back(bound);
      if (digits_.size() < radices_.size()) digits_.push_back(0);
    } else if (radices_[cursor_] != bound) {
      throw std::logic_error("TapeRandom: draw sequence changed between passes");
    }
    const std::uint64_t d = digits_[cursor_++];
    if (d >= bound) throw std::logic_error("TapeRandom: digit out of range");
    return d;
  }

  /// Rewind to the start of the tape; digits are kept.
  void rewind() { cursor_ = 0; }

  /// Step to the next outcome vector. Returns false once the tape has
  /// wrapped past the last vector.
  bool advance() {
    if (fixed_) return false;
    for (std::size_t i = digits_.size(); i-- > 0;) {
      if (++digits_[i] < radices_[i]) return true;
      digits_[i] = 0;
    }
    return false;
  }

  const std::vector<std::uint64_t>& digits() const { return digits_; }
  const std::vector<std::uint64_t>& radices() const { return radices_; }

 private:
  std::vector<std::uint64_t> digits_;
  std::vector<std::uint64_t> radices_;
  std::size_t cursor_ = 0;
  bool fixed_ = false;
};

/// In-place Fisher-Yates driven by a RandomSource.
template <typename T>
void fisher_yates(std::vector<T>& items, RandomSource& rng) {
  for (std::size_t i = items.size(); i-- > 1;) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_below(i + 1));
    std::swap(items[i], items[j]);
  }
}

/// Uniform permutation of {0, ..., n-1}.
inline std::vector<std::uint32_t> random_permutation(std::uint32_t n,
                                                     RandomSource& rng) {
  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  fisher_yates(perm, rng);
  return perm;
}

}  // namespace mupir
