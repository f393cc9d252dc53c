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

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Shared domain types and the closed-form capacity / cardinality / rate
// formulas for multi-user private information retrieval with K messages,
// N databases, U users and S = N+U-1 information sources. Everything a
// rate or capacity comparison touches is exact rational arithmetic; no
// equality check in this library goes through floating point.

namespace mupir {

/// Arbitrary-precision integer. Grid sweeps go up to S, K = 10, where S^K
/// and the rational cross-products outgrow 64-bit intermediates.
using BigInt = boost::multiprecision::cpp_int;

/// Exact rational, always reduced with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// Invalid configuration or parameters (rejected before any work starts).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A protocol-level violation at runtime: out-of-range bit reference,
/// missing answer, malformed transcript.
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Number of information sources a requester can query: the N databases
/// plus the U-1 other users, each of whom relays one query set.
inline std::uint32_t source_count(std::uint32_t databases, std::uint32_t users) {
  if (databases == 0 || users == 0)
    throw ConfigError("source_count: N and U must both be >= 1");
  return databases + users - 1;
}

/// System dimensions. K messages replicated across N databases, U users,
/// S = N+U-1 sources.
struct SystemConfig {
  std::uint32_t K = 1;
  std::uint32_t N = 1;
  std::uint32_t U = 1;

  SystemConfig() = default;
  SystemConfig(std::uint32_t messages, std::uint32_t databases, std::uint32_t users)
      : K(messages), N(databases), U(users) {
    if (K == 0) throw ConfigError("SystemConfig: K must be >= 1");
    (void)source_count(N, U);
  }

  std::uint32_t sources() const { return source_count(N, U); }

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

/// One addressed bit: (message index, storage position). Positions are the
/// physical indices databases see; the requester's secret permutations never
/// leave the requester. Both fields are 0-based in memory.
struct BitRef {
  std::uint32_t message = 0;
  std::uint32_t position = 0;

  friend auto operator<=>(const BitRef&, const BitRef&) = default;
};

/// A k-sum: one bit from each of `round` distinct messages, answered as the
/// XOR of the addressed bits. `id` is plan-local, assigned in generation
/// order before the per-source shuffle so ledger references stay stable.
struct QueryElement {
  std::uint32_t id = 0;
  std::vector<BitRef> terms;  // sorted by message; messages all distinct

  std::size_t round() const { return terms.size(); }

  friend bool operator==(const QueryElement&, const QueryElement&) = default;
};

/// A stored bit-vector; values are 0/1 per byte.
using BitVector = std::vector<std::uint8_t>;

/// The K replicated messages, each exactly L bits.
struct MessageSet {
  std::vector<BitVector> messages;

  std::uint32_t count() const { return static_cast<std::uint32_t>(messages.size()); }
  std::uint32_t length() const {
    return messages.empty() ? 0 : static_cast<std::uint32_t>(messages.front().size());
  }

  void validate() const {
    if (messages.empty()) throw ConfigError("MessageSet: no messages");
    const std::size_t L = messages.front().size();
    if (L == 0) throw ConfigError("MessageSet: zero-length messages");
    for (const auto& w : messages)
      if (w.size() != L)
        throw ConfigError("MessageSet: messages must share one length");
  }
};

/// b^e over arbitrary-precision integers, with 0^0 = 1.
inline BigInt ipow(BigInt base, std::uint64_t exp) {
  BigInt out = 1;
  while (exp != 0) {
    if (exp & 1) out *= base;
    base *= base;
    exp >>= 1;
  }
  return out;
}

/// C(n, k) exactly.
inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    out *= BigInt(n - k + i);
    out /= BigInt(i);
  }
  return out;
}

/// Retrieval capacity with S sources and K messages:
///   C = (1 + 1/S + ... + 1/S^(K-1))^-1,
/// evaluated as S^(K-1)(S-1) / (S^K - 1) for S > 1 and 1/K for S = 1,
/// where the geometric sum degenerates to K unit terms.
inline Rational capacity(std::uint32_t S, std::uint32_t K) {
  if (S == 0 || K == 0) throw ConfigError("capacity: S and K must be >= 1");
  if (S == 1) return Rational(1, K);
  const BigInt skm1 = ipow(S, K - 1);
  return Rational(skm1 * (S - 1), skm1 * S - 1);
}

/// Query-set cardinality per source:
///   |Q(s)| = sum_{k=1..K} C(K,k) (S-1)^(k-1),
/// with 0^0 = 1 so S = 1 collapses to K singletons (download everything;
/// the only private option when a single source exists).
inline BigInt query_cardinality(std::uint32_t S, std::uint32_t K) {
  if (S == 0 || K == 0)
    throw ConfigError("query_cardinality: S and K must be >= 1");
  BigInt total = 0;
  for (std::uint32_t k = 1; k <= K; ++k)
    total += binomial(K, k) * ipow(S - 1, k - 1);
  return total;
}

/// Block length L = S^K, the message size at which a plan meets capacity.
inline BigInt block_length(std::uint32_t S, std::uint32_t K) {
  if (S == 0 || K == 0) throw ConfigError("block_length: S and K must be >= 1");
  return ipow(S, K);
}

/// block_length as a machine word. Throws instead of wrapping when S^K does
/// not fit, and enforces the in-memory plan bound S^K <= 10^6.
inline std::uint32_t block_length_checked(std::uint32_t S, std::uint32_t K) {
  const BigInt L = block_length(S, K);
  if (L > 1000000)
    throw ConfigError("block_length: S^K = " + L.str() +
                      " exceeds the 10^6 in-memory bound");
  return L.convert_to<std::uint32_t>();
}

/// Retrieval rate R = L/D, reduced.
inline Rational rate_of(const BigInt& message_bits, const BigInt& downloaded_bits) {
  if (message_bits < 1) throw ConfigError("rate_of: L must be >= 1");
  if (downloaded_bits < 1) throw ConfigError("rate_of: D must be >= 1");
  return Rational(message_bits, downloaded_bits);
}

/// Hex rendering of a bit-vector; bit 1 (the first position) is the most
/// significant bit of the first hex digit, and the tail is zero-padded.
inline std::string to_hex(const BitVector& bits) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    unsigned nibble = 0;
    for (std::size_t j = 0; j < 4 && i + j < bits.size(); ++j)
      if (bits[i + j]) nibble |= 8u >> j;
    out.push_back(digits[nibble]);
  }
  return out;
}

/// Parse `length` bits back out of a hex string (inverse of to_hex).
inline BitVector from_hex(const std::string& hex, std::size_t length) {
  if (hex.size() != (length + 3) / 4)
    throw ProtocolError("from_hex: string length does not match bit count");
  BitVector bits(length, 0);
  for (std::size_t i = 0; i < length; ++i) {
    const char c = hex[i / 4];
    unsigned nibble;
    if (c >= '0' && c <= '9') nibble = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') nibble = static_cast<unsigned>(c - 'a') + 10;
    else if (c >= 'A' && c <= 'F') nibble = static_cast<unsigned>(c - 'A') + 10;
    else throw ProtocolError("from_hex: invalid hex digit");
    bits[i] = (nibble & (8u >> (i % 4))) ? 1 : 0;
  }
  // Padding bits past `length` must be zero.
  for (std::size_t i = length; i < hex.size() * 4; ++i) {
    const char c = hex[i / 4];
    const unsigned nibble = (c >= '0' && c <= '9') ? static_cast<unsigned>(c - '0')
                            : (c >= 'a' && c <= 'f') ? static_cast<unsigned>(c - 'a') + 10
                                                     : static_cast<unsigned>(c - 'A') + 10;
    if (nibble & (8u >> (i % 4)))
      throw ProtocolError("from_hex: nonzero padding bits");
  }
  return bits;
}

}  // namespace mupir
