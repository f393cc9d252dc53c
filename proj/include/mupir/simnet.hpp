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

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

// In-process protocol simulation. One requesting user talks to N databases
// directly and hands the remaining query sets to U-1 helper users, each of
// whom forwards theirs to a single database of its own choosing. Databases
// answer every element they are shown; the requester decodes. The result is
// an auditable transcript of exactly what each database observed.

namespace mupir {

/// Where one source's query set travels. Direct channels present the
/// requester's own identity; helper channels present the helper's.
struct Route {
  bool direct = true;
  std::uint32_t database = 0;  // answering database, in [N]
  std::uint32_t helper = 0;    // forwarding helper, in [U-1]; helper channels only

  friend bool operator==(const Route&, const Route&) = default;
};

struct RoutingTable {
  std::vector<Route> routes;  // one per source

  friend bool operator==(const RoutingTable&, const RoutingTable&) = default;
};

/// Requires exactly one direct channel per database and exactly one helper
/// channel per helper, each ending at a valid database.
inline void validate_routing(const RoutingTable& table, const SystemConfig& config) {
  const std::uint32_t S = config.sources();
  if (table.routes.size() != S)
    throw ConfigError("routing: expected one route per source");
  std::vector<std::uint32_t> direct_hits(config.N, 0);
  std::vector<std::uint32_t> helper_hits(config.U > 0 ? config.U - 1 : 0, 0);
  for (const Route& r : table.routes) {
    if (r.database >= config.N)
      throw ConfigError("routing: database index out of range");
    if (r.direct) {
      ++direct_hits[r.database];
    } else {
      if (r.helper >= helper_hits.size())
        throw ConfigError("routing: helper index out of range");
      ++helper_hits[r.helper];
    }
  }
  for (std::uint32_t n : direct_hits)
    if (n != 1) throw ConfigError("routing: each database needs exactly one direct channel");
  for (std::uint32_t h : helper_hits)
    if (h != 1) throw ConfigError("routing: each helper forwards exactly one query set");
}

/// Sources 0..N-1 go direct to the same-numbered database; source N+h is
/// forwarded by helper h to a database picked by `pick`.
template <typename PickDatabase>
RoutingTable make_routing(const SystemConfig& config, PickDatabase&& pick) {
  RoutingTable table;
  const std::uint32_t S = config.sources();
  table.routes.reserve(S);
  for (std::uint32_t s = 0; s < S; ++s) {
    Route r;
    if (s < config.N) {
      r.direct = true;
      r.database = s;
    } else {
      r.direct = false;
      r.helper = s - config.N;
      r.database = pick(r.helper);
    }
    table.routes.push_back(r);
  }
  return table;
}

/// One query set as a database saw it: the presenting user connection
/// (0 = requester, h+1 = helper h), the source it serves, and the elements.
struct Delivery {
  std::uint32_t user = 0;
  std::uint32_t source = 0;
  std::vector<QueryElement> elements;

  friend bool operator==(const Delivery&, const Delivery&) = default;
};

struct Transcript {
  SystemConfig config;
  std::uint32_t theta = 0;
  std::uint32_t block_bits = 0;  // L
  RoutingTable routing;
  std::vector<std::vector<Delivery>> deliveries;  // per database, source order
  std::vector<AnswerSheet> sheets;                // per source
  std::uint64_t download_bits = 0;                // D
  BitVector recovered;
  Rational rate;
};

/// Full protocol round trip. Helpers pick databases uniformly at random from
/// the seeded stream unless a fixed routing table is supplied.
inline Transcript run_retrieval(const SystemConfig& config, std::uint32_t theta,
                                const MessageSet& messages, std::uint64_t seed,
                                const std::optional<RoutingTable>& fixed_routing = std::nullopt) {
  const std::uint32_t S = config.sources();
  SeededRandom rng(seed);
  RetrievalPlan plan = generate_plan(config, theta, rng);
  if (messages.count() != config.K || messages.length() != plan.block_bits)
    throw ConfigError("run_retrieval: message set does not match config");

  RoutingTable routing =
      fixed_routing ? *fixed_routing
                    : make_routing(config, [&](std::uint32_t) {
                        return static_cast<std::uint32_t>(rng.uniform_below(config.N));
                      });
  validate_routing(routing, config);

  Transcript t;
  t.config = config;
  t.theta = theta;
  t.block_bits = plan.block_bits;
  t.routing = routing;
  t.deliveries.assign(config.N, {});
  t.sheets.resize(S);
  for (std::uint32_t s = 0; s < S; ++s) {
    const Route& r = routing.routes[s];
    Delivery d;
    d.user = r.direct ? 0 : r.helper + 1;
    d.source = s;
    d.elements = plan.query_sets[s];
    t.deliveries[r.database].push_back(std::move(d));
    t.sheets[s] = evaluate_answers(messages, plan.query_sets[s], s);
  }
  t.download_bits = plan.download_count();
  t.recovered = decode(plan, t.sheets);
  t.rate = rate_of(plan.block_bits, t.download_bits);
  return t;
}

/// The query sets one database observed, with presenting-user attribution.
inline const std::vector<Delivery>& observed_sets(const Transcript& t, std::uint32_t database) {
  if (database >= t.deliveries.size())
    throw ConfigError("observed_sets: database index out of range");
  return t.deliveries[database];
}

}  // namespace mupir
