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

#include "mupir/adversary.hpp"
#include "mupir/core.hpp"
#include "mupir/privacylab.hpp"
#include "mupir/scheme.hpp"
#include "mupir/simnet.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// Canonical JSON forms for every artifact that crosses a file boundary.
// Conventions: object keys sorted (the default nlohmann map ordering), every
// index 1-based on the wire, bit-vectors as hex strings with the most
// significant bit of the first digit at position 1, rationals as "p/q"
// strings, bit refs as [message, position] pairs.

namespace mupir {

using Json = nlohmann::json;

inline std::string rational_to_string(const Rational& r) {
  std::ostringstream out;
  out << boost::multiprecision::numerator(r) << '/' << boost::multiprecision::denominator(r);
  return out.str();
}

inline Rational rational_from_string(const std::string& s) {
  const auto slash = s.find('/');
  const std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (num.empty() || den.empty()) throw ProtocolError("malformed rational: " + s);
  try {
    return Rational(BigInt(num), BigInt(den));
  } catch (const std::exception&) {
    throw ProtocolError("malformed rational: " + s);
  }
}

namespace detail {

/// Reads a 1-based wire index into its 0-based internal value.
inline std::uint32_t internal_index(const Json& j, const char* what) {
  if (!j.is_number_unsigned() || j.get<std::uint64_t>() == 0)
    throw ProtocolError(std::string("expected positive 1-based index for ") + what);
  return static_cast<std::uint32_t>(j.get<std::uint64_t>() - 1);
}

inline const Json& field(const Json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end())
    throw ProtocolError(std::string("missing field: ") + name);
  return *it;
}

}  // namespace detail

inline Json config_to_json(const SystemConfig& c) {
  return Json{{"K", c.K}, {"N", c.N}, {"U", c.U}};
}

inline SystemConfig config_from_json(const Json& j) {
  return SystemConfig{detail::field(j, "K").get<std::uint32_t>(),
                      detail::field(j, "N").get<std::uint32_t>(),
                      detail::field(j, "U").get<std::uint32_t>()};
}

inline Json bitref_to_json(const BitRef& t) {
  return Json::array({t.message + 1, t.position + 1});
}

inline BitRef bitref_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ProtocolError("bit reference must be a [message, position] pair");
  return BitRef{detail::internal_index(j[0], "message"),
                detail::internal_index(j[1], "position")};
}

inline Json element_to_json(const QueryElement& e) {
  Json terms = Json::array();
  for (const auto& t : e.terms) terms.push_back(bitref_to_json(t));
  return Json{{"id", e.id + 1}, {"terms", std::move(terms)}};
}

inline QueryElement element_from_json(const Json& j) {
  QueryElement e;
  e.id = detail::internal_index(detail::field(j, "id"), "element id");
  for (const auto& t : detail::field(j, "terms")) e.terms.push_back(bitref_from_json(t));
  std::sort(e.terms.begin(), e.terms.end());
  return e;
}

inline Json elements_to_json(const std::vector<QueryElement>& elements) {
  Json out = Json::array();
  for (const auto& e : elements) out.push_back(element_to_json(e));
  return out;
}

inline std::vector<QueryElement> elements_from_json(const Json& j) {
  std::vector<QueryElement> out;
  for (const auto& e : j) out.push_back(element_from_json(e));
  return out;
}

inline Json plan_to_json(const RetrievalPlan& plan) {
  Json perms = Json::array();
  for (const auto& perm : plan.permutations) {
    Json p = Json::array();
    for (const std::uint32_t v : perm) p.push_back(v + 1);
    perms.push_back(std::move(p));
  }
  Json sets = Json::array();
  for (const auto& set : plan.query_sets) sets.push_back(elements_to_json(set));
  Json ledger = Json::array();
  for (const auto& entry : plan.ledger) {
    Json side = Json::array();
    for (const std::uint32_t id : entry.side_info) side.push_back(id + 1);
    ledger.push_back(Json{{"carrier", entry.carrier + 1}, {"side_info", std::move(side)}});
  }
  return Json{{"config", config_to_json(plan.config)},
              {"theta", plan.theta + 1},
              {"block_bits", plan.block_bits},
              {"permutations", std::move(perms)},
              {"query_sets", std::move(sets)},
              {"ledger", std::move(ledger)},
              {"fresh_consumed", plan.fresh_consumed}};
}

inline RetrievalPlan plan_from_json(const Json& j) {
  RetrievalPlan plan;
  plan.config = config_from_json(detail::field(j, "config"));
  plan.theta = detail::internal_index(detail::field(j, "theta"), "theta");
  plan.block_bits = detail::field(j, "block_bits").get<std::uint32_t>();
  for (const auto& perm : detail::field(j, "permutations")) {
    std::vector<std::uint32_t> p;
    for (const auto& v : perm) p.push_back(detail::internal_index(v, "permutation entry"));
    plan.permutations.push_back(std::move(p));
  }
  for (const auto& set : detail::field(j, "query_sets"))
    plan.query_sets.push_back(elements_from_json(set));
  for (const auto& entry : detail::field(j, "ledger")) {
    LedgerEntry e;
    e.carrier = detail::internal_index(detail::field(entry, "carrier"), "ledger carrier");
    for (const auto& id : detail::field(entry, "side_info"))
      e.side_info.push_back(detail::internal_index(id, "ledger side info"));
    plan.ledger.push_back(std::move(e));
  }
  plan.fresh_consumed =
      detail::field(j, "fresh_consumed").get<std::vector<std::uint32_t>>();
  return plan;
}

inline Json sheet_to_json(const AnswerSheet& sheet) {
  Json bits = Json::array();
  for (const auto& [id, bit] : sheet.bits)
    bits.push_back(Json::array({id + 1, bit}));
  return Json{{"source", sheet.source + 1}, {"bits", std::move(bits)}};
}

inline AnswerSheet sheet_from_json(const Json& j) {
  AnswerSheet sheet;
  sheet.source = detail::internal_index(detail::field(j, "source"), "source");
  for (const auto& pair : detail::field(j, "bits")) {
    if (!pair.is_array() || pair.size() != 2)
      throw ProtocolError("answer bit must be an [id, bit] pair");
    const std::uint32_t id = detail::internal_index(pair[0], "element id");
    const std::uint64_t bit = pair[1].get<std::uint64_t>();
    if (bit > 1) throw ProtocolError("answer bit must be 0 or 1");
    sheet.bits[id] = static_cast<std::uint8_t>(bit);
  }
  return sheet;
}

inline Json routing_to_json(const RoutingTable& table) {
  Json out = Json::array();
  for (const Route& r : table.routes) {
    Json entry{{"channel", r.direct ? "direct" : "helper"},
               {"database", r.database + 1}};
    if (!r.direct) entry["helper"] = r.helper + 1;
    out.push_back(std::move(entry));
  }
  return out;
}

inline RoutingTable routing_from_json(const Json& j) {
  RoutingTable table;
  for (const auto& entry : j) {
    Route r;
    const std::string channel = detail::field(entry, "channel").get<std::string>();
    r.database = detail::internal_index(detail::field(entry, "database"), "database");
    if (channel == "direct") {
      r.direct = true;
    } else if (channel == "helper") {
      r.direct = false;
      r.helper = detail::internal_index(detail::field(entry, "helper"), "helper");
    } else {
      throw ProtocolError("unknown routing channel: " + channel);
    }
    table.routes.push_back(r);
  }
  return table;
}

inline Json transcript_to_json(const Transcript& t) {
  Json deliveries = Json::array();
  for (const auto& db : t.deliveries) {
    Json list = Json::array();
    for (const Delivery& d : db) {
      list.push_back(Json{{"user", d.user + 1},
                          {"source", d.source + 1},
                          {"elements", elements_to_json(d.elements)}});
    }
    deliveries.push_back(std::move(list));
  }
  Json sheets = Json::array();
  for (const auto& s : t.sheets) sheets.push_back(sheet_to_json(s));
  return Json{{"config", config_to_json(t.config)},
              {"theta", t.theta + 1},
              {"block_bits", t.block_bits},
              {"routing", routing_to_json(t.routing)},
              {"deliveries", std::move(deliveries)},
              {"sheets", std::move(sheets)},
              {"download_bits", t.download_bits},
              {"recovered", to_hex(t.recovered)},
              {"rate", rational_to_string(t.rate)}};
}

inline Transcript transcript_from_json(const Json& j) {
  Transcript t;
  t.config = config_from_json(detail::field(j, "config"));
  t.theta = detail::internal_index(detail::field(j, "theta"), "theta");
  t.block_bits = detail::field(j, "block_bits").get<std::uint32_t>();
  t.routing = routing_from_json(detail::field(j, "routing"));
  for (const auto& db : detail::field(j, "deliveries")) {
    std::vector<Delivery> list;
    for (const auto& d : db) {
      Delivery del;
      del.user = detail::internal_index(detail::field(d, "user"), "user");
      del.source = detail::internal_index(detail::field(d, "source"), "source");
      del.elements = elements_from_json(detail::field(d, "elements"));
      list.push_back(std::move(del));
    }
    t.deliveries.push_back(std::move(list));
  }
  for (const auto& s : detail::field(j, "sheets")) t.sheets.push_back(sheet_from_json(s));
  t.download_bits = detail::field(j, "download_bits").get<std::uint64_t>();
  t.recovered = from_hex(detail::field(j, "recovered").get<std::string>(), t.block_bits);
  t.rate = rational_from_string(detail::field(j, "rate").get<std::string>());
  return t;
}

inline Json report_to_json(const AttackReport& r) {
  Json tied = Json::array();
  for (const std::uint32_t m : r.tied_indices) tied.push_back(m + 1);
  Json verdict;
  if (r.tie)
    verdict = "tie";
  else
    verdict = r.verdict + 1;
  return Json{{"beta", r.beta},
              {"verdict", std::move(verdict)},
              {"tied_indices", std::move(tied)},
              {"comparisons", r.comparisons}};
}

inline AttackReport report_from_json(const Json& j) {
  AttackReport r;
  r.beta = detail::field(j, "beta").get<std::vector<std::uint64_t>>();
  const Json& verdict = detail::field(j, "verdict");
  if (verdict.is_string()) {
    if (verdict.get<std::string>() != "tie")
      throw ProtocolError("unknown verdict: " + verdict.get<std::string>());
    r.tie = true;
  } else {
    r.tie = false;
    r.verdict = detail::internal_index(verdict, "verdict");
  }
  for (const auto& m : detail::field(j, "tied_indices"))
    r.tied_indices.push_back(detail::internal_index(m, "tied index"));
  if (r.tie && !r.tied_indices.empty()) r.verdict = r.tied_indices.front();
  r.comparisons = detail::field(j, "comparisons").get<std::uint64_t>();
  return r;
}

inline Json distribution_to_json(const QueryDistribution& d) {
  Json support = Json::object();
  for (const auto& [key, p] : d.support) support[key] = rational_to_string(p);
  return Json{{"K", d.K},
              {"S", d.S},
              {"source", d.source + 1},
              {"theta", d.theta + 1},
              {"support", std::move(support)}};
}

inline QueryDistribution distribution_from_json(const Json& j) {
  QueryDistribution d;
  d.K = detail::field(j, "K").get<std::uint32_t>();
  d.S = detail::field(j, "S").get<std::uint32_t>();
  d.source = detail::internal_index(detail::field(j, "source"), "source");
  d.theta = detail::internal_index(detail::field(j, "theta"), "theta");
  for (const auto& [key, p] : detail::field(j, "support").items())
    d.support[key] = rational_from_string(p.get<std::string>());
  return d;
}

/// Sweep series as CSV: one "n,comparisons" row per point and a
/// "fitted_slope,<value>" footer record.
inline std::string sweep_to_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "n,comparisons\n";
  for (const SweepPoint& p : sweep.points)
    out << p.n << ',' << p.mean_comparisons << '\n';
  out << "fitted_slope," << sweep.slope << '\n';
  return out.str();
}

inline void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ProtocolError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProtocolError("cannot open: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ProtocolError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace mupir
