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
#include "mupir/json_io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

using namespace mupir;

TEST_CASE("rationals serialize as exact fraction strings") {
  CHECK(rational_to_string(Rational(2, 3)) == "2/3");
  CHECK(rational_to_string(Rational(4, 6)) == "2/3");
  CHECK(rational_to_string(Rational(5)) == "5/1");
  CHECK(rational_from_string("9/13") == Rational(9, 13));
  CHECK(rational_from_string("7") == Rational(7));
  CHECK_THROWS_AS(rational_from_string("a/b"), ProtocolError);
  CHECK_THROWS_AS(rational_from_string(""), ProtocolError);
}

TEST_CASE("config serialization is canonical") {
  const SystemConfig c{2, 1, 2};
  const Json j = config_to_json(c);
  CHECK(j.dump() == R"({"K":2,"N":1,"U":2})");
  CHECK(config_from_json(j) == c);
  CHECK_THROWS_AS(config_from_json(Json{{"K", 2}, {"N", 1}}), ProtocolError);
  CHECK_THROWS_AS(config_from_json(Json{{"K", 0}, {"N", 1}, {"U", 1}}), ConfigError);
}

TEST_CASE("bit refs and elements are 1-based on the wire") {
  const QueryElement e{4, {{0, 2}, {1, 1}}};
  const Json j = element_to_json(e);
  CHECK(j.dump() == R"({"id":5,"terms":[[1,3],[2,2]]})");
  const QueryElement back = element_from_json(j);
  CHECK(back == e);

  CHECK_THROWS_AS(bitref_from_json(Json::array({0, 1})), ProtocolError);
  CHECK_THROWS_AS(bitref_from_json(Json::array({1})), ProtocolError);
  CHECK_THROWS_AS(element_from_json(Json{{"id", 0}, {"terms", Json::array()}}),
                  ProtocolError);
}

TEST_CASE("plans round trip through JSON") {
  SeededRandom rng(13);
  const SystemConfig config{3, 2, 2};
  const RetrievalPlan plan = generate_plan(config, 1, rng);
  const Json j = plan_to_json(plan);
  const RetrievalPlan back = plan_from_json(j);

  CHECK(back.config == plan.config);
  CHECK(back.theta == plan.theta);
  CHECK(back.block_bits == plan.block_bits);
  CHECK(back.permutations == plan.permutations);
  CHECK(back.query_sets == plan.query_sets);
  CHECK(back.ledger == plan.ledger);
  CHECK(back.fresh_consumed == plan.fresh_consumed);
  CHECK(plan_to_json(back) == j);

  // Round-tripped plans still decode.
  SeededRandom msg_rng(14);
  const MessageSet ws = random_messages(3, plan.block_bits, msg_rng);
  std::vector<AnswerSheet> sheets;
  for (std::uint32_t s = 0; s < plan.sources(); ++s)
    sheets.push_back(evaluate_answers(ws, back.query_sets[s], s));
  CHECK(decode(back, sheets) == ws.messages[1]);
}

TEST_CASE("answer sheets keep id-sorted bit arrays") {
  AnswerSheet sheet;
  sheet.source = 1;
  sheet.bits = {{5, 1}, {2, 0}, {9, 1}};
  const Json j = sheet_to_json(sheet);
  CHECK(j.dump() == R"({"bits":[[3,0],[6,1],[10,1]],"source":2})");
  CHECK(sheet_from_json(j) == sheet);
  CHECK_THROWS_AS(sheet_from_json(Json{{"source", 1}, {"bits", Json::array({Json::array({1, 2})})}}),
                  ProtocolError);
}

TEST_CASE("routing tables round trip") {
  RoutingTable table;
  table.routes = {Route{true, 0, 0}, Route{true, 1, 0}, Route{false, 1, 0}};
  const Json j = routing_to_json(table);
  CHECK(j[0].dump() == R"({"channel":"direct","database":1})");
  CHECK(j[2].dump() == R"({"channel":"helper","database":2,"helper":1})");
  CHECK(routing_from_json(j) == table);

  Json bad = j;
  bad[0]["channel"] = "carrier-pigeon";
  CHECK_THROWS_AS(routing_from_json(bad), ProtocolError);
}

TEST_CASE("transcripts round trip byte for byte") {
  const SystemConfig config{2, 2, 3};
  SeededRandom msg_rng(71);
  const MessageSet ws = random_messages(2, block_length_checked(4, 2), msg_rng);
  const Transcript t = run_retrieval(config, 1, ws, 71);

  const Json j = transcript_to_json(t);
  const Transcript back = transcript_from_json(j);
  CHECK(transcript_to_json(back) == j);
  CHECK(back.recovered == t.recovered);
  CHECK(back.rate == t.rate);
  CHECK(back.download_bits == t.download_bits);
  CHECK(back.theta == 1);

  // Observed sets survive the trip, which is what the analyses consume.
  for (std::uint32_t db = 0; db < config.N; ++db)
    CHECK(observed_sets(back, db) == observed_sets(t, db));
}

TEST_CASE("attack reports carry tie or index verdicts") {
  AttackReport tie_report;
  tie_report.beta = {1, 1};
  tie_report.tie = true;
  tie_report.verdict = 0;
  tie_report.tied_indices = {0, 1};
  tie_report.comparisons = 2;
  const Json jt = report_to_json(tie_report);
  CHECK(jt["verdict"] == "tie");
  CHECK(jt["tied_indices"] == Json::array({1, 2}));
  const AttackReport tie_back = report_from_json(jt);
  CHECK(tie_back.tie);
  CHECK(tie_back.beta == tie_report.beta);
  CHECK(tie_back.tied_indices == tie_report.tied_indices);

  AttackReport hit;
  hit.beta = {4, 2};
  hit.tie = false;
  hit.verdict = 0;
  hit.tied_indices = {0};
  hit.comparisons = 18;
  const Json jh = report_to_json(hit);
  CHECK(jh["verdict"] == 1);
  const AttackReport hit_back = report_from_json(jh);
  CHECK_FALSE(hit_back.tie);
  CHECK(hit_back.verdict == 0);
  CHECK(hit_back.comparisons == 18);

  Json bad = jh;
  bad["verdict"] = "maybe";
  CHECK_THROWS_AS(report_from_json(bad), ProtocolError);
}

TEST_CASE("distributions round trip with exact probabilities") {
  const QueryDistribution d = enumerate_distribution(1, 3, 1, 0);
  const Json j = distribution_to_json(d);
  CHECK(j["source"] == 2);
  CHECK(j["theta"] == 1);
  const QueryDistribution back = distribution_from_json(j);
  CHECK(back.support == d.support);
  CHECK(back.source == d.source);
  CHECK(distribution_to_json(back) == j);
}

TEST_CASE("sweep CSV has the point rows and slope footer") {
  SweepResult sweep;
  sweep.points = {{2, 2, 6, 18.0}, {2, 3, 12, 96.0}};
  sweep.slope = 2.41;
  const std::string csv = sweep_to_csv(sweep);
  CHECK(csv == "n,comparisons\n6,18\n12,96\nfitted_slope,2.41\n");
}

TEST_CASE("file helpers round trip and reject junk") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mupir_json_test";
  fs::create_directories(dir);
  const std::string path = (dir / "blob.json").string();

  const Json j{{"alpha", 1}, {"beta", Json::array({1, 2, 3})}};
  save_json(path, j);
  CHECK(load_json(path) == j);

  CHECK_THROWS_AS(load_json((dir / "missing.json").string()), ProtocolError);
  {
    std::ofstream bad(dir / "bad.json");
    bad << "{not json";
  }
  CHECK_THROWS_AS(load_json((dir / "bad.json").string()), ProtocolError);
  fs::remove_all(dir);
}
