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
// Command-line laboratory: capacity tables, end-to-end retrieval runs,
// query-analysis attacks on recorded transcripts, distributional privacy
// checks, and the attack-cost sweep. Exit code 0 means every check the
// command performs passed; 1 is a failed check or runtime error; 2 is a
// usage or configuration error.

#include "mupir/mupir.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace mupir;

struct Range {
  std::uint32_t lo = 1;
  std::uint32_t hi = 1;
};

Range parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    Range r;
    if (dots == std::string::npos) {
      r.lo = r.hi = static_cast<std::uint32_t>(std::stoul(text));
    } else {
      r.lo = static_cast<std::uint32_t>(std::stoul(text.substr(0, dots)));
      r.hi = static_cast<std::uint32_t>(std::stoul(text.substr(dots + 2)));
    }
    if (r.lo == 0 || r.hi < r.lo)
      throw ConfigError("bad range: " + text);
    return r;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("bad range: " + text + " (expected N or A..B)");
  }
}

// Fills flag values that were not given on the command line from a JSON
// config file using the same key vocabulary as the long flag names.
struct ConfigMerge {
  std::vector<std::pair<CLI::Option*, std::function<void(const Json&)>>> bindings;

  template <typename T>
  void bind(CLI::Option* opt, T& target) {
    bindings.emplace_back(opt, [&target](const Json& v) { target = v.get<T>(); });
  }

  void apply(const Json& cfg) const {
    for (const auto& [opt, setter] : bindings) {
      if (opt->count() > 0) continue;
      const std::string key = opt->get_lnames().front();
      if (cfg.contains(key)) setter(cfg.at(key));
    }
  }
};

std::string decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", r.convert_to<double>());
  return buf;
}

MessageSet messages_from_hex_file(const std::string& path, std::uint32_t K, std::uint32_t L) {
  std::ifstream in(path);
  if (!in) throw ProtocolError("cannot open message file: " + path);
  MessageSet ws;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ws.messages.push_back(from_hex(line, L));
  }
  if (ws.count() != K)
    throw ProtocolError("message file must hold exactly one hex line per message");
  return ws;
}

int cmd_capacity(const Range& ks, const Range& ns, const Range& us,
                 const std::string& format, const std::string& out_path) {
  struct Row {
    std::uint32_t K, N, U, S;
    BigInt L, Q, D;
    Rational C;
  };
  std::vector<Row> rows;
  for (std::uint32_t K = ks.lo; K <= ks.hi; ++K)
    for (std::uint32_t N = ns.lo; N <= ns.hi; ++N)
      for (std::uint32_t U = us.lo; U <= us.hi; ++U) {
        const std::uint32_t S = source_count(N, U);
        Row row{K, N, U, S, block_length(S, K), query_cardinality(S, K), 0, capacity(S, K)};
        row.D = S * row.Q;
        rows.push_back(std::move(row));
      }

  std::ostringstream body;
  if (format == "csv") {
    body << "K,N,U,S,L,Q,D,capacity,capacity_decimal\n";
    for (const Row& r : rows)
      body << r.K << ',' << r.N << ',' << r.U << ',' << r.S << ',' << r.L << ','
           << r.Q << ',' << r.D << ',' << rational_to_string(r.C) << ','
           << decimal(r.C) << '\n';
  } else if (format == "json") {
    Json arr = Json::array();
    for (const Row& r : rows)
      arr.push_back(Json{{"K", r.K},
                         {"N", r.N},
                         {"U", r.U},
                         {"S", r.S},
                         {"L", r.L.str()},
                         {"Q", r.Q.str()},
                         {"D", r.D.str()},
                         {"capacity", rational_to_string(r.C)},
                         {"capacity_decimal", r.C.convert_to<double>()}});
    body << arr.dump(2) << '\n';
  } else {
    body << "   K   N   U   S          L          Q          D    capacity  (decimal)\n";
    for (const Row& r : rows) {
      char line[256];
      std::snprintf(line, sizeof line, "%4u%4u%4u%4u%11s%11s%11s%12s  %s\n", r.K,
                    r.N, r.U, r.S, r.L.str().c_str(), r.Q.str().c_str(),
                    r.D.str().c_str(), rational_to_string(r.C).c_str(),
                    decimal(r.C).c_str());
      body << line;
    }
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ProtocolError("cannot open for writing: " + out_path);
    out << body.str();
  }
  std::cout << body.str();
  return 0;
}

int cmd_run(const SystemConfig& config, std::uint32_t theta_external, std::uint64_t seed,
            const std::string& routing_mode, const std::string& routing_file,
            const std::string& messages_file, const std::string& out_path) {
  if (theta_external == 0 || theta_external > config.K)
    throw ConfigError("theta must be in 1.." + std::to_string(config.K));
  const std::uint32_t theta = theta_external - 1;
  const std::uint32_t S = config.sources();
  const std::uint32_t L = block_length_checked(S, config.K);

  MessageSet ws;
  if (!messages_file.empty()) {
    ws = messages_from_hex_file(messages_file, config.K, L);
  } else {
    SeededRandom msg_rng(seed ^ 0x9e3779b97f4a7c15ULL);
    ws = random_messages(config.K, L, msg_rng);
  }

  std::optional<RoutingTable> fixed;
  if (routing_mode == "file") {
    if (routing_file.empty())
      throw ConfigError("--routing file requires --routing-file");
    fixed = routing_from_json(load_json(routing_file));
  } else if (routing_mode != "uniform") {
    throw ConfigError("unknown routing mode: " + routing_mode);
  }

  const Transcript t = run_retrieval(config, theta, ws, seed, fixed);
  const Rational cap = capacity(S, config.K);
  const bool match = t.rate == cap;
  const bool correct = t.recovered == ws.messages[theta];

  if (!out_path.empty()) save_json(out_path, transcript_to_json(t));
  std::cout << "L=" << t.block_bits << " D=" << t.download_bits
            << " rate=" << rational_to_string(t.rate)
            << " capacity=" << rational_to_string(cap)
            << " match=" << (match ? "yes" : "no")
            << " correct=" << (correct ? "yes" : "no") << "\n";
  return match && correct ? 0 : 1;
}

int cmd_attack(const std::string& in_path, const std::string& mode,
               std::uint32_t database_external, std::uint32_t user_external,
               const std::string& out_path) {
  const Transcript t = transcript_from_json(load_json(in_path));
  if (database_external == 0 || database_external > t.config.N)
    throw ConfigError("database must be in 1.." + std::to_string(t.config.N));
  const std::uint32_t db = database_external - 1;
  const SingletonCatalog catalog{t.config.K, t.block_bits};
  const auto grouped = group_by_user(observed_sets(t, db));

  AttackReport report;
  if (mode == "cross") {
    report = infer_cross_user(grouped, catalog);
  } else if (mode == "single") {
    if (user_external == 0) throw ConfigError("--mode single requires --user");
    const std::uint32_t user = user_external - 1;
    const auto it = std::find_if(grouped.begin(), grouped.end(),
                                 [&](const auto& p) { return p.first == user; });
    if (it == grouped.end())
      throw ProtocolError("user " + std::to_string(user_external) +
                          " delivered nothing to database " +
                          std::to_string(database_external));
    report = infer_single_user(it->second, catalog);
  } else {
    throw ConfigError("unknown mode: " + mode + " (expected single or cross)");
  }

  if (!out_path.empty()) save_json(out_path, report_to_json(report));

  std::cout << "beta=[";
  for (std::size_t m = 0; m < report.beta.size(); ++m)
    std::cout << (m ? "," : "") << report.beta[m];
  std::cout << "] comparisons=" << report.comparisons << "\n";
  if (report.tie) {
    std::cout << "verdict=tie true_theta=" << t.theta + 1 << " identified=no\n";
  } else {
    const bool hit = report.verdict == t.theta;
    std::cout << "verdict=" << report.verdict + 1 << " true_theta=" << t.theta + 1
              << " identified=" << (hit ? "yes" : "no") << "\n";
  }
  return 0;
}

int cmd_privacy(std::uint32_t K, std::uint32_t S, const std::string& mode,
                std::uint32_t samples, std::uint64_t seed, const std::string& out_path) {
  if (K == 0 || S == 0) throw ConfigError("K and S must be >= 1");
  Json report = Json::array();
  bool violation = false;

  for (std::uint32_t source = 0; source < S; ++source) {
    if (mode == "exhaustive") {
      std::vector<QueryDistribution> dists;
      for (std::uint32_t theta = 0; theta < K; ++theta)
        dists.push_back(enumerate_distribution(K, S, source, theta));
      bool identical = true;
      for (std::uint32_t theta = 1; theta < K; ++theta)
        identical = identical && dists[theta].support == dists[0].support;
      const MutualInformation mi = mutual_information_with_theta(dists);
      if (!mi.exact_zero || !identical) violation = true;
      std::cout << "source " << source + 1 << ": MI="
                << (mi.exact_zero ? "0 exact" : std::to_string(mi.bits))
                << ", distributions identical: " << (identical ? "yes" : "no")
                << " (" << dists[0].support.size() << " support points)\n";
      report.push_back(Json{{"source", source + 1},
                            {"mi_exact_zero", mi.exact_zero},
                            {"mi_bits", mi.bits},
                            {"identical", identical}});
    } else if (mode == "sampled") {
      std::vector<QueryDistribution> dists;
      for (std::uint32_t theta = 0; theta < K; ++theta)
        dists.push_back(enumerate_distribution_sampled(K, S, source, theta, samples,
                                                       seed + theta * 1000003));
      Rational max_tv = 0;
      for (std::uint32_t a = 0; a < K; ++a)
        for (std::uint32_t b = a + 1; b < K; ++b)
          max_tv = std::max(max_tv, total_variation(dists[a], dists[b]));
      std::cout << "source " << source + 1
                << ": max TV distance = " << max_tv.convert_to<double>() << " ("
                << samples << " samples, rank-relabeled)\n";
      report.push_back(Json{{"source", source + 1},
                            {"max_tv", max_tv.convert_to<double>()},
                            {"samples", samples}});
    } else {
      throw ConfigError("unknown mode: " + mode + " (expected exhaustive or sampled)");
    }
  }
  if (!out_path.empty()) save_json(out_path, report);
  return violation ? 1 : 0;
}

int cmd_sweep(std::uint32_t K, const Range& ss, std::uint32_t trials, std::uint64_t seed,
              const std::string& out_path) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> sizes;
  for (std::uint32_t S = ss.lo; S <= ss.hi; ++S) sizes.emplace_back(K, S);
  const SweepResult sweep = complexity_sweep(sizes, trials, seed);
  const std::string csv = sweep_to_csv(sweep);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ProtocolError("cannot open for writing: " + out_path);
    out << csv;
  }
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-user private information retrieval laboratory"};
  app.require_subcommand(1);

  // capacity
  auto* cap = app.add_subcommand("capacity", "tabulate capacity over a parameter grid");
  std::string cap_k = "1..4", cap_n = "1..2", cap_u = "1..3";
  std::string cap_format = "table", cap_out;
  cap->add_option("--K", cap_k, "message count or range A..B");
  cap->add_option("--N", cap_n, "database count or range A..B");
  cap->add_option("--U", cap_u, "user count or range A..B");
  cap->add_option("--format", cap_format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cap->add_option("--out", cap_out, "also write the table to this file");

  // run
  auto* run = app.add_subcommand("run", "execute one full retrieval and verify it");
  std::uint32_t run_K = 0, run_N = 0, run_U = 0, run_theta = 0;
  std::uint64_t run_seed = 0;
  std::string run_routing = "uniform", run_routing_file, run_messages, run_out,
      run_config;
  ConfigMerge run_merge;
  run_merge.bind(run->add_option("--K", run_K, "message count"), run_K);
  run_merge.bind(run->add_option("--N", run_N, "database count"), run_N);
  run_merge.bind(run->add_option("--U", run_U, "user count"), run_U);
  run_merge.bind(run->add_option("--theta", run_theta, "desired message index (1-based)"),
                 run_theta);
  run_merge.bind(run->add_option("--seed", run_seed, "seed for plan, routing and messages"),
                 run_seed);
  run_merge.bind(run->add_option("--routing", run_routing, "uniform or file"), run_routing);
  run_merge.bind(run->add_option("--routing-file", run_routing_file,
                                 "routing table JSON (with --routing file)"),
                 run_routing_file);
  run_merge.bind(run->add_option("--messages", run_messages,
                                 "hex message file, one line per message"),
                 run_messages);
  run_merge.bind(run->add_option("--out", run_out, "write the transcript JSON here"), run_out);
  run->add_option("--config", run_config, "JSON config file with the same keys");

  // attack
  auto* attack = app.add_subcommand("attack", "analyze a recorded transcript");
  std::string attack_in, attack_mode = "cross", attack_out;
  std::uint32_t attack_db = 1, attack_user = 0;
  attack->add_option("--in", attack_in, "transcript JSON from 'run'")->required();
  attack->add_option("--mode", attack_mode, "single or cross")
      ->check(CLI::IsMember({"single", "cross"}));
  attack->add_option("--database", attack_db, "observing database (1-based)");
  attack->add_option("--user", attack_user, "user identity for single mode (1-based)");
  attack->add_option("--out", attack_out, "write the report JSON here");

  // privacy
  auto* privacy = app.add_subcommand("privacy", "check query-set distributions");
  std::uint32_t priv_K = 2, priv_S = 2, priv_samples = 10000;
  std::uint64_t priv_seed = 1;
  std::string priv_mode = "exhaustive", priv_out;
  privacy->add_option("--K", priv_K, "message count");
  privacy->add_option("--S", priv_S, "source count");
  privacy->add_option("--mode", priv_mode, "exhaustive or sampled")
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  privacy->add_option("--samples", priv_samples, "sample count for sampled mode");
  privacy->add_option("--seed", priv_seed, "base seed for sampled mode");
  privacy->add_option("--out", priv_out, "write the report JSON here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "measure cross-user analysis cost growth");
  std::uint32_t sweep_K = 2, sweep_trials = 3;
  std::uint64_t sweep_seed = 1;
  std::string sweep_S = "2..6", sweep_out;
  sweep->add_option("--K", sweep_K, "message count");
  sweep->add_option("--S", sweep_S, "source count range A..B");
  sweep->add_option("--trials", sweep_trials, "transcripts per size");
  sweep->add_option("--seed", sweep_seed, "base seed");
  sweep->add_option("--out", sweep_out, "write the CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cap)
      return cmd_capacity(parse_range(cap_k), parse_range(cap_n), parse_range(cap_u),
                          cap_format, cap_out);
    if (*run) {
      if (!run_config.empty()) run_merge.apply(load_json(run_config));
      if (run_K == 0 || run_N == 0 || run_U == 0)
        throw ConfigError("run requires --K, --N and --U (flags or config file)");
      if (run_theta == 0) throw ConfigError("run requires --theta (1-based)");
      return cmd_run(SystemConfig{run_K, run_N, run_U}, run_theta, run_seed,
                     run_routing, run_routing_file, run_messages, run_out);
    }
    if (*attack)
      return cmd_attack(attack_in, attack_mode, attack_db, attack_user, attack_out);
    if (*privacy)
      return cmd_privacy(priv_K, priv_S, priv_mode, priv_samples, priv_seed, priv_out);
    if (*sweep)
      return cmd_sweep(sweep_K, parse_range(sweep_S), sweep_trials, sweep_seed, sweep_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
