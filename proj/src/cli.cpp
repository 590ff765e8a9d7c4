// Copyright 2026 The bdpfl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "bdpfl/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "bdpfl/errors.hpp"
#include "bdpfl/federation.hpp"

namespace bdpfl {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_run_dir(const ExperimentConfig& cfg, const RunResult& result) {
  const fs::path csv_path(cfg.output.csv);
  const fs::path dir = csv_path.has_parent_path() ? csv_path.parent_path()
                                                  : fs::path(".");
  write_file(csv_path, records_to_csv(result.records));
  write_file(dir / "header.txt", result.header);
  const bool primary_is_client = cfg.privacy.mode == PrivacyMode::kClient ||
                                 cfg.privacy.mode == PrivacyMode::kJoint;
  const PrivacyLedger& primary =
      primary_is_client ? result.ledgers.client : result.ledgers.instance;
  write_file(dir / "ledger_bdp.txt", serialize_ledger(primary));
  if (cfg.privacy.mode == PrivacyMode::kJoint ||
      (cfg.privacy.mode == PrivacyMode::kClient &&
       cfg.privacy.sigma_instance > 0.0)) {
    write_file(dir / "ledger_bdp_instance.txt",
               serialize_ledger(result.ledgers.instance));
  }
  write_file(dir / "ledger_dp.txt", result.ledgers.dp.serialize());
}

}  // namespace

int cmd_simulate(const std::string& config_path, std::ostream& out,
                 std::ostream& err) {
  try {
    const ExperimentConfig cfg = load_config(config_path);
    const RunResult result = run_experiment(cfg);
    write_run_dir(cfg, result);

    const double delta_tail = cfg.privacy.delta / 2.0;
    const EpsDelta client_ed =
        epsilon_for_delta(result.ledgers.client, delta_tail);
    const EpsDelta inst_ed =
        epsilon_for_delta(result.ledgers.instance, delta_tail);
    out << "rounds_completed = " << result.records.size() << "\n";
    if (result.truncated) {
      out << "truncated = true (epsilon budget reached)\n";
    }
    if (!result.records.empty()) {
      const RoundRecord& last = result.records.back();
      out << "final_train_acc = " << fmt(last.train_acc) << "\n";
      out << "final_test_acc = " << fmt(last.test_acc) << "\n";
    }
    out << "eps_bdp_client = " << fmt(client_ed.epsilon)
        << " (delta = " << client_ed.delta << ")\n";
    out << "eps_bdp_instance = " << fmt(inst_ed.epsilon)
        << " (delta = " << inst_ed.delta << ")\n";
    out << "eps_dp = " << fmt(result.ledgers.dp.epsilon(cfg.privacy.delta))
        << " (delta = " << cfg.privacy.delta << ")\n";
    out << "attack_advantage_client = "
        << fmt(attack_advantage(client_ed.epsilon)) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_account(const std::string& norms_path, const AccountOptions& options,
                std::ostream& out, std::ostream& err) {
  try {
    if (!(options.sigma > 0)) throw Error("--sigma must be > 0");
    if (!(options.q >= 0 && options.q <= 1)) throw Error("--q must lie in [0, 1]");
    if (!(options.delta > 0 && options.delta < 1)) throw Error("--delta must lie in (0, 1)");
    if (options.lambda_max < 1) throw Error("--lambda-max must be >= 1");
    if (!(options.clip > 0)) throw Error("--clip must be > 0");

    std::ifstream in(norms_path);
    if (!in) throw Error("cannot open " + norms_path);
    // round -> delta norms, in first-appearance order.
    std::vector<std::pair<long, std::vector<double>>> rounds;
    std::map<long, std::size_t> index;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      long round = 0;
      double norm = 0.0;
      if (std::sscanf(line.c_str(), "%ld,%lg", &round, &norm) != 2) {
        throw ParseError("malformed norms line (expected round,delta_norm)",
                         line_no);
      }
      if (norm < 0) throw ParseError("delta_norm must be >= 0", line_no);
      auto [it, inserted] = index.emplace(round, rounds.size());
      if (inserted) rounds.push_back({round, {}});
      rounds[it->second].second.push_back(norm);
    }

    MechanismParams params;
    params.sigma = options.sigma;
    params.clip = options.clip;
    params.sampling_prob = options.q;
    const LambdaGrid grid = LambdaGrid::range(options.lambda_max);
    const int t_total = static_cast<int>(rounds.size());

    const double dp_eps = dp_epsilon(params, t_total, options.delta, grid);
    out << "dp_epsilon = " << fmt(dp_eps) << " (delta = " << options.delta
        << ", rounds = " << t_total << ")\n";

    if (t_total == 0) {
      throw Error("insufficient samples: need m >= 2 per round "
                  "(empty norms file)");
    }
    const double delta_tail = options.delta / 2.0;
    const double delta_prime = options.delta / (2.0 * t_total);
    PrivacyLedger ledger(grid);
    for (const auto& [round, norms] : rounds) {
      if (norms.size() < 2) {
        throw Error("insufficient samples: need m >= 2 in round " +
                    std::to_string(round));
      }
      std::vector<SensitivitySample> samples;
      samples.reserve(norms.size());
      for (double n : norms) samples.push_back(SensitivitySample{n});
      ledger = ledger_add(
          ledger, estimate_round_cost(samples, params, grid, delta_prime));
    }
    const EpsDelta ed = epsilon_for_delta(ledger, delta_tail);
    out << "bdp_epsilon = " << fmt(ed.epsilon) << " (delta = " << ed.delta
        << ", rounds = " << t_total << ")\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "account: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_compare(const std::string& config_path,
                const std::vector<std::string>& modes, std::ostream& out,
                std::ostream& err) {
  try {
    if (modes.size() < 2) {
      err << "compare: need at least two modes (--modes a,b)\n";
      return kExitUsage;
    }
    const ExperimentConfig base = load_config(config_path);
    const fs::path dir = fs::path(base.output.csv).has_parent_path()
                             ? fs::path(base.output.csv).parent_path()
                             : fs::path(".");
    std::string merged =
        "mode,round,train_acc,test_acc,eps_dp,eps_bdp_client,"
        "eps_bdp_instance,delta_total\n";
    for (const std::string& mode_name : modes) {
      ExperimentConfig cfg = base;
      if (mode_name == "client") {
        cfg.privacy.mode = PrivacyMode::kClient;
      } else if (mode_name == "instance_seq") {
        cfg.privacy.mode = PrivacyMode::kInstanceSeq;
      } else if (mode_name == "instance_par") {
        cfg.privacy.mode = PrivacyMode::kInstancePar;
      } else if (mode_name == "joint") {
        cfg.privacy.mode = PrivacyMode::kJoint;
      } else {
        err << "compare: unknown mode " << mode_name << "\n";
        return kExitUsage;
      }
      cfg.output.csv = (dir / ("rounds_" + mode_name + ".csv")).string();
      const RunResult result = run_experiment(cfg);
      write_file(cfg.output.csv, records_to_csv(result.records));
      write_file(dir / ("header_" + mode_name + ".txt"), result.header);
      char buf[256];
      for (const auto& r : result.records) {
        std::snprintf(buf, sizeof buf,
                      "%s,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                      mode_name.c_str(), r.round, r.train_acc, r.test_acc,
                      r.eps_dp, r.eps_bdp_client, r.eps_bdp_instance,
                      r.delta_total);
        merged += buf;
      }
      out << mode_name << ": " << result.records.size() << " rounds\n";
    }
    write_file(dir / "compare.csv", merged);
    out << "merged = " << (dir / "compare.csv").string() << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "compare: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace bdpfl
