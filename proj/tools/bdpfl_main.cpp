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
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bdpfl/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bayesian differential privacy accounting for federated learning"};
  app.require_subcommand(1);

  std::string sim_config;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run one federated experiment from a config file");
  simulate->add_option("config", sim_config, "path to INI config")->required();

  std::string norms_path;
  bdpfl::AccountOptions opts;
  CLI::App* account = app.add_subcommand(
      "account", "Offline accounting over a round,delta_norm file");
  account->add_option("norms", norms_path, "path to norms csv")->required();
  account->add_option("--sigma", opts.sigma, "noise multiplier");
  account->add_option("--q", opts.q, "sampling probability");
  account->add_option("--delta", opts.delta, "target delta");
  account->add_option("--lambda-max", opts.lambda_max, "largest moment order");
  account->add_option("--clip", opts.clip, "clipping norm C");

  std::string cmp_config;
  std::string modes_arg;
  CLI::App* compare = app.add_subcommand(
      "compare", "Run one config under several modes with matched seeds");
  compare->add_option("config", cmp_config, "path to INI config")->required();
  compare->add_option("--modes", modes_arg, "comma-separated privacy modes")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? bdpfl::kExitOk : bdpfl::kExitUsage;
  }

  if (simulate->parsed()) {
    return bdpfl::cmd_simulate(sim_config, std::cout, std::cerr);
  }
  if (account->parsed()) {
    return bdpfl::cmd_account(norms_path, opts, std::cout, std::cerr);
  }
  std::vector<std::string> modes;
  std::stringstream ss(modes_arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) modes.push_back(item);
  }
  return bdpfl::cmd_compare(cmp_config, modes, std::cout, std::cerr);
}
