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
#ifndef BDPFL_CLI_HPP_
#define BDPFL_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace bdpfl {

// Exit codes shared by all subcommands: 0 success, 1 usage, 2 runtime.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Runs the experiment described by the config file and writes the run
// directory (rounds.csv, header.txt, ledger_bdp.txt, ledger_dp.txt) next to
// the configured CSV path. Prints final (eps, delta) per accountant and the
// final accuracy.
int cmd_simulate(const std::string& config_path, std::ostream& out,
                 std::ostream& err);

struct AccountOptions {
  double sigma = 1.0;
  double q = 1.0;
  double delta = 1e-3;
  int lambda_max = 64;
  double clip = 1.0;
};

// Offline accounting over a recorded `round,delta_norm` file: replays the
// Bayesian estimator per round and the classic moments accountant over the
// same grid, then prints eps(delta) for both.
int cmd_account(const std::string& norms_path, const AccountOptions& options,
                std::ostream& out, std::ostream& err);

// Runs the same config under several privacy modes with matched seeds and
// writes one CSV per mode plus a merged long-format CSV.
int cmd_compare(const std::string& config_path,
                const std::vector<std::string>& modes, std::ostream& out,
                std::ostream& err);

}  // namespace bdpfl

#endif  // BDPFL_CLI_HPP_
