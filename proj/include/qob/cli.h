// Copyright 2026 The qoblivion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QOB_CLI_H
#define QOB_CLI_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qob/emit.h"

namespace qob::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_usage = 2,
    exit_scenario = 3,
    exit_io = 4,
};

struct SweepSpec {
    double g_min;
    double g_max;
    int steps;
    bool log_spaced;
};

/// "gmin:gmax:steps" or "gmin:gmax:steps:log".
std::optional<SweepSpec> parse_sweep(const std::string &text);

struct RunConfig {
    std::string scenario;
    uint64_t seed = default_seed;
    int trials = 10000;
    int round_trips = 20;
    double g = 0.05;
    RecombineOption option = RecombineOption::recombine_all;
    std::optional<SweepSpec> g_sweep;
    std::string observable;
    OutputFormat format = OutputFormat::table;
    std::optional<std::string> out_path;
    unsigned threads = 0;
};

/// Entry point behind the `qob` binary. `args` excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, bool out_is_tty = false);

}  // namespace qob::cli

#endif
