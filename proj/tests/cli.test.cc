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

#include "qob/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

using namespace qob;
using namespace qob::cli;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("qob_cli_test_" + name);
}

}  // namespace

TEST(cli, run_three_boxes_table) {
    Invocation r = run({"run", "three_boxes"});
    ASSERT_EQ(r.code, exit_ok);
    ASSERT_NE(r.out.find("seed 42"), std::string::npos);
    ASSERT_NE(r.out.find("P1        1.000000000"), std::string::npos);
    ASSERT_NE(r.out.find("P3       -1.000000000"), std::string::npos);
}

TEST(cli, run_oblivion_csv_schmidt_ranks) {
    Invocation r = run({"run", "oblivion", "--format", "csv"});
    ASSERT_EQ(r.code, exit_ok);
    ASSERT_NE(r.out.find("epoch,schmidt_rank\nt0,1\nt1,2\nt2,1\n"), std::string::npos);
}

TEST(cli, hardy_sweep_has_requested_rows) {
    Invocation r = run({"run", "hardy", "--g-sweep", "0.01:0.2:8", "--format", "csv"});
    ASSERT_EQ(r.code, exit_ok);
    std::istringstream lines(r.out);
    std::string line;
    int rows = 0;
    double last_g = 0;
    double first_shift = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'g') {
            continue;
        }
        rows++;
        ASSERT_NE(line.find(",NO_NO,"), std::string::npos);
        double g = std::stod(line);
        double shift = std::stod(line.substr(line.find(",NO_NO,") + 7));
        ASSERT_GT(g, last_g);
        if (rows == 1) {
            first_shift = shift;
        }
        last_g = g;
    }
    ASSERT_EQ(rows, 8);
    ASSERT_NEAR(first_shift, -1, 1e-3);
}

TEST(cli, sweep_with_named_observable_and_log_spacing) {
    Invocation r = run({"run", "three_boxes", "--g-sweep", "0.01:0.1:3:log", "--observable", "P1", "--format", "jsonl"});
    ASSERT_EQ(r.code, exit_ok);
    ASSERT_NE(r.out.find("\"g\":0.031622777"), std::string::npos);
    ASSERT_EQ(run({"run", "three_boxes", "--g-sweep", "0.01:0.1:3", "--observable", "P9"}).code, exit_usage);
}

TEST(cli, usage_errors) {
    ASSERT_EQ(run({}).code, exit_usage);
    ASSERT_EQ(run({"frobnicate"}).code, exit_usage);
    ASSERT_EQ(run({"run"}).code, exit_usage);
    ASSERT_EQ(run({"run", "three_boxes", "--trials", "0"}).code, exit_usage);
    ASSERT_EQ(run({"run", "three_boxes", "--format", "xml"}).code, exit_usage);
    ASSERT_EQ(run({"run", "hardy", "--g-sweep", "0:1:3"}).code, exit_usage);
    ASSERT_EQ(run({"run", "hardy", "--g-sweep", "0.1:0.2"}).code, exit_usage);
    ASSERT_EQ(run({"run", "hardy", "--observable", "NO_NO"}).code, exit_usage);
}

TEST(cli, help_succeeds) {
    Invocation r = run({"--help"});
    ASSERT_EQ(r.code, exit_ok);
    ASSERT_NE(r.out.find("run"), std::string::npos);
}

TEST(cli, unknown_scenario) {
    Invocation r = run({"run", "four_boxes"});
    ASSERT_EQ(r.code, exit_scenario);
    ASSERT_NE(r.err.find("unknown scenario"), std::string::npos);
}

TEST(cli, list_names_every_builtin) {
    for (auto args : {std::vector<std::string>{"list"}, std::vector<std::string>{"--list"}}) {
        Invocation r = run(args);
        ASSERT_EQ(r.code, exit_ok);
        for (const auto &info : catalog()) {
            ASSERT_NE(r.out.find(std::string(info.id)), std::string::npos);
        }
        ASSERT_NE(r.out.find("reproduces:"), std::string::npos);
    }
}

TEST(cli, dsl_diagnostics_exit_3_with_positions) {
    auto path = temp_path("bad.scn");
    std::ofstream(path) << "FACTORS\nq: 0 1\nINITIAL\n0 = 1\n2 = 1\n";
    Invocation r = run({"run", path.string()});
    ASSERT_EQ(r.code, exit_scenario);
    ASSERT_NE(r.err.find(":5:1: validation error: unknown label '2'"), std::string::npos);
    std::filesystem::remove(path);
}

TEST(cli, dsl_evaluation_error_exit_3) {
    auto path = temp_path("orth.scn");
    std::ofstream(path) << "FACTORS\nq: 0 1\nINITIAL\n0 = 1\nPOSTSELECT\n1 = 1\n";
    Invocation r = run({"run", path.string()});
    ASSERT_EQ(r.code, exit_scenario);
    ASSERT_NE(r.err.find("OrthogonalSelection"), std::string::npos);
    std::filesystem::remove(path);
}

TEST(cli, runs_file_and_embedded_scenarios) {
    auto path = temp_path("mine.scn");
    std::ofstream(path) << "FACTORS\nq: 0 1\nINITIAL\n0 = 1\n1 = 1\n";
    Invocation r = run({"run", path.string(), "--format", "csv"});
    ASSERT_EQ(r.code, exit_ok);
    ASSERT_NE(r.err.find("warning"), std::string::npos);
    ASSERT_NE(r.out.find("# scenario=qob_cli_test_mine,seed=42"), std::string::npos);
    std::filesystem::remove(path);
    ASSERT_EQ(run({"run", "three_path_photon_two", "--format", "csv"}).code, exit_ok);
    ASSERT_EQ(run({"run", "hardy.scn", "--g-sweep", "0.05:0.1:2"}).code, exit_ok);
}

TEST(cli, io_errors_exit_4) {
    ASSERT_EQ(run({"run", "/nonexistent/dir/x.scn"}).code, exit_io);
    ASSERT_EQ(run({"run", "three_boxes", "--out", "/nonexistent/dir/out.csv"}).code, exit_io);
}

TEST(cli, out_path_receives_output) {
    auto path = temp_path("out.jsonl");
    Invocation r = run({"run", "three_boxes", "--format", "jsonl", "--out", path.string()});
    ASSERT_EQ(r.code, exit_ok);
    ASSERT_TRUE(r.out.empty());
    ASSERT_EQ(read_file(path), run({"run", "three_boxes", "--format", "jsonl"}).out);
    std::filesystem::remove(path);
}

TEST(cli, seed_changes_only_monte_carlo_rows) {
    Invocation a = run({"run", "four_mirror", "--trials", "300", "--format", "csv"});
    Invocation b = run({"run", "four_mirror", "--trials", "300", "--format", "csv", "--seed", "7"});
    ASSERT_EQ(a.code, exit_ok);
    auto before_stats = [](const std::string &s) {
        return s.substr(s.find('\n'), s.find("# trial statistics") - s.find('\n'));
    };
    ASSERT_EQ(before_stats(a.out), before_stats(b.out));
    ASSERT_NE(a.out, b.out);
    ASSERT_EQ(a.out, run({"run", "four_mirror", "--trials", "300", "--format", "csv"}).out);
}

TEST(cli, golden_outputs) {
    for (const auto &[args, file] : std::vector<std::pair<std::vector<std::string>, std::string>>{
             {{"run", "three_boxes", "--format", "csv"}, "three_boxes.csv"},
             {{"run", "hardy", "--format", "jsonl"}, "hardy.jsonl"},
             {{"run", "oblivion"}, "oblivion.txt"},
         }) {
        ASSERT_EQ(run(args).out, read_file(std::filesystem::path(QOB_GOLDEN_DIR) / file)) << file;
    }
}
