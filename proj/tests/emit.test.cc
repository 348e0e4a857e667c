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

#include "qob/emit.h"

#include "gtest/gtest.h"

using namespace qob;

TEST(emit, format_real) {
    ASSERT_EQ(format_real(0), "0.000000000");
    ASSERT_EQ(format_real(-0.0), "0.000000000");
    ASSERT_EQ(format_real(-1e-12), "0.000000000");
    ASSERT_EQ(format_real(-1), "-1.000000000");
    ASSERT_EQ(format_real(1.0 / 3), "0.333333333");
}

TEST(emit, parse_output_format) {
    ASSERT_EQ(parse_output_format("csv"), OutputFormat::csv);
    ASSERT_EQ(parse_output_format("jsonl"), OutputFormat::jsonl);
    ASSERT_EQ(parse_output_format("table"), OutputFormat::table);
    ASSERT_FALSE(parse_output_format("xml").has_value());
}

TEST(emit, jsonl_weak_value_record) {
    std::string text = emit(run_three_boxes(), OutputFormat::jsonl);
    ASSERT_NE(
        text.find(R"({"scenario":"three_boxes","name":"P3","kind":"weak_value","re":-1.000000000,"im":0.000000000})"),
        std::string::npos);
    ASSERT_EQ(text.find(R"({"scenario":"three_boxes","name":"seed","kind":"header","re":42,"im":0})"), 0u);
}

TEST(emit, zero_weak_value_prints_zeros) {
    ScenarioResult r;
    r.scenario = "x";
    r.weak_values["w"] = cplx(-0.0, -0.0);
    std::string csv = emit(r, OutputFormat::csv);
    ASSERT_NE(csv.find("w,0.000000000,0.000000000\n"), std::string::npos);
}

TEST(emit, empty_sections_are_omitted) {
    ScenarioResult r = run_three_boxes();
    ASSERT_TRUE(r.trial_stats.empty());
    for (auto f : {OutputFormat::table, OutputFormat::csv, OutputFormat::jsonl}) {
        std::string text = emit(r, f);
        ASSERT_EQ(text.find("trial"), std::string::npos);
        ASSERT_EQ(text.find("schmidt"), std::string::npos);
    }
}

TEST(emit, csv_sections_have_fixed_headers) {
    std::string csv = emit(run_oblivion(), OutputFormat::csv);
    ASSERT_NE(csv.find("# scenario=oblivion,seed=42\n"), std::string::npos);
    ASSERT_NE(csv.find("epoch,basis,re,im\n"), std::string::npos);
    ASSERT_NE(csv.find("epoch,schmidt_rank\nt0,1\nt1,2\nt2,1\n"), std::string::npos);
    ASSERT_NE(csv.find("name,probability\n"), std::string::npos);
    // Basis names contain commas and are quoted.
    ASSERT_NE(csv.find("t0,\"1',2',READY,READY\",0.500000000,0.000000000\n"), std::string::npos);
}

TEST(emit, table_has_no_color_unless_asked) {
    ScenarioResult r = run_three_boxes();
    ASSERT_EQ(emit(r, OutputFormat::table).find('\x1b'), std::string::npos);
    EmitOptions opt;
    opt.color = true;
    ASSERT_NE(emit(r, OutputFormat::table, opt).find('\x1b'), std::string::npos);
}

TEST(emit, deterministic) {
    RunParams p;
    p.trials = 300;
    for (auto f : {OutputFormat::table, OutputFormat::csv, OutputFormat::jsonl}) {
        ASSERT_EQ(emit(run_builtin("four_mirror", p), f), emit(run_builtin("four_mirror", p), f));
    }
}

TEST(emit, sweep_csv) {
    std::vector<SweepRow> rows = {{0.1, "NO_NO", -0.99, cplx(-1, 0)}};
    std::string csv = emit_sweep("hardy", rows, OutputFormat::csv);
    ASSERT_EQ(
        csv,
        "# scenario=hardy,seed=42\n"
        "g,observable,shift_over_g,weak_value_re,weak_value_im\n"
        "0.100000000,NO_NO,-0.990000000,-1.000000000,0.000000000\n");
}
