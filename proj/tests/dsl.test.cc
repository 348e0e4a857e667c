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

#include "qob/dsl.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

using namespace qob;
using namespace qob::dsl;

static std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

static bool has_message(const ParseResult &r, Severity s, const std::string &needle) {
    for (const auto &d : r.diagnostics) {
        if (d.severity == s && d.message.find(needle) != std::string::npos) {
            return true;
        }
    }
    return false;
}

static const char *minimal = R"(FACTORS
q: 0 1
INITIAL
0 = 1
)";

TEST(dsl, minimal_spec) {
    ParseResult r = parse(minimal);
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.spec->factors.size(), 1u);
    ASSERT_EQ(r.spec->initial[0].amplitude, cplx(1));
    ScenarioResult res = evaluate(*r.spec);
    ASSERT_EQ(res.scenario, "scenario");
    ASSERT_EQ(res.states_by_epoch.size(), 1u);
}

TEST(dsl, amplitude_sugar) {
    ASSERT_NEAR(std::abs(*evaluate_amplitude("1/sqrt(3)") - cplx(0.57735026919)), 0, 1e-9);
    ASSERT_NEAR(std::abs(*evaluate_amplitude("-i/sqrt(2)") - cplx(0, -1 / std::sqrt(2.0))), 0, 1e-15);
    ASSERT_EQ(*evaluate_amplitude("(0.5,-0.25)"), cplx(0.5, -0.25));
    ASSERT_EQ(*evaluate_amplitude("0.5,-0.25"), cplx(0.5, -0.25));
    ASSERT_EQ(*evaluate_amplitude("3/4"), cplx(0.75));
    ASSERT_EQ(*evaluate_amplitude("2(1+i)"), cplx(2, 2));
    ASSERT_NEAR(std::abs(*evaluate_amplitude("sqrt(2/3) * sqrt(3/2)") - cplx(1)), 0, 1e-15);
    std::string error;
    ASSERT_FALSE(evaluate_amplitude("1/0", &error).has_value());
    ASSERT_NE(error.find("division by zero"), std::string::npos);
    ASSERT_FALSE(evaluate_amplitude("1 +", &error).has_value());
    ASSERT_FALSE(evaluate_amplitude("[q=0]", &error).has_value());
    ASSERT_FALSE(evaluate_amplitude("1e999").has_value());
}

TEST(dsl, no_factors) {
    ParseResult r = parse("FACTORS\nINITIAL\n");
    ASSERT_FALSE(r.ok());
    ASSERT_TRUE(has_message(r, Severity::validation, "no factors"));
    ASSERT_TRUE(has_message(parse(""), Severity::validation, "no factors"));
}

TEST(dsl, syntax_error_has_position_and_expected_tokens) {
    ParseResult r = parse("FACTORS\nq 0 1\nINITIAL\n0 = 1\n");
    ASSERT_FALSE(r.ok());
    const Diagnostic &d = r.diagnostics.at(0);
    ASSERT_EQ(d.severity, Severity::syntax);
    ASSERT_EQ(d.pos.line, 2);
    ASSERT_EQ(d.pos.column, 3);
    ASSERT_EQ(d.expected, std::vector<std::string>{"':'"});
    ASSERT_EQ(format_diagnostic(d, "x.scn"), "x.scn:2:3: syntax error: unexpected '0' (expected ':')");
}

TEST(dsl, unknown_label) {
    ParseResult r = parse("FACTORS\nq: 0 1\nINITIAL\n2 = 1\n");
    ASSERT_TRUE(has_message(r, Severity::validation, "unknown label '2'"));
    ASSERT_EQ(r.diagnostics[0].pos.line, 4);
}

TEST(dsl, normalizes_with_warning) {
    ParseResult r = parse("FACTORS\nq: 0 1\nINITIAL\n0 = 1\n1 = 1\n");
    ASSERT_TRUE(r.ok());
    ASSERT_TRUE(has_message(r, Severity::warning, "normalized"));
    ASSERT_NEAR(std::abs(r.spec->initial[0].amplitude - cplx(1 / std::sqrt(2.0))), 0, 1e-15);
    ParseResult exact = parse("FACTORS\nq: 0 1\nINITIAL\n0 = 1/sqrt(2)\n1 = 1/sqrt(2)\n");
    ASSERT_TRUE(exact.diagnostics.empty());
}

TEST(dsl, zero_norm_state) {
    ASSERT_TRUE(has_message(parse("FACTORS\nq: 0 1\nINITIAL\n0 = 0\n"), Severity::validation, "zero norm"));
}

TEST(dsl, custom_unitary_validation) {
    std::string base = "FACTORS\nq: 0 1\nINITIAL\n0 = 1\nGATES\n";
    ASSERT_TRUE(parse(base + "t0 custom_unitary q = [0, 1; 1, 0]\n").ok());
    ASSERT_TRUE(has_message(parse(base + "t0 custom_unitary q = [1, 0, 0; 0, 1, 0; 0, 0, 1]\n"), Severity::validation, "dimension"));
    ASSERT_TRUE(has_message(parse(base + "t0 custom_unitary q = [1, 1; 1, 0]\n"), Severity::validation, "not unitary"));
    ASSERT_TRUE(has_message(parse(base + "t0 custom_unitary q = [1, 0; 0]\n"), Severity::validation, "square"));
}

TEST(dsl, gate_rules) {
    std::string base = "FACTORS\na: 0 1\nb: 0 1\nINITIAL\n0 0 = 1\nGATES\n";
    ASSERT_TRUE(has_message(parse(base + "t1 beamsplitter a(0,1)\nt0 beamsplitter b(0,1)\n"), Severity::validation, "epoch order"));
    ASSERT_TRUE(has_message(parse(base + "t0 swap_map a a : 0 0 <-> 1 1\n"), Severity::validation, "twice"));
    ASSERT_TRUE(has_message(parse(base + "t0 swap_map a b : 0 0 <-> 0 0\n"), Severity::validation, "distinct"));
    ASSERT_TRUE(has_message(parse(base + "t0 rotate a\n"), Severity::syntax, "unknown gate"));
    ASSERT_TRUE(has_message(parse(base + "t0 projector_select a=0\n"), Severity::syntax, "unexpected"));
    ASSERT_TRUE(has_message(parse(base + "t4 beamsplitter a(0,1)\n"), Severity::syntax, "unknown epoch"));
    ASSERT_TRUE(parse(base + "t0 projector_select a={0,1} b=0 pass=ok fail=bad\n").ok());
}

TEST(dsl, observables_expand_to_canonical_terms) {
    ParseResult r = parse(R"(FACTORS
a: x y
b: x y
INITIAL
x x = 1
OBSERVABLES
A = [a=y]
B = [b={y,x}] [a=y]
C = 2 A - A + I*0.5
D = A - A
)");
    ASSERT_TRUE(r.ok());
    const auto &obs = r.spec->observables;
    ASSERT_EQ(obs[1].terms.size(), 1u);
    ASSERT_EQ(obs[1].terms[0].conditions.size(), 2u);
    ASSERT_EQ(obs[1].terms[0].conditions[0].factor, "a");
    ASSERT_EQ(obs[1].terms[0].conditions[1].labels, (std::vector<std::string>{"x", "y"}));
    ASSERT_EQ(obs[2].terms.size(), 2u);
    ASSERT_EQ(obs[2].terms[0].coefficient, cplx(1));
    ASSERT_EQ(obs[2].terms[1].coefficient, cplx(0.5));
    ASSERT_TRUE(obs[3].terms.empty());
    ASSERT_TRUE(has_message(parse("FACTORS\na: x\nINITIAL\nx = 1\nOBSERVABLES\nA = Z\n"), Severity::validation, "unknown observable"));
}

TEST(dsl, orthogonal_post_selection_carries_position) {
    ParseResult r = parse("FACTORS\nq: 0 1\nINITIAL\n0 = 1\nPOSTSELECT\n1 = 1\nOBSERVABLES\nP = [q=0]\n");
    ASSERT_TRUE(r.ok());
    try {
        evaluate(*r.spec);
        FAIL();
    } catch (const EvaluationError &e) {
        ASSERT_EQ(e.kind(), ErrorKind::orthogonal_selection);
        ASSERT_EQ(e.pos().line, 5);
    }
}

TEST(dsl, zero_probability_selection_carries_gate_position) {
    ParseResult r = parse("FACTORS\nq: 0 1\nINITIAL\n0 = 1\nGATES\nt1 projector_select q=1 pass=p fail=f\n");
    ASSERT_TRUE(r.ok());
    try {
        evaluate(*r.spec);
        FAIL();
    } catch (const EvaluationError &e) {
        ASSERT_EQ(e.kind(), ErrorKind::zero_probability_branch);
        ASSERT_EQ(e.pos().line, 6);
    }
}

static RunParams params_for(const std::string &stem) {
    RunParams p;
    p.trials = 1;
    if (stem == "three_path_photon_two") {
        p.option = RecombineOption::recombine_two;
    }
    return p;
}

TEST(dsl, shipped_files_reproduce_builtin_scenarios) {
    ASSERT_FALSE(shipped_scenario_files().empty());
    for (const auto &[stem, text] : shipped_scenario_files()) {
        ParseResult r = parse(text);
        ASSERT_TRUE(r.ok()) << stem;
        ASSERT_TRUE(r.diagnostics.empty()) << stem;
        ScenarioResult from_file = evaluate(*r.spec);
        ASSERT_TRUE(is_builtin(from_file.scenario)) << stem;
        auto diffs = compare_exact(from_file, run_builtin(from_file.scenario, params_for(stem)), 1e-10);
        for (const auto &d : diffs) {
            ADD_FAILURE() << stem << ": " << d;
        }
    }
}

TEST(dsl, shipped_hardy_weak_values) {
    ScenarioResult r = evaluate(*parse(*shipped_scenario("hardy")).spec);
    ASSERT_NEAR(std::abs(r.weak_values.at("NO_NO") - cplx(-1)), 0, 1e-10);
    ASSERT_NEAR(std::abs(r.weak_values.at("O_NO") - cplx(1)), 0, 1e-10);
}

TEST(dsl, shipped_oblivion_final_amplitudes) {
    ScenarioResult r = evaluate(*parse(*shipped_scenario("oblivion")).spec);
    const Ket &k = r.state(Epoch::t2);
    ASSERT_NEAR(std::abs(k.amplitude({"1'", "2''", "READY", "READY"}) - cplx(1 / std::sqrt(2.0))), 0, 1e-12);
    ASSERT_NEAR(std::abs(k.amplitude({"1''", "2''", "READY", "READY"}) - cplx(1 / std::sqrt(2.0))), 0, 1e-12);
}

TEST(dsl, embedded_copies_match_source_tree) {
    for (const auto &[stem, text] : shipped_scenario_files()) {
        ASSERT_EQ(read_file(std::filesystem::path(QOB_SCENARIO_DIR) / (stem + ".scn")), text) << stem;
    }
}

TEST(dsl, render_matches_golden_files) {
    for (const auto &[stem, text] : shipped_scenario_files()) {
        auto golden = std::filesystem::path(QOB_GOLDEN_DIR) / (stem + ".canonical.scn");
        ASSERT_TRUE(std::filesystem::exists(golden)) << golden;
        ASSERT_EQ(render(*parse(text).spec), read_file(golden)) << stem;
    }
}

TEST(dsl, round_trip_shipped_files) {
    for (const auto &[stem, text] : shipped_scenario_files()) {
        ScenarioSpec spec = *parse(text).spec;
        ParseResult again = parse(render(spec));
        ASSERT_TRUE(again.ok()) << stem;
        ASSERT_TRUE(*again.spec == spec) << stem;
        ASSERT_EQ(render(*again.spec), render(spec)) << stem;
    }
}

// Random valid specs: random factors, superpositions, gates and observables.
static ScenarioSpec random_spec(std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    ScenarioSpec s;
    s.id = "random" + std::to_string(rng() % 100);
    size_t nf = 1 + rng() % 3;
    for (size_t f = 0; f < nf; f++) {
        FactorDecl d{"f" + std::to_string(f), {}, {}};
        size_t dim = 2 + rng() % 3;
        for (size_t l = 0; l < dim; l++) {
            d.labels.push_back("l" + std::to_string(l) + (rng() % 2 ? "'" : ""));
        }
        s.factors.push_back(d);
    }
    if (nf > 1) {
        s.cut = {"f0"};
    }
    auto superposition = [&] {
        std::vector<AmplitudeEntry> out;
        std::vector<std::vector<std::string>> used;
        double norm2 = 0;
        for (int k = 0; k < 3; k++) {
            std::vector<std::string> labels;
            for (const auto &f : s.factors) {
                labels.push_back(f.labels[rng() % f.labels.size()]);
            }
            if (std::find(used.begin(), used.end(), labels) != used.end()) {
                continue;
            }
            used.push_back(labels);
            cplx a(normal(rng), normal(rng));
            norm2 += std::norm(a);
            out.push_back({labels, a, {}});
        }
        for (auto &e : out) {
            e.amplitude /= std::sqrt(norm2);
        }
        return out;
    };
    s.initial = superposition();
    for (Epoch e : {Epoch::t0, Epoch::t1, Epoch::t2}) {
        const FactorDecl &f = s.factors[rng() % nf];
        Gate g;
        g.epoch = e;
        switch (rng() % 3) {
            case 0:
                g.kind = GateKind::beamsplitter;
                g.targets = {f.name};
                g.port_a = f.labels[0];
                g.port_b = f.labels[1];
                g.inverse = rng() % 2;
                g.labeled = rng() % 2;
                break;
            case 1: {
                g.kind = GateKind::custom_unitary;
                g.targets = {f.name};
                auto n = static_cast<Eigen::Index>(f.labels.size());
                Eigen::MatrixXcd m(n, n);
                for (Eigen::Index r = 0; r < n; r++) {
                    for (Eigen::Index c = 0; c < n; c++) {
                        m(r, c) = cplx(normal(rng), normal(rng));
                    }
                }
                g.matrix = m.householderQr().householderQ();
                break;
            }
            default:
                g.kind = GateKind::swap_map;
                g.targets = {f.name};
                g.from = {f.labels[0]};
                g.to = {f.labels.back()};
                break;
        }
        s.gates.push_back(g);
    }
    if (rng() % 2) {
        s.postselect = PostSelection{"post" + std::to_string(rng() % 10), superposition(), {}};
    }
    for (int k = 0; k < 3; k++) {
        ObservableDecl o{"O" + std::to_string(k), {}, {}};
        const FactorDecl &f = s.factors[rng() % nf];
        o.terms.push_back({cplx(normal(rng), normal(rng)), {{f.name, {f.labels[0]}}}});
        if (rng() % 2) {
            o.terms.push_back({cplx(normal(rng), 0), {}});
        }
        s.observables.push_back(o);
    }
    return s;
}

TEST(dsl, round_trip_random_specs) {
    std::mt19937_64 rng(2026);
    for (int t = 0; t < 300; t++) {
        ScenarioSpec spec = random_spec(rng);
        std::string text = render(spec);
        ParseResult r = parse(text);
        ASSERT_TRUE(r.ok()) << text << (r.diagnostics.empty() ? "" : r.diagnostics[0].message);
        ASSERT_TRUE(*r.spec == spec) << text;
    }
}

TEST(dsl, structural_equality_ignores_positions) {
    ParseResult a = parse(minimal);
    ParseResult b = parse(std::string("\n\n# comment\n") + minimal);
    ASSERT_TRUE(*a.spec == *b.spec);
    ASSERT_NE(a.spec->factors[0].pos.line, b.spec->factors[0].pos.line);
    ScenarioSpec c = *a.spec;
    c.initial[0].amplitude = cplx(-1);
    ASSERT_FALSE(*a.spec == c);
}

TEST(dsl, crlf_and_comments) {
    ParseResult r = parse("FACTORS\r\nq: 0 1 # two levels\r\nINITIAL\r\n0 = 1\r\n");
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.spec->factors[0].labels.size(), 2u);
}

TEST(dsl, fuzzed_bytes_never_crash) {
    std::mt19937_64 rng(77);
    const auto &files = shipped_scenario_files();
    for (int t = 0; t < 3000; t++) {
        std::string s = files[rng() % files.size()].second;
        int edits = 1 + static_cast<int>(rng() % 6);
        for (int e = 0; e < edits && !s.empty(); e++) {
            size_t at = rng() % s.size();
            if (rng() % 2) {
                s[at] = static_cast<char>(rng() & 0xff);
            } else {
                s.erase(at, 1 + rng() % 20);
            }
        }
        ParseResult r = parse(s);
        if (r.ok()) {
            try {
                evaluate(*r.spec);
            } catch (const Error &) {
            }
        }
    }
    std::string deep(5000, '(');
    ParseResult r = parse("FACTORS\nq: 0\nINITIAL\n0 = " + deep + "\n");
    ASSERT_TRUE(has_message(r, Severity::syntax, "nested too deeply"));
}
