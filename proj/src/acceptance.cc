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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "qob/acceptance.h"
#include "qob/dsl.h"
#include "qob/parallel.h"
#include "qob/scenarios.h"

namespace qob::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Median wall time of `reps` calls after one warm-up call.
template <typename F>
double median_ms(F &&fn, int reps = 7) {
    fn();
    std::vector<double> times;
    for (int k = 0; k < reps; k++) {
        auto start = Clock::now();
        fn();
        times.push_back(elapsed_ms(start));
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

bool near(double a, double b, double tol) {
    return std::abs(a - b) <= tol;
}

bool near(cplx a, cplx b, double tol) {
    return std::abs(a - b) <= tol;
}

double max_diff(const Ket &a, const Ket &b) {
    return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

Ket sum_of(const Space &space, std::initializer_list<std::pair<std::initializer_list<std::string>, double>> terms) {
    Ket k = Ket::zero(space);
    for (const auto &[labels, amp] : terms) {
        k = k + Ket::basis(space, labels) * cplx(amp);
    }
    return k;
}

std::string fmt_c(cplx v) {
    return v.imag() == 0 ? fmt::format("{:.6g}", v.real()) : fmt::format("{:.6g}{:+.6g}i", v.real(), v.imag());
}

}  // namespace

Outcome three_boxes_weak_values() {
    Outcome o{1, "three boxes weak values", false, "", 0};
    ScenarioResult r = run_three_boxes();
    o.millis = median_ms([] {
        return run_three_boxes();
    });
    cplx p1 = r.weak_values.at("P1");
    cplx p2 = r.weak_values.at("P2");
    cplx p3 = r.weak_values.at("P3");
    o.passed = near(p1, 1, 1e-10) && near(p2, 1, 1e-10) && near(p3, -1, 1e-10) && o.millis < 1.0;
    o.detail = fmt::format("P1={} P2={} P3={}", fmt_c(p1), fmt_c(p2), fmt_c(p3));
    return o;
}

Outcome hardy_weak_values() {
    Outcome o{2, "hardy pair weak values and marginal cancellation", false, "", 0};
    ScenarioResult r = run_hardy();
    o.millis = median_ms([] {
        return run_hardy();
    });
    const auto &w = r.weak_values;
    bool pairs = near(w.at("OO"), 0, 1e-10) && near(w.at("NO_O"), 1, 1e-10) && near(w.at("O_NO"), 1, 1e-10) &&
                 near(w.at("NO_NO"), -1, 1e-10);
    // Single-particle occupations: directly, and as sums over the partner's two arms.
    cplx electron_direct = w.at("NO_minus");
    cplx positron_direct = w.at("NO_plus");
    cplx electron_sum = w.at("NO_O") + w.at("NO_NO");
    cplx positron_sum = w.at("O_NO") + w.at("NO_NO");
    bool marginals = near(electron_direct, 0, 1e-10) && near(positron_direct, 0, 1e-10) &&
                     near(electron_sum, 0, 1e-10) && near(positron_sum, 0, 1e-10);
    o.passed = pairs && marginals && o.millis < 1.0;
    o.detail = fmt::format(
        "OO={} NO-O={} O-NO={} NO-NO={}; NO(e-)={}/{} NO(e+)={}/{}",
        fmt_c(w.at("OO")),
        fmt_c(w.at("NO_O")),
        fmt_c(w.at("O_NO")),
        fmt_c(w.at("NO_NO")),
        fmt_c(electron_direct),
        fmt_c(electron_sum),
        fmt_c(positron_direct),
        fmt_c(positron_sum));
    return o;
}

Outcome oblivion_evolution() {
    Outcome o{3, "oblivion evolution", false, "", 0};
    ScenarioResult r = run_oblivion();
    o.millis = median_ms([] {
        return run_oblivion();
    });
    const Space &space = r.state(Epoch::t0).space();
    const double h = 0.5;
    const double s3 = 1 / std::sqrt(3.0);
    const double s2 = 1 / std::sqrt(2.0);
    Ket separable = sum_of(
        space,
        {{{"1'", "2'", "READY", "READY"}, h},
         {{"1'", "2''", "READY", "READY"}, h},
         {{"1''", "2'", "READY", "READY"}, h},
         {{"1''", "2''", "READY", "READY"}, h}});
    Ket entangled = sum_of(
        space,
        {{{"1'", "2''", "READY", "READY"}, s3},
         {{"1''", "2''", "READY", "READY"}, s3},
         {{"1'", "2'", "READY", "READY"}, s3}});
    Ket oblivious = sum_of(space, {{{"1'", "2''", "READY", "READY"}, s2}, {{"1''", "2''", "READY", "READY"}, s2}});
    double d0 = max_diff(r.state(Epoch::t0), separable);
    double d1 = max_diff(r.state(Epoch::t1), entangled);
    double d2 = max_diff(r.state(Epoch::t2), oblivious);
    bool states = d0 <= 1e-12 && d1 <= 1e-12 && d2 <= 1e-12;
    bool ranks = r.schmidt_ranks.at(Epoch::t0) == 1 && r.schmidt_ranks.at(Epoch::t1) == 2 &&
                 r.schmidt_ranks.at(Epoch::t2) == 1;
    const auto &p = r.probabilities;
    bool probs = near(p.at("click1"), 0.25, 1e-12) && near(p.at("click2|no_click1"), 1.0 / 3, 1e-12) &&
                 near(p.at("no_click"), 0.5, 1e-12);
    TimeReversal tr = time_reversal_check(r);
    bool reversal = near(tr.electron_return, 1.0, 1e-10) && near(tr.positron_return, 0.5, 1e-10);
    o.passed = states && ranks && probs && reversal && o.millis < 1.0;
    o.detail = fmt::format(
        "state error {:.1e}/{:.1e}/{:.1e}; ranks {}-{}-{}; P(click1)={:.6f} P(click2|silent)={:.6f} "
        "P(no click)={:.6f}; return e-={:.6f} e+={:.6f}",
        d0,
        d1,
        d2,
        r.schmidt_ranks.at(Epoch::t0),
        r.schmidt_ranks.at(Epoch::t1),
        r.schmidt_ranks.at(Epoch::t2),
        p.at("click1"),
        p.at("click2|no_click1"),
        p.at("no_click"),
        tr.electron_return,
        tr.positron_return);
    return o;
}

Outcome elastic_collision_states() {
    Outcome o{4, "elastic collision critical interval", false, "", 0};
    auto start = Clock::now();
    ScenarioResult r = run_elastic_collision();
    o.millis = elapsed_ms(start);
    const Space &space = r.state(Epoch::t0).space();
    Ket critical = sum_of(
        space,
        {{{"1'''", "2'''"}, 0.5}, {{"1''''", "2'''"}, 0.5}, {{"1'", "2''"}, 0.5}, {{"1''", "2''"}, 0.5}});
    double d = max_diff(r.state(Epoch::t2), critical);
    const Ket &after = r.state(Epoch::final);
    int rank = schmidt_rank(after, Bipartition::of(space, {"A1"}), 1e-8).rank;
    const double s2 = 1 / std::sqrt(2.0);
    double restored = max_diff(after, sum_of(space, {{{"1'", "2''"}, s2}, {{"1''", "2''"}, s2}}));
    o.passed = d <= 1e-12 && r.schmidt_ranks.at(Epoch::t2) == 2 && rank == 1 && restored <= 1e-12;
    o.detail = fmt::format(
        "critical-interval error {:.1e} (rank {}); after no-collision rank {}, A1 superposition error {:.1e}",
        d,
        r.schmidt_ranks.at(Epoch::t2),
        rank,
        restored);
    return o;
}

Outcome four_mirror_statistics(unsigned threads) {
    Outcome o{5, "four-mirror interaction-free statistics", false, "", 0};
    FourMirrorOptions opt;
    opt.trials = 10000;
    opt.round_trips = 20;
    opt.single_armed_round_trips = 100;
    opt.threads = threads;
    auto start = Clock::now();
    ScenarioResult r = run_four_mirror(opt);
    o.millis = elapsed_ms(start);
    const auto &s = r.trial_stats;
    double silent = s.at("silent_fraction_first_probe");
    double single = s.at("lu_clicks_single_armed");
    double fraction = s.at("lu_click_fraction");
    o.passed = near(silent, 0.5, 0.02) && single == 0 && fraction >= 0.99 && o.millis < 5000;
    o.detail = fmt::format(
        "first-probe silence {:.4f}; L_u clicks with L_u alone {}; L_u click fraction after double silence {:.4f} "
        "({} trials)",
        silent,
        single,
        fraction,
        s.at("double_silence_trials"));
    return o;
}

Outcome weak_limit_convergence() {
    Outcome o{6, "weak-limit pointer convergence", false, "", 0};
    auto start = Clock::now();
    bool ok = true;
    std::string detail;
    for (const auto &[id, name] : {std::pair{"three_boxes", "P3"}, std::pair{"hardy", "NO_NO"}}) {
        WeakContext ctx = weak_context(id);
        std::vector<double> gs = {0.1, 0.05};
        auto rows = g_sweep(ctx, name, gs);
        double e0 = std::abs(rows[0].shift_over_g - (-1));
        double e1 = std::abs(rows[1].shift_over_g - (-1));
        double ratio = e0 / e1;
        ok = ok && e1 <= 0.15 && ratio >= 2.5;
        detail += fmt::format(
            "{}{} {}: |err|={:.2e} at g=0.05, ratio {:.2f} on halving",
            detail.empty() ? "" : "; ",
            id,
            name,
            e1,
            ratio);
    }
    o.millis = elapsed_ms(start);
    o.passed = ok && o.millis < 10000;
    o.detail = detail;
    return o;
}

Outcome weak_to_projective(unsigned threads) {
    Outcome o{7, "weak-to-projective continuum", false, "", 0};
    auto start = Clock::now();
    const int seeds = 2000;
    const int steps = 400;
    CouplingStrength g(0.2);
    // Eigenvalues 0, kGap, 2 kGap keep the largest shift well inside the pointer grid.
    const double kGap = 5;

    auto run = [&](const Ket &psi, const Operator &obs, uint64_t stream) {
        // counts[k]: trajectories ending within 1e-2 of basis state k; the last slot counts undecided runs.
        auto picks = parallel_map<int>(
            seeds,
            [&](size_t s) {
                Trajectory t = weak_sequence(psi, obs, g, steps, mix_seed(stream, s));
                for (size_t k = 0; k < t.final_state.dim(); k++) {
                    if (std::norm(t.final_state.amplitude(k)) >= 0.99) {
                        return static_cast<int>(k);
                    }
                }
                return -1;
            },
            threads);
        auto strong = parallel_map<int>(
            seeds,
            [&](size_t s) {
                StrongOutcome out = strong_measure(psi, obs, mix_seed(stream + 1, s));
                return static_cast<int>(std::lround(out.eigenvalue / kGap));
            },
            threads);
        std::vector<double> weak_freq(psi.dim() + 1, 0);
        std::vector<double> strong_freq(psi.dim(), 0);
        for (int k : picks) {
            weak_freq[k < 0 ? psi.dim() : static_cast<size_t>(k)] += 1.0 / seeds;
        }
        for (int k : strong) {
            strong_freq[static_cast<size_t>(k)] += 1.0 / seeds;
        }
        return std::pair{weak_freq, strong_freq};
    };

    Space two({Factor("path", {"1", "2"})});
    Ket plus = (Ket::basis(two, {"1"}) + Ket::basis(two, {"2"})) * cplx(1 / std::sqrt(2.0));
    Operator which_two = Operator::projector(two, "path", "2") * cplx(kGap);
    auto [w2, s2] = run(plus, which_two, 701);

    Space three({Factor("box", {"1", "2", "3"})});
    const double s3 = 1 / std::sqrt(3.0);
    Ket boxes = (Ket::basis(three, {"1"}) + Ket::basis(three, {"2"}) + Ket::basis(three, {"3"})) * cplx(s3);
    Operator which_box =
        Operator::projector(three, "box", "2") * cplx(kGap) + Operator::projector(three, "box", "3") * cplx(2 * kGap);
    auto [w3, s3f] = run(boxes, which_box, 702);

    bool ok = near(w2[0], 0.5, 0.03) && near(s2[0], 0.5, 0.03);
    for (size_t k = 0; k < 3; k++) {
        ok = ok && near(w3[k], 1.0 / 3, 0.03) && near(s3f[k], 1.0 / 3, 0.03);
    }
    o.millis = elapsed_ms(start);
    o.passed = ok && o.millis < 60000;
    o.detail = fmt::format(
        "two paths: weak {:.4f} vs strong {:.4f} into |1>; three boxes: weak {:.4f}/{:.4f}/{:.4f} vs strong "
        "{:.4f}/{:.4f}/{:.4f}; undecided {:.4f}/{:.4f}",
        w2[0],
        s2[0],
        w3[0],
        w3[1],
        w3[2],
        s3f[0],
        s3f[1],
        s3f[2],
        w2[2],
        w3[3]);
    return o;
}

namespace {

std::string mutate(const std::string &base, std::mt19937_64 &rng) {
    static const char *tokens[] = {
        "FACTORS\n", "INITIAL\n", "GATES\n", "POSTSELECT ", "OBSERVABLES\n", "CUT\n", "SCENARIO ", "t0 ", "t1 ",
        "final ", "beamsplitter ", "swap_map ", "projector_select ", "custom_unitary ", "<->", "pass=", "fail=",
        "sqrt(", "1/sqrt(3)", "(", ")", "[", "]", "{", "}", "=", ",", ";", ":", "i", "-", "1e308", "0", "#",
        "\n", " ", "'", "\r", "\t", "labeled", "inverse", "I", "*", "/", "+"};
    std::string s = base;
    int edits = 1 + static_cast<int>(rng() % 8);
    for (int e = 0; e < edits; e++) {
        size_t at = s.empty() ? 0 : rng() % (s.size() + 1);
        switch (rng() % 5) {
            case 0:
                s.insert(at, 1, static_cast<char>(rng() & 0xff));
                break;
            case 1:
                s.insert(at, tokens[rng() % std::size(tokens)]);
                break;
            case 2:
                if (!s.empty() && at < s.size()) {
                    s.erase(at, 1 + rng() % std::min<size_t>(40, s.size() - at));
                }
                break;
            case 3:
                if (!s.empty() && at < s.size()) {
                    s[at] = static_cast<char>(rng() & 0xff);
                }
                break;
            default: {
                size_t from = s.empty() ? 0 : rng() % s.size();
                size_t len = std::min<size_t>(60, s.size() - from);
                s.insert(at, s.substr(from, len));
                break;
            }
        }
    }
    return s;
}

std::string random_input(uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto &files = dsl::shipped_scenario_files();
    switch (rng() % 3) {
        case 0: {
            std::string s(rng() % 300, '\0');
            for (auto &c : s) {
                c = static_cast<char>(rng() & 0xff);
            }
            return s;
        }
        case 1:
            return mutate(files[rng() % files.size()].second, rng);
        default:
            return mutate("", rng) + mutate("", rng) + mutate("", rng);
    }
}

}  // namespace

Outcome dsl_fixtures(int fuzz_inputs, unsigned threads) {
    Outcome o{8, "scenario file equivalence and parser fuzzing", false, "", 0};
    auto start = Clock::now();
    int mismatched = 0;
    int files = 0;
    std::vector<std::string> covered;
    std::string problems;
    for (const auto &[stem, text] : dsl::shipped_scenario_files()) {
        files++;
        dsl::ParseResult pr = dsl::parse(text);
        if (!pr.ok()) {
            mismatched++;
            problems += " " + stem + "(parse)";
            continue;
        }
        ScenarioResult from_file = dsl::evaluate(*pr.spec);
        RunParams params;
        params.trials = 1;
        if (stem == "three_path_photon_two") {
            params.option = RecombineOption::recombine_two;
        }
        if (!is_builtin(from_file.scenario)) {
            mismatched++;
            problems += " " + stem + "(unknown id)";
            continue;
        }
        if (!compare_exact(from_file, run_builtin(from_file.scenario, params), 1e-10).empty()) {
            mismatched++;
            problems += " " + stem;
        }
        covered.push_back(from_file.scenario);
    }
    int missing = 0;
    for (const auto &info : catalog()) {
        if (std::find(covered.begin(), covered.end(), info.id) == covered.end()) {
            missing++;
            problems += " missing:" + std::string(info.id);
        }
    }

    auto crashes = parallel_map<int>(
        static_cast<size_t>(fuzz_inputs),
        [](size_t k) {
            std::string input = random_input(mix_seed(0xF022, k));
            try {
                dsl::ParseResult pr = dsl::parse(input);
                if (pr.ok()) {
                    try {
                        (void)dsl::evaluate(*pr.spec);
                    } catch (const Error &) {
                    }
                }
                return 0;
            } catch (...) {
                return 1;
            }
        },
        threads);
    int crash_count = 0;
    for (int c : crashes) {
        crash_count += c;
    }
    o.millis = elapsed_ms(start);
    o.passed = mismatched == 0 && missing == 0 && crash_count == 0;
    o.detail = fmt::format(
        "{} files, {} mismatched, {} built-ins without a file; {} fuzz inputs, {} crashes{}",
        files,
        mismatched,
        missing,
        fuzz_inputs,
        crash_count,
        problems.empty() ? "" : " [" + problems.substr(1) + "]");
    return o;
}

namespace {

Eigen::VectorXcd random_vector(std::mt19937_64 &rng, Eigen::Index n) {
    std::normal_distribution<double> normal;
    Eigen::VectorXcd v(n);
    for (Eigen::Index k = 0; k < n; k++) {
        v(k) = cplx(normal(rng), normal(rng));
    }
    return v.normalized();
}

Eigen::MatrixXcd random_matrix(std::mt19937_64 &rng, Eigen::Index n) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; r++) {
        for (Eigen::Index c = 0; c < n; c++) {
            m(r, c) = cplx(normal(rng), normal(rng));
        }
    }
    return m;
}

Space random_space(std::mt19937_64 &rng) {
    std::vector<Factor> factors;
    size_t count = 1 + rng() % 3;
    for (size_t f = 0; f < count; f++) {
        std::vector<std::string> labels;
        size_t dim = 2 + rng() % 3;
        for (size_t l = 0; l < dim; l++) {
            labels.push_back(std::to_string(l));
        }
        factors.emplace_back("f" + std::to_string(f), labels);
    }
    return Space(factors);
}

}  // namespace

Outcome property_suites() {
    Outcome o{9, "property suites", false, "", 0};
    auto start = Clock::now();
    std::mt19937_64 rng(mix_seed(default_seed, 9));
    double worst_sum = 0;
    double worst_probability = 0;
    double worst_linearity = 0;
    double worst_norm = 0;

    for (int trial = 0; trial < 100; trial++) {
        Space space = random_space(rng);
        auto n = static_cast<Eigen::Index>(space.dim());
        TwoStateVector tsv(Ket(space, random_vector(rng, n)), Ket(space, random_vector(rng, n)));

        // Complete set: the labels of factor 0 split into random groups.
        const Factor &f0 = space.factor(0);
        std::vector<std::vector<std::string>> groups(1 + rng() % f0.dim());
        for (const auto &l : f0.labels()) {
            groups[rng() % groups.size()].push_back(l);
        }
        std::vector<Operator> projectors;
        for (const auto &grp : groups) {
            projectors.push_back(Operator::projector(space, f0.name(), grp));
        }
        if (std::abs(tsv.overlap()) > 1e-3) {
            worst_sum = std::max(worst_sum, std::abs(projector_weak_value_sum(tsv, projectors) - cplx(1)));
        }
        double total = 0;
        for (const auto &p : projectors) {
            total += outcome_probability(tsv.pre(), p);
        }
        worst_probability = std::max(worst_probability, std::abs(total - 1));

        Operator a(space, random_matrix(rng, n));
        Operator b(space, random_matrix(rng, n));
        cplx alpha(rng() % 7 - 3.0, rng() % 5 - 2.0);
        cplx beta(0.5, -1.25);
        if (std::abs(tsv.overlap()) > 1e-3) {
            cplx lhs = weak_value(tsv, a * alpha + b * beta).value;
            cplx rhs = alpha * weak_value(tsv, a).value + beta * weak_value(tsv, b).value;
            worst_linearity = std::max(worst_linearity, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }

        Eigen::MatrixXcd q = random_matrix(rng, n).householderQr().householderQ();
        Operator u(space, q);
        Ket psi = apply(u, tsv.pre());
        worst_norm = std::max(worst_norm, std::abs(psi.norm() - 1));
    }

    // Every scenario's declared outcome sets.
    for (const auto &info : catalog()) {
        RunParams params;
        params.trials = 10;
        ScenarioResult r = run_builtin(info.id, params);
        for (const auto &[name, keys] : r.outcome_sets) {
            double total = 0;
            for (const auto &k : keys) {
                total += r.probabilities.at(k);
            }
            worst_probability = std::max(worst_probability, std::abs(total - 1));
        }
    }

    o.millis = elapsed_ms(start);
    o.passed = worst_sum <= 1e-10 && worst_probability <= 1e-10 && worst_linearity <= 1e-10 && worst_norm <= 1e-12;
    o.detail = fmt::format(
        "max |sum w - 1| {:.1e}; max |sum P - 1| {:.1e}; max linearity error {:.1e}; max unitary norm drift {:.1e}",
        worst_sum,
        worst_probability,
        worst_linearity,
        worst_norm);
    return o;
}

std::vector<Outcome> run_all(const Options &options) {
    std::vector<Outcome> out;
    auto guard = [&](int id, const char *title, auto &&fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception &e) {
            out.push_back({id, title, false, std::string("exception: ") + e.what(), 0});
        }
    };
    guard(1, "three boxes weak values", three_boxes_weak_values);
    guard(2, "hardy pair weak values and marginal cancellation", hardy_weak_values);
    guard(3, "oblivion evolution", oblivion_evolution);
    guard(4, "elastic collision critical interval", elastic_collision_states);
    guard(5, "four-mirror interaction-free statistics", [&] {
        return four_mirror_statistics(options.threads);
    });
    guard(6, "weak-limit pointer convergence", weak_limit_convergence);
    guard(7, "weak-to-projective continuum", [&] {
        return weak_to_projective(options.threads);
    });
    guard(8, "scenario file equivalence and parser fuzzing", [&] {
        return dsl_fixtures(options.fuzz_inputs, options.threads);
    });
    guard(9, "property suites", property_suites);
    return out;
}

std::string format_outcome(const Outcome &o) {
    return fmt::format("{} [{}] {}: {} ({:.3f} ms)", o.passed ? "PASS" : "FAIL", o.id, o.title, o.detail, o.millis);
}

}  // namespace qob::acceptance
