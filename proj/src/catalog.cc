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

#include <array>
#include <cmath>

#include "qob/scenarios.h"

namespace qob {

namespace {

constexpr std::array<ScenarioInfo, 6> kCatalog = {{
    {"four_mirror",
     "single photon in a four-mirror splitter cavity probed by detectors that stay silent",
     "50% first-probe silence; a silent L_u is never hit again; a second silence makes L_u click"},
    {"oblivion",
     "electron-positron pair that may annihilate at t1 or t2, both detectors silent",
     "separable -> entangled -> separable states, click probabilities 1/4, 1/3, no-click 1/2"},
    {"elastic_collision",
     "two split atoms that may collide elastically at either of A1's locations",
     "critical-interval state with four 1/2 branches; no-collision restores A1's superposition"},
    {"three_boxes",
     "particle pre-selected in (1+2+3)/sqrt3, post-selected in (1+2-3)/sqrt3",
     "box projector weak values 1, 1, -1 summing to one particle"},
    {"hardy",
     "overlapping electron and positron interferometers post-selected on D- and D+",
     "pair projector weak values 0, 1, 1, -1 and cancelling single-particle marginals"},
    {"three_path_photon",
     "photon split into three 1/3 beams with a weak pointer on each beam",
     "full recombination gives shifts (1, 1, -1); partial recombination gives a photon and a perfect cancellation"},
}};

}  // namespace

std::span<const ScenarioInfo> catalog() {
    return kCatalog;
}

bool is_builtin(std::string_view id) {
    for (const auto &info : kCatalog) {
        if (info.id == id) {
            return true;
        }
    }
    return false;
}

ScenarioResult run_builtin(std::string_view id, const RunParams &params) {
    if (id == "four_mirror") {
        FourMirrorOptions opt;
        opt.trials = params.trials;
        opt.seed = params.seed;
        opt.round_trips = params.round_trips;
        opt.single_armed_round_trips = params.single_armed_round_trips;
        opt.threads = params.threads;
        return run_four_mirror(opt);
    }
    if (id == "oblivion") {
        return run_oblivion();
    }
    if (id == "elastic_collision") {
        return run_elastic_collision();
    }
    if (id == "three_boxes") {
        return run_three_boxes();
    }
    if (id == "hardy") {
        return run_hardy();
    }
    if (id == "three_path_photon") {
        return run_three_path_photon(params.option, CouplingStrength(params.g));
    }
    throw Error(ErrorKind::invalid_argument, "unknown scenario '" + std::string(id) + "'");
}

const Operator &WeakContext::observable(const std::string &name) const {
    for (const auto &[n, op] : observables) {
        if (n == name) {
            return op;
        }
    }
    throw Error(ErrorKind::invalid_argument, "no observable named '" + name + "'");
}

WeakContext weak_context(std::string_view id) {
    ScenarioResult r;
    std::vector<std::string> names;
    std::string preferred;
    if (id == "three_boxes") {
        r = run_three_boxes();
        names = {"P1", "P2", "P3"};
        preferred = "P3";
    } else if (id == "hardy") {
        r = run_hardy();
        names = {"OO", "NO_O", "O_NO", "NO_NO", "NO_minus", "NO_plus"};
        preferred = "NO_NO";
    } else if (id == "three_path_photon") {
        r = run_three_path_photon(RecombineOption::recombine_all, CouplingStrength(0));
        names = {"P1", "P2", "P3"};
        preferred = "P3";
    } else {
        throw Error(ErrorKind::invalid_argument, "scenario '" + std::string(id) + "' has no weak-measurement context");
    }

    const Ket &pre = r.last_state();
    const Space &space = pre.space();
    auto pi = [&](const std::string &factor, const std::string &label) {
        return Operator::projector(space, factor, label);
    };
    WeakContext ctx{TwoStateVector(pre, *r.post_selection), {}, preferred};
    for (const auto &n : names) {
        if (id == "hardy") {
            auto split = n.find('_');
            if (n == "NO_minus") {
                ctx.observables.emplace_back(n, pi("electron", "NO"));
            } else if (n == "NO_plus") {
                ctx.observables.emplace_back(n, pi("positron", "NO"));
            } else {
                ctx.observables.emplace_back(
                    n, pi("electron", n == "OO" ? "O" : n.substr(0, split)) *
                           pi("positron", n == "OO" ? "O" : n.substr(split + 1)));
            }
        } else {
            const char *factor = id == "three_boxes" ? "box" : "path";
            ctx.observables.emplace_back(n, pi(factor, n.substr(1)));
        }
    }
    return ctx;
}

std::vector<double> sweep_values(double g_min, double g_max, int steps, bool log_spaced) {
    if (steps < 1) {
        throw Error(ErrorKind::invalid_argument, "sweep needs at least one step");
    }
    if (!(g_min > 0) || !(g_max >= g_min)) {
        throw Error(ErrorKind::invalid_argument, "sweep needs 0 < g_min <= g_max");
    }
    std::vector<double> out;
    for (int k = 0; k < steps; k++) {
        double t = steps == 1 ? 0.0 : static_cast<double>(k) / (steps - 1);
        out.push_back(log_spaced ? g_min * std::pow(g_max / g_min, t) : g_min + (g_max - g_min) * t);
    }
    return out;
}

std::vector<SweepRow> g_sweep(
    const WeakContext &context,
    const std::string &observable,
    std::span<const double> gs,
    const PointerWavefunction &ptr) {
    const Operator &op = context.observable(observable);
    cplx wv = weak_value(context.tsv, op, observable).value;
    Operator post = Operator::outer(context.tsv.post(), context.tsv.post());
    std::vector<SweepRow> rows;
    for (double g : gs) {
        CouplingStrength coupling(g);
        if (g == 0) {
            throw Error(ErrorKind::invalid_argument, "sweep values must be positive");
        }
        double mean = pointer_mean(couple(context.tsv.pre(), op, ptr, coupling), post);
        rows.push_back({g, observable, mean / g, wv});
    }
    return rows;
}

}  // namespace qob
