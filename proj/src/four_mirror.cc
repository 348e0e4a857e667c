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

#include <cstdio>

#include "qob/parallel.h"
#include "qob/scenarios.h"

namespace qob {

namespace {

// A single photon bounces between a left mirror pair (L_u, L_d) and a right pair (R_u, R_d) through a central
// splitter. Crossing the splitter maps either pair onto the other with the symmetric 50/50 matrix B. R_d reflects
// with an extra pi phase, which makes the left-to-left round trip B diag(1,-1) B = diag(1,-1): a photon that has
// been found absent from L_u keeps returning to L_d only.
struct FourMirrorModel {
    Space space;
    Operator cross;
    Operator mirrors;
    Operator probe_lu;
    Operator probe_ru;
    Operator lu_ready;
    Operator ru_ready;
    Ket initial;

    FourMirrorModel()
        : space({
              Factor("photon", {"Lu", "Ld", "Ru", "Rd"}),
              Factor("det_Lu", {"READY", "CLICK"}),
              Factor("det_Ru", {"READY", "CLICK"}),
          }),
          cross(crossing(space)),
          mirrors(mirror_phases(space)),
          probe_lu(probe(space, "Lu", "det_Lu")),
          probe_ru(probe(space, "Ru", "det_Ru")),
          lu_ready(Operator::projector(space, "det_Lu", "READY")),
          ru_ready(Operator::projector(space, "det_Ru", "READY")),
          initial(
              (Ket::basis(space, {"Lu", "READY", "READY"}) + Ket::basis(space, {"Ld", "READY", "READY"})) *
              (1 / std::sqrt(2.0))) {
    }

    static Operator crossing(const Space &space) {
        Eigen::Matrix2cd b = gates::beam_splitter();
        Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(4, 4);
        s.block(2, 0, 2, 2) = b;
        s.block(0, 2, 2, 2) = b;
        return Operator::on_factor(space, "photon", s);
    }

    static Operator mirror_phases(const Space &space) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
        m(3, 3) = -1;
        return Operator::on_factor(space, "photon", m);
    }

    static Operator probe(const Space &space, const std::string &mirror, const std::string &det) {
        std::vector<std::string> factors = {"photon", det};
        std::vector<std::string> from = {mirror, "READY"};
        std::vector<std::string> to = {mirror, "CLICK"};
        return Operator::on_factors(space, factors, gates::transposition(space, factors, from, to));
    }

    Ket round_trip(const Ket &k) const {
        return apply(cross, apply(mirrors, apply(cross, k)));
    }
};

struct TrialRecord {
    bool first_silent = false;
    int single_armed_clicks = 0;
    bool ru_clicked = false;
    int lu_click_round = 0;  // 0: no L_u click after double silence
    int lu_probes = 0;
};

// Samples one armed probe. Returns true on a click; otherwise collapses `state` onto silence.
bool sample_probe(Ket &state, const Operator &probe, const Operator &ready, std::mt19937_64 &rng) {
    state = apply(probe, state);
    double silent = outcome_probability(state, ready);
    if (uniform01(rng) >= silent) {
        return true;
    }
    state = apply(ready, state).normalized();
    return false;
}

TrialRecord run_trial(const FourMirrorModel &model, const FourMirrorOptions &opt, uint64_t trial) {
    std::mt19937_64 rng(mix_seed(opt.seed, trial));
    TrialRecord rec;
    Ket psi = model.initial;
    if (sample_probe(psi, model.probe_lu, model.lu_ready, rng)) {
        return rec;
    }
    rec.first_silent = true;
    for (int r = 0; r < opt.single_armed_round_trips; r++) {
        psi = model.round_trip(psi);
        if (sample_probe(psi, model.probe_lu, model.lu_ready, rng)) {
            rec.single_armed_clicks++;
            return rec;
        }
    }
    for (int r = 1; r <= opt.round_trips; r++) {
        psi = apply(model.cross, psi);
        if (sample_probe(psi, model.probe_ru, model.ru_ready, rng)) {
            rec.ru_clicked = true;
            return rec;
        }
        psi = apply(model.cross, apply(model.mirrors, psi));
        rec.lu_probes++;
        if (sample_probe(psi, model.probe_lu, model.lu_ready, rng)) {
            rec.lu_click_round = r;
            return rec;
        }
    }
    return rec;
}

}  // namespace

ScenarioResult run_four_mirror(const FourMirrorOptions &options) {
    if (options.trials < 1) {
        throw Error(ErrorKind::invalid_argument, "four_mirror needs at least one trial");
    }
    if (options.round_trips < 1 || options.single_armed_round_trips < 0) {
        throw Error(ErrorKind::invalid_argument, "round trip counts must be positive");
    }
    FourMirrorModel model;
    ScenarioResult result;
    result.scenario = "four_mirror";

    // Exact branch weights of the first probe, one single-armed round trip, and one double-armed round trip.
    Ket psi = model.initial;
    result.states_by_epoch.insert_or_assign(Epoch::t0, psi);
    SelectionLadder ladder;
    psi = ladder.select(result, apply(model.probe_lu, psi), model.lu_ready, "Lu_silent", "Lu_click_first");
    result.states_by_epoch.insert_or_assign(Epoch::t1, psi);
    psi = apply(model.probe_lu, model.round_trip(psi));
    psi = ladder.select(result, psi, model.lu_ready, "Lu_silent_again", "Lu_click_single_armed");
    result.states_by_epoch.insert_or_assign(Epoch::t2, psi);
    psi = apply(model.probe_ru, apply(model.cross, psi));
    psi = ladder.select(result, psi, model.ru_ready, "Ru_silent", "Ru_click");
    psi = apply(model.probe_lu, apply(model.cross, apply(model.mirrors, psi)));
    psi = ladder.select(result, psi, model.lu_ready, "all_silent", "Lu_click_after_double_silence");
    result.states_by_epoch.insert_or_assign(Epoch::final, psi);
    ladder.finish(result);
    std::vector<std::string> cut = {"photon"};
    record_schmidt_ranks(result, cut);

    auto records = parallel_map<TrialRecord>(
        static_cast<size_t>(options.trials),
        [&](size_t i) {
            return run_trial(model, options, i);
        },
        options.threads);

    int silent = 0;
    int single_clicks = 0;
    int ru_clicks = 0;
    int double_silence = 0;
    int lu_probes = 0;
    std::vector<int> clicks_by_round(static_cast<size_t>(options.round_trips) + 1, 0);
    for (const auto &rec : records) {
        silent += rec.first_silent;
        single_clicks += rec.single_armed_clicks;
        if (!rec.first_silent || rec.single_armed_clicks) {
            continue;
        }
        if (rec.ru_clicked) {
            ru_clicks++;
            continue;
        }
        double_silence++;
        lu_probes += rec.lu_probes;
        clicks_by_round[static_cast<size_t>(rec.lu_click_round)]++;
    }

    auto &stats = result.trial_stats;
    stats["trials"] = options.trials;
    stats["silent_fraction_first_probe"] = static_cast<double>(silent) / options.trials;
    stats["lu_clicks_single_armed"] = single_clicks;
    stats["ru_click_trials"] = ru_clicks;
    stats["double_silence_trials"] = double_silence;
    int cumulative = 0;
    for (int r = 1; r <= options.round_trips; r++) {
        cumulative += clicks_by_round[static_cast<size_t>(r)];
        char key[48];
        std::snprintf(key, sizeof(key), "lu_click_fraction_r%03d", r);
        stats[key] = double_silence ? static_cast<double>(cumulative) / double_silence : 0.0;
    }
    stats["lu_click_fraction"] = double_silence ? static_cast<double>(cumulative) / double_silence : 0.0;
    stats["lu_click_rate_per_round_trip"] = lu_probes ? static_cast<double>(cumulative) / lu_probes : 0.0;
    return result;
}

}  // namespace qob
