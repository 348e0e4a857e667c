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

#include <cmath>

#include "qob/scenarios.h"

namespace qob {

namespace {

using Labels = std::vector<std::string>;

const double inv_sqrt2 = 1 / std::sqrt(2.0);
const double inv_sqrt3 = 1 / std::sqrt(3.0);

Factor detector(const std::string &name) {
    return Factor(name, {"READY", "CLICK"});
}

Operator splitter_on(const Space &space, const std::string &factor, const std::string &a, const std::string &b, bool inverse) {
    Eigen::Matrix2cd u = gates::labeled_splitter();
    if (inverse) {
        u = u.adjoint().eval();
    }
    return Operator::on_factor(space, factor, gates::embed_two_port(space.factor(space.factor_index(factor)), a, b, u));
}

Operator swap_on(const Space &space, const Labels &factors, const Labels &from, const Labels &to) {
    return Operator::on_factors(space, factors, gates::transposition(space, factors, from, to));
}

Operator select_labels(const Space &space, const std::string &factor, const Labels &labels) {
    return Operator::projector(space, factor, labels);
}

Ket superpose(const Space &space, std::initializer_list<std::pair<Labels, cplx>> terms) {
    Ket k = Ket::zero(space);
    for (const auto &[labels, amp] : terms) {
        k = k + Ket::basis(space, labels) * amp;
    }
    return k;
}

}  // namespace

// Electron and positron each leave a splitter in (|a'> + |a''>)/sqrt2. The branch pair (1'', 2') meets at t1 and
// (1', 2') at t2; annihilation flips the corresponding detector. Silence at both detectors leaves the electron
// superposed and the positron confined to 2''.
ScenarioResult run_oblivion() {
    Space space({
        Factor("electron", {"1'", "1''"}),
        Factor("positron", {"2'", "2''"}),
        detector("detector1"),
        detector("detector2"),
    });
    ScenarioResult result;
    result.scenario = "oblivion";

    Ket psi = Ket::basis(space, {"1'", "2'", "READY", "READY"});
    psi = apply(splitter_on(space, "electron", "1'", "1''", false), psi);
    psi = apply(splitter_on(space, "positron", "2'", "2''", false), psi);
    result.states_by_epoch.insert_or_assign(Epoch::t0, psi);

    SelectionLadder ladder;
    psi = apply(swap_on(space, {"electron", "positron", "detector1"}, {"1''", "2'", "READY"}, {"1''", "2'", "CLICK"}), psi);
    psi = ladder.select(result, psi, select_labels(space, "detector1", {"READY"}), "no_click1", "click1");
    result.states_by_epoch.insert_or_assign(Epoch::t1, psi);

    psi = apply(swap_on(space, {"electron", "positron", "detector2"}, {"1'", "2'", "READY"}, {"1'", "2'", "CLICK"}), psi);
    psi = ladder.select(result, psi, select_labels(space, "detector2", {"READY"}), "no_click", "click2");
    result.states_by_epoch.insert_or_assign(Epoch::t2, psi);
    ladder.finish(result);

    Labels cut = {"electron"};
    record_schmidt_ranks(result, cut);
    return result;
}

TimeReversal time_reversal_check(const Ket &state) {
    const Space &space = state.space();
    auto source_return = [&](const std::string &factor) {
        const Factor &f = space.factor(space.factor_index(factor));
        Operator undo = splitter_on(space, factor, f.labels()[0], f.labels()[1], true);
        return outcome_probability(apply(undo, state), Operator::projector(space, factor, f.labels()[0]));
    };
    return {source_return("electron"), source_return("positron")};
}

TimeReversal time_reversal_check(const ScenarioResult &oblivion_result) {
    return time_reversal_check(oblivion_result.last_state());
}

// Atom A2's branch 2' collides with whichever half of A1 it meets: (1'', 2') at t1 and (1', 2') at t2. Colliding
// branches are deflected onto the primed-out paths 1''', 1'''' and 2''', where the read-out detectors sit.
ScenarioResult run_elastic_collision() {
    Space space({
        Factor("A1", {"1'", "1''", "1'''", "1''''"}),
        Factor("A2", {"2'", "2''", "2'''", "2''''"}),
    });
    ScenarioResult result;
    result.scenario = "elastic_collision";

    Ket psi = Ket::basis(space, {"1'", "2'"});
    psi = apply(splitter_on(space, "A1", "1'", "1''", false), psi);
    psi = apply(splitter_on(space, "A2", "2'", "2''", false), psi);
    result.states_by_epoch.insert_or_assign(Epoch::t0, psi);

    psi = apply(swap_on(space, {"A1", "A2"}, {"1''", "2'"}, {"1''''", "2'''"}), psi);
    result.states_by_epoch.insert_or_assign(Epoch::t1, psi);
    psi = apply(swap_on(space, {"A1", "A2"}, {"1'", "2'"}, {"1'''", "2'''"}), psi);
    result.states_by_epoch.insert_or_assign(Epoch::t2, psi);

    SelectionLadder ladder;
    Operator undeflected = select_labels(space, "A1", {"1'", "1''"}) * select_labels(space, "A2", {"2'", "2''"});
    psi = ladder.select(result, psi, undeflected, "no_collision", "collision");
    result.states_by_epoch.insert_or_assign(Epoch::final, psi);
    ladder.finish(result);

    Labels cut = {"A1"};
    record_schmidt_ranks(result, cut);
    return result;
}

ScenarioResult run_three_boxes() {
    Space space({Factor("box", {"1", "2", "3"})});
    ScenarioResult result;
    result.scenario = "three_boxes";

    Ket pre = superpose(space, {{{"1"}, inv_sqrt3}, {{"2"}, inv_sqrt3}, {{"3"}, inv_sqrt3}});
    Ket post = superpose(space, {{{"1"}, inv_sqrt3}, {{"2"}, inv_sqrt3}, {{"3"}, -inv_sqrt3}});
    result.states_by_epoch.insert_or_assign(Epoch::t0, pre);
    result.post_selection = post;
    TwoStateVector tsv(pre, post);

    SelectionLadder ladder;
    ladder.finish_with_postselection(result, "postselect", std::norm(tsv.overlap()));

    std::vector<Operator> boxes;
    for (const char *b : {"1", "2", "3"}) {
        boxes.push_back(Operator::projector(space, "box", b));
        record_observable(result, std::string("P") + b, boxes.back(), pre, &tsv);
    }
    result.weak_values["total"] = projector_weak_value_sum(tsv, boxes);
    Operator total = boxes[0] + boxes[1] + boxes[2];
    result.expectations["total"] = inner(pre, apply(total, pre)).real();
    result.probabilities["born:total"] = result.expectations["total"];
    return result;
}

// Two interferometers tuned so that, alone, the electron always exits at C- and the positron at C+. Each path
// factor doubles as the port basis: the first label is the source port before the splitter and the C port after
// the inverse splitter; the second label is the D port.
ScenarioResult run_hardy() {
    Space space({
        Factor("electron", {"O", "NO"}),
        Factor("positron", {"O", "NO"}),
        detector("gamma"),
    });
    ScenarioResult result;
    result.scenario = "hardy";

    Ket psi = Ket::basis(space, {"O", "O", "READY"});
    psi = apply(splitter_on(space, "electron", "O", "NO", false), psi);
    psi = apply(splitter_on(space, "positron", "O", "NO", false), psi);
    result.states_by_epoch.insert_or_assign(Epoch::t0, psi);

    SelectionLadder ladder;
    psi = apply(swap_on(space, {"electron", "positron", "gamma"}, {"O", "O", "READY"}, {"O", "O", "CLICK"}), psi);
    psi = ladder.select(result, psi, select_labels(space, "gamma", {"READY"}), "no_annihilation", "annihilation");
    result.states_by_epoch.insert_or_assign(Epoch::t1, psi);

    // D-/D+ clicks: recombine both interferometers and read the D ports.
    Ket recombined = apply(splitter_on(space, "electron", "O", "NO", true), psi);
    recombined = apply(splitter_on(space, "positron", "O", "NO", true), recombined);
    double dd_given_survival = std::norm(recombined.amplitude({"NO", "NO", "READY"}));
    ladder.finish_with_postselection(result, "DD", dd_given_survival);

    Ket post = superpose(
        space,
        {{{"O", "O", "READY"}, 0.5},
         {{"O", "NO", "READY"}, -0.5},
         {{"NO", "O", "READY"}, -0.5},
         {{"NO", "NO", "READY"}, 0.5}});
    result.post_selection = post;
    TwoStateVector tsv(psi, post);

    auto pi = [&](const std::string &factor, const std::string &label) {
        return Operator::projector(space, factor, label);
    };
    record_observable(result, "OO", pi("electron", "O") * pi("positron", "O"), psi, &tsv);
    record_observable(result, "NO_O", pi("electron", "NO") * pi("positron", "O"), psi, &tsv);
    record_observable(result, "O_NO", pi("electron", "O") * pi("positron", "NO"), psi, &tsv);
    record_observable(result, "NO_NO", pi("electron", "NO") * pi("positron", "NO"), psi, &tsv);
    record_observable(result, "NO_minus", pi("electron", "NO"), psi, &tsv);
    record_observable(result, "NO_plus", pi("positron", "NO"), psi, &tsv);

    Labels cut = {"electron"};
    record_schmidt_ranks(result, cut);
    return result;
}

const char *recombine_option_name(RecombineOption o) {
    return o == RecombineOption::recombine_all ? "recombine_all" : "recombine_two";
}

std::optional<RecombineOption> parse_recombine_option(std::string_view text) {
    if (text == "recombine_all" || text == "all") {
        return RecombineOption::recombine_all;
    }
    if (text == "recombine_two" || text == "two") {
        return RecombineOption::recombine_two;
    }
    return std::nullopt;
}

namespace {

Space three_path_space() {
    return Space({Factor("path", {"1", "2", "3"})});
}

// Source in path 1; a 1/3 : 2/3 splitter feeds path 2, then a 50/50 splitter divides path 2 into 2 and 3.
Ket three_path_prepared() {
    Space space = three_path_space();
    Eigen::Matrix3cd unequal = Eigen::Matrix3cd::Zero();
    const double a = std::sqrt(1.0 / 3.0);
    const double b = std::sqrt(2.0 / 3.0);
    unequal << a, -b, 0, b, a, 0, 0, 0, 1;
    Ket psi = Ket::basis(space, {"1"});
    psi = apply(Operator::on_factor(space, "path", unequal), psi);
    return apply(splitter_on(space, "path", "2", "3", false), psi);
}

std::vector<Operator> path_projectors(const Space &space) {
    std::vector<Operator> out;
    for (const char *p : {"1", "2", "3"}) {
        out.push_back(Operator::projector(space, "path", p));
    }
    return out;
}

void record_shifts(
    ScenarioResult &result,
    const std::string &prefix,
    const std::vector<double> &means,
    CouplingStrength g) {
    for (size_t k = 0; k < means.size(); k++) {
        std::string name = prefix + "P" + std::to_string(k + 1);
        result.trial_stats["shift:" + name] = means[k];
        if (g.value() > 0) {
            result.trial_stats["shift_over_g:" + name] = means[k] / g.value();
        }
    }
}

}  // namespace

ScenarioResult run_three_path_photon(RecombineOption option, CouplingStrength g, const PointerWavefunction &ptr) {
    Space space = three_path_space();
    ScenarioResult result;
    result.scenario = "three_path_photon";
    Ket pre = three_path_prepared();
    result.states_by_epoch.insert_or_assign(Epoch::t0, pre);
    auto projectors = path_projectors(space);

    if (option == RecombineOption::recombine_all) {
        // Destructive interference with the third beam's sign flipped.
        Ket post = superpose(space, {{{"1"}, inv_sqrt3}, {{"2"}, inv_sqrt3}, {{"3"}, -inv_sqrt3}});
        result.post_selection = post;
        TwoStateVector tsv(pre, post);
        SelectionLadder ladder;
        ladder.finish_with_postselection(result, "interference", std::norm(tsv.overlap()));
        for (size_t k = 0; k < projectors.size(); k++) {
            record_observable(result, "P" + std::to_string(k + 1), projectors[k], pre, &tsv);
        }
        Operator total = projectors[0] + projectors[1] + projectors[2];
        record_observable(result, "total", total, pre, &tsv);
        record_shifts(result, "", conditioned_pointer_means(tsv, projectors, ptr, g), g);
        return result;
    }

    // Merge the two 1/3 beams back into one 2/3 beam (path 2); path 3 becomes the dark port.
    Operator merge = splitter_on(space, "path", "2", "3", true);
    Ket merged = apply(merge, pre);
    result.states_by_epoch.insert_or_assign(Epoch::t1, merged);
    record_observable(result, "A", projectors[0], merged, nullptr);
    record_observable(result, "B", projectors[1], merged, nullptr);
    record_observable(result, "dark", projectors[2], merged, nullptr);

    // Weak pointers were coupled before the merge, so each strong outcome post-selects merge^dagger|outcome>.
    for (const auto &[outcome, label] : {std::pair{"A", "1"}, std::pair{"B", "2"}}) {
        Ket post = apply(merge.adjoint(), Ket::basis(space, {label}));
        TwoStateVector tsv(pre, post);
        auto means = conditioned_pointer_means(tsv, projectors, ptr, g);
        std::string prefix = std::string(outcome) + ":";
        record_shifts(result, prefix, means, g);
        double scale = g.value() > 0 ? g.value() : 1.0;
        std::string kind = g.value() > 0 ? "beam_total_over_g:" : "beam_total_shift:";
        result.trial_stats[kind + prefix + "beam1"] = means[0] / scale;
        result.trial_stats[kind + prefix + "beam23"] = (means[1] + means[2]) / scale;
    }
    return result;
}

}  // namespace qob
