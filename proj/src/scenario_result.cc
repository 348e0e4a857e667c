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
#include <sstream>

#include "qob/scenarios.h"

namespace qob {

const char *epoch_name(Epoch e) {
    switch (e) {
        case Epoch::t0:
            return "t0";
        case Epoch::t1:
            return "t1";
        case Epoch::t2:
            return "t2";
        case Epoch::final:
            return "final";
    }
    return "?";
}

std::optional<Epoch> parse_epoch(std::string_view text) {
    for (Epoch e : {Epoch::t0, Epoch::t1, Epoch::t2, Epoch::final}) {
        if (text == epoch_name(e)) {
            return e;
        }
    }
    return std::nullopt;
}

const std::vector<ScheduleEpoch> &standard_schedule() {
    static const std::vector<ScheduleEpoch> schedule = {
        {Epoch::t0, "preparation: splitters have acted, no interaction yet"},
        {Epoch::t1, "first possible interaction instant"},
        {Epoch::t2, "second possible interaction instant, end of the critical interval"},
        {Epoch::final, "read-out after the critical interval"},
    };
    return schedule;
}

const Ket &ScenarioResult::state(Epoch e) const {
    auto it = states_by_epoch.find(e);
    if (it == states_by_epoch.end()) {
        throw Error(ErrorKind::invalid_argument, std::string("no state recorded at epoch ") + epoch_name(e));
    }
    return it->second;
}

const Ket &ScenarioResult::last_state() const {
    if (states_by_epoch.empty()) {
        throw Error(ErrorKind::invalid_argument, "result holds no states");
    }
    return states_by_epoch.rbegin()->second;
}

std::vector<std::string> validate(const ScenarioResult &result, double tol) {
    std::vector<std::string> issues;
    for (const auto &[name, p] : result.probabilities) {
        if (!(p >= -tol && p <= 1 + tol)) {
            issues.push_back("probability '" + name + "' = " + std::to_string(p) + " outside [0,1]");
        }
    }
    for (const auto &[set, keys] : result.outcome_sets) {
        double total = 0;
        for (const auto &k : keys) {
            auto it = result.probabilities.find(k);
            if (it == result.probabilities.end()) {
                issues.push_back("outcome set '" + set + "' names missing probability '" + k + "'");
                continue;
            }
            total += it->second;
        }
        if (std::abs(total - 1) > tol) {
            std::ostringstream ss;
            ss << "outcome set '" << set << "' sums to " << total;
            issues.push_back(ss.str());
        }
    }
    return issues;
}

namespace {

template <typename K, typename V, typename Cmp>
void compare_maps(
    const std::map<K, V> &a,
    const std::map<K, V> &b,
    const std::string &field,
    std::vector<std::string> &out,
    Cmp &&same) {
    auto key_text = [](const K &k) {
        if constexpr (std::is_same_v<K, Epoch>) {
            return std::string(epoch_name(k));
        } else {
            return std::string(k);
        }
    };
    for (const auto &[k, v] : a) {
        auto it = b.find(k);
        if (it == b.end()) {
            out.push_back(field + "[" + key_text(k) + "] only in first result");
        } else if (!same(v, it->second)) {
            out.push_back(field + "[" + key_text(k) + "] differs");
        }
    }
    for (const auto &[k, v] : b) {
        if (!a.count(k)) {
            out.push_back(field + "[" + key_text(k) + "] only in second result");
        }
    }
}

}  // namespace

std::vector<std::string> compare_exact(const ScenarioResult &a, const ScenarioResult &b, double tol) {
    std::vector<std::string> out;
    if (a.scenario != b.scenario) {
        out.push_back("scenario id '" + a.scenario + "' vs '" + b.scenario + "'");
    }
    auto same_ket = [tol](const Ket &x, const Ket &y) {
        return x.space() == y.space() && (x.amplitudes() - y.amplitudes()).cwiseAbs().maxCoeff() <= tol;
    };
    auto same_real = [tol](double x, double y) {
        return std::abs(x - y) <= tol;
    };
    auto same_complex = [tol](cplx x, cplx y) {
        return std::abs(x - y) <= tol;
    };
    compare_maps(a.states_by_epoch, b.states_by_epoch, "states_by_epoch", out, same_ket);
    compare_maps(a.branch_states, b.branch_states, "branch_states", out, same_ket);
    if (a.post_selection.has_value() != b.post_selection.has_value()) {
        out.push_back("post_selection present in only one result");
    } else if (a.post_selection && !same_ket(*a.post_selection, *b.post_selection)) {
        out.push_back("post_selection differs");
    }
    compare_maps(a.probabilities, b.probabilities, "probabilities", out, same_real);
    compare_maps(a.outcome_sets, b.outcome_sets, "outcome_sets", out, std::equal_to<>());
    compare_maps(a.weak_values, b.weak_values, "weak_values", out, same_complex);
    compare_maps(a.expectations, b.expectations, "expectations", out, same_real);
    compare_maps(a.schmidt_ranks, b.schmidt_ranks, "schmidt_ranks", out, std::equal_to<>());
    return out;
}

Ket SelectionLadder::select(
    ScenarioResult &result,
    const Ket &state,
    const Operator &pass_projector,
    const std::string &pass_name,
    const std::string &fail_name) {
    double pass = outcome_probability(state, pass_projector);
    double fail = std::max(0.0, 1.0 - pass);
    result.probabilities[fail_name] = survival_ * fail;
    if (!last_pass_.empty()) {
        result.probabilities[fail_name + "|" + last_pass_] = fail;
    }
    if (fail >= zero_branch_threshold) {
        Operator reject = Operator::identity(state.space()) - pass_projector;
        result.branch_states.insert_or_assign(fail_name, post_select(state, reject).collapsed);
    }
    Selection kept = post_select(state, pass_projector);
    survival_ *= kept.probability;
    last_pass_ = pass_name;
    fails_.push_back(fail_name);
    return kept.collapsed;
}

void SelectionLadder::finish(ScenarioResult &result) const {
    if (fails_.empty()) {
        return;
    }
    result.probabilities[last_pass_] = survival_;
    auto keys = fails_;
    keys.push_back(last_pass_);
    result.outcome_sets["outcomes"] = keys;
}

void SelectionLadder::finish_with_postselection(ScenarioResult &result, const std::string &name, double conditional) const {
    result.probabilities[name] = survival_ * conditional;
    if (!last_pass_.empty()) {
        result.probabilities[name + "|" + last_pass_] = conditional;
    }
    result.probabilities["not_" + name] = survival_ * (1 - conditional);
    auto keys = fails_;
    keys.push_back(name);
    keys.push_back("not_" + name);
    result.outcome_sets["outcomes"] = keys;
}

void record_observable(
    ScenarioResult &result,
    const std::string &name,
    const Operator &op,
    const Ket &state,
    const TwoStateVector *tsv) {
    double expectation = inner(state, apply(op, state)).real();
    result.expectations[name] = expectation;
    if (op.is_projector()) {
        result.probabilities["born:" + name] = expectation;
    }
    if (tsv) {
        result.weak_values[name] = weak_value(*tsv, op, name).value;
    }
}

void record_schmidt_ranks(ScenarioResult &result, std::span<const std::string> left_factors) {
    for (const auto &[epoch, state] : result.states_by_epoch) {
        result.schmidt_ranks[epoch] = schmidt_rank(state, Bipartition::of(state.space(), left_factors)).rank;
    }
}

}  // namespace qob
