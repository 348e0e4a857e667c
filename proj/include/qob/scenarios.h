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

#ifndef QOB_SCENARIOS_H
#define QOB_SCENARIOS_H

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qob/hilbert.h"
#include "qob/pointer.h"
#include "qob/rng.h"
#include "qob/tsvf.h"

namespace qob {

enum class Epoch { t0, t1, t2, final };

const char *epoch_name(Epoch e);
std::optional<Epoch> parse_epoch(std::string_view text);

struct ScheduleEpoch {
    Epoch label;
    std::string description;
};

/// t0: preparation; t1/t2: the two interaction instants bounding the critical interval; final: read-out.
const std::vector<ScheduleEpoch> &standard_schedule();

struct ScenarioResult {
    std::string scenario;
    std::map<Epoch, Ket> states_by_epoch;
    /// Collapsed states of rejected selection branches, keyed by outcome name.
    std::map<std::string, Ket> branch_states;
    std::optional<Ket> post_selection;
    std::map<std::string, double> probabilities;
    /// Named complete outcome sets; each lists keys of `probabilities` that must sum to 1.
    std::map<std::string, std::vector<std::string>> outcome_sets;
    std::map<std::string, cplx> weak_values;
    std::map<std::string, double> expectations;
    std::map<Epoch, int> schmidt_ranks;
    /// Monte Carlo and pointer read-outs. Empty for purely exact scenarios.
    std::map<std::string, double> trial_stats;

    const Ket &state(Epoch e) const;
    const Ket &last_state() const;
};

/// Invariant violations of a result (probabilities outside [0,1], outcome sets not summing to 1).
std::vector<std::string> validate(const ScenarioResult &result, double tol = 1e-10);

/// Differences between two results on every exact field (everything except trial_stats).
std::vector<std::string> compare_exact(const ScenarioResult &a, const ScenarioResult &b, double tol = 1e-10);

/// Bookkeeping for a chain of projective selections ("silence", "no annihilation", ...).
///
/// Key convention for a selection with outcomes (pass, fail):
///   fail            unconditional probability of failing at this step
///   fail|prev_pass  probability of failing given the previous selection passed
/// After the last selection the surviving pass name holds the unconditional survival probability, and
/// outcome_sets["outcomes"] lists every fail plus the survivor.
class SelectionLadder {
   public:
    Ket select(
        ScenarioResult &result,
        const Ket &state,
        const Operator &pass_projector,
        const std::string &pass_name,
        const std::string &fail_name);

    void finish(ScenarioResult &result) const;

    /// Closes the ladder with a final post-selection whose probability, given survival, is `conditional`.
    void finish_with_postselection(ScenarioResult &result, const std::string &name, double conditional) const;

    double survival() const {
        return survival_;
    }

   private:
    double survival_ = 1.0;
    std::string last_pass_;
    std::vector<std::string> fails_;
};

/// Records the Born expectation of `op` on `state` (and "born:<name>" when op is a projector) plus its
/// weak value when a two-state vector is supplied.
void record_observable(
    ScenarioResult &result,
    const std::string &name,
    const Operator &op,
    const Ket &state,
    const TwoStateVector *tsv);

/// Schmidt rank of every recorded epoch state across `left | rest`.
void record_schmidt_ranks(ScenarioResult &result, std::span<const std::string> left_factors);

struct FourMirrorOptions {
    int trials = 10000;
    uint64_t seed = default_seed;
    /// Round trips simulated after both L_u and R_u are armed.
    int round_trips = 20;
    /// Round trips simulated with only L_u armed after its first silence.
    int single_armed_round_trips = 100;
    unsigned threads = 0;
};

ScenarioResult run_four_mirror(const FourMirrorOptions &options = {});

ScenarioResult run_oblivion();

struct TimeReversal {
    double electron_return;
    double positron_return;
};

/// Runs each particle's splitter backwards on its path factor and reports the probability of leaving
/// through the source port.
TimeReversal time_reversal_check(const Ket &state);
TimeReversal time_reversal_check(const ScenarioResult &oblivion_result);

ScenarioResult run_elastic_collision();
ScenarioResult run_three_boxes();
ScenarioResult run_hardy();

enum class RecombineOption { recombine_all, recombine_two };

const char *recombine_option_name(RecombineOption o);
std::optional<RecombineOption> parse_recombine_option(std::string_view text);

ScenarioResult run_three_path_photon(
    RecombineOption option,
    CouplingStrength g,
    const PointerWavefunction &ptr = PointerWavefunction::gaussian());

struct ScenarioInfo {
    std::string_view id;
    std::string_view description;
    std::string_view reproduces;
};

std::span<const ScenarioInfo> catalog();
bool is_builtin(std::string_view id);

struct RunParams {
    uint64_t seed = default_seed;
    int trials = 10000;
    int round_trips = 20;
    int single_armed_round_trips = 100;
    double g = 0.05;
    RecombineOption option = RecombineOption::recombine_all;
    unsigned threads = 0;
};

ScenarioResult run_builtin(std::string_view id, const RunParams &params = {});

/// Pre/post-selection plus named observables, the input of weak-measurement sweeps.
struct WeakContext {
    TwoStateVector tsv;
    std::vector<std::pair<std::string, Operator>> observables;
    std::string default_observable;

    const Operator &observable(const std::string &name) const;
};

/// Defined for three_boxes, hardy and three_path_photon.
WeakContext weak_context(std::string_view id);

struct SweepRow {
    double g;
    std::string observable;
    double shift_over_g;
    cplx weak_value;
};

/// Conditioned pointer shift per unit coupling for each g.
std::vector<SweepRow> g_sweep(
    const WeakContext &context,
    const std::string &observable,
    std::span<const double> gs,
    const PointerWavefunction &ptr = PointerWavefunction::gaussian());

/// n values from g_min to g_max, linear or log spaced.
std::vector<double> sweep_values(double g_min, double g_max, int steps, bool log_spaced);

}  // namespace qob

#endif
