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

#include "qob/dsl.h"

namespace qob::dsl {

namespace {

Ket superposition(const Space &space, const std::vector<AmplitudeEntry> &entries) {
    Ket k = Ket::zero(space);
    for (const auto &e : entries) {
        k = k + Ket::basis(space, e.labels) * e.amplitude;
    }
    return k.normalized();
}

Operator condition_projector(const Space &space, const std::vector<LabelCondition> &conditions) {
    Operator p = Operator::identity(space);
    for (const auto &c : conditions) {
        p = p * Operator::projector(space, c.factor, c.labels);
    }
    return p;
}

Operator gate_operator(const Space &space, const Gate &g) {
    switch (g.kind) {
        case GateKind::beamsplitter: {
            Eigen::Matrix2cd u = g.labeled ? gates::labeled_splitter() : gates::beam_splitter();
            if (g.inverse) {
                u = u.adjoint().eval();
            }
            const Factor &f = space.factor(space.factor_index(g.targets[0]));
            return Operator::on_factor(space, f.name(), gates::embed_two_port(f, g.port_a, g.port_b, u));
        }
        case GateKind::swap_map:
            return Operator::on_factors(space, g.targets, gates::transposition(space, g.targets, g.from, g.to));
        case GateKind::custom_unitary:
            return Operator::on_factors(space, g.targets, g.matrix);
        case GateKind::projector_select:
            return condition_projector(space, g.conditions);
    }
    throw Error(ErrorKind::invalid_operator, "unknown gate kind");
}

template <typename F>
auto at(SourcePos pos, F &&body) {
    try {
        return body();
    } catch (const EvaluationError &) {
        throw;
    } catch (const Error &e) {
        throw EvaluationError(e.kind(), pos, e.what());
    }
}

}  // namespace

EvaluationError::EvaluationError(ErrorKind kind, SourcePos pos, const std::string &message)
    : Error(kind, "at " + to_string(pos) + ": " + message), pos_(pos) {
}

Operator build_observable(const Space &space, const std::vector<Term> &terms) {
    Operator op(space, Eigen::MatrixXcd::Zero(
                           static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(space.dim())));
    for (const auto &t : terms) {
        op = op + condition_projector(space, t.conditions) * t.coefficient;
    }
    return op;
}

Evaluation evaluate_full(const ScenarioSpec &spec) {
    std::vector<Factor> factors;
    for (const auto &f : spec.factors) {
        factors.emplace_back(f.name, f.labels);
    }
    Space space(std::move(factors));

    Evaluation ev;
    ScenarioResult &result = ev.result;
    result.scenario = spec.id.empty() ? "scenario" : spec.id;

    SourcePos initial_pos = spec.initial.empty() ? SourcePos{} : spec.initial.front().pos;
    Ket psi = at(initial_pos, [&] {
        return superposition(space, spec.initial);
    });

    SelectionLadder ladder;
    size_t next = 0;
    for (Epoch e : {Epoch::t0, Epoch::t1, Epoch::t2, Epoch::final}) {
        bool any = false;
        for (; next < spec.gates.size() && spec.gates[next].epoch == e; next++) {
            const Gate &g = spec.gates[next];
            any = true;
            psi = at(g.pos, [&] {
                Operator op = gate_operator(space, g);
                if (g.kind == GateKind::projector_select) {
                    return ladder.select(result, psi, op, g.pass_name, g.fail_name);
                }
                return apply(op, psi);
            });
        }
        if (any || e == Epoch::t0) {
            result.states_by_epoch.insert_or_assign(e, psi);
        }
    }

    if (spec.postselect) {
        const PostSelection &ps = *spec.postselect;
        Ket post = at(ps.pos, [&] {
            return superposition(space, ps.amplitudes);
        });
        cplx overlap = inner(post, psi);
        if (std::abs(overlap) < default_overlap_epsilon) {
            throw EvaluationError(
                ErrorKind::orthogonal_selection, ps.pos, "post-selected state is orthogonal to the evolved state");
        }
        ladder.finish_with_postselection(result, ps.name, std::norm(overlap));
        result.post_selection = post;
        ev.tsv.emplace(psi, post);
    } else {
        ladder.finish(result);
    }

    for (const auto &o : spec.observables) {
        at(o.pos, [&] {
            Operator op = build_observable(space, o.terms);
            record_observable(result, o.name, op, psi, ev.tsv ? &*ev.tsv : nullptr);
            ev.observables.emplace_back(o.name, op);
            return 0;
        });
    }

    if (!spec.cut.empty()) {
        record_schmidt_ranks(result, spec.cut);
    }
    return ev;
}

ScenarioResult evaluate(const ScenarioSpec &spec) {
    return evaluate_full(spec).result;
}

}  // namespace qob::dsl
