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

#include <fmt/format.h>

#include "qob/dsl.h"

namespace qob::dsl {

namespace {

std::string num(double x) {
    return fmt::format("{:.17g}", x);
}

std::string pair(cplx v) {
    return num(v.real()) + "," + num(v.imag());
}

std::string join(const std::vector<std::string> &items, const char *sep) {
    std::string out;
    for (size_t k = 0; k < items.size(); k++) {
        out += (k ? sep : "") + items[k];
    }
    return out;
}

std::string condition(const LabelCondition &c) {
    return c.factor + "={" + join(c.labels, ",") + "}";
}

void superposition(std::string &out, const std::vector<AmplitudeEntry> &entries) {
    for (const auto &e : entries) {
        out += join(e.labels, " ") + " = " + pair(e.amplitude) + "\n";
    }
}

std::string gate(const Gate &g) {
    std::string out = std::string(epoch_name(g.epoch)) + " " + gate_kind_name(g.kind) + " ";
    switch (g.kind) {
        case GateKind::beamsplitter:
            out += g.targets.at(0) + "(" + g.port_a + "," + g.port_b + ")";
            if (g.inverse) {
                out += " inverse";
            }
            if (g.labeled) {
                out += " labeled";
            }
            break;
        case GateKind::swap_map:
            out += join(g.targets, " ") + " : " + join(g.from, " ") + " <-> " + join(g.to, " ");
            break;
        case GateKind::projector_select: {
            std::vector<std::string> conds;
            for (const auto &c : g.conditions) {
                conds.push_back(condition(c));
            }
            out += join(conds, " ") + " pass=" + g.pass_name + " fail=" + g.fail_name;
            break;
        }
        case GateKind::custom_unitary: {
            std::vector<std::string> rows;
            for (Eigen::Index r = 0; r < g.matrix.rows(); r++) {
                std::vector<std::string> entries;
                for (Eigen::Index c = 0; c < g.matrix.cols(); c++) {
                    entries.push_back("(" + pair(g.matrix(r, c)) + ")");
                }
                rows.push_back(join(entries, ", "));
            }
            out += join(g.targets, " ") + " = [" + join(rows, "; ") + "]";
            break;
        }
    }
    return out;
}

std::string observable(const ObservableDecl &o) {
    if (o.terms.empty()) {
        return o.name + " = 0";
    }
    std::vector<std::string> terms;
    for (const auto &t : o.terms) {
        std::string s = "(" + pair(t.coefficient) + ")";
        for (const auto &c : t.conditions) {
            s += " [" + condition(c) + "]";
        }
        terms.push_back(s);
    }
    return o.name + " = " + join(terms, " + ");
}

}  // namespace

std::string render(const ScenarioSpec &spec) {
    std::string out;
    if (!spec.id.empty()) {
        out += "SCENARIO " + spec.id + "\n";
    }
    out += "FACTORS\n";
    for (const auto &f : spec.factors) {
        out += f.name + ": " + join(f.labels, " ") + "\n";
    }
    if (!spec.cut.empty()) {
        out += "CUT\n" + join(spec.cut, " ") + "\n";
    }
    out += "INITIAL\n";
    superposition(out, spec.initial);
    if (!spec.gates.empty()) {
        out += "GATES\n";
        for (const auto &g : spec.gates) {
            out += gate(g) + "\n";
        }
    }
    if (spec.postselect) {
        out += "POSTSELECT " + spec.postselect->name + "\n";
        superposition(out, spec.postselect->amplitudes);
    }
    if (!spec.observables.empty()) {
        out += "OBSERVABLES\n";
        for (const auto &o : spec.observables) {
            out += observable(o) + "\n";
        }
    }
    return out;
}

std::optional<std::string> shipped_scenario(std::string_view stem) {
    for (const auto &[name, contents] : shipped_scenario_files()) {
        if (name == stem) {
            return contents;
        }
    }
    return std::nullopt;
}

}  // namespace qob::dsl
