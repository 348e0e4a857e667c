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

#ifndef QOB_DSL_H
#define QOB_DSL_H

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qob/scenarios.h"

namespace qob::dsl {

/// 1-based line and column; {0, 0} means "no position".
struct SourcePos {
    int line = 0;
    int column = 0;
};

std::string to_string(SourcePos pos);

struct FactorDecl {
    std::string name;
    std::vector<std::string> labels;
    SourcePos pos;
};

/// One basis state of a superposition: a label per factor, in factor order.
struct AmplitudeEntry {
    std::vector<std::string> labels;
    cplx amplitude;
    SourcePos pos;
};

/// `factor={a,b}`: restricts one factor to a set of labels. Labels are kept in declaration order.
struct LabelCondition {
    std::string factor;
    std::vector<std::string> labels;

    bool operator==(const LabelCondition &other) const = default;
};

enum class GateKind { beamsplitter, swap_map, projector_select, custom_unitary };

const char *gate_kind_name(GateKind kind);

struct Gate {
    Epoch epoch = Epoch::t0;
    GateKind kind = GateKind::beamsplitter;
    std::vector<std::string> targets;

    // beamsplitter
    std::string port_a;
    std::string port_b;
    bool inverse = false;
    bool labeled = false;

    // swap_map
    std::vector<std::string> from;
    std::vector<std::string> to;

    // projector_select
    std::vector<LabelCondition> conditions;
    std::string pass_name;
    std::string fail_name;

    // custom_unitary
    Eigen::MatrixXcd matrix;

    SourcePos pos;
};

/// coefficient * product of label projectors. An empty condition list is the identity.
struct Term {
    cplx coefficient;
    std::vector<LabelCondition> conditions;

    bool operator==(const Term &other) const = default;
};

struct ObservableDecl {
    std::string name;
    std::vector<Term> terms;
    SourcePos pos;
};

struct PostSelection {
    std::string name = "postselect";
    std::vector<AmplitudeEntry> amplitudes;
    SourcePos pos;
};

struct ScenarioSpec {
    std::string id;
    std::vector<FactorDecl> factors;
    /// Factors on the left of the Schmidt cut; empty when no ranks are requested.
    std::vector<std::string> cut;
    std::vector<AmplitudeEntry> initial;
    std::vector<Gate> gates;
    std::optional<PostSelection> postselect;
    std::vector<ObservableDecl> observables;
};

/// Structural equality; source positions are ignored.
bool operator==(const ScenarioSpec &a, const ScenarioSpec &b);

enum class Severity { syntax, validation, warning };

const char *severity_name(Severity s);

struct Diagnostic {
    Severity severity;
    SourcePos pos;
    std::string message;
    std::vector<std::string> expected;
};

std::string format_diagnostic(const Diagnostic &d, std::string_view source_name);

struct ParseResult {
    std::optional<ScenarioSpec> spec;
    std::vector<Diagnostic> diagnostics;

    bool ok() const {
        return spec.has_value();
    }
};

/// Never throws; malformed input yields diagnostics and no spec.
ParseResult parse(std::string_view text);

/// Canonical text form: LF line endings, fixed section order, numbers at full precision.
std::string render(const ScenarioSpec &spec);

/// Evaluates a scalar amplitude expression such as "-i/sqrt(2)" or "(0.5,-0.5)".
std::optional<cplx> evaluate_amplitude(std::string_view text, std::string *error = nullptr);

class EvaluationError : public Error {
   public:
    EvaluationError(ErrorKind kind, SourcePos pos, const std::string &message);

    SourcePos pos() const {
        return pos_;
    }

   private:
    SourcePos pos_;
};

struct Evaluation {
    ScenarioResult result;
    std::optional<TwoStateVector> tsv;
    std::vector<std::pair<std::string, Operator>> observables;
};

Operator build_observable(const Space &space, const std::vector<Term> &terms);

Evaluation evaluate_full(const ScenarioSpec &spec);
ScenarioResult evaluate(const ScenarioSpec &spec);

/// (file stem, contents) of every shipped .scn file, embedded at build time.
const std::vector<std::pair<std::string, std::string>> &shipped_scenario_files();
std::optional<std::string> shipped_scenario(std::string_view stem);

}  // namespace qob::dsl

#endif
