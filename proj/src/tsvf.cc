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

#include "qob/tsvf.h"

#include <cmath>

namespace qob {

TwoStateVector::TwoStateVector(Ket pre, Ket post) : pre_(std::move(pre)), post_(std::move(post)) {
    if (!(pre_.space() == post_.space())) {
        throw Error(ErrorKind::dimension_mismatch, "pre- and post-selected kets live in different spaces");
    }
    pre_.require_normalized(1e-10);
    post_.require_normalized(1e-10);
}

cplx TwoStateVector::overlap() const {
    return inner(post_, pre_);
}

WeakValue weak_value(const TwoStateVector &tsv, const Operator &a, std::string tag, double epsilon) {
    cplx denominator = tsv.overlap();
    if (std::abs(denominator) <= epsilon) {
        throw Error(
            ErrorKind::orthogonal_selection,
            "|<post|pre>| = " + std::to_string(std::abs(denominator)) + " leaves the weak value undefined");
    }
    cplx numerator = inner(tsv.post(), apply(a, tsv.pre()));
    return {numerator / denominator, std::move(tag)};
}

double outcome_probability(const Ket &state, const Operator &projector) {
    return apply(projector, state).amplitudes().squaredNorm();
}

Selection post_select(const Ket &state, const Operator &projector) {
    if (!projector.is_projector()) {
        throw Error(ErrorKind::invalid_operator, "post-selection operator is not an orthogonal projector");
    }
    state.require_normalized(1e-10);
    Ket projected = apply(projector, state);
    double p = projected.amplitudes().squaredNorm();
    if (p < zero_branch_threshold) {
        throw Error(ErrorKind::zero_probability_branch, "selected branch has probability " + std::to_string(p));
    }
    return {p, Ket(projected.space(), projected.amplitudes() / std::sqrt(p))};
}

void require_complete(std::span<const Operator> projectors, double tol) {
    if (projectors.empty()) {
        throw Error(ErrorKind::incomplete_set, "empty projector set");
    }
    Operator total = Operator::identity(projectors[0].space()) * 0.0;
    for (const auto &p : projectors) {
        total = total + p;
    }
    auto n = static_cast<Eigen::Index>(total.dim());
    double err = (total.matrix() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (err > tol) {
        throw Error(ErrorKind::incomplete_set, "projectors miss the identity by " + std::to_string(err));
    }
}

cplx projector_weak_value_sum(const TwoStateVector &tsv, std::span<const Operator> projectors) {
    require_complete(projectors);
    cplx sum = 0;
    for (const auto &p : projectors) {
        sum += weak_value(tsv, p).value;
    }
    return sum;
}

}  // namespace qob
