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

#ifndef QOB_TSVF_H
#define QOB_TSVF_H

#include <span>
#include <string>

#include "qob/hilbert.h"

namespace qob {

constexpr double default_overlap_epsilon = 1e-10;
constexpr double zero_branch_threshold = 1e-14;

/// A pre-selected (forward) ket and a post-selected (backward) ket. The post state is stored as a ket and
/// conjugated when used.
class TwoStateVector {
   public:
    TwoStateVector(Ket pre, Ket post);

    const Ket &pre() const {
        return pre_;
    }
    const Ket &post() const {
        return post_;
    }
    /// <post|pre>
    cplx overlap() const;

   private:
    Ket pre_;
    Ket post_;
};

struct WeakValue {
    cplx value;
    std::string operator_tag;
};

/// <post|A|pre> / <post|pre>. Throws orthogonal_selection when |<post|pre>| <= epsilon.
WeakValue weak_value(
    const TwoStateVector &tsv, const Operator &a, std::string tag = {}, double epsilon = default_overlap_epsilon);

struct Selection {
    double probability;
    Ket collapsed;
};

/// Born probability of a projector outcome and the renormalized collapsed state.
Selection post_select(const Ket &state, const Operator &projector);

/// Probability of a projector outcome without collapsing. No zero-branch check.
double outcome_probability(const Ket &state, const Operator &projector);

/// Throws incomplete_set unless the projectors sum to the identity.
void require_complete(std::span<const Operator> projectors, double tol = 1e-10);

/// Sum of the weak values of a complete projector set.
cplx projector_weak_value_sum(const TwoStateVector &tsv, std::span<const Operator> projectors);

}  // namespace qob

#endif
