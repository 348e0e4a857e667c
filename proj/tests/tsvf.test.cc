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

#include "gtest/gtest.h"

using namespace qob;

static const double s3 = 1 / std::sqrt(3.0);

static Space boxes() {
    return Space({Factor("box", {"1", "2", "3"})});
}

static Ket box_state(double a, double b, double c) {
    return Ket(boxes(), Eigen::Vector3cd(a, b, c));
}

TEST(tsvf, three_box_weak_values) {
    TwoStateVector tsv(box_state(s3, s3, s3), box_state(s3, s3, -s3));
    std::vector<Operator> p;
    for (const char *b : {"1", "2", "3"}) {
        p.push_back(Operator::projector(boxes(), "box", b));
    }
    // Oracle: <f|P_k|i> / <f|i> with <f|i> = 1/3 and <f|P_k|i> = +-1/3.
    ASSERT_NEAR(std::abs(weak_value(tsv, p[0]).value - cplx(1)), 0, 1e-12);
    ASSERT_NEAR(std::abs(weak_value(tsv, p[1]).value - cplx(1)), 0, 1e-12);
    ASSERT_NEAR(std::abs(weak_value(tsv, p[2]).value - cplx(-1)), 0, 1e-12);
    ASSERT_NEAR(std::abs(projector_weak_value_sum(tsv, p) - cplx(1)), 0, 1e-12);
}

TEST(tsvf, weak_value_can_be_complex) {
    Space s({Factor("q", {"0", "1"})});
    const double r = 1 / std::sqrt(2.0);
    Ket pre(s, Eigen::Vector2cd(r, r));
    Ket post(s, Eigen::Vector2cd(r, cplx(0, r)));
    TwoStateVector tsv(pre, post);
    Operator p0 = Operator::projector(s, "q", "0");
    // <f|P0|i>/<f|i> = (1/2) / ((1 - i)/2) = (1 + i)/2.
    ASSERT_NEAR(std::abs(weak_value(tsv, p0).value - cplx(0.5, 0.5)), 0, 1e-12);
}

TEST(tsvf, orthogonal_selection) {
    TwoStateVector tsv(box_state(1, 0, 0), box_state(0, 1, 0));
    try {
        weak_value(tsv, Operator::identity(boxes()));
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::orthogonal_selection);
    }
}

TEST(tsvf, two_state_vector_requires_normalized_states) {
    ASSERT_THROW(TwoStateVector(box_state(1, 1, 0), box_state(1, 0, 0)), Error);
    Space other({Factor("box", {"1", "2"})});
    ASSERT_THROW(TwoStateVector(box_state(1, 0, 0), Ket::basis(other, {"1"})), Error);
}

TEST(tsvf, post_select_collapses_and_reports_probability) {
    Ket k = box_state(s3, s3, s3);
    Operator p12 = Operator::projector(boxes(), "box", std::vector<std::string>{"1", "2"});
    Selection sel = post_select(k, p12);
    ASSERT_NEAR(sel.probability, 2.0 / 3, 1e-15);
    ASSERT_NEAR(std::abs(sel.collapsed.amplitude({"1"}) - cplx(1 / std::sqrt(2.0))), 0, 1e-15);
    ASSERT_NEAR(std::abs(sel.collapsed.amplitude({"3"})), 0, 1e-15);
}

TEST(tsvf, post_select_zero_branch) {
    try {
        post_select(box_state(1, 0, 0), Operator::projector(boxes(), "box", "3"));
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::zero_probability_branch);
    }
}

TEST(tsvf, post_select_requires_projector) {
    Operator twice = Operator::projector(boxes(), "box", "1") * cplx(2);
    ASSERT_THROW(post_select(box_state(1, 0, 0), twice), Error);
}

TEST(tsvf, complete_sets) {
    std::vector<Operator> p = {
        Operator::projector(boxes(), "box", "1"),
        Operator::projector(boxes(), "box", std::vector<std::string>{"2", "3"})};
    ASSERT_NO_THROW(require_complete(p));
    p.pop_back();
    try {
        require_complete(p);
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::incomplete_set);
    }
}

TEST(tsvf, weak_value_is_linear) {
    TwoStateVector tsv(box_state(s3, s3, s3), box_state(0.6, 0.8, 0));
    Eigen::Matrix3cd a;
    a << 1, 2, cplx(0, 1), 0, -1, 3, cplx(2, 2), 1, 0;
    Eigen::Matrix3cd b = Eigen::Matrix3cd::Identity() * cplx(0.5, -2);
    b(0, 2) = 4;
    Operator oa(boxes(), a);
    Operator ob(boxes(), b);
    cplx alpha(2, -1);
    cplx beta(-0.5, 3);
    cplx lhs = weak_value(tsv, oa * alpha + ob * beta).value;
    cplx rhs = alpha * weak_value(tsv, oa).value + beta * weak_value(tsv, ob).value;
    ASSERT_NEAR(std::abs(lhs - rhs), 0, 1e-10);
}
