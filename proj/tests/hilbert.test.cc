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

#include "qob/hilbert.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

using namespace qob;

static const double s2 = 1 / std::sqrt(2.0);

static Space path_and_detector() {
    return Space({Factor("path", {"a", "b"}), Factor("det", {"READY", "CLICK", "BROKEN"})});
}

TEST(hilbert, factor_rejects_duplicate_labels) {
    ASSERT_THROW(Factor("x", {"a", "a"}), Error);
    ASSERT_THROW(Factor("x", {}), Error);
    Factor f("x", {"a", "b"});
    ASSERT_EQ(f.index_of("b"), 1u);
    ASSERT_THROW(f.index_of("c"), Error);
}

TEST(hilbert, basis_order_is_row_major) {
    Space s = path_and_detector();
    ASSERT_EQ(s.dim(), 6u);
    ASSERT_EQ(s.index_of({"a", "READY"}), 0u);
    ASSERT_EQ(s.index_of({"a", "CLICK"}), 1u);
    ASSERT_EQ(s.index_of({"b", "READY"}), 3u);
    ASSERT_EQ(s.basis_name(5), "b,BROKEN");
    auto d = s.digits(4);
    ASSERT_EQ(d, (std::vector<size_t>{1, 1}));
    ASSERT_EQ(s.index_from_digits(d), 4u);
}

TEST(hilbert, unknown_label_in_basis) {
    Space s = path_and_detector();
    try {
        Ket::basis(s, {"a", "ARMED"});
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::unknown_label);
    }
    ASSERT_THROW(Ket::basis(s, {"a"}), Error);
}

TEST(hilbert, tensor_matches_basis_product) {
    Space p({Factor("path", {"a", "b"})});
    Space d({Factor("det", {"READY", "CLICK", "BROKEN"})});
    Ket plus = (Ket::basis(p, {"a"}) + Ket::basis(p, {"b"})) * s2;
    Ket ready = Ket::basis(d, {"READY"});
    Ket t = tensor(plus, ready);
    ASSERT_EQ(t.space(), path_and_detector());
    ASSERT_NEAR(std::abs(t.amplitude({"a", "READY"}) - s2), 0, 1e-15);
    ASSERT_NEAR(std::abs(t.amplitude({"b", "READY"}) - s2), 0, 1e-15);
    ASSERT_NEAR(t.norm(), 1, 1e-15);
}

TEST(hilbert, inner_product_is_conjugate_linear_in_bra) {
    Space p({Factor("path", {"a", "b"})});
    Ket x = Ket::basis(p, {"a"}) * cplx(0, 1);
    Ket y = Ket::basis(p, {"a"});
    ASSERT_EQ(inner(x, y), cplx(0, -1));
    ASSERT_EQ(inner(y, x), cplx(0, 1));
}

TEST(hilbert, projector_on_factor) {
    Space s = path_and_detector();
    Operator p = Operator::projector(s, "det", std::vector<std::string>{"READY", "BROKEN"});
    ASSERT_TRUE(p.is_projector());
    ASSERT_TRUE(p.is_diagonal());
    ASSERT_NEAR(p.matrix().trace().real(), 4, 1e-15);
    ASSERT_THROW(Operator::projector(s, "nope", "a"), Error);
}

TEST(hilbert, splitters) {
    Eigen::Matrix2cd b = gates::beam_splitter();
    Eigen::Matrix2cd l = gates::labeled_splitter();
    ASSERT_LT((b.adjoint() * b - Eigen::Matrix2cd::Identity()).norm(), 1e-15);
    ASSERT_LT((l.adjoint() * l - Eigen::Matrix2cd::Identity()).norm(), 1e-15);
    // Symmetric: transmission 1/sqrt2, reflection i/sqrt2.
    ASSERT_NEAR(std::abs(b(0, 0) - s2), 0, 1e-15);
    ASSERT_NEAR(std::abs(b(1, 0) - cplx(0, s2)), 0, 1e-15);
    // Labeled: the source port goes to the real equal superposition.
    ASSERT_NEAR(std::abs(l(0, 0) - s2), 0, 1e-15);
    ASSERT_NEAR(std::abs(l(1, 0) - s2), 0, 1e-15);
}

TEST(hilbert, transposition_swaps_two_basis_states) {
    Space s = path_and_detector();
    std::vector<std::string> f = {"path", "det"};
    std::vector<std::string> from = {"b", "READY"};
    std::vector<std::string> to = {"b", "CLICK"};
    Operator u = Operator::on_factors(s, f, gates::transposition(s, f, from, to));
    ASSERT_TRUE(u.is_unitary());
    Ket k = apply(u, Ket::basis(s, {"b", "READY"}));
    ASSERT_EQ(k.amplitude({"b", "CLICK"}), cplx(1));
    Ket untouched = apply(u, Ket::basis(s, {"a", "READY"}));
    ASSERT_EQ(untouched.amplitude({"a", "READY"}), cplx(1));
}

TEST(hilbert, on_factors_respects_listed_order) {
    Space s({Factor("x", {"0", "1"}), Factor("y", {"0", "1"})});
    Eigen::Matrix4cd cnot = Eigen::Matrix4cd::Zero();
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
    // Control on y, target x.
    std::vector<std::string> order = {"y", "x"};
    Operator u = Operator::on_factors(s, order, cnot);
    Ket k = apply(u, Ket::basis(s, {"0", "1"}));
    ASSERT_EQ(k.amplitude({"1", "1"}), cplx(1));
}

TEST(hilbert, schmidt_rank_of_product_and_bell_states) {
    Space s({Factor("x", {"0", "1"}), Factor("y", {"0", "1"})});
    Ket prod = tensor(
        Ket(Space({Factor("x", {"0", "1"})}), Eigen::Vector2cd(s2, s2)),
        Ket(Space({Factor("y", {"0", "1"})}), Eigen::Vector2cd(1, 0)));
    ASSERT_EQ(schmidt_rank(prod, Bipartition::of(s, {"x"})).rank, 1);
    Ket bell = (Ket::basis(s, {"0", "0"}) + Ket::basis(s, {"1", "1"})) * s2;
    auto d = schmidt_rank(bell, Bipartition::of(s, {"x"}));
    ASSERT_EQ(d.rank, 2);
    ASSERT_NEAR(d.coefficients[0], s2, 1e-12);
}

TEST(hilbert, schmidt_rank_matches_reordered_cut) {
    Space s({Factor("a", {"0", "1"}), Factor("b", {"0", "1"}), Factor("c", {"0", "1"})});
    // Bell pair between a and c, b in |0>.
    Ket k = (Ket::basis(s, {"0", "0", "0"}) + Ket::basis(s, {"1", "0", "1"})) * s2;
    ASSERT_EQ(schmidt_rank(k, Bipartition::of(s, {"b"})).rank, 1);
    ASSERT_EQ(schmidt_rank(k, Bipartition::of(s, {"a"})).rank, 2);
    ASSERT_EQ(schmidt_rank(k, Bipartition::of(s, {"a", "c"})).rank, 1);
}

TEST(hilbert, bipartition_errors) {
    Space s({Factor("x", {"0", "1"}), Factor("y", {"0", "1"})});
    ASSERT_THROW(Bipartition::of(s, {"x", "y"}), Error);
    ASSERT_THROW(Bipartition(s, {}), Error);
    ASSERT_THROW(Bipartition(s, {0, 0}), Error);
    ASSERT_THROW(Bipartition(s, {5}), Error);
}

TEST(hilbert, schmidt_requires_normalized_state) {
    Space s({Factor("x", {"0", "1"}), Factor("y", {"0", "1"})});
    Ket k = Ket::basis(s, {"0", "0"}) * cplx(2);
    ASSERT_THROW(schmidt_rank(k, Bipartition::of(s, {"x"})), Error);
}

TEST(hilbert, dimension_mismatch) {
    Space a({Factor("x", {"0", "1"})});
    Space b({Factor("x", {"0", "1", "2"})});
    try {
        (void)apply(Operator::identity(a), Ket::basis(b, {"0"}));
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::dimension_mismatch);
    }
}

TEST(hilbert, random_unitaries_preserve_norm) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    Space s({Factor("x", {"0", "1", "2"}), Factor("y", {"0", "1"})});
    for (int t = 0; t < 50; t++) {
        Eigen::MatrixXcd m(6, 6);
        Eigen::VectorXcd v(6);
        for (int r = 0; r < 6; r++) {
            v(r) = cplx(normal(rng), normal(rng));
            for (int c = 0; c < 6; c++) {
                m(r, c) = cplx(normal(rng), normal(rng));
            }
        }
        Operator u(s, m.householderQr().householderQ());
        ASSERT_TRUE(u.is_unitary(1e-12));
        Ket k = apply(u, Ket(s, v.normalized()));
        ASSERT_NEAR(k.norm(), 1, 1e-12);
    }
}

TEST(hilbert, permute_factors_moves_amplitudes) {
    Space s({Factor("x", {"0", "1"}), Factor("y", {"p", "q", "r"})});
    Ket k = Ket::basis(s, {"1", "q"});
    std::vector<size_t> order = {1, 0};
    Ket p = permute_factors(k, order);
    ASSERT_EQ(p.space().factor(0).name(), "y");
    ASSERT_EQ(p.amplitude({"q", "1"}), cplx(1));
}
