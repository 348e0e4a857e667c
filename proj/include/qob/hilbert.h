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

#ifndef QOB_HILBERT_H
#define QOB_HILBERT_H

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qob/errors.h"

namespace qob {

using cplx = std::complex<double>;

/// One tensor factor of a state space: a name plus an ordered table of basis labels.
class Factor {
   public:
    Factor(std::string name, std::vector<std::string> labels);

    const std::string &name() const {
        return name_;
    }
    const std::vector<std::string> &labels() const {
        return labels_;
    }
    size_t dim() const {
        return labels_.size();
    }
    size_t index_of(const std::string &label) const;
    bool has_label(const std::string &label) const;

    bool operator==(const Factor &other) const = default;

   private:
    std::string name_;
    std::vector<std::string> labels_;
};

/// Ordered product of factors. Basis indices are row-major: the first factor is the most significant digit.
class Space {
   public:
    Space() = default;
    explicit Space(std::vector<Factor> factors);

    size_t dim() const {
        return dim_;
    }
    size_t num_factors() const {
        return factors_.size();
    }
    const std::vector<Factor> &factors() const {
        return factors_;
    }
    const Factor &factor(size_t k) const {
        return factors_.at(k);
    }
    size_t factor_index(const std::string &name) const;

    /// Basis index of a full label tuple (one label per factor, in factor order).
    size_t index_of(std::span<const std::string> labels) const;
    size_t index_of(std::initializer_list<std::string> labels) const {
        return index_of(std::span<const std::string>(labels.begin(), labels.size()));
    }
    std::vector<size_t> digits(size_t index) const;
    size_t index_from_digits(std::span<const size_t> digits) const;
    /// Comma-joined labels of a basis index, e.g. "1',2',READY,READY".
    std::string basis_name(size_t index) const;

    bool operator==(const Space &other) const {
        return factors_ == other.factors_;
    }

   private:
    std::vector<Factor> factors_;
    size_t dim_ = 1;
};

/// Concatenation of factor lists.
Space product(const Space &a, const Space &b);

class Ket {
   public:
    Ket(Space space, Eigen::VectorXcd amplitudes);

    static Ket zero(const Space &space);
    static Ket basis(const Space &space, std::span<const std::string> labels);
    static Ket basis(const Space &space, std::initializer_list<std::string> labels) {
        return basis(space, std::span<const std::string>(labels.begin(), labels.size()));
    }

    const Space &space() const {
        return space_;
    }
    const Eigen::VectorXcd &amplitudes() const {
        return amplitudes_;
    }
    size_t dim() const {
        return static_cast<size_t>(amplitudes_.size());
    }
    cplx amplitude(size_t index) const {
        return amplitudes_(static_cast<Eigen::Index>(index));
    }
    cplx amplitude(std::initializer_list<std::string> labels) const {
        return amplitude(space_.index_of(labels));
    }

    double norm() const {
        return amplitudes_.norm();
    }
    bool is_normalized(double tol = 1e-12) const;
    /// Throws not_normalized when |norm - 1| exceeds tol.
    void require_normalized(double tol = 1e-12) const;
    Ket normalized() const;

    Ket operator+(const Ket &other) const;
    Ket operator-(const Ket &other) const;
    Ket operator*(cplx scale) const;

   private:
    Space space_;
    Eigen::VectorXcd amplitudes_;
};

inline Ket operator*(cplx scale, const Ket &k) {
    return k * scale;
}

class Operator {
   public:
    Operator(Space space, Eigen::MatrixXcd matrix);

    static Operator identity(const Space &space);
    /// Projector onto the basis states whose `factor` digit carries one of `labels`.
    static Operator projector(const Space &space, const std::string &factor, std::span<const std::string> labels);
    static Operator projector(const Space &space, const std::string &factor, const std::string &label) {
        return projector(space, factor, std::span<const std::string>(&label, 1));
    }
    /// |a><b|
    static Operator outer(const Ket &a, const Ket &b);
    /// Embeds `local` (acting on the listed factors, in the listed order) into the full space.
    static Operator on_factors(const Space &space, std::span<const std::string> factors, const Eigen::MatrixXcd &local);
    static Operator on_factor(const Space &space, const std::string &factor, const Eigen::MatrixXcd &local) {
        return on_factors(space, std::span<const std::string>(&factor, 1), local);
    }

    const Space &space() const {
        return space_;
    }
    const Eigen::MatrixXcd &matrix() const {
        return matrix_;
    }
    size_t dim() const {
        return static_cast<size_t>(matrix_.rows());
    }

    Operator adjoint() const;
    bool is_hermitian(double tol = 1e-10) const;
    bool is_unitary(double tol = 1e-12) const;
    bool is_projector(double tol = 1e-12) const;
    bool is_diagonal(double tol = 1e-12) const;

    Operator operator+(const Operator &other) const;
    Operator operator-(const Operator &other) const;
    Operator operator*(const Operator &other) const;
    Operator operator*(cplx scale) const;

   private:
    Space space_;
    Eigen::MatrixXcd matrix_;
};

inline Operator operator*(cplx scale, const Operator &op) {
    return op * scale;
}

Ket tensor(const Ket &a, const Ket &b);
Operator tensor(const Operator &a, const Operator &b);

/// <bra|ket>, conjugate-linear in the first argument.
cplx inner(const Ket &bra, const Ket &ket);

Ket apply(const Operator &op, const Ket &k);

/// Splits the factors of a space into a left subset and its complement.
class Bipartition {
   public:
    Bipartition(const Space &space, std::vector<size_t> left);
    static Bipartition of(const Space &space, std::span<const std::string> left_factor_names);
    static Bipartition of(const Space &space, std::initializer_list<std::string> left_factor_names) {
        return of(space, std::span<const std::string>(left_factor_names.begin(), left_factor_names.size()));
    }

    const std::vector<size_t> &left() const {
        return left_;
    }
    const std::vector<size_t> &right() const {
        return right_;
    }

   private:
    std::vector<size_t> left_;
    std::vector<size_t> right_;
};

struct SchmidtDecomposition {
    int rank = 0;
    /// Singular values above tolerance, descending.
    std::vector<double> coefficients;
};

constexpr double default_schmidt_tolerance = 1e-8;

SchmidtDecomposition schmidt_rank(const Ket &k, const Bipartition &cut, double tol = default_schmidt_tolerance);

/// Returns a copy of `k` with its factors reordered to `order` (a permutation of factor indices).
Ket permute_factors(const Ket &k, std::span<const size_t> order);

namespace gates {

/// Symmetric 50/50 splitter (1/sqrt2)[[1, i], [i, 1]].
Eigen::Matrix2cd beam_splitter();

/// Symmetric splitter followed by diag(1, -i), so the source port maps to (|a> + |b>)/sqrt2 with real amplitudes.
Eigen::Matrix2cd labeled_splitter();

/// Unitary transposition of two basis states of the listed factors; identity on every other basis state.
Eigen::MatrixXcd transposition(
    const Space &space,
    std::span<const std::string> factors,
    std::span<const std::string> from,
    std::span<const std::string> to);

/// Two-port splitter acting on labels a and b of one factor, identity on the other labels.
Eigen::MatrixXcd embed_two_port(const Factor &factor, const std::string &a, const std::string &b, const Eigen::Matrix2cd &u);

}  // namespace gates

}  // namespace qob

#endif
