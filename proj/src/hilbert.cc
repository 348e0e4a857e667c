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

#include <algorithm>
#include <cmath>
#include <set>

namespace qob {

namespace {

void require_same_space(const Space &a, const Space &b, const char *what) {
    if (!(a == b)) {
        throw Error(ErrorKind::dimension_mismatch, std::string(what) + ": operands live in different spaces");
    }
}

}  // namespace

Factor::Factor(std::string name, std::vector<std::string> labels) : name_(std::move(name)), labels_(std::move(labels)) {
    if (name_.empty()) {
        throw Error(ErrorKind::invalid_space, "factor name is empty");
    }
    if (labels_.empty()) {
        throw Error(ErrorKind::invalid_space, "factor '" + name_ + "' has no labels");
    }
    std::set<std::string> seen;
    for (const auto &label : labels_) {
        if (!seen.insert(label).second) {
            throw Error(ErrorKind::invalid_space, "factor '" + name_ + "' repeats label '" + label + "'");
        }
    }
}

size_t Factor::index_of(const std::string &label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw Error(ErrorKind::unknown_label, "factor '" + name_ + "' has no label '" + label + "'");
    }
    return static_cast<size_t>(it - labels_.begin());
}

bool Factor::has_label(const std::string &label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

Space::Space(std::vector<Factor> factors) : factors_(std::move(factors)) {
    std::set<std::string> names;
    for (const auto &f : factors_) {
        if (!names.insert(f.name()).second) {
            throw Error(ErrorKind::invalid_space, "duplicate factor name '" + f.name() + "'");
        }
        dim_ *= f.dim();
    }
}

size_t Space::factor_index(const std::string &name) const {
    for (size_t k = 0; k < factors_.size(); k++) {
        if (factors_[k].name() == name) {
            return k;
        }
    }
    throw Error(ErrorKind::unknown_label, "no factor named '" + name + "'");
}

size_t Space::index_of(std::span<const std::string> labels) const {
    if (labels.size() != factors_.size()) {
        throw Error(
            ErrorKind::dimension_mismatch,
            "expected " + std::to_string(factors_.size()) + " labels, got " + std::to_string(labels.size()));
    }
    size_t index = 0;
    for (size_t k = 0; k < factors_.size(); k++) {
        index = index * factors_[k].dim() + factors_[k].index_of(labels[k]);
    }
    return index;
}

std::vector<size_t> Space::digits(size_t index) const {
    std::vector<size_t> out(factors_.size());
    for (size_t k = factors_.size(); k-- > 0;) {
        out[k] = index % factors_[k].dim();
        index /= factors_[k].dim();
    }
    return out;
}

size_t Space::index_from_digits(std::span<const size_t> digits) const {
    size_t index = 0;
    for (size_t k = 0; k < factors_.size(); k++) {
        index = index * factors_[k].dim() + digits[k];
    }
    return index;
}

std::string Space::basis_name(size_t index) const {
    auto d = digits(index);
    std::string out;
    for (size_t k = 0; k < d.size(); k++) {
        if (k) {
            out += ',';
        }
        out += factors_[k].labels()[d[k]];
    }
    return out;
}

Space product(const Space &a, const Space &b) {
    std::vector<Factor> fs = a.factors();
    fs.insert(fs.end(), b.factors().begin(), b.factors().end());
    return Space(std::move(fs));
}

Ket::Ket(Space space, Eigen::VectorXcd amplitudes) : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<size_t>(amplitudes_.size()) != space_.dim()) {
        throw Error(
            ErrorKind::dimension_mismatch,
            "ket has " + std::to_string(amplitudes_.size()) + " amplitudes for a space of dimension " +
                std::to_string(space_.dim()));
    }
}

Ket Ket::zero(const Space &space) {
    return Ket(space, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim())));
}

Ket Ket::basis(const Space &space, std::span<const std::string> labels) {
    Ket k = zero(space);
    k.amplitudes_(static_cast<Eigen::Index>(space.index_of(labels))) = 1.0;
    return k;
}

bool Ket::is_normalized(double tol) const {
    return std::abs(norm() - 1.0) <= tol;
}

void Ket::require_normalized(double tol) const {
    if (!is_normalized(tol)) {
        throw Error(ErrorKind::not_normalized, "ket norm is " + std::to_string(norm()));
    }
}

Ket Ket::normalized() const {
    double n = norm();
    if (n == 0) {
        throw Error(ErrorKind::not_normalized, "cannot normalize the zero ket");
    }
    return Ket(space_, amplitudes_ / n);
}

Ket Ket::operator+(const Ket &other) const {
    require_same_space(space_, other.space_, "ket sum");
    return Ket(space_, amplitudes_ + other.amplitudes_);
}

Ket Ket::operator-(const Ket &other) const {
    require_same_space(space_, other.space_, "ket difference");
    return Ket(space_, amplitudes_ - other.amplitudes_);
}

Ket Ket::operator*(cplx scale) const {
    return Ket(space_, amplitudes_ * scale);
}

Operator::Operator(Space space, Eigen::MatrixXcd matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || static_cast<size_t>(matrix_.rows()) != space_.dim()) {
        throw Error(
            ErrorKind::dimension_mismatch,
            "operator is " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                " on a space of dimension " + std::to_string(space_.dim()));
    }
}

Operator Operator::identity(const Space &space) {
    auto n = static_cast<Eigen::Index>(space.dim());
    return Operator(space, Eigen::MatrixXcd::Identity(n, n));
}

Operator Operator::projector(const Space &space, const std::string &factor, std::span<const std::string> labels) {
    size_t f = space.factor_index(factor);
    std::vector<bool> keep(space.factor(f).dim(), false);
    for (const auto &label : labels) {
        keep[space.factor(f).index_of(label)] = true;
    }
    auto n = static_cast<Eigen::Index>(space.dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (size_t i = 0; i < space.dim(); i++) {
        if (keep[space.digits(i)[f]]) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        }
    }
    return Operator(space, std::move(m));
}

Operator Operator::outer(const Ket &a, const Ket &b) {
    require_same_space(a.space(), b.space(), "outer product");
    return Operator(a.space(), a.amplitudes() * b.amplitudes().adjoint());
}

Operator Operator::on_factors(const Space &space, std::span<const std::string> factors, const Eigen::MatrixXcd &local) {
    std::vector<size_t> targets;
    size_t local_dim = 1;
    for (const auto &name : factors) {
        size_t f = space.factor_index(name);
        if (std::find(targets.begin(), targets.end(), f) != targets.end()) {
            throw Error(ErrorKind::invalid_operator, "factor '" + name + "' targeted twice");
        }
        targets.push_back(f);
        local_dim *= space.factor(f).dim();
    }
    if (local.rows() != local.cols() || static_cast<size_t>(local.rows()) != local_dim) {
        throw Error(
            ErrorKind::dimension_mismatch,
            "local operator is " + std::to_string(local.rows()) + "x" + std::to_string(local.cols()) +
                ", targets need dimension " + std::to_string(local_dim));
    }

    auto n = static_cast<Eigen::Index>(space.dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (size_t col = 0; col < space.dim(); col++) {
        auto digits = space.digits(col);
        size_t sub_in = 0;
        for (size_t f : targets) {
            sub_in = sub_in * space.factor(f).dim() + digits[f];
        }
        for (size_t sub_out = 0; sub_out < local_dim; sub_out++) {
            cplx v = local(static_cast<Eigen::Index>(sub_out), static_cast<Eigen::Index>(sub_in));
            if (v == cplx(0)) {
                continue;
            }
            size_t rem = sub_out;
            for (size_t t = targets.size(); t-- > 0;) {
                size_t d = space.factor(targets[t]).dim();
                digits[targets[t]] = rem % d;
                rem /= d;
            }
            m(static_cast<Eigen::Index>(space.index_from_digits(digits)), static_cast<Eigen::Index>(col)) += v;
        }
    }
    return Operator(space, std::move(m));
}

Operator Operator::adjoint() const {
    return Operator(space_, matrix_.adjoint());
}

bool Operator::is_hermitian(double tol) const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool Operator::is_unitary(double tol) const {
    auto n = matrix_.rows();
    return (matrix_.adjoint() * matrix_ - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <= tol;
}

bool Operator::is_projector(double tol) const {
    return is_hermitian(tol) && (matrix_ * matrix_ - matrix_).cwiseAbs().maxCoeff() <= tol;
}

bool Operator::is_diagonal(double tol) const {
    Eigen::MatrixXcd off = matrix_;
    off.diagonal().setZero();
    return off.size() == 0 || off.cwiseAbs().maxCoeff() <= tol;
}

Operator Operator::operator+(const Operator &other) const {
    require_same_space(space_, other.space_, "operator sum");
    return Operator(space_, matrix_ + other.matrix_);
}

Operator Operator::operator-(const Operator &other) const {
    require_same_space(space_, other.space_, "operator difference");
    return Operator(space_, matrix_ - other.matrix_);
}

Operator Operator::operator*(const Operator &other) const {
    require_same_space(space_, other.space_, "operator product");
    return Operator(space_, matrix_ * other.matrix_);
}

Operator Operator::operator*(cplx scale) const {
    return Operator(space_, matrix_ * scale);
}

Ket tensor(const Ket &a, const Ket &b) {
    const auto &x = a.amplitudes();
    const auto &y = b.amplitudes();
    Eigen::VectorXcd out(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); i++) {
        out.segment(i * y.size(), y.size()) = x(i) * y;
    }
    return Ket(product(a.space(), b.space()), std::move(out));
}

Operator tensor(const Operator &a, const Operator &b) {
    const auto &x = a.matrix();
    const auto &y = b.matrix();
    Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); i++) {
        for (Eigen::Index j = 0; j < x.cols(); j++) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return Operator(product(a.space(), b.space()), std::move(out));
}

cplx inner(const Ket &bra, const Ket &ket) {
    if (bra.dim() != ket.dim()) {
        throw Error(ErrorKind::dimension_mismatch, "inner product of kets with different dimensions");
    }
    require_same_space(bra.space(), ket.space(), "inner product");
    return bra.amplitudes().dot(ket.amplitudes());
}

Ket apply(const Operator &op, const Ket &k) {
    if (op.dim() != k.dim()) {
        throw Error(ErrorKind::dimension_mismatch, "operator and ket dimensions differ");
    }
    require_same_space(op.space(), k.space(), "apply");
    return Ket(k.space(), op.matrix() * k.amplitudes());
}

Bipartition::Bipartition(const Space &space, std::vector<size_t> left) : left_(std::move(left)) {
    std::set<size_t> seen;
    for (size_t f : left_) {
        if (f >= space.num_factors()) {
            throw Error(ErrorKind::invalid_bipartition, "factor index " + std::to_string(f) + " out of range");
        }
        if (!seen.insert(f).second) {
            throw Error(ErrorKind::invalid_bipartition, "factor index " + std::to_string(f) + " listed twice");
        }
    }
    for (size_t f = 0; f < space.num_factors(); f++) {
        if (!seen.count(f)) {
            right_.push_back(f);
        }
    }
    if (left_.empty() || right_.empty()) {
        throw Error(ErrorKind::invalid_bipartition, "both sides of a bipartition must be non-empty");
    }
}

Bipartition Bipartition::of(const Space &space, std::span<const std::string> left_factor_names) {
    std::vector<size_t> left;
    for (const auto &name : left_factor_names) {
        try {
            left.push_back(space.factor_index(name));
        } catch (const Error &) {
            throw Error(ErrorKind::invalid_bipartition, "no factor named '" + name + "'");
        }
    }
    return Bipartition(space, std::move(left));
}

Ket permute_factors(const Ket &k, std::span<const size_t> order) {
    const Space &space = k.space();
    if (order.size() != space.num_factors()) {
        throw Error(ErrorKind::invalid_argument, "permutation length does not match factor count");
    }
    std::vector<Factor> fs;
    for (size_t f : order) {
        fs.push_back(space.factor(f));
    }
    Space permuted(std::move(fs));
    Eigen::VectorXcd out(k.amplitudes().size());
    std::vector<size_t> new_digits(order.size());
    for (size_t i = 0; i < space.dim(); i++) {
        auto d = space.digits(i);
        for (size_t p = 0; p < order.size(); p++) {
            new_digits[p] = d[order[p]];
        }
        out(static_cast<Eigen::Index>(permuted.index_from_digits(new_digits))) = k.amplitude(i);
    }
    return Ket(std::move(permuted), std::move(out));
}

SchmidtDecomposition schmidt_rank(const Ket &k, const Bipartition &cut, double tol) {
    k.require_normalized(1e-10);
    std::vector<size_t> order = cut.left();
    order.insert(order.end(), cut.right().begin(), cut.right().end());
    Ket p = permute_factors(k, order);

    size_t rows = 1;
    for (size_t f : cut.left()) {
        rows *= k.space().factor(f).dim();
    }
    size_t cols = k.dim() / rows;
    // Row-major reshape: the left factors form the most significant digits.
    Eigen::MatrixXcd m(rows, cols);
    for (size_t r = 0; r < rows; r++) {
        for (size_t c = 0; c < cols; c++) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = p.amplitude(r * cols + c);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    SchmidtDecomposition out;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); i++) {
        double s = svd.singularValues()(i);
        if (s > tol) {
            out.coefficients.push_back(s);
        }
    }
    std::sort(out.coefficients.begin(), out.coefficients.end(), std::greater<>());
    out.rank = static_cast<int>(out.coefficients.size());
    return out;
}

namespace gates {

Eigen::Matrix2cd beam_splitter() {
    const double s = 1 / std::sqrt(2.0);
    const cplx i(0, 1);
    Eigen::Matrix2cd b;
    b << s, i * s, i * s, s;
    return b;
}

Eigen::Matrix2cd labeled_splitter() {
    Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
    d(0, 0) = 1;
    d(1, 1) = cplx(0, -1);
    return d * beam_splitter();
}

Eigen::MatrixXcd transposition(
    const Space &space,
    std::span<const std::string> factors,
    std::span<const std::string> from,
    std::span<const std::string> to) {
    if (from.size() != factors.size() || to.size() != factors.size()) {
        throw Error(ErrorKind::dimension_mismatch, "transposition needs one label per target factor");
    }
    std::vector<Factor> sub;
    for (const auto &name : factors) {
        sub.push_back(space.factor(space.factor_index(name)));
    }
    Space local(std::move(sub));
    size_t a = local.index_of(from);
    size_t b = local.index_of(to);
    auto n = static_cast<Eigen::Index>(local.dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
    if (a != b) {
        auto ia = static_cast<Eigen::Index>(a);
        auto ib = static_cast<Eigen::Index>(b);
        m(ia, ia) = 0;
        m(ib, ib) = 0;
        m(ia, ib) = 1;
        m(ib, ia) = 1;
    }
    return m;
}

Eigen::MatrixXcd embed_two_port(const Factor &factor, const std::string &a, const std::string &b, const Eigen::Matrix2cd &u) {
    auto ia = static_cast<Eigen::Index>(factor.index_of(a));
    auto ib = static_cast<Eigen::Index>(factor.index_of(b));
    if (ia == ib) {
        throw Error(ErrorKind::invalid_operator, "two-port gate needs two distinct labels");
    }
    auto n = static_cast<Eigen::Index>(factor.dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
    m(ia, ia) = u(0, 0);
    m(ia, ib) = u(0, 1);
    m(ib, ia) = u(1, 0);
    m(ib, ib) = u(1, 1);
    return m;
}

}  // namespace gates

}  // namespace qob
