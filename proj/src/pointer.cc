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

#include "qob/pointer.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "qob/rng.h"

namespace qob {

namespace {

constexpr double eigenvalue_merge_tol = 1e-9;

void check_shift(double g, double max_abs_eigenvalue, const PointerGrid &grid) {
    if (g * max_abs_eigenvalue > grid.half_extent()) {
        throw Error(
            ErrorKind::shift_out_of_grid,
            "shift " + std::to_string(g * max_abs_eigenvalue) + " exceeds half the grid extent " +
                std::to_string(grid.half_extent()));
    }
}

double max_abs_eigenvalue(const std::vector<Eigenspace> &spaces) {
    double m = 0;
    for (const auto &e : spaces) {
        m = std::max(m, std::abs(e.eigenvalue));
    }
    return m;
}

// d x N matrix, row-major in (system, pointer), matching the joint ket layout.
Eigen::MatrixXcd joint_matrix(
    const Ket &system, const std::vector<Eigenspace> &spaces, const std::vector<Eigen::VectorXcd> &pointers) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(system.dim()), pointers[0].size());
    for (size_t k = 0; k < spaces.size(); k++) {
        Eigen::VectorXcd branch = spaces[k].projector.matrix() * system.amplitudes();
        m.noalias() += branch * pointers[k].transpose();
    }
    return m;
}

std::vector<Eigen::VectorXcd> translated_pointers(
    const PointerWavefunction &ptr, const std::vector<Eigenspace> &spaces, double g) {
    std::vector<Eigen::VectorXcd> out;
    for (const auto &e : spaces) {
        out.push_back(ptr.translated(g * e.eigenvalue).discrete_amplitudes());
    }
    return out;
}

}  // namespace

PointerGrid::PointerGrid(size_t bins, double spacing) : bins_(bins), spacing_(spacing) {
    if (bins_ < 3 || bins_ % 2 == 0) {
        throw Error(ErrorKind::invalid_argument, "pointer grid needs an odd number of bins >= 3");
    }
    if (!(spacing_ > 0) || !std::isfinite(spacing_)) {
        throw Error(ErrorKind::invalid_argument, "pointer grid spacing must be positive");
    }
}

Factor PointerGrid::as_factor(const std::string &name) const {
    std::vector<std::string> labels;
    labels.reserve(bins_);
    for (size_t j = 0; j < bins_; j++) {
        labels.push_back(std::to_string(static_cast<long long>(j) - static_cast<long long>(bins_ / 2)));
    }
    return Factor(name, std::move(labels));
}

PointerWavefunction::PointerWavefunction(PointerGrid grid, double sigma, Eigen::VectorXcd amplitudes)
    : grid_(grid), sigma_(sigma), amplitudes_(std::move(amplitudes)) {
    if (static_cast<size_t>(amplitudes_.size()) != grid_.bins()) {
        throw Error(ErrorKind::dimension_mismatch, "pointer amplitudes do not match the grid");
    }
    if (!(sigma_ > 0)) {
        throw Error(ErrorKind::invalid_argument, "pointer width must be positive");
    }
    if (std::abs(norm() - 1.0) > 1e-10) {
        throw Error(ErrorKind::not_normalized, "pointer density integrates to " + std::to_string(norm()));
    }
}

PointerWavefunction PointerWavefunction::gaussian(const PointerGrid &grid, double sigma, double center) {
    Eigen::VectorXcd a(static_cast<Eigen::Index>(grid.bins()));
    for (size_t j = 0; j < grid.bins(); j++) {
        double u = grid.position(j) - center;
        a(static_cast<Eigen::Index>(j)) = std::exp(-u * u / (4 * sigma * sigma));
    }
    a /= std::sqrt(a.squaredNorm() * grid.spacing());
    return PointerWavefunction(grid, sigma, std::move(a));
}

double PointerWavefunction::norm() const {
    return amplitudes_.squaredNorm() * grid_.spacing();
}

double PointerWavefunction::mean() const {
    double m = 0;
    for (size_t j = 0; j < grid_.bins(); j++) {
        m += grid_.position(j) * std::norm(amplitudes_(static_cast<Eigen::Index>(j)));
    }
    return m * grid_.spacing() / norm();
}

PointerWavefunction PointerWavefunction::translated(double shift) const {
    double bins_shift = shift / grid_.spacing();
    double nearest = std::round(bins_shift);
    if (std::abs(bins_shift - nearest) < 1e-9) {
        bins_shift = nearest;
    }
    auto n = static_cast<long long>(grid_.bins());
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    for (long long j = 0; j < n; j++) {
        double source = static_cast<double>(j) - bins_shift;
        double lo = std::floor(source);
        double frac = source - lo;
        auto i0 = static_cast<long long>(lo);
        cplx v = 0;
        if (i0 >= 0 && i0 < n) {
            v += (1 - frac) * amplitudes_(i0);
        }
        if (frac > 0 && i0 + 1 >= 0 && i0 + 1 < n) {
            v += frac * amplitudes_(i0 + 1);
        }
        out(j) = v;
    }
    double mass = out.squaredNorm() * grid_.spacing();
    if (mass <= 0) {
        throw Error(ErrorKind::shift_out_of_grid, "translated pointer left the grid");
    }
    out /= std::sqrt(mass);
    return PointerWavefunction(grid_, sigma_, std::move(out));
}

Eigen::VectorXcd PointerWavefunction::discrete_amplitudes() const {
    return amplitudes_ * std::sqrt(grid_.spacing());
}

CouplingStrength::CouplingStrength(double g) : g_(g) {
    if (!(g >= 0) || !std::isfinite(g)) {
        throw Error(ErrorKind::invalid_argument, "coupling strength must be finite and >= 0");
    }
}

std::vector<Eigenspace> eigenspaces(const Operator &observable, double hermitian_tol) {
    if (!observable.is_hermitian(hermitian_tol)) {
        throw Error(ErrorKind::invalid_operator, "observable is not Hermitian");
    }
    Eigen::MatrixXcd h = (observable.matrix() + observable.matrix().adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    const auto &values = solver.eigenvalues();
    const auto &vectors = solver.eigenvectors();
    std::vector<Eigenspace> out;
    Eigen::Index n = values.size();
    for (Eigen::Index i = 0; i < n;) {
        Eigen::Index j = i;
        double sum = 0;
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
        while (j < n && values(j) - values(i) <= eigenvalue_merge_tol) {
            p += vectors.col(j) * vectors.col(j).adjoint();
            sum += values(j);
            j++;
        }
        double mean = sum / static_cast<double>(j - i);
        // Integer and half-integer spectra are reported exactly.
        double snapped = std::round(mean * 2) / 2;
        if (std::abs(mean - snapped) < eigenvalue_merge_tol) {
            mean = snapped;
        }
        out.push_back({mean, Operator(observable.space(), std::move(p))});
        i = j;
    }
    return out;
}

CoupledState couple(const Ket &system, const Operator &observable, const PointerWavefunction &ptr, CouplingStrength g) {
    if (!(observable.space() == system.space())) {
        throw Error(ErrorKind::dimension_mismatch, "observable and system live in different spaces");
    }
    auto spaces = eigenspaces(observable);
    check_shift(g.value(), max_abs_eigenvalue(spaces), ptr.grid());
    Space joint_space = product(system.space(), Space({ptr.grid().as_factor()}));
    auto pointers = translated_pointers(ptr, spaces, g.value());
    Eigen::MatrixXcd m = joint_matrix(system, spaces, pointers);
    Eigen::VectorXcd flat(m.size());
    for (Eigen::Index s = 0; s < m.rows(); s++) {
        flat.segment(s * m.cols(), m.cols()) = m.row(s).transpose();
    }
    return {Ket(std::move(joint_space), std::move(flat)), system.space(), ptr.grid()};
}

std::vector<double> conditioned_pointer_distribution(const CoupledState &state, const Operator &post_projector) {
    if (!(post_projector.space() == state.system_space)) {
        throw Error(ErrorKind::dimension_mismatch, "post-selection operator must act on the system space");
    }
    auto rows = static_cast<Eigen::Index>(state.system_space.dim());
    auto cols = static_cast<Eigen::Index>(state.grid.bins());
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index s = 0; s < rows; s++) {
        m.row(s) = state.joint.amplitudes().segment(s * cols, cols).transpose();
    }
    Eigen::MatrixXcd conditioned = post_projector.matrix() * m;
    double total = conditioned.squaredNorm();
    if (total <= 1e-12) {
        throw Error(ErrorKind::zero_probability_branch, "post-selection probability " + std::to_string(total));
    }
    std::vector<double> density(static_cast<size_t>(cols));
    for (Eigen::Index j = 0; j < cols; j++) {
        density[static_cast<size_t>(j)] = conditioned.col(j).squaredNorm() / total;
    }
    return density;
}

double pointer_mean(const CoupledState &state, const Operator &post_projector) {
    auto density = conditioned_pointer_distribution(state, post_projector);
    double mean = 0;
    for (size_t j = 0; j < density.size(); j++) {
        mean += state.grid.position(j) * density[j];
    }
    return mean;
}

std::vector<BornOutcome> born_distribution(const Ket &system, const Operator &observable) {
    std::vector<BornOutcome> out;
    for (const auto &e : eigenspaces(observable)) {
        out.push_back({e.eigenvalue, outcome_probability(system, e.projector)});
    }
    return out;
}

StrongOutcome strong_measure(const Ket &system, const Operator &observable, uint64_t rng_seed) {
    system.require_normalized(1e-10);
    auto spaces = eigenspaces(observable);
    std::vector<double> weights;
    for (const auto &e : spaces) {
        weights.push_back(outcome_probability(system, e.projector));
    }
    std::mt19937_64 rng(rng_seed);
    double target = uniform01(rng) * (weights.empty() ? 0.0 : std::accumulate(weights.begin(), weights.end(), 0.0));
    size_t pick = 0;
    double cumulative = 0;
    for (size_t k = 0; k < weights.size(); k++) {
        cumulative += weights[k];
        pick = k;
        if (cumulative > target && weights[k] > 0) {
            break;
        }
    }
    Ket projected = apply(spaces[pick].projector, system);
    return {spaces[pick].eigenvalue, projected.normalized()};
}

Trajectory weak_sequence(
    const Ket &system,
    const Operator &observable,
    CouplingStrength g,
    int steps,
    uint64_t rng_seed,
    const PointerWavefunction &ptr) {
    if (steps < 1) {
        throw Error(ErrorKind::invalid_argument, "weak_sequence needs at least one step");
    }
    if (!(observable.space() == system.space())) {
        throw Error(ErrorKind::dimension_mismatch, "observable and system live in different spaces");
    }
    system.require_normalized(1e-10);
    auto spaces = eigenspaces(observable);
    check_shift(g.value(), max_abs_eigenvalue(spaces), ptr.grid());
    auto pointers = translated_pointers(ptr, spaces, g.value());

    // Eigenspace projectors are orthogonal, so the readout marginal has no cross terms.
    std::vector<Eigen::VectorXd> densities;
    for (const auto &p : pointers) {
        densities.push_back(p.cwiseAbs2());
    }

    std::mt19937_64 rng(rng_seed);
    Trajectory out{{}, system};
    out.readouts.reserve(static_cast<size_t>(steps));
    std::vector<Eigen::VectorXcd> branches(spaces.size());
    Eigen::VectorXd marginal(pointers[0].size());
    for (int step = 0; step < steps; step++) {
        marginal.setZero();
        for (size_t k = 0; k < spaces.size(); k++) {
            branches[k] = spaces[k].projector.matrix() * out.final_state.amplitudes();
            marginal += branches[k].squaredNorm() * densities[k];
        }
        double target = uniform01(rng) * marginal.sum();
        Eigen::Index pick = marginal.size() - 1;
        double cumulative = 0;
        for (Eigen::Index j = 0; j < marginal.size(); j++) {
            cumulative += marginal(j);
            if (cumulative > target) {
                pick = j;
                break;
            }
        }
        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(system.dim()));
        for (size_t k = 0; k < spaces.size(); k++) {
            next += branches[k] * pointers[k](pick);
        }
        out.final_state = Ket(system.space(), next / next.norm());
        out.readouts.push_back(ptr.grid().position(static_cast<size_t>(pick)));
    }
    return out;
}

std::vector<double> conditioned_pointer_means(
    const TwoStateVector &tsv,
    std::span<const Operator> observables,
    const PointerWavefunction &ptr,
    CouplingStrength g) {
    const Space &space = tsv.pre().space();
    const auto dim = static_cast<Eigen::Index>(space.dim());
    // shifts(k, s): eigenvalue of observable k on system basis state s.
    Eigen::MatrixXd shifts(static_cast<Eigen::Index>(observables.size()), dim);
    for (size_t k = 0; k < observables.size(); k++) {
        const auto &obs = observables[k];
        if (!(obs.space() == space)) {
            throw Error(ErrorKind::dimension_mismatch, "observable and system live in different spaces");
        }
        if (!obs.is_diagonal() || !obs.is_hermitian()) {
            throw Error(ErrorKind::invalid_operator, "multi-pointer coupling needs real diagonal observables");
        }
        for (Eigen::Index s = 0; s < dim; s++) {
            double v = obs.matrix()(s, s).real();
            check_shift(g.value(), std::abs(v), ptr.grid());
            shifts(static_cast<Eigen::Index>(k), s) = v;
        }
    }

    std::map<double, Eigen::VectorXcd> cache;
    auto pointer_for = [&](double eigenvalue) -> const Eigen::VectorXcd & {
        auto it = cache.find(eigenvalue);
        if (it == cache.end()) {
            it = cache.emplace(eigenvalue, ptr.translated(g.value() * eigenvalue).discrete_amplitudes()).first;
        }
        return it->second;
    };

    Eigen::VectorXcd weights(dim);
    for (Eigen::Index s = 0; s < dim; s++) {
        weights(s) = std::conj(tsv.post().amplitude(static_cast<size_t>(s))) * tsv.pre().amplitude(static_cast<size_t>(s));
    }

    Eigen::VectorXd positions(static_cast<Eigen::Index>(ptr.grid().bins()));
    for (size_t j = 0; j < ptr.grid().bins(); j++) {
        positions(static_cast<Eigen::Index>(j)) = ptr.grid().position(j);
    }

    const auto count = static_cast<Eigen::Index>(observables.size());
    // overlaps[k](s, s') = <phi_{k,s'} | phi_{k,s}>, first moments likewise with x inserted.
    std::vector<Eigen::MatrixXcd> overlaps(observables.size()), moments(observables.size());
    for (Eigen::Index k = 0; k < count; k++) {
        auto &ov = overlaps[static_cast<size_t>(k)];
        auto &mo = moments[static_cast<size_t>(k)];
        ov.resize(dim, dim);
        mo.resize(dim, dim);
        for (Eigen::Index s = 0; s < dim; s++) {
            const auto &a = pointer_for(shifts(k, s));
            for (Eigen::Index t = 0; t < dim; t++) {
                const auto &b = pointer_for(shifts(k, t));
                ov(s, t) = b.dot(a);
                mo(s, t) = b.dot(positions.cast<cplx>().cwiseProduct(a));
            }
        }
    }

    auto contraction = [&](Eigen::Index with_moment) {
        cplx total = 0;
        for (Eigen::Index s = 0; s < dim; s++) {
            for (Eigen::Index t = 0; t < dim; t++) {
                cplx w = weights(s) * std::conj(weights(t));
                if (w == cplx(0)) {
                    continue;
                }
                for (Eigen::Index k = 0; k < count; k++) {
                    w *= (k == with_moment ? moments : overlaps)[static_cast<size_t>(k)](s, t);
                }
                total += w;
            }
        }
        return total;
    };

    double norm = contraction(-1).real();
    if (norm <= 1e-12) {
        throw Error(ErrorKind::zero_probability_branch, "post-selection probability " + std::to_string(norm));
    }
    std::vector<double> means;
    for (Eigen::Index k = 0; k < count; k++) {
        means.push_back(contraction(k).real() / norm);
    }
    return means;
}

}  // namespace qob
