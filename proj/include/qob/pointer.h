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

#ifndef QOB_POINTER_H
#define QOB_POINTER_H

#include <cstdint>
#include <span>
#include <vector>

#include "qob/hilbert.h"
#include "qob/tsvf.h"

namespace qob {

/// Uniform 1D grid centred on 0 with an odd number of bins.
class PointerGrid {
   public:
    explicit PointerGrid(size_t bins = 401, double spacing = 0.05);

    size_t bins() const {
        return bins_;
    }
    double spacing() const {
        return spacing_;
    }
    double position(size_t j) const {
        return (static_cast<double>(j) - static_cast<double>(bins_ / 2)) * spacing_;
    }
    double half_extent() const {
        return static_cast<double>(bins_ / 2) * spacing_;
    }
    Factor as_factor(const std::string &name = "pointer") const;

    bool operator==(const PointerGrid &other) const = default;

   private:
    size_t bins_;
    double spacing_;
};

/// Sampled pointer wavefunction. Normalization is that of a density: sum |psi_j|^2 * dx = 1.
class PointerWavefunction {
   public:
    PointerWavefunction(PointerGrid grid, double sigma, Eigen::VectorXcd amplitudes);

    static PointerWavefunction gaussian(const PointerGrid &grid = PointerGrid(), double sigma = 1.0, double center = 0.0);

    const PointerGrid &grid() const {
        return grid_;
    }
    double sigma() const {
        return sigma_;
    }
    const Eigen::VectorXcd &amplitudes() const {
        return amplitudes_;
    }

    double norm() const;
    double mean() const;
    /// psi(x - shift) by linear interpolation between bins, rescaled to the original norm.
    PointerWavefunction translated(double shift) const;
    /// Amplitudes scaled by sqrt(dx), i.e. a unit vector in the discrete basis.
    Eigen::VectorXcd discrete_amplitudes() const;

   private:
    PointerGrid grid_;
    double sigma_;
    Eigen::VectorXcd amplitudes_;
};

/// Dimensionless pointer shift per unit eigenvalue.
class CouplingStrength {
   public:
    explicit CouplingStrength(double g);
    double value() const {
        return g_;
    }

   private:
    double g_;
};

struct Eigenspace {
    double eigenvalue;
    Operator projector;
};

/// Spectral decomposition of a Hermitian operator, degenerate eigenvalues merged, ascending.
std::vector<Eigenspace> eigenspaces(const Operator &observable, double hermitian_tol = 1e-10);

/// Joint system (x) pointer state. The pointer is the last factor of `joint`.
struct CoupledState {
    Ket joint;
    Space system_space;
    PointerGrid grid;
};

/// Impulsive von Neumann coupling: sum over eigenvalues l of P_l|system> (x) T_{g l}|ptr>.
CoupledState couple(const Ket &system, const Operator &observable, const PointerWavefunction &ptr, CouplingStrength g);

/// Pointer position distribution (probability per bin) after projecting the system onto `post_projector`.
std::vector<double> conditioned_pointer_distribution(const CoupledState &state, const Operator &post_projector);

/// Mean pointer position conditioned on `post_projector` (an operator on the system space).
double pointer_mean(const CoupledState &state, const Operator &post_projector);

struct BornOutcome {
    double eigenvalue;
    double probability;
};
std::vector<BornOutcome> born_distribution(const Ket &system, const Operator &observable);

struct StrongOutcome {
    double eigenvalue;
    Ket collapsed;
};

/// Projective measurement sampled with a generator seeded by rng_seed.
StrongOutcome strong_measure(const Ket &system, const Operator &observable, uint64_t rng_seed);

struct Trajectory {
    std::vector<double> readouts;
    Ket final_state;
};

/// Repeated weak measurement: couple, sample a pointer readout from the joint distribution, apply the
/// induced Kraus back-action to the system, discard the pointer, repeat.
Trajectory weak_sequence(
    const Ket &system,
    const Operator &observable,
    CouplingStrength g,
    int steps,
    uint64_t rng_seed,
    const PointerWavefunction &ptr = PointerWavefunction::gaussian());

/// Conditioned mean of one pointer per observable, all pointers coupled to the same pre-selected system and
/// the system post-selected on tsv.post(). Observables must be diagonal in the system basis, so every basis
/// branch carries a product of translated pointers; the result is exact for the discretized model.
std::vector<double> conditioned_pointer_means(
    const TwoStateVector &tsv,
    std::span<const Operator> observables,
    const PointerWavefunction &ptr,
    CouplingStrength g);

}  // namespace qob

#endif
