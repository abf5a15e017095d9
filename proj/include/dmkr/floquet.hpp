#pragma once

#include "dmkr/hilbert.hpp"
#include "dmkr/params.hpp"

namespace dmkr {

/// Factor representation of the one-period unitary
///   U = D(kinetic) . F . D(kick) . F^{-1}
/// in the momentum basis (kick first, then free rotation), where F is the
/// position -> momentum transform. U is never materialized; conjugations act
/// column-wise through the FFT at O(N^2 log N).
struct FloquetFactors {
    HilbertSpace space;
    Vector kick_phase;     // exp(-i k [cos q_j + (a/2) cos(2 q_j + phi)]) on the grid
    Vector kinetic_phase;  // exp(-i h_eff n_j^2 / 2) on the lattice
};

FloquetFactors build_floquet(const HilbertSpace& space, const ModelParams& params);

enum class Direction { Forward, Heisenberg };

/// In-place v <- U v / v <- U^dagger v on a momentum-basis vector.
void apply_step(const FloquetFactors& step, Vector& v);
void apply_step_adjoint(const FloquetFactors& step, Vector& v);

/// U X U^dagger (Forward) or U^dagger X U (Heisenberg).
Matrix conjugate(const FloquetFactors& step, const Matrix& X, Direction dir);

}  // namespace dmkr
