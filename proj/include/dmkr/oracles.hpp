#pragma once

#include "dmkr/hilbert.hpp"
#include "dmkr/params.hpp"

namespace dmkr::oracle {

// Independent dense reference implementations used by the validation suite
// and the test oracles. Everything here is built from definitions (explicit
// DFT sums, Kronecker superoperators, matrix exponentials) and never calls
// the production evolution kernels.

/// Dense momentum -> position transform, G_{j,m} = e^{i n_m q_j} / sqrt(N).
Matrix dense_dft(const HilbertSpace& space);

/// One-period unitary U = D(kinetic) G^dagger D(kick) G from the dense DFT.
Matrix dense_floquet_unitary(const HilbertSpace& space, const ModelParams& params);

/// N^2 x N^2 dissipator generator (Schrodinger picture, Hamiltonian omitted)
/// under column stacking; real because the jump operators are real.
RealMatrix dense_dissipator_generator(const HilbertSpace& space, double gamma);

/// exp of the dense dissipator generator: the one-period channel matrix.
RealMatrix dense_channel_exponential(const HilbertSpace& space, double gamma);

/// Closed-form free-rotor Heisenberg evolution (gamma = 1, K = 0):
/// B(t)_{nm} = B0_{nm} e^{i h_eff t (n^2 - m^2)/2}.
Matrix free_rotor_heisenberg(const HilbertSpace& space, const Matrix& B0, int t);

/// Gaussian wavepacket projector without the boundary admission check; the
/// spectral identities hold for any density matrix, so small-N oracle suites
/// can use wide-in-momentum states that the physical constructor rejects.
Matrix gaussian_state_unchecked(const HilbertSpace& space, double q0, double p0);

}  // namespace dmkr::oracle
