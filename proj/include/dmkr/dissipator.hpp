#pragma once

#include <Eigen/SparseCore>

#include "dmkr/hilbert.hpp"

namespace dmkr {

/// The two momentum-lowering Lindblad ladders, clipped to the lattice:
///   M1 = g sum_{n>=0} sqrt(n+1) |n><n+1|,  M2 = g sum_{n>=0} sqrt(n+1) |-n><-n-1|
/// with g = sqrt(-ln gamma). Both annihilate |0>.
struct LindbladPair {
    Eigen::SparseMatrix<Cplx> M1, M2;
    double g = 0.0;
};

LindbladPair lindblad_operators(const HilbertSpace& space, double gamma);

/// Exact one-period dissipative channel exp(L_D) applied to rho (Schrodinger
/// picture, Hamiltonian omitted). Completely positive and trace preserving.
Matrix apply_channel(const HilbertSpace& space, double gamma, const Matrix& rho);

/// Hilbert-Schmidt adjoint of apply_channel (Heisenberg picture); unital.
Matrix apply_adjoint_channel(const HilbertSpace& space, double gamma, const Matrix& B);

}  // namespace dmkr
