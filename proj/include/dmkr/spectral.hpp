#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dmkr/liouvillian.hpp"
#include "dmkr/params.hpp"

namespace dmkr {

using MatrixAction = std::function<Matrix(const Matrix&)>;

/// Ritz pairs of a superoperator action: eigenvalues sorted by modulus
/// descending with phase-in-[0,2pi) ascending tie-break, eigenmatrices of
/// unit Frobenius norm, residuals ||action(R) - lambda R||_F.
struct RitzPairs {
    Vector values;
    std::vector<Matrix> vectors;
    RealVector residuals;
};

/// Leading eigenvalues with biorthonormalized right/left eigenmatrices of the
/// one-period Heisenberg propagator: Lambda^dagger(R_i) = lambda_i R_i,
/// Lambda(L_i) = conj(lambda_i) L_i, Tr(L_i^dagger R_j) = delta_ij.
struct SpectralSet {
    Vector eigenvalues;
    std::vector<Matrix> right;
    std::vector<Matrix> left;
    RealVector right_residuals;
    RealVector left_residuals;
    double biortho_error = 0.0;  // max_ij |Tr(L_i^dagger R_j) - delta_ij|
};

/// Ordering predicate for the deterministic eigenvalue sort.
bool spectral_precedes(Cplx a, Cplx b);

/// k largest-modulus eigenpairs of `action` on N x N matrices, computed
/// matrix-free by a thick-restart (Krylov-Schur) Arnoldi iteration seeded
/// deterministically. Throws ConvergenceError if residuals stay above tol
/// after max_restarts cycles.
RitzPairs top_eigenpairs(const MatrixAction& action, int N, const ArnoldiParams& opts,
                         std::uint64_t seed);

/// Left eigenmatrices via a second Arnoldi run on the Schrodinger action,
/// paired to `right_values` by nearest-conjugate matching within pair_tol.
RitzPairs left_eigenmatrices(const MatrixAction& schrodinger_action, const Vector& right_values,
                             int N, const ArnoldiParams& opts, std::uint64_t seed,
                             double pair_tol = 1e-6);

/// Rescales (and, inside eigenvalue clusters closer than cluster_tol,
/// linearly recombines) the left eigenmatrices so Tr(L_i^dagger R_j) =
/// delta_ij. Throws DegenerateClusterError on a singular cluster pairing.
SpectralSet biorthonormalize(const Vector& values, std::vector<Matrix> rights,
                             std::vector<Matrix> lefts, RealVector right_residuals,
                             RealVector left_residuals, double cluster_tol = 1e-8);

/// Full spectral set from a dense Heisenberg superoperator matrix (the
/// small-N oracle path): right eigenvectors from a dense eigensolve, left
/// ones from the inverse eigenbasis, already biorthonormal.
SpectralSet dense_spectral_set(const Matrix& heisenberg_superop);

/// End-to-end: both Arnoldi runs plus biorthonormalization.
SpectralSet compute_spectral_set(const HilbertSpace& space, const ModelParams& params);

}  // namespace dmkr
