#pragma once

#include <functional>

#include "dmkr/dissipator.hpp"
#include "dmkr/floquet.hpp"
#include "dmkr/params.hpp"

namespace dmkr {

/// Column-stacking vectorization, vec(X)_{j*N+i} = X_{i,j}. vec/unvec are
/// exact (bitwise) inverses. Under this convention vec(A X B) =
/// (B^T kron A) vec(X).
Vector vec(const Matrix& X);
Matrix unvec(const Vector& v);

/// One-period quantum map as matrix-free actions: Lambda (Schrodinger) is
/// dissipation after the unitary kick-rotation step, Lambda^dagger
/// (Heisenberg) its Hilbert-Schmidt adjoint.
struct PropagatorAction {
    HilbertSpace space;
    FloquetFactors step;
    double gamma;

    PropagatorAction(const HilbertSpace& s, const ModelParams& p)
        : space(s), step(build_floquet(s, p)), gamma(p.gamma) {}

    /// Lambda(rho) = exp(L_D)( U rho U^dagger )
    Matrix map(const Matrix& rho) const;
    /// Lambda^dagger(B) = U^dagger exp(L_D^dagger)(B) U
    Matrix adjoint_map(const Matrix& B) const;
};

Matrix apply_map(const HilbertSpace& space, const ModelParams& params, const Matrix& rho);
Matrix apply_adjoint_map(const HilbertSpace& space, const ModelParams& params, const Matrix& B);

/// Dense N^2 x N^2 matrix of an arbitrary superoperator action, column c =
/// vec(action(unvec(e_c))). Guarded to N <= 48.
Matrix materialize_action(const std::function<Matrix(const Matrix&)>& action, int N);

/// Dense matrix of Lambda^dagger, the small-N oracle for spectra and
/// reconstruction. Guarded to N <= 48 (N^4 entries).
Matrix materialize_dense(const HilbertSpace& space, const ModelParams& params);

}  // namespace dmkr
