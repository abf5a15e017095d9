#pragma once

#include <vector>

#include "dmkr/spectral.hpp"

namespace dmkr {

/// C(t) time series on integer kick times t = 0..T.
struct OtocSeries {
    enum class Source { Direct, Reconstructed };
    std::vector<Cplx> values;
    Source source = Source::Direct;
    std::vector<int> subset;              // reconstruction subset (if any)
    bool subset_conjugation_closed = true;
};

/// Spectral coefficients of the OTOC decomposition:
///   b_i = Tr(L_i^dagger B0),  d_ij = Tr([A, R_i] [A, R_j]^dagger rho0).
/// d is hermitian and positive semidefinite (a weighted Gram matrix).
struct SpectralCoefficients {
    Vector b;
    Matrix d;
};

/// Normalized term weights p_ij(t) over eigenvalue pairs at selected times.
struct WeightMap {
    std::vector<int> times;
    std::vector<RealMatrix> weights;  // k x k, nonnegative, each sums to 1
};

/// B(t) = (Lambda^dagger)^t B0, iterated one period at a time.
Matrix evolve_heisenberg(const HilbertSpace& space, const ModelParams& params, const Matrix& B0,
                         int t);

/// Direct OTOC C(t) = Tr([A, B(t)] [A, B(t)]^dagger rho0) for t = 0..t_max.
OtocSeries otoc_direct(const HilbertSpace& space, const ModelParams& params, const Matrix& A,
                       const Matrix& B0, const Matrix& rho0, int t_max);

SpectralCoefficients spectral_coefficients(const SpectralSet& set, const Matrix& B0,
                                           const Matrix& A, const Matrix& rho0);

/// Is `subset` closed under eigenvalue conjugation (every kept complex
/// eigenvalue has its conjugate partner kept)?
bool subset_conjugation_closed(const Vector& eigenvalues, const std::vector<int>& subset,
                               double pair_tol = 1e-6);

/// Extends `subset` with the conjugate partner of every kept complex
/// eigenvalue (nearest-match within pair_tol). Returns the sorted closure.
std::vector<int> close_under_conjugation(const Vector& eigenvalues, std::vector<int> subset,
                                         double pair_tol = 1e-6);

/// Partial spectral sum C(t) = sum_{i,j in subset} (lambda_i conj(lambda_j))^t
/// b_i conj(b_j) d_ij.
Cplx otoc_reconstruct(const Vector& eigenvalues, const SpectralCoefficients& coeffs,
                      const std::vector<int>& subset, int t);

/// Reconstruction over t = 0..t_max; flags a non-conjugation-closed subset.
OtocSeries otoc_reconstruct_series(const Vector& eigenvalues, const SpectralCoefficients& coeffs,
                                   const std::vector<int>& subset, int t_max);

/// p_ij(t) over the top_k x top_k leading pairs; entries >= 0, sum exactly
/// normalized to 1. Throws std::runtime_error if every term vanishes.
RealMatrix weight_matrix(const Vector& eigenvalues, const SpectralCoefficients& coeffs, int top_k,
                         int t);

}  // namespace dmkr
