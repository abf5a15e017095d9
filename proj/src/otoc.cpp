#include "dmkr/otoc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace dmkr {

namespace {

// (lambda_i conj(lambda_j))^t for integer t, safe at z = 0.
inline Cplx power_t(Cplx z, int t) {
    if (t == 0) return 1.0;
    if (z == Cplx(0.0, 0.0)) return 0.0;
    return std::pow(z, static_cast<double>(t));
}

}  // namespace

Matrix evolve_heisenberg(const HilbertSpace& space, const ModelParams& params, const Matrix& B0,
                         int t) {
    if (t < 0) throw std::invalid_argument("t must be >= 0");
    PropagatorAction prop(space, params);
    Matrix B = B0;
    for (int s = 0; s < t; ++s) B = prop.adjoint_map(B);
    return B;
}

OtocSeries otoc_direct(const HilbertSpace& space, const ModelParams& params, const Matrix& A,
                       const Matrix& B0, const Matrix& rho0, int t_max) {
    const int N = space.dim();
    if (A.rows() != N || B0.rows() != N || rho0.rows() != N)
        throw std::invalid_argument("dimension mismatch");
    PropagatorAction prop(space, params);

    // C(t) = Tr(W W^dag rho0) evaluated in the eigenbasis of rho0 as
    // sum_k w_k ||W^dag phi_k||^2: a positive sum, free of the trace
    // contraction cancellations that would otherwise dominate once C(t) has
    // decayed many decades below C(0). For the pure coherent state this is a
    // single matrix-vector product per step.
    Eigen::SelfAdjointEigenSolver<Matrix> es((rho0 + rho0.adjoint()) / 2.0);
    const double wmax = es.eigenvalues().cwiseAbs().maxCoeff();
    std::vector<std::pair<double, Vector>> components;
    for (int k = 0; k < N; ++k)
        if (es.eigenvalues()[k] > 1e-14 * wmax)
            components.emplace_back(es.eigenvalues()[k], es.eigenvectors().col(k));

    OtocSeries series;
    series.source = OtocSeries::Source::Direct;
    series.values.reserve(t_max + 1);
    // The commutator is blind to the identity component ([A, B] = [A, B - cI])
    // and Lambda^dagger fixes the identity, so evolve the re-subtracted
    // traceless deviation. It decays with the signal (the stationary right
    // eigenmatrix is proportional to I), which keeps the late-time roundoff
    // proportional to the decaying commutator instead of the stationary part.
    Matrix D = B0 - (B0.trace() / double(N)) * Matrix::Identity(N, N);
    for (int t = 0; t <= t_max; ++t) {
        if (t > 0) {
            D = prop.adjoint_map(D);
            D -= (D.trace() / double(N)) * Matrix::Identity(N, N);
        }
        const Matrix W = A * D - D * A;
        double c = 0.0;
        for (const auto& [w, phi] : components) c += w * (W.adjoint() * phi).squaredNorm();
        series.values.push_back(Cplx(c, 0.0));
    }
    return series;
}

SpectralCoefficients spectral_coefficients(const SpectralSet& set, const Matrix& B0,
                                           const Matrix& A, const Matrix& rho0) {
    const int k = static_cast<int>(set.eigenvalues.size());
    const auto N = B0.rows();
    if (A.rows() != N || rho0.rows() != N || (k > 0 && set.right[0].rows() != N))
        throw std::invalid_argument("dimension mismatch");

    SpectralCoefficients out;
    out.b.resize(k);
    out.d.resize(k, k);
    std::vector<Matrix> W(k), T(k);
    for (int i = 0; i < k; ++i) {
        out.b[i] = (set.left[i].array().conjugate() * B0.array()).sum();  // Tr(L_i^dag B0)
        W[i] = A * set.right[i] - set.right[i] * A;
        T[i] = W[i].adjoint() * rho0;
    }
    for (int i = 0; i < k; ++i)
        for (int l = 0; l < k; ++l)
            out.d(i, l) = (W[i].transpose().array() * T[l].array()).sum();  // Tr(W_i T_l)
    return out;
}

bool subset_conjugation_closed(const Vector& eigenvalues, const std::vector<int>& subset,
                               double pair_tol) {
    for (int i : subset) {
        const Cplx v = eigenvalues[i];
        if (std::abs(v.imag()) <= pair_tol) continue;
        bool found = false;
        for (int l : subset)
            if (std::abs(eigenvalues[l] - std::conj(v)) <= pair_tol) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

std::vector<int> close_under_conjugation(const Vector& eigenvalues, std::vector<int> subset,
                                         double pair_tol) {
    std::set<int> keep(subset.begin(), subset.end());
    for (int i : subset) {
        const Cplx v = eigenvalues[i];
        if (std::abs(v.imag()) <= pair_tol) continue;
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int l = 0; l < eigenvalues.size(); ++l) {
            const double d = std::abs(eigenvalues[l] - std::conj(v));
            if (d < best_d) {
                best_d = d;
                best = l;
            }
        }
        if (best >= 0 && best_d <= pair_tol) keep.insert(best);
    }
    return {keep.begin(), keep.end()};
}

Cplx otoc_reconstruct(const Vector& eigenvalues, const SpectralCoefficients& coeffs,
                      const std::vector<int>& subset, int t) {
    for (int i : subset)
        if (i < 0 || i >= eigenvalues.size()) throw std::out_of_range("subset index out of range");
    Cplx sum = 0.0;
    for (int i : subset)
        for (int l : subset) {
            const Cplx factor = power_t(eigenvalues[i] * std::conj(eigenvalues[l]), t);
            sum += factor * coeffs.b[i] * std::conj(coeffs.b[l]) * coeffs.d(i, l);
        }
    return sum;
}

OtocSeries otoc_reconstruct_series(const Vector& eigenvalues, const SpectralCoefficients& coeffs,
                                   const std::vector<int>& subset, int t_max) {
    OtocSeries series;
    series.source = OtocSeries::Source::Reconstructed;
    series.subset = subset;
    series.subset_conjugation_closed = subset_conjugation_closed(eigenvalues, subset);
    series.values.reserve(t_max + 1);
    for (int t = 0; t <= t_max; ++t)
        series.values.push_back(otoc_reconstruct(eigenvalues, coeffs, subset, t));
    return series;
}

RealMatrix weight_matrix(const Vector& eigenvalues, const SpectralCoefficients& coeffs, int top_k,
                         int t) {
    if (top_k < 1 || top_k > eigenvalues.size())
        throw std::invalid_argument("top_k exceeds the available eigenpairs");
    RealMatrix w(top_k, top_k);
    double bmax = 0.0, dmax = 0.0, total0 = 0.0;
    for (int i = 0; i < top_k; ++i) {
        bmax = std::max(bmax, std::abs(coeffs.b[i]));
        for (int l = 0; l < top_k; ++l) {
            dmax = std::max(dmax, std::abs(coeffs.d(i, l)));
            const double coeff = std::abs(coeffs.b[i] * std::conj(coeffs.b[l]) * coeffs.d(i, l));
            total0 += coeff;
            w(i, l) = std::abs(power_t(eigenvalues[i] * std::conj(eigenvalues[l]), t)) * coeff;
        }
    }
    // A degenerate B0/A choice leaves only roundoff-level coefficients. The
    // structural check ignores the lambda^t factors: a legitimately decayed
    // total stays well conditioned (pure products, no cancellation).
    const double total = w.sum();
    if (total0 <= 1e-20 * bmax * bmax * dmax || total <= 0.0)
        throw std::runtime_error("undefined weights: every spectral term vanishes");
    return w / total;
}

}  // namespace dmkr
