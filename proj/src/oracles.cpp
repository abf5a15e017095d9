#include "dmkr/oracles.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "dmkr/dissipator.hpp"
#include "dmkr/floquet.hpp"

namespace dmkr::oracle {

Matrix dense_dft(const HilbertSpace& space) {
    const int N = space.dim();
    Matrix G(N, N);
    for (int j = 0; j < N; ++j)
        for (int m = 0; m < N; ++m)
            G(j, m) = std::exp(Cplx(0.0, space.momentum_index(m) * space.position(j))) /
                      std::sqrt(double(N));
    return G;
}

Matrix dense_floquet_unitary(const HilbertSpace& space, const ModelParams& params) {
    const int N = space.dim();
    const Matrix G = dense_dft(space);
    const double k = params.kick_strength();
    Vector kick(N), kin(N);
    for (int j = 0; j < N; ++j) {
        const double q = space.position(j);
        kick[j] = std::exp(
            Cplx(0.0, -k * (std::cos(q) + 0.5 * params.a * std::cos(2.0 * q + params.phi))));
        const double n = space.momentum_index(j);
        kin[j] = std::exp(Cplx(0.0, -space.h_eff() * n * n / 2.0));
    }
    return kin.asDiagonal() * (G.adjoint() * (kick.asDiagonal() * G));
}

namespace {

RealMatrix kron(const RealMatrix& A, const RealMatrix& B) {
    RealMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

}  // namespace

RealMatrix dense_dissipator_generator(const HilbertSpace& space, double gamma) {
    const int N = space.dim();
    if (N > 32) throw std::invalid_argument("dense dissipator oracle limited to N <= 32");
    const LindbladPair ops = lindblad_operators(space, gamma);
    const RealMatrix I = RealMatrix::Identity(N, N);
    RealMatrix L = RealMatrix::Zero(N * N, N * N);
    for (const auto* M : {&ops.M1, &ops.M2}) {
        const RealMatrix Md = Matrix(*M).real();
        const RealMatrix MdM = Md.transpose() * Md;
        // vec(A X B) = (B^T kron A) vec(X)
        L += kron(Md, Md);  // M rho M^dagger, M real
        L -= 0.5 * kron(I, MdM);
        L -= 0.5 * kron(MdM.transpose(), I);
    }
    return L;
}

RealMatrix dense_channel_exponential(const HilbertSpace& space, double gamma) {
    return dense_dissipator_generator(space, gamma).exp();
}

Matrix free_rotor_heisenberg(const HilbertSpace& space, const Matrix& B0, int t) {
    const int N = space.dim();
    Matrix B(N, N);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            const double n = space.momentum_index(r);
            const double m = space.momentum_index(c);
            B(r, c) = B0(r, c) * std::exp(Cplx(0.0, space.h_eff() * t * (n * n - m * m) / 2.0));
        }
    return B;
}

Matrix gaussian_state_unchecked(const HilbertSpace& space, double q0, double p0) {
    const int N = space.dim();
    const double n0 = p0 / space.h_eff();
    const double sigma_q2 = space.h_eff() / 2.0;
    Vector psi(N);
    for (int j = 0; j < N; ++j) {
        const double n = space.momentum_index(j);
        psi[j] = std::exp(-sigma_q2 * (n - n0) * (n - n0)) * std::exp(Cplx(0.0, -n * q0));
    }
    psi /= psi.norm();
    return psi * psi.adjoint();
}

}  // namespace dmkr::oracle
