#include "dmkr/hilbert.hpp"

#include <cmath>
#include <vector>

#include <fftw3.h>

namespace dmkr {

namespace detail {

// FFTW plan pair for one lattice size. Plans are created with
// FFTW_ESTIMATE | FFTW_UNALIGNED so they execute on arbitrary buffers and the
// algorithm choice never depends on runtime measurement (deterministic
// output for a given N). Execution through fftw_execute_dft is thread-safe.
class Fft {
public:
    explicit Fft(int n) : n_(n) {
        std::vector<Cplx> scratch(static_cast<size_t>(n));
        auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fwd_ = fftw_plan_dft_1d(n, ptr, ptr, FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft_1d(n, ptr, ptr, FFTW_BACKWARD, flags);
        if (!fwd_ || !bwd_) throw std::runtime_error("fftw plan creation failed");
    }
    ~Fft() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(Cplx* data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(fwd_, p, p);
    }
    void backward(Cplx* data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(bwd_, p, p);
    }

private:
    int n_;
    fftw_plan fwd_, bwd_;
};

}  // namespace detail

HilbertSpace::HilbertSpace(int N, double h_eff) : N_(N), h_eff_(h_eff) {
    if (N < 4 || N % 2 != 0) throw ConfigError("N must be even and >= 4");
    if (!(h_eff > 0.0)) throw ConfigError("h_eff must be positive");
    fft_ = std::make_shared<const detail::Fft>(N);
}

void HilbertSpace::fft_forward(Cplx* data) const { fft_->forward(data); }
void HilbertSpace::fft_backward(Cplx* data) const { fft_->backward(data); }

// With lattice order c_m ~ n = m - N/2 the offset exponential e^{i n q_j}
// reduces to a (-1)^j sign on the grid side:
//   psi_j = N^{-1/2} (-1)^j sum_m c_m e^{+2 pi i m j / N}.
Vector HilbertSpace::position_values(const Vector& momentum) const {
    if (momentum.size() != N_) throw std::invalid_argument("dimension mismatch");
    Vector out = momentum;
    fft_->backward(out.data());
    const double scale = 1.0 / std::sqrt(static_cast<double>(N_));
    for (int j = 0; j < N_; ++j) out[j] *= (j % 2 == 0 ? scale : -scale);
    return out;
}

Vector HilbertSpace::momentum_coeffs(const Vector& position) const {
    if (position.size() != N_) throw std::invalid_argument("dimension mismatch");
    Vector out = position;
    const double scale = 1.0 / std::sqrt(static_cast<double>(N_));
    for (int j = 0; j < N_; ++j) out[j] *= (j % 2 == 0 ? scale : -scale);
    fft_->forward(out.data());
    return out;
}

HilbertSpace build_space(int N, double h_eff) { return HilbertSpace(N, h_eff); }

Matrix coherent_state(const HilbertSpace& space, double q0, double p0) {
    const int N = space.dim();
    q0 = std::fmod(q0, 2.0 * kPi);
    if (q0 < 0.0) q0 += 2.0 * kPi;

    const double n0 = p0 / space.h_eff();
    const double sigma_q2 = space.h_eff() / 2.0;
    Vector psi(N);
    for (int j = 0; j < N; ++j) {
        const double n = space.momentum_index(j);
        const double amp = std::exp(-sigma_q2 * (n - n0) * (n - n0));
        psi[j] = amp * std::exp(Cplx(0.0, -n * q0));
    }
    psi /= psi.norm();

    // Admission rule: the truncation edge must be unpopulated, otherwise the
    // cyclic e^{iQ} and the clipped ladders stop being faithful.
    const double edge = std::norm(psi[1]) + std::norm(psi[N - 1]);
    if (edge > 1e-10)
        throw BoundarySupportError("coherent state touches the momentum truncation boundary "
                                   "(population at |n| = N/2 - 1 is " +
                                   std::to_string(edge) + ")");
    return psi * psi.adjoint();
}

Matrix momentum_operator(const HilbertSpace& space) {
    const int N = space.dim();
    Matrix P = Matrix::Zero(N, N);
    for (int j = 0; j < N; ++j) P(j, j) = space.scaled_momentum(j);
    return P;
}

Matrix phase_operator(const HilbertSpace& space) {
    const int N = space.dim();
    Matrix A = Matrix::Zero(N, N);
    for (int j = 0; j < N; ++j) A((j + 1) % N, j) = 1.0;
    return A;
}

double momentum_expectation(const HilbertSpace& space, const Matrix& rho) {
    double m = 0.0;
    for (int j = 0; j < space.dim(); ++j) m += space.scaled_momentum(j) * rho(j, j).real();
    return m;
}

double position_expectation(const HilbertSpace& space, const Matrix& rho) {
    // Circular mean: arg Tr(e^{iQ} rho); e^{iQ} is the raising shift.
    const int N = space.dim();
    Cplx m = 0.0;
    for (int j = 0; j < N; ++j) m += rho(j, (j + 1) % N);
    double q = std::arg(m);
    if (q < 0.0) q += 2.0 * kPi;
    return q;
}

}  // namespace dmkr
