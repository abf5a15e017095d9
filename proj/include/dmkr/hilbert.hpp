#pragma once

#include <memory>

#include "dmkr/types.hpp"

namespace dmkr {

namespace detail {
class Fft;  // FFTW wrapper, one instance per lattice size
}

/// Truncated momentum-basis Hilbert space on the torus. Vectors and operators
/// are stored in lattice order: index j = 0..N-1 carries momentum quantum
/// number n_j = j - N/2, position grid point q_j = 2*pi*j/N, and scaled
/// momentum p_j = h_eff * n_j. Immutable after construction; cheap to copy.
class HilbertSpace {
public:
    /// N must be even and >= 4, h_eff > 0.
    HilbertSpace(int N, double h_eff);

    int dim() const { return N_; }
    double h_eff() const { return h_eff_; }
    int momentum_index(int j) const { return j - N_ / 2; }
    double position(int j) const { return (2.0 * kPi * j) / N_; }
    double scaled_momentum(int j) const { return h_eff_ * momentum_index(j); }

    /// Unitary transform pair between momentum coefficients (lattice order)
    /// and position-grid values: psi_j = N^{-1/2} sum_n c_n e^{i n q_j}.
    Vector position_values(const Vector& momentum) const;
    Vector momentum_coeffs(const Vector& position) const;

    /// Raw unnormalized in-place DFTs (forward: e^{-2 pi i jk/N} kernel) for
    /// kernels that fold normalization and lattice offset themselves.
    void fft_forward(Cplx* data) const;
    void fft_backward(Cplx* data) const;

private:
    int N_;
    double h_eff_;
    std::shared_ptr<const detail::Fft> fft_;
};

HilbertSpace build_space(int N, double h_eff);

/// Pure coherent-state projector |psi><psi| of a periodicized Gaussian
/// centered at (q0, p0), with position variance h_eff/2 (symmetric minimum
/// uncertainty). q0 is wrapped into [0, 2*pi). Throws BoundarySupportError if
/// the population at |n| = N/2 - 1 exceeds 1e-10.
Matrix coherent_state(const HilbertSpace& space, double q0, double p0);

/// Diagonal scaled-momentum operator P = h_eff * n.
Matrix momentum_operator(const HilbertSpace& space);

/// The unitary e^{iQ}: the cyclic raising shift |n+1 mod lattice><n|.
Matrix phase_operator(const HilbertSpace& space);

/// <P> for a state; used by tests and the driver.
double momentum_expectation(const HilbertSpace& space, const Matrix& rho);

/// Circular position mean arg(<e^{iQ}>) in [0, 2*pi).
double position_expectation(const HilbertSpace& space, const Matrix& rho);

}  // namespace dmkr
