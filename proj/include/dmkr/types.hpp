#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dmkr {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Config or parameter-domain violation (bad JSON, gamma out of range, odd N, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Wavepacket support reaches the momentum truncation boundary.
struct BoundarySupportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Arnoldi failed to reach the residual tolerance within max_restarts.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerically singular pairing matrix inside an eigenvalue cluster.
struct DegenerateClusterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Advisory operator-flag predicates.
bool is_hermitian(const Matrix& X, double tol = 1e-12);
bool is_unitary(const Matrix& X, double tol = 1e-12);

/// Checks the StateMatrix invariants: hermitian within herm_tol, trace 1 within
/// trace_tol, eigenvalues >= -psd_tol. Throws std::runtime_error on violation.
void validate_state(const Matrix& rho, double herm_tol = 1e-12,
                    double trace_tol = 1e-12, double psd_tol = 1e-10);

}  // namespace dmkr
