#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dmkr/params.hpp"

namespace dmkr {

/// Phase-space point of the classical dissipative map; q lives on [0, 2*pi).
struct ClassicalState {
    double p = 0.0;
    double q = 0.0;
};

/// Kick force f(q); the Potential variant is sin q + a sin(2q + phi), the Map
/// variant drops the amplitude a.
double kick_force(double q, const ModelParams& params);
double kick_force_derivative(double q, const ModelParams& params);

/// One step of the dissipative map: p' = gamma p + K f(q), q' = (q + p') mod 2*pi.
ClassicalState classical_step(const ClassicalState& s, const ModelParams& params);

/// Tangent map at (p, q); its determinant is gamma identically.
Eigen::Matrix2d step_jacobian(const ClassicalState& s, const ModelParams& params);

/// Iterates classical_step, discarding `transient` initial points.
std::vector<ClassicalState> trajectory(const ClassicalState& s0, const ModelParams& params,
                                       int steps, int transient);

struct LyapunovResult {
    double top = 0.0;        // sample-averaged largest exponent
    double sum = 0.0;        // sample-averaged lambda_1 + lambda_2 (= ln gamma)
    RealVector per_sample;   // largest exponent per initial condition
};

/// Largest Lyapunov exponent by 2-frame tangent propagation with QR
/// renormalization, averaged over n_samples seeded initial conditions.
LyapunovResult lyapunov_exponent(const ModelParams& params, int n_samples, int transient,
                                 int steps, std::uint64_t seed);

}  // namespace dmkr
