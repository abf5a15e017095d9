#pragma once

#include <cstdint>
#include <string>

#include "dmkr/types.hpp"

namespace dmkr {

struct ArnoldiParams {
    int k = 10;            // requested eigenpairs
    int krylov_dim = 120;  // subspace dimension per cycle
    double tol = 1e-10;    // Frobenius residual on unit eigenmatrices
    int max_restarts = 40;
};

/// Classical force variant: the potential derivative sin q + a sin(2q+phi)
/// (default) or the map form sin q + sin(2q+phi) without the amplitude.
enum class ForceVariant { Potential, Map };

/// All physical and numerical parameters of a run. K is the scaled kick
/// strength, h_eff the effective Planck constant (kick period), gamma the
/// dissipation parameter in (0,1], a and phi the second-harmonic amplitude
/// and phase of the kick potential, N the momentum-basis dimension, (q0, p0)
/// the initial coherent-state center.
struct ModelParams {
    double K = 0.0;
    double h_eff = 0.031;
    double gamma = 0.2;
    double a = 0.5;
    double phi = kPi / 2;
    int N = 1024;
    double q0 = kPi;
    double p0 = 0.0;
    std::uint64_t seed = 1;
    ArnoldiParams arnoldi;
    ForceVariant force = ForceVariant::Potential;

    /// Derived unscaled kick strength k = K / h_eff.
    double kick_strength() const { return K / h_eff; }
    /// Derived dissipative coupling g = sqrt(-ln gamma).
    double g() const { return std::sqrt(-std::log(gamma)); }
};

/// Parses a JSON config document into validated ModelParams. Unknown keys are
/// rejected. Throws ConfigError on malformed input or domain violations.
ModelParams parse_config(const std::string& text);

/// Domain validation shared by parse_config and programmatic construction.
void validate_params(const ModelParams& p);

std::string force_variant_name(ForceVariant v);

}  // namespace dmkr
