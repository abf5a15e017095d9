#include "dmkr/classical.hpp"

#include <cmath>

#include "dmkr/rng.hpp"

namespace dmkr {

namespace {

double wrap_2pi(double q) {
    q = std::fmod(q, 2.0 * kPi);
    if (q < 0.0) q += 2.0 * kPi;
    return q;
}

}  // namespace

double kick_force(double q, const ModelParams& params) {
    const double amp = params.force == ForceVariant::Potential ? params.a : 1.0;
    return std::sin(q) + amp * std::sin(2.0 * q + params.phi);
}

double kick_force_derivative(double q, const ModelParams& params) {
    const double amp = params.force == ForceVariant::Potential ? params.a : 1.0;
    return std::cos(q) + 2.0 * amp * std::cos(2.0 * q + params.phi);
}

ClassicalState classical_step(const ClassicalState& s, const ModelParams& params) {
    ClassicalState out;
    out.p = params.gamma * s.p + params.K * kick_force(s.q, params);
    out.q = wrap_2pi(s.q + out.p);
    return out;
}

Eigen::Matrix2d step_jacobian(const ClassicalState& s, const ModelParams& params) {
    const double kf = params.K * kick_force_derivative(s.q, params);
    Eigen::Matrix2d J;
    // d(p', q') / d(p, q); det = gamma identically
    J << params.gamma, kf, params.gamma, 1.0 + kf;
    return J;
}

std::vector<ClassicalState> trajectory(const ClassicalState& s0, const ModelParams& params,
                                       int steps, int transient) {
    if (steps < 0 || transient < 0) throw std::invalid_argument("steps and transient must be >= 0");
    ClassicalState s = s0;
    s.q = wrap_2pi(s.q);
    for (int i = 0; i < transient; ++i) s = classical_step(s, params);
    std::vector<ClassicalState> out;
    out.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        s = classical_step(s, params);
        out.push_back(s);
    }
    return out;
}

LyapunovResult lyapunov_exponent(const ModelParams& params, int n_samples, int transient,
                                 int steps, std::uint64_t seed) {
    if (n_samples < 1 || steps < 1) throw std::invalid_argument("need n_samples, steps >= 1");
    auto eng = rng::engine(seed, rng::Stream::Classical);

    LyapunovResult res;
    res.per_sample.resize(n_samples);
    double sum_top = 0.0, sum_both = 0.0;
    for (int sample = 0; sample < n_samples; ++sample) {
        ClassicalState s{kPi * rng::uniform_sym(eng), kPi * rng::uniform01(eng) * 2.0};
        for (int i = 0; i < transient; ++i) s = classical_step(s, params);

        // 2-frame tangent propagation with QR renormalization.
        Eigen::Matrix2d frame = Eigen::Matrix2d::Identity();
        double log1 = 0.0, log2 = 0.0;
        for (int i = 0; i < steps; ++i) {
            frame = step_jacobian(s, params) * frame;
            s = classical_step(s, params);
            // Gram-Schmidt on the columns.
            const double r11 = frame.col(0).norm();
            frame.col(0) /= r11;
            const double r12 = frame.col(0).dot(frame.col(1));
            frame.col(1) -= r12 * frame.col(0);
            const double r22 = frame.col(1).norm();
            frame.col(1) /= r22;
            log1 += std::log(r11);
            log2 += std::log(r22);
        }
        const double top = log1 / steps;
        res.per_sample[sample] = top;
        sum_top += top;
        sum_both += (log1 + log2) / steps;
    }
    res.top = sum_top / n_samples;
    res.sum = sum_both / n_samples;
    return res;
}

}  // namespace dmkr
