#include "dmkr/floquet.hpp"

#include <cmath>

namespace dmkr {

FloquetFactors build_floquet(const HilbertSpace& space, const ModelParams& params) {
    const int N = space.dim();
    FloquetFactors f{space, Vector(N), Vector(N)};
    const double k = params.kick_strength();
    for (int j = 0; j < N; ++j) {
        const double q = space.position(j);
        const double v = k * (std::cos(q) + 0.5 * params.a * std::cos(2.0 * q + params.phi));
        f.kick_phase[j] = std::exp(Cplx(0.0, -v));
        const double n = space.momentum_index(j);
        f.kinetic_phase[j] = std::exp(Cplx(0.0, -space.h_eff() * n * n / 2.0));
    }
    return f;
}

namespace {

// U v = D(kinetic) F D(kick) F^{-1} v / N using the unnormalized transforms;
// the lattice-offset (-1)^j signs cancel between the two grid-side passes.
inline void apply_step_col(const FloquetFactors& f, Cplx* col) {
    const int N = f.space.dim();
    const double inv_n = 1.0 / N;
    f.space.fft_backward(col);
    for (int j = 0; j < N; ++j) col[j] *= f.kick_phase[j] * inv_n;
    f.space.fft_forward(col);
    for (int m = 0; m < N; ++m) col[m] *= f.kinetic_phase[m];
}

inline void apply_step_adjoint_col(const FloquetFactors& f, Cplx* col) {
    const int N = f.space.dim();
    const double inv_n = 1.0 / N;
    for (int m = 0; m < N; ++m) col[m] *= std::conj(f.kinetic_phase[m]);
    f.space.fft_backward(col);
    for (int j = 0; j < N; ++j) col[j] *= std::conj(f.kick_phase[j]) * inv_n;
    f.space.fft_forward(col);
}

template <typename ColFn>
void apply_columns(const FloquetFactors& f, Matrix& X, ColFn&& fn) {
    for (Eigen::Index c = 0; c < X.cols(); ++c) fn(f, X.data() + c * X.rows());
}

}  // namespace

void apply_step(const FloquetFactors& f, Vector& v) {
    if (v.size() != f.space.dim()) throw std::invalid_argument("dimension mismatch");
    apply_step_col(f, v.data());
}

void apply_step_adjoint(const FloquetFactors& f, Vector& v) {
    if (v.size() != f.space.dim()) throw std::invalid_argument("dimension mismatch");
    apply_step_adjoint_col(f, v.data());
}

Matrix conjugate(const FloquetFactors& f, const Matrix& X, Direction dir) {
    const int N = f.space.dim();
    if (X.rows() != N || X.cols() != N) throw std::invalid_argument("dimension mismatch");
    // U X U^dag = (U (U X)^dag)^dag, so both sides reduce to column passes.
    Matrix Y = X;
    if (dir == Direction::Forward) {
        apply_columns(f, Y, [](const FloquetFactors& ff, Cplx* c) { apply_step_col(ff, c); });
        Matrix Z = Y.adjoint();
        apply_columns(f, Z, [](const FloquetFactors& ff, Cplx* c) { apply_step_col(ff, c); });
        return Z.adjoint();
    }
    apply_columns(f, Y, [](const FloquetFactors& ff, Cplx* c) { apply_step_adjoint_col(ff, c); });
    Matrix Z = Y.adjoint();
    apply_columns(f, Z, [](const FloquetFactors& ff, Cplx* c) { apply_step_adjoint_col(ff, c); });
    return Z.adjoint();
}

}  // namespace dmkr
