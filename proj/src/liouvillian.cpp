#include "dmkr/liouvillian.hpp"

#include <cmath>

namespace dmkr {

Vector vec(const Matrix& X) {
    return Eigen::Map<const Vector>(X.data(), X.size());
}

Matrix unvec(const Vector& v) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
    if (n * n != v.size()) throw std::invalid_argument("vector length is not a perfect square");
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

Matrix PropagatorAction::map(const Matrix& rho) const {
    return apply_channel(space, gamma, conjugate(step, rho, Direction::Forward));
}

Matrix PropagatorAction::adjoint_map(const Matrix& B) const {
    return conjugate(step, apply_adjoint_channel(space, gamma, B), Direction::Heisenberg);
}

Matrix apply_map(const HilbertSpace& space, const ModelParams& params, const Matrix& rho) {
    return PropagatorAction(space, params).map(rho);
}

Matrix apply_adjoint_map(const HilbertSpace& space, const ModelParams& params, const Matrix& B) {
    return PropagatorAction(space, params).adjoint_map(B);
}

Matrix materialize_action(const std::function<Matrix(const Matrix&)>& action, int N) {
    if (N > 48)
        throw std::invalid_argument(
            "dense superoperator materialization is limited to N <= 48 (N^4 entries)");
    const Eigen::Index n2 = static_cast<Eigen::Index>(N) * N;
    Matrix L(n2, n2);
    Matrix unit = Matrix::Zero(N, N);
    for (Eigen::Index c = 0; c < n2; ++c) {
        unit(c % N, c / N) = 1.0;
        L.col(c) = vec(action(unit));
        unit(c % N, c / N) = 0.0;
    }
    return L;
}

Matrix materialize_dense(const HilbertSpace& space, const ModelParams& params) {
    PropagatorAction prop(space, params);
    return materialize_action([&](const Matrix& B) { return prop.adjoint_map(B); }, space.dim());
}

}  // namespace dmkr
