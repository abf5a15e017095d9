#include <doctest.h>

#include <cstring>

#include <Eigen/Eigenvalues>

#include "dmkr/oracles.hpp"
#include "dmkr/spectral.hpp"
#include "test_helpers.hpp"

using namespace dmkr;

namespace {

MatrixAction heisenberg_action(const PropagatorAction& prop) {
    return [&prop](const Matrix& B) { return prop.adjoint_map(B); };
}
MatrixAction schrodinger_action(const PropagatorAction& prop) {
    return [&prop](const Matrix& rho) { return prop.map(rho); };
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("ordering predicate") {
    CHECK(spectral_precedes(Cplx(0.9, 0.0), Cplx(0.5, 0.0)));
    CHECK(spectral_precedes(Cplx(0.5, 0.1), Cplx(0.5, -0.1)));  // phase tie-break in [0, 2pi)
    CHECK(!spectral_precedes(Cplx(0.5, -0.1), Cplx(0.5, 0.1)));
}

TEST_CASE("arnoldi matches the dense eigensolve at N=16") {
    ModelParams p = test::desk_params(16, 2.0);
    p.arnoldi.k = 10;
    p.arnoldi.krylov_dim = 80;
    HilbertSpace s(16, p.h_eff);
    PropagatorAction prop(s, p);

    const RitzPairs got = top_eigenpairs(heisenberg_action(prop), 16, p.arnoldi, p.seed);
    REQUIRE(got.values.size() == 10);
    CHECK(got.residuals.maxCoeff() <= p.arnoldi.tol);

    // leading eigenvalue is 1 (unitality), and it is unique on the circle
    CHECK(std::abs(got.values[0] - Cplx(1.0)) <= 1e-8);
    int big = 0;
    for (int i = 0; i < 10; ++i)
        if (std::abs(got.values[i]) > 1.0 - 1e-6) ++big;
    CHECK(big == 1);

    const Matrix L = materialize_dense(s, p);
    Eigen::ComplexEigenSolver<Matrix> es(L, false);
    Vector dense = es.eigenvalues();
    std::sort(dense.data(), dense.data() + dense.size(),
              [](Cplx a, Cplx b) { return spectral_precedes(a, b); });
    CHECK(test::multiset_distance(got.values, dense.head(10)) <= 1e-8);

    // eigenmatrix residuals, directly
    for (int i = 0; i < 10; ++i) {
        const Matrix& R = got.vectors[i];
        CHECK((prop.adjoint_map(R) - got.values[i] * R).norm() <= p.arnoldi.tol);
        CHECK(R.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("determinism: identical seed gives bit-identical eigenvalues") {
    ModelParams p = test::desk_params(12, 3.7);
    p.arnoldi.k = 6;
    p.arnoldi.krylov_dim = 48;
    HilbertSpace s(12, p.h_eff);
    PropagatorAction prop(s, p);
    const RitzPairs a = top_eigenpairs(heisenberg_action(prop), 12, p.arnoldi, 42);
    const RitzPairs b = top_eigenpairs(heisenberg_action(prop), 12, p.arnoldi, 42);
    REQUIRE(a.values.size() == b.values.size());
    CHECK(std::memcmp(a.values.data(), b.values.data(), sizeof(Cplx) * a.values.size()) == 0);
}

TEST_CASE("left eigenmatrices pair with the right eigenvalues") {
    ModelParams p = test::desk_params(16, 2.0);
    p.arnoldi.k = 8;
    p.arnoldi.krylov_dim = 80;
    HilbertSpace s(16, p.h_eff);
    PropagatorAction prop(s, p);

    const RitzPairs rights = top_eigenpairs(heisenberg_action(prop), 16, p.arnoldi, p.seed);
    const RitzPairs lefts =
        left_eigenmatrices(schrodinger_action(prop), rights.values, 16, p.arnoldi, p.seed);
    for (int i = 0; i < 8; ++i) {
        const Matrix& L = lefts.vectors[i];
        CHECK((prop.map(L) - std::conj(rights.values[i]) * L).norm() <= p.arnoldi.tol);
    }
    // L_0 is the steady state up to scale: Lambda(L_0) = L_0
    CHECK((prop.map(lefts.vectors[0]) - lefts.vectors[0]).norm() <= 1e-9);
}

TEST_CASE("biorthonormalize") {
    ModelParams p = test::desk_params(16, 2.0);
    p.arnoldi.k = 8;
    p.arnoldi.krylov_dim = 80;
    HilbertSpace s(16, p.h_eff);
    PropagatorAction prop(s, p);
    RitzPairs rights = top_eigenpairs(heisenberg_action(prop), 16, p.arnoldi, p.seed);
    RitzPairs lefts =
        left_eigenmatrices(schrodinger_action(prop), rights.values, 16, p.arnoldi, p.seed);

    const SpectralSet set = biorthonormalize(rights.values, rights.vectors, lefts.vectors,
                                             rights.residuals, lefts.residuals);
    CHECK(set.biortho_error <= 1e-8);

    SUBCASE("idempotence") {
        const SpectralSet again = biorthonormalize(set.eigenvalues, set.right, set.left,
                                                   set.right_residuals, set.left_residuals);
        for (size_t i = 0; i < set.left.size(); ++i)
            CHECK(test::max_abs(again.left[i] - set.left[i]) <= 1e-12);
    }
    SUBCASE("invariance under random rescaling of the inputs") {
        auto eng = rng::engine(23, rng::Stream::ArnoldiRight);
        std::vector<Matrix> lefts2 = set.left, rights2 = set.right;
        for (auto& L : lefts2)
            L *= Cplx(1.0 + rng::uniform01(eng), rng::uniform_sym(eng));
        const SpectralSet fixed = biorthonormalize(set.eigenvalues, rights2, lefts2,
                                                   set.right_residuals, set.left_residuals);
        CHECK(fixed.biortho_error <= 1e-8);
    }
}

TEST_CASE("dense spectral set: completeness and conjugate-pair structure") {
    ModelParams p = test::desk_params(16, 2.0);
    HilbertSpace s(16, p.h_eff);
    const Matrix L = materialize_dense(s, p);
    const SpectralSet set = dense_spectral_set(L);
    REQUIRE(set.eigenvalues.size() == 256);
    CHECK(set.biortho_error <= 1e-8);
    CHECK(std::abs(set.eigenvalues[0] - Cplx(1.0)) <= 1e-8);

    SUBCASE("resolution of identity reconstructs a random matrix") {
        auto eng = rng::engine(31, rng::Stream::ArnoldiRight);
        const Matrix X = test::random_matrix(16, eng);
        Matrix rec = Matrix::Zero(16, 16);
        for (int i = 0; i < 256; ++i) {
            const Cplx c = (set.left[i].array().conjugate() * X.array()).sum();
            rec += c * set.right[i];
        }
        CHECK(test::max_abs(rec - X) <= 1e-8 * test::max_abs(X));
    }

    SUBCASE("conjugate pairs are adjoint-related up to the gauge phase") {
        // find the leading genuinely complex eigenvalue and its partner
        int i = -1, ip = -1;
        for (int a = 0; a < 256 && i < 0; ++a) {
            if (std::abs(set.eigenvalues[a].imag()) < 1e-6) continue;
            for (int b = 0; b < 256; ++b) {
                if (b != a &&
                    std::abs(set.eigenvalues[b] - std::conj(set.eigenvalues[a])) < 1e-9) {
                    i = a;
                    ip = b;
                    break;
                }
            }
        }
        REQUIRE(i >= 0);
        const Cplx gauge =
            (set.right[i].transpose().array() * set.right[ip].array()).sum();  // Tr(R_i R_i')
        CHECK(std::abs(std::abs(gauge) - 1.0) <= 1e-6);
        CHECK(test::max_abs(set.right[ip] - gauge * set.right[i].adjoint()) <= 1e-6);
        CHECK(test::max_abs(set.left[ip] - gauge * set.left[i].adjoint()) <=
              1e-6 * set.left[i].norm());
    }
}

TEST_CASE("degenerate cluster with singular pairing aborts") {
    // Two copies of the same eigenvalue with lefts orthogonal to the rights.
    Vector vals(2);
    vals << Cplx(0.5, 0.0), Cplx(0.5, 1e-12);
    Matrix r0 = Matrix::Zero(2, 2), r1 = Matrix::Zero(2, 2);
    r0(0, 0) = 1.0;
    r1(0, 0) = 1.0;  // rank-deficient right set inside the cluster
    Matrix l0 = Matrix::Zero(2, 2), l1 = Matrix::Zero(2, 2);
    l0(0, 0) = 1.0;
    l1(0, 0) = 1.0;
    RealVector res = RealVector::Zero(2);
    CHECK_THROWS_AS(
        biorthonormalize(vals, {r0, r1}, {l0, l1}, res, res),
        DegenerateClusterError);
}

}  // TEST_SUITE
