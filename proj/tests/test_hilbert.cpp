#include <doctest.h>

#include "dmkr/hilbert.hpp"
#include "test_helpers.hpp"

using namespace dmkr;

TEST_SUITE("hilbert") {

TEST_CASE("build_space grids") {
    HilbertSpace s = build_space(4, 0.031);
    CHECK(s.momentum_index(0) == -2);
    CHECK(s.momentum_index(1) == -1);
    CHECK(s.momentum_index(2) == 0);
    CHECK(s.momentum_index(3) == 1);
    CHECK(s.position(0) == doctest::Approx(0.0));
    CHECK(s.position(1) == doctest::Approx(kPi / 2));
    CHECK(s.position(2) == doctest::Approx(kPi));
    CHECK(s.position(3) == doctest::Approx(3 * kPi / 2));

    HilbertSpace big = build_space(1024, 0.031);
    CHECK(big.momentum_index(0) == -512);
    CHECK(big.momentum_index(1023) == 511);
}

TEST_CASE("build_space rejects invalid dimensions") {
    CHECK_THROWS_AS(build_space(3, 0.031), ConfigError);
    CHECK_THROWS_AS(build_space(0, 0.031), ConfigError);
    CHECK_THROWS_AS(build_space(-2, 0.031), ConfigError);
    CHECK_THROWS_AS(build_space(6, 0.0), ConfigError);
    CHECK_THROWS_AS(build_space(6, -1.0), ConfigError);
}

TEST_CASE("transform round trip") {
    auto eng = rng::engine(7, rng::Stream::ArnoldiRight);
    for (int N : {4, 6, 64, 250}) {
        HilbertSpace s(N, 0.031);
        for (int trial = 0; trial < 3; ++trial) {
            Vector v(N);
            for (int j = 0; j < N; ++j) v[j] = Cplx(rng::uniform_sym(eng), rng::uniform_sym(eng));
            const Vector back = s.momentum_coeffs(s.position_values(v));
            CHECK((back - v).cwiseAbs().maxCoeff() <= 1e-12 * v.cwiseAbs().maxCoeff());
            // unitarity of the pair
            CHECK(s.position_values(v).norm() == doctest::Approx(v.norm()).epsilon(1e-12));
        }
    }
}

TEST_CASE("momentum operator") {
    HilbertSpace s(4, 0.5);
    const Matrix P = momentum_operator(s);
    CHECK(P(0, 0) == Cplx(-1.0));
    CHECK(P(1, 1) == Cplx(-0.5));
    CHECK(P(2, 2) == Cplx(0.0));
    CHECK(P(3, 3) == Cplx(0.5));
    CHECK(is_hermitian(P, 0.0));

    HilbertSpace s64(64, 0.031);
    const Matrix P64 = momentum_operator(s64);
    CHECK(P64.trace().real() == doctest::Approx(0.031 * (-32)).epsilon(1e-14));
}

TEST_CASE("phase operator is the cyclic raising shift") {
    HilbertSpace s(4, 0.031);
    const Matrix A = phase_operator(s);
    Matrix want = Matrix::Zero(4, 4);
    want(1, 0) = want(2, 1) = want(3, 2) = want(0, 3) = 1.0;
    CHECK(test::max_abs(A - want) == 0.0);
    CHECK(is_unitary(A, 0.0));

    // matches the position-diagonal realization e^{i q_j} through the transform
    HilbertSpace s8(8, 0.031);
    const Matrix A8 = phase_operator(s8);
    auto eng = rng::engine(3, rng::Stream::ArnoldiRight);
    Vector v(8);
    for (int j = 0; j < 8; ++j) v[j] = Cplx(rng::uniform_sym(eng), rng::uniform_sym(eng));
    Vector pos = s8.position_values(v);
    for (int j = 0; j < 8; ++j) pos[j] *= std::exp(Cplx(0.0, s8.position(j)));
    const Vector via_grid = s8.momentum_coeffs(pos);
    CHECK((Vector(A8 * v) - via_grid).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("commutator [A, P] = -h_eff A away from the wrap column") {
    // h_eff = 0.5 makes every p_n exact in binary, so the identity is exact.
    HilbertSpace s(8, 0.5);
    const Matrix A = phase_operator(s);
    const Matrix P = momentum_operator(s);
    const Matrix C = A * P - P * A;
    const Matrix want = -0.5 * A;
    for (int col = 0; col < 8; ++col) {
        if (col == 7) continue;  // wrap column n = N/2 - 1
        CHECK((C.col(col) - want.col(col)).cwiseAbs().maxCoeff() == 0.0);
    }
    // wrap column: p_{N/2-1} - p_{-N/2} = h_eff (N - 1)
    CHECK(C(0, 7) == Cplx(0.5 * 7));
}

TEST_CASE("coherent state at (pi, 0)") {
    HilbertSpace s(256, 0.031);
    const Matrix rho = coherent_state(s, kPi, 0.0);
    CHECK(std::abs(rho.trace() - Cplx(1.0)) <= 1e-12);
    CHECK(std::abs((rho * rho).trace() - Cplx(1.0)) <= 1e-10);  // purity
    CHECK(is_hermitian(rho, 1e-14));
    CHECK(std::abs(momentum_expectation(s, rho)) <= 1e-10);
    CHECK(position_expectation(s, rho) == doctest::Approx(kPi).epsilon(1e-6));
}

TEST_CASE("coherent state off-center expectations") {
    HilbertSpace s(256, 0.031);
    const double p0 = 0.5, q0 = 2.0;
    const Matrix rho = coherent_state(s, q0, p0);
    CHECK(momentum_expectation(s, rho) == doctest::Approx(p0).epsilon(1e-6));
    CHECK(position_expectation(s, rho) == doctest::Approx(q0).epsilon(1e-6));
}

TEST_CASE("coherent state 2 pi shift invariance") {
    HilbertSpace s(128, 0.031);
    const Matrix a = coherent_state(s, 1.25, 0.0);
    const Matrix b = coherent_state(s, 1.25 + 2 * kPi, 0.0);
    CHECK(test::max_abs(a - b) <= 1e-9);
}

TEST_CASE("boundary support rule at N=16, decided by direct summation") {
    // Direct Gaussian-summation oracle for the edge occupancy.
    const double sigma_q2 = 0.031 / 2.0;
    double norm = 0.0, edge = 0.0;
    for (int n = -8; n <= 7; ++n) {
        const double w = std::exp(-2.0 * sigma_q2 * n * n);
        norm += w;
        if (std::abs(n) == 7) edge += w;
    }
    const double occupancy = edge / norm;
    REQUIRE(occupancy > 1e-10);  // oracle: this state must be rejected
    HilbertSpace s(16, 0.031);
    CHECK_THROWS_AS(coherent_state(s, kPi, 0.0), BoundarySupportError);
}

}  // TEST_SUITE
