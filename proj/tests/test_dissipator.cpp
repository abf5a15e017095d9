#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "dmkr/dissipator.hpp"
#include "dmkr/liouvillian.hpp"
#include "dmkr/oracles.hpp"
#include "test_helpers.hpp"

using namespace dmkr;

TEST_SUITE("dissipator") {

TEST_CASE("gamma = 1 recovers the conservative system") {
    HilbertSpace s(8, 0.031);
    const LindbladPair ops = lindblad_operators(s, 1.0);
    CHECK(ops.g == 0.0);
    CHECK(Matrix(ops.M1).cwiseAbs().maxCoeff() == 0.0);
    CHECK(Matrix(ops.M2).cwiseAbs().maxCoeff() == 0.0);

    auto eng = rng::engine(1, rng::Stream::ArnoldiRight);
    const Matrix X = test::random_matrix(8, eng);
    CHECK(test::max_abs(apply_channel(s, 1.0, X) - X) == 0.0);
    CHECK(test::max_abs(apply_adjoint_channel(s, 1.0, X) - X) == 0.0);
}

TEST_CASE("ladder matrix elements at gamma = 0.2") {
    HilbertSpace s(8, 0.031);
    const LindbladPair ops = lindblad_operators(s, 0.2);
    const double g = std::sqrt(-std::log(0.2));
    CHECK(g == doctest::Approx(1.268636).epsilon(1e-6));
    const Matrix M1(ops.M1), M2(ops.M2);
    const int h = 4;
    CHECK(M1(h + 0, h + 1) == Cplx(g));           // n = 1 -> 0
    CHECK(M1(h + 1, h + 2) == Cplx(g * std::sqrt(2.0)));
    CHECK(M2(h - 0, h - 1) == Cplx(g));           // n = -1 -> 0
    CHECK(M2(h - 3, h - 4) == Cplx(g * 2.0));
    // both ladders annihilate |0>
    Vector zero_state = Vector::Zero(8);
    zero_state[h] = 1.0;
    CHECK((M1 * zero_state).norm() == 0.0);
    CHECK((M2 * zero_state).norm() == 0.0);
}

TEST_CASE("M1^dag M1 is g^2 n on the positive ladder") {
    HilbertSpace s(8, 0.031);
    const LindbladPair ops = lindblad_operators(s, 0.2);
    const Matrix D = Matrix(ops.M1).adjoint() * Matrix(ops.M1);
    const double g2 = ops.g * ops.g;
    for (int j = 0; j < 8; ++j) {
        const int n = s.momentum_index(j);
        const double want = n >= 1 ? g2 * n : 0.0;
        CHECK(std::abs(D(j, j) - Cplx(want)) <= 1e-13);
        for (int i = 0; i < 8; ++i)
            if (i != j) CHECK(std::abs(D(i, j)) == 0.0);
    }
}

TEST_CASE("channel matches the dense exponential oracle") {
    auto eng = rng::engine(5, rng::Stream::ArnoldiRight);
    for (int N : {8, 16, 32}) {
        for (double gamma : {0.2, 0.5, 0.9}) {
            HilbertSpace s(N, 0.031);
            const Matrix Phi = oracle::dense_channel_exponential(s, gamma).cast<Cplx>();
            const Matrix X = test::random_matrix(N, eng);
            CHECK(test::max_abs(apply_channel(s, gamma, X) - unvec(Phi * vec(X))) <= 1e-10);
            const Matrix B = test::random_matrix(N, eng);
            CHECK(test::max_abs(apply_adjoint_channel(s, gamma, B) -
                                unvec(Phi.adjoint() * vec(B))) <= 1e-10);
        }
    }
}

TEST_CASE("dark state and first-moment decay") {
    HilbertSpace s(16, 0.031);
    const int h = 8;
    Matrix rho = Matrix::Zero(16, 16);
    rho(h, h) = 1.0;
    CHECK(test::max_abs(apply_channel(s, 0.2, rho) - rho) <= 1e-15);

    rho.setZero();
    rho(h + 5, h + 5) = 1.0;  // |5><5|
    const Matrix evolved = apply_channel(s, 0.2, rho);
    double n_mean = 0.0;
    for (int j = 0; j < 16; ++j) n_mean += s.momentum_index(j) * evolved(j, j).real();
    CHECK(std::abs(n_mean - 1.0) <= 1e-10);  // <n> -> gamma n = 0.2 * 5
    CHECK(std::abs(evolved.trace() - Cplx(1.0)) <= 1e-12);
}

TEST_CASE("adjointness identity on random pairs") {
    HilbertSpace s(16, 0.031);
    auto eng = rng::engine(9, rng::Stream::ArnoldiRight);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix B = test::random_matrix(16, eng);
        const Matrix rho = test::random_matrix(16, eng);
        const Cplx lhs = (B.adjoint() * apply_channel(s, 0.2, rho)).trace();
        const Cplx rhs = (apply_adjoint_channel(s, 0.2, B).adjoint() * rho).trace();
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("unitality of the adjoint channel") {
    HilbertSpace s(32, 0.031);
    const Matrix I = Matrix::Identity(32, 32);
    CHECK(test::max_abs(apply_adjoint_channel(s, 0.2, I) - I) <= 1e-12);
}

TEST_CASE("CPTP on states") {
    auto eng = rng::engine(13, rng::Stream::ArnoldiRight);
    for (int N : {16, 32}) {
        HilbertSpace s(N, 0.031);
        const Matrix rho = test::random_state(N, eng);
        const Matrix out = apply_channel(s, 0.2, rho);
        CHECK(std::abs(out.trace() - Cplx(1.0)) <= 1e-12);
        CHECK(test::max_abs(out - out.adjoint()) <= 1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix> es(out, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
    // spot check at production-ish scale
    HilbertSpace s(256, 0.031);
    const Matrix rho = test::random_state(256, eng);
    const Matrix out = apply_channel(s, 0.2, rho);
    CHECK(std::abs(out.trace() - Cplx(1.0)) <= 1e-12);
    CHECK(test::max_abs(out - out.adjoint()) <= 1e-12);
}

TEST_CASE("matrix diagonals evolve independently") {
    HilbertSpace s(16, 0.031);
    auto eng = rng::engine(17, rng::Stream::ArnoldiRight);
    for (int d : {-5, -1, 0, 2, 7}) {
        Matrix X = Matrix::Zero(16, 16);
        for (int r = 0; r < 16; ++r) {
            const int c = r - d;
            if (c >= 0 && c < 16) X(r, c) = Cplx(rng::uniform_sym(eng), rng::uniform_sym(eng));
        }
        const Matrix out = apply_channel(s, 0.3, X);
        for (int r = 0; r < 16; ++r)
            for (int c = 0; c < 16; ++c)
                if (r - c != d) CHECK(std::abs(out(r, c)) <= 1e-16);
    }
}

TEST_CASE("gamma out of range") {
    HilbertSpace s(8, 0.031);
    CHECK_THROWS_AS(lindblad_operators(s, 0.0), ConfigError);
    CHECK_THROWS_AS(lindblad_operators(s, -0.3), ConfigError);
    CHECK_THROWS_AS(lindblad_operators(s, 1.5), ConfigError);
    CHECK_THROWS_AS(apply_channel(s, 0.0, Matrix::Zero(8, 8)), ConfigError);
}

TEST_CASE("dimension mismatch") {
    HilbertSpace s(8, 0.031);
    CHECK_THROWS_AS(apply_channel(s, 0.2, Matrix::Zero(4, 4)), std::invalid_argument);
    CHECK_THROWS_AS(apply_adjoint_channel(s, 0.2, Matrix::Zero(16, 16)), std::invalid_argument);
}

}  // TEST_SUITE
