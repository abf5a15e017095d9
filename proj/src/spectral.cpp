#include "dmkr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dmkr/rng.hpp"

namespace dmkr {

bool spectral_precedes(Cplx a, Cplx b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    auto phase = [](Cplx z) {
        double t = std::arg(z);
        if (t < 0.0) t += 2.0 * kPi;
        return t;
    };
    return phase(a) < phase(b);
}

namespace {

std::vector<int> sorted_order(const Vector& values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return spectral_precedes(values[a], values[b]); });
    return order;
}

// The right eigenmatrix of the unital map at lambda = 1 is I/sqrt(N) in
// closed form. Using it verbatim (when that eigenvalue is unique) removes
// eigenvector noise that would otherwise leak slowly-decaying spurious terms
// into the spectral sums, since [A, I] vanishes bitwise downstream.
bool snap_unital_eigenvector(const Vector& values, Matrix& r0) {
    if (values.size() < 1 || std::abs(values[0] - Cplx(1.0)) > 1e-8) return false;
    if (values.size() > 1 && std::abs(values[1] - Cplx(1.0)) <= 1e-8) return false;
    const auto N = r0.rows();
    r0 = Matrix::Identity(N, N) / std::sqrt(double(N));
    return true;
}

// Complex Givens rotation [c s; -conj(s) c] (c real) with G [f; g] = [r; 0].
struct Givens {
    double c;
    Cplx s;
};

Givens make_givens(Cplx f, Cplx g) {
    const double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) return {1.0, 0.0};
    if (af == 0.0) return {0.0, std::conj(g) / ag};
    const double d = std::hypot(af, ag);
    return {af / d, (f / af) * (std::conj(g) / d)};
}

// Swaps adjacent diagonal entries of the complex Schur factor T by a unitary
// similarity built from the eigenvector [T(i,i+1); T(i+1,i+1)-T(i,i)] of the
// 2x2 block, accumulating the rotation into Q.
void schur_swap(Matrix& T, Matrix& Q, Eigen::Index i) {
    const Cplx a = T(i, i), b = T(i + 1, i + 1);
    if (a == b) return;
    const Givens G = make_givens(T(i, i + 1), b - a);
    const double c = G.c;
    const Cplx s = G.s;
    const Eigen::Index n = T.cols();
    for (Eigen::Index col = i; col < n; ++col) {  // rows i, i+1 of T
        const Cplx t1 = T(i, col), t2 = T(i + 1, col);
        T(i, col) = c * t1 + s * t2;
        T(i + 1, col) = -std::conj(s) * t1 + c * t2;
    }
    for (Eigen::Index row = 0; row <= i + 1; ++row) {  // cols i, i+1 of T (times G^H)
        const Cplx t1 = T(row, i), t2 = T(row, i + 1);
        T(row, i) = t1 * c + t2 * std::conj(s);
        T(row, i + 1) = -t1 * s + t2 * c;
    }
    for (Eigen::Index row = 0; row < Q.rows(); ++row) {
        const Cplx q1 = Q(row, i), q2 = Q(row, i + 1);
        Q(row, i) = q1 * c + q2 * std::conj(s);
        Q(row, i + 1) = -q1 * s + q2 * c;
    }
    // The similarity swaps the eigenvalues exactly; pin them bitwise.
    T(i, i) = b;
    T(i + 1, i + 1) = a;
    T(i + 1, i) = 0.0;
}

Vector random_hermitian_vec(int N, std::mt19937_64& eng) {
    Matrix G(N, N);
    for (int c = 0; c < N; ++c)
        for (int r = 0; r < N; ++r) {
            const double re = rng::uniform_sym(eng);
            const double im = rng::uniform_sym(eng);
            G(r, c) = Cplx(re, im);
        }
    Matrix H0 = (G + G.adjoint()) / 2.0;
    Vector v = vec(H0);
    v /= v.norm();
    return v;
}

// Thick-restart (Krylov-Schur) Arnoldi for the k largest-modulus eigenpairs
// of a superoperator action on N x N matrices. Maintains A V_j = V_{j+1} Hbar
// with Hbar upper-Hessenberg away from the restart spike row; restarts keep
// the k+10 leading Schur vectors. The start vector is a seeded random
// hermitian matrix, so the pre-restart Rayleigh quotient is real and the
// returned set stays conjugate-symmetric to residual accuracy.
RitzPairs krylov_schur(const MatrixAction& action, int N, const ArnoldiParams& opts,
                       std::uint64_t seed, rng::Stream stream) {
    const Eigen::Index n = static_cast<Eigen::Index>(N) * N;
    const int k = opts.k;
    const int m = std::min<Eigen::Index>(opts.krylov_dim, n);
    if (k < 1) throw ConfigError("arnoldi.k must be >= 1");
    if (k >= m && m < n) throw ConfigError("arnoldi.k must be smaller than arnoldi.krylov_dim");
    if (k > n) throw ConfigError("arnoldi.k exceeds the superoperator dimension");

    auto eng = rng::engine(seed, stream);
    Eigen::MatrixXcd V(n, m + 1);
    Eigen::MatrixXcd Hbar = Eigen::MatrixXcd::Zero(m + 1, m);
    V.col(0) = random_hermitian_vec(N, eng);
    int j = 0;
    bool complete = false;  // invariant subspace spans the whole space

    const auto expand = [&]() {
        while (j < m && !complete) {
            Vector w = vec(action(unvec(V.col(j))));
            Vector h = V.leftCols(j + 1).adjoint() * w;
            w.noalias() -= V.leftCols(j + 1) * h;
            Vector h2 = V.leftCols(j + 1).adjoint() * w;  // CGS2 reorthogonalization
            w.noalias() -= V.leftCols(j + 1) * h2;
            h += h2;
            Hbar.col(j).head(j + 1) = h;
            const double beta = w.norm();
            if (beta > 1e-14 * h.norm() + 1e-300) {
                Hbar(j + 1, j) = beta;
                V.col(j + 1) = w / beta;
            } else {
                Hbar(j + 1, j) = 0.0;
                if (j + 1 >= n) {
                    complete = true;
                } else {
                    // Happy breakdown: continue in a fresh random direction.
                    Vector f = random_hermitian_vec(N, eng);
                    f -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * f).eval();
                    f -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * f).eval();
                    V.col(j + 1) = f / f.norm();
                }
            }
            ++j;
        }
    };

    RitzPairs out;
    std::string residual_report;
    for (int cycle = 0;; ++cycle) {
        expand();
        if (j < k) throw ConvergenceError("arnoldi.k exceeds the number of resolvable eigenpairs");

        const Matrix H = Hbar.topLeftCorner(j, j);
        Eigen::ComplexEigenSolver<Matrix> ces(H);
        if (ces.info() != Eigen::Success) throw std::runtime_error("Hessenberg eigensolve failed");
        const Vector theta = ces.eigenvalues();
        const Matrix Y = ces.eigenvectors();
        const auto coupling = Hbar.row(j).head(j);
        const std::vector<int> order = sorted_order(theta);

        RealVector est(k);
        for (int i = 0; i < k; ++i) est[i] = std::abs((coupling * Y.col(order[i])).value());

        if (est.maxCoeff() <= opts.tol || complete || cycle >= opts.max_restarts) {
            // Candidate set: confirm with true residuals.
            out.values.resize(k);
            out.vectors.assign(k, Matrix());
            out.residuals.resize(k);
            for (int i = 0; i < k; ++i) {
                out.values[i] = theta[order[i]];
                Vector x = V.leftCols(j) * Y.col(order[i]);
                x /= x.norm();
                out.vectors[i] = unvec(x);
                out.residuals[i] =
                    (vec(action(out.vectors[i])) - out.values[i] * x).norm();
            }
            {
                // Heisenberg actions own the closed-form eigenvector at 1;
                // keep the snap only where it checks out (a Schrodinger-side
                // run converges to the steady state instead).
                Matrix cand = out.vectors[0];
                if (snap_unital_eigenvector(out.values, cand)) {
                    const double res =
                        (vec(action(cand)) - out.values[0] * vec(cand)).norm();
                    if (res <= std::max(out.residuals[0], 1e-10)) {
                        out.vectors[0] = cand;
                        out.residuals[0] = res;
                    }
                }
            }
            if (out.residuals.maxCoeff() <= opts.tol) return out;
            if (complete || cycle >= opts.max_restarts) {
                std::ostringstream os;
                os << "arnoldi did not converge after " << cycle << " restarts; residuals:";
                for (int i = 0; i < k; ++i) os << " " << out.residuals[i];
                throw ConvergenceError(os.str());
            }
        }

        // Krylov-Schur truncation to the leading p Schur vectors.
        Eigen::ComplexSchur<Matrix> schur(H, true);
        if (schur.info() != Eigen::Success) throw std::runtime_error("Schur factorization failed");
        Matrix T = schur.matrixT();
        Matrix Q = schur.matrixU();
        Vector diag = T.diagonal();
        const std::vector<int> want = sorted_order(diag);

        int p = std::min(k + 10, j - 1);
        // Do not split a group of (numerically) equal-modulus eigenvalues at
        // the cut; conjugate pairs must survive restarts together.
        while (p < j - 1 &&
               std::abs(std::abs(diag[want[p - 1]]) - std::abs(diag[want[p]])) < 1e-12)
            ++p;

        std::vector<int> perm(j);
        std::iota(perm.begin(), perm.end(), 0);
        for (int t = 0; t < p; ++t) {
            int cur = t;
            while (perm[cur] != want[t]) ++cur;
            for (int q = cur; q > t; --q) {
                schur_swap(T, Q, q - 1);
                std::swap(perm[q - 1], perm[q]);
            }
        }

        const Matrix VQ = V.leftCols(j) * Q.leftCols(p);
        const Eigen::RowVectorXcd b = coupling * Q.leftCols(p);
        V.col(p) = V.col(j);
        V.leftCols(p) = VQ;
        Hbar.setZero();
        Hbar.topLeftCorner(p, p) = T.topLeftCorner(p, p);
        Hbar.row(p).head(p) = b;
        j = p;
    }
}

}  // namespace

RitzPairs top_eigenpairs(const MatrixAction& action, int N, const ArnoldiParams& opts,
                         std::uint64_t seed) {
    return krylov_schur(action, N, opts, seed, rng::Stream::ArnoldiRight);
}

RitzPairs left_eigenmatrices(const MatrixAction& schrodinger_action, const Vector& right_values,
                             int N, const ArnoldiParams& opts, std::uint64_t seed,
                             double pair_tol) {
    const int k = static_cast<int>(right_values.size());
    const Eigen::Index n = static_cast<Eigen::Index>(N) * N;
    ArnoldiParams o = opts;
    // A few spare pairs so a conjugate pair split at the k-th modulus still
    // finds its partner among the candidates.
    o.k = static_cast<int>(std::min<Eigen::Index>(k + 6, n));
    o.krylov_dim = std::max(o.krylov_dim, std::min<int>(o.k + 20, static_cast<int>(n)));
    const RitzPairs raw = krylov_schur(schrodinger_action, N, o, seed, rng::Stream::ArnoldiLeft);

    // Lambda eigenvalues are conjugates of the Lambda^dagger ones; pair each
    // right eigenvalue with the nearest unused conj-match.
    const int candidates = static_cast<int>(raw.values.size());
    RitzPairs paired;
    paired.values.resize(k);
    paired.vectors.assign(k, Matrix());
    paired.residuals.resize(k);
    std::vector<bool> used(candidates, false);
    for (int i = 0; i < k; ++i) {
        const Cplx target = std::conj(right_values[i]);
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int l = 0; l < candidates; ++l) {
            if (used[l]) continue;
            const double d = std::abs(raw.values[l] - target);
            if (d < best_d) {
                best_d = d;
                best = l;
            }
        }
        if (best < 0 || best_d > pair_tol) {
            std::ostringstream os;
            os << "unpaired eigenvalue " << right_values[i] << " (nearest left match at distance "
               << best_d << ")";
            throw std::runtime_error(os.str());
        }
        used[best] = true;
        paired.values[i] = raw.values[best];
        paired.vectors[i] = raw.vectors[best];
        paired.residuals[i] = raw.residuals[best];
    }
    return paired;
}

SpectralSet biorthonormalize(const Vector& values, std::vector<Matrix> rights,
                             std::vector<Matrix> lefts, RealVector right_residuals,
                             RealVector left_residuals, double cluster_tol) {
    const int k = static_cast<int>(values.size());
    if (static_cast<int>(rights.size()) != k || static_cast<int>(lefts.size()) != k)
        throw std::invalid_argument("paired lists must have equal length");

    // Transitive clustering of eigenvalues within cluster_tol.
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < k; ++i)
        for (int l = i + 1; l < k; ++l)
            if (std::abs(values[i] - values[l]) <= cluster_tol) parent[find(i)] = find(l);

    std::vector<std::vector<int>> clusters(k);
    for (int i = 0; i < k; ++i) clusters[find(i)].push_back(i);

    auto hs_inner = [](const Matrix& A, const Matrix& B) {  // Tr(A^dagger B)
        return (A.array().conjugate() * B.array()).sum();
    };

    for (const auto& cluster : clusters) {
        if (cluster.empty()) continue;
        if (cluster.size() == 1) {
            const int i = cluster[0];
            const Cplx c = hs_inner(lefts[i], rights[i]);
            if (std::abs(c) < 1e-12)
                throw DegenerateClusterError(
                    "numerically singular left/right pairing at eigenvalue index " +
                    std::to_string(i));
            lefts[i] /= std::conj(c);
        } else {
            const int s = static_cast<int>(cluster.size());
            Matrix C(s, s);
            for (int a = 0; a < s; ++a)
                for (int b = 0; b < s; ++b) C(a, b) = hs_inner(lefts[cluster[a]], rights[cluster[b]]);
            Eigen::FullPivLU<Matrix> lu(C);
            if (!lu.isInvertible())
                throw DegenerateClusterError(
                    "numerically singular pairing matrix inside an eigenvalue cluster of size " +
                    std::to_string(s));
            const Matrix W = lu.inverse().conjugate();
            std::vector<Matrix> fresh(s);
            for (int a = 0; a < s; ++a) {
                fresh[a] = Matrix::Zero(rights[0].rows(), rights[0].cols());
                for (int c = 0; c < s; ++c) fresh[a] += W(a, c) * lefts[cluster[c]];
            }
            for (int a = 0; a < s; ++a) lefts[cluster[a]] = std::move(fresh[a]);
        }
    }

    SpectralSet set;
    set.eigenvalues = values;
    set.right = std::move(rights);
    set.left = std::move(lefts);
    set.right_residuals = std::move(right_residuals);
    set.left_residuals = std::move(left_residuals);
    double err = 0.0;
    for (int i = 0; i < k; ++i)
        for (int l = 0; l < k; ++l) {
            const Cplx v = hs_inner(set.left[i], set.right[l]);
            err = std::max(err, std::abs(v - (i == l ? Cplx(1.0) : Cplx(0.0))));
        }
    set.biortho_error = err;
    return set;
}

SpectralSet dense_spectral_set(const Matrix& heisenberg_superop) {
    const Eigen::Index n2 = heisenberg_superop.rows();
    if (heisenberg_superop.cols() != n2) throw std::invalid_argument("superoperator not square");
    Eigen::ComplexEigenSolver<Matrix> ces(heisenberg_superop);
    if (ces.info() != Eigen::Success) throw std::runtime_error("dense eigensolve failed");

    const std::vector<int> order = sorted_order(ces.eigenvalues());
    Vector vals(n2);
    Matrix V(n2, n2);
    for (Eigen::Index i = 0; i < n2; ++i) {
        vals[i] = ces.eigenvalues()[order[i]];
        V.col(i) = ces.eigenvectors().col(order[i]).normalized();
    }

    // One inverse-iteration pass on the leading pairs. Their coefficients
    // enter long-time spectral sums through several decades of cancellation,
    // so the raw QR-solve accuracy is not enough there; the trailing pairs
    // only matter at small t where the plain basis is adequate.
    const Eigen::Index refine = std::min<Eigen::Index>(32, n2);
    Matrix W = V.inverse().adjoint();  // dual basis, W.col(i) = vec(L_i)
    const Matrix I = Matrix::Identity(n2, n2);
    for (Eigen::Index i = 0; i < refine; ++i) {
        Eigen::PartialPivLU<Matrix> lu(heisenberg_superop - vals[i] * I);
        Vector rv = lu.solve(V.col(i)).normalized();
        Vector lv = lu.adjoint().solve(W.col(i)).normalized();
        const Cplx rayleigh = rv.dot(heisenberg_superop * rv);  // rv^dag A rv
        if (std::isfinite(rayleigh.real()) && std::isfinite(rayleigh.imag()) &&
            rv.allFinite() && lv.allFinite()) {
            vals[i] = rayleigh;
            V.col(i) = rv;
            W.col(i) = lv;
        }
    }

    std::vector<Matrix> rights(n2), lefts(n2);
    RealVector rres(n2), lres(n2);
    {
        Matrix r0 = unvec(V.col(0));
        if (snap_unital_eigenvector(vals, r0)) {
            const Vector cand = vec(r0);
            const double res_cand = (heisenberg_superop * cand - vals[0] * cand).norm();
            const double res_cur =
                (heisenberg_superop * V.col(0) - vals[0] * V.col(0)).norm();
            if (res_cand <= std::max(res_cur, 1e-10)) V.col(0) = cand;
        }
    }
    for (Eigen::Index i = 0; i < n2; ++i) {
        rights[i] = unvec(V.col(i));
        lefts[i] = unvec(W.col(i));
        rres[i] = (heisenberg_superop * V.col(i) - vals[i] * V.col(i)).norm();
        lres[i] = (heisenberg_superop.adjoint() * W.col(i) - std::conj(vals[i]) * W.col(i)).norm() /
                  W.col(i).norm();
    }
    return biorthonormalize(vals, std::move(rights), std::move(lefts), std::move(rres),
                            std::move(lres));
}

SpectralSet compute_spectral_set(const HilbertSpace& space, const ModelParams& params) {
    PropagatorAction prop(space, params);
    RitzPairs rights = top_eigenpairs([&](const Matrix& B) { return prop.adjoint_map(B); },
                                      space.dim(), params.arnoldi, params.seed);
    RitzPairs lefts =
        left_eigenmatrices([&](const Matrix& rho) { return prop.map(rho); }, rights.values,
                           space.dim(), params.arnoldi, params.seed);
    return biorthonormalize(rights.values, std::move(rights.vectors), std::move(lefts.vectors),
                            std::move(rights.residuals), std::move(lefts.residuals));
}

}  // namespace dmkr
