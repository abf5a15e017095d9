#include "dmkr/dissipator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dmkr {

LindbladPair lindblad_operators(const HilbertSpace& space, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0,1]");
    const int N = space.dim();
    const int h = N / 2;  // site of momentum n is h + n
    LindbladPair out;
    out.g = std::sqrt(-std::log(gamma));
    out.M1.resize(N, N);
    out.M2.resize(N, N);
    std::vector<Eigen::Triplet<Cplx>> t1, t2;
    for (int n = 0; n + 1 <= h - 1; ++n)
        t1.emplace_back(h + n, h + n + 1, out.g * std::sqrt(n + 1.0));
    for (int n = 0; n + 1 <= h; ++n)
        t2.emplace_back(h - n, h - n - 1, out.g * std::sqrt(n + 1.0));
    out.M1.setFromTriplets(t1.begin(), t1.end());
    out.M2.setFromTriplets(t2.begin(), t2.end());
    return out;
}

namespace {

// The two jump ladders live on the positive / negative momentum half-lattices
// (sharing only the dark site n = 0) and their half-superoperators commute;
// exp(L_D) is the composition of the two half-channels. Each half-channel has
// the exact amplitude-damping solution with eta = e^{-g^2} = gamma: a target
// entry at ladder levels (a, b) receives
//
//   rho'_{ab} = sum_k eta^{(a+b)/2} (1-eta)^k sqrt(C(a+k,k) C(b+k,k)) rho_{a+k,b+k}
//
// a level-l row or column against a site outside the ladder is scaled by
// eta^{l/2}, and entries fully outside are untouched. The adjoint pulls from
// lower levels:
//
//   B'_{ab} = sum_k eta^{(a+b)/2 - k} (1-eta)^k sqrt(C(a,k) C(b,k)) B_{a-k,b-k}.
//
// Clipping the sums at the lattice edge reproduces the exponential of the
// clipped generator exactly, because transport only moves toward level 0.
// The k-kernels are unimodal; coefficients are seeded at the mode through
// lgamma (the plain k=0 seed underflows for large a+b) and walked in both
// directions until they drop below kCut.

constexpr double kCut = 1e-20;

struct Ladder {
    int levels;  // number of ladder levels
    int site0;   // lattice site of level 0
    int dir;     // +1 or -1; site(l) = site0 + dir*l
};

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void apply_ladder(Matrix& X, const Ladder& lad, double eta, bool adjoint) {
    const int N = static_cast<int>(X.rows());
    const int P = lad.levels;
    const double log_eta = std::log(eta);
    const double log_1m = std::log1p(-eta);
    auto site = [&](int l) { return lad.site0 + lad.dir * l; };

    // Quadrant (both indices on the ladder). Schrodinger targets read from
    // higher levels, so ascending level order is in-place safe; the adjoint
    // reads from lower levels and runs descending.
    for (int ai = 0; ai < P; ++ai) {
        const int a = adjoint ? P - 1 - ai : ai;
        for (int bi = 0; bi < P; ++bi) {
            const int b = adjoint ? P - 1 - bi : bi;
            const int kmax = adjoint ? std::min(a, b) : P - 1 - std::max(a, b);

            int k0;
            double lc0;
            if (adjoint) {
                k0 = static_cast<int>(std::llround((1.0 - eta) * 0.5 * (a + b)));
                k0 = std::clamp(k0, 0, kmax);
                lc0 = (0.5 * (a + b) - k0) * log_eta + k0 * log_1m +
                      0.5 * (log_binomial(a, k0) + log_binomial(b, k0));
            } else {
                k0 = static_cast<int>(std::llround((1.0 - eta) / eta * (0.5 * (a + b) + 1.0)));
                k0 = std::clamp(k0, 0, kmax);
                lc0 = 0.5 * (a + b) * log_eta + k0 * log_1m +
                      0.5 * (log_binomial(a + k0, k0) + log_binomial(b + k0, k0));
            }
            const double c0 = std::exp(lc0);

            auto source = [&](int k) -> Cplx {
                return adjoint ? X(site(a - k), site(b - k)) : X(site(a + k), site(b + k));
            };
            auto ratio = [&](int k) {  // c_{k+1} / c_k
                return adjoint
                           ? (1.0 - eta) / eta * std::sqrt(double(a - k) * double(b - k)) / (k + 1)
                           : (1.0 - eta) * std::sqrt(double(a + k + 1) * double(b + k + 1)) /
                                 (k + 1);
            };

            Cplx acc = 0.0;
            double c = c0;
            for (int k = k0; k <= kmax; ++k) {  // upward walk
                acc += c * source(k);
                if (k == kmax) break;
                const double r = ratio(k);
                c *= r;
                if (c < kCut && r < 1.0) break;
            }
            c = c0;
            for (int k = k0 - 1; k >= 0; --k) {  // downward walk
                const double r = ratio(k);
                c /= r;
                acc += c * source(k);
                if (c < kCut && r > 1.0) break;
            }
            X(site(a), site(b)) = acc;
        }
    }

    // Mixed sector: ladder level l against any site outside the ladder.
    const int out_begin = lad.dir > 0 ? 0 : lad.site0 + 1;
    const int out_end = lad.dir > 0 ? lad.site0 : N;
    if (out_end > out_begin) {
        for (int l = 1; l < P; ++l) {
            const double s = std::exp(0.5 * l * log_eta);
            const int j = site(l);
            for (int jp = out_begin; jp < out_end; ++jp) {
                X(j, jp) *= s;
                X(jp, j) *= s;
            }
        }
    }
}

void check_dims(const HilbertSpace& space, const Matrix& X) {
    if (X.rows() != space.dim() || X.cols() != space.dim())
        throw std::invalid_argument("dimension mismatch");
}

}  // namespace

Matrix apply_channel(const HilbertSpace& space, double gamma, const Matrix& rho) {
    check_dims(space, rho);
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0,1]");
    Matrix X = rho;
    if (gamma == 1.0) return X;
    const int h = space.dim() / 2;
    apply_ladder(X, Ladder{h, h, +1}, gamma, false);
    apply_ladder(X, Ladder{h + 1, h, -1}, gamma, false);
    return X;
}

Matrix apply_adjoint_channel(const HilbertSpace& space, double gamma, const Matrix& B) {
    check_dims(space, B);
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0,1]");
    Matrix X = B;
    if (gamma == 1.0) return X;
    const int h = space.dim() / 2;
    apply_ladder(X, Ladder{h, h, +1}, gamma, true);
    apply_ladder(X, Ladder{h + 1, h, -1}, gamma, true);
    return X;
}

}  // namespace dmkr
