#include "dmkr/driver.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fftw3.h>
#include <nlohmann/json.hpp>

#include "dmkr/classical.hpp"
#include "dmkr/oracles.hpp"
#include "dmkr/otoc.hpp"
#include "dmkr/rng.hpp"
#include "dmkr/spectral.hpp"

#define DMKR_VERSION "0.1.0"

namespace dmkr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// All CSV numerics go through one shortest-round-trip-safe format so reruns
// with the same config and seed are byte-identical.
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Outputs {
    fs::path dir;
    std::vector<std::string> files;

    std::ofstream open(const std::string& name) {
        fs::create_directories(dir);
        files.push_back(name);
        std::ofstream f(dir / name, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open output file " + (dir / name).string());
        return f;
    }
};

json params_json(const ModelParams& p) {
    return json{{"K", p.K},
                {"h_eff", p.h_eff},
                {"gamma", p.gamma},
                {"a", p.a},
                {"phi", p.phi},
                {"N", p.N},
                {"q0", p.q0},
                {"p0", p.p0},
                {"seed", p.seed},
                {"force_variant", force_variant_name(p.force)},
                {"arnoldi",
                 {{"k", p.arnoldi.k},
                  {"krylov_dim", p.arnoldi.krylov_dim},
                  {"tol", p.arnoldi.tol},
                  {"max_restarts", p.arnoldi.max_restarts}}}};
}

void write_manifest(Outputs& out, const std::string& command, const ModelParams& p,
                    const json& options) {
    json m;
    m["command"] = command;
    m["params"] = params_json(p);
    m["derived"] = {{"k", p.kick_strength()}, {"g", p.g()}};
    m["options"] = options;
    m["outputs"] = out.files;
    m["versions"] = json{{"dmkr", DMKR_VERSION},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                       std::to_string(EIGEN_MINOR_VERSION)},
                         {"fftw", std::string(fftw_version)}};
    fs::create_directories(out.dir);
    std::ofstream f(out.dir / "manifest.json", std::ios::trunc);
    f << m.dump(2) << "\n";
}

void write_series_csv(Outputs& out, const std::string& name, const OtocSeries& s) {
    auto f = out.open(name);
    f << "t,C_re,C_im,C_abs\n";
    for (size_t t = 0; t < s.values.size(); ++t)
        f << t << "," << num(s.values[t].real()) << "," << num(s.values[t].imag()) << ","
          << num(std::abs(s.values[t])) << "\n";
}

ModelParams load_params(const CliOptions& opts) {
    std::string text = opts.config_text;
    if (text.empty()) {
        if (opts.config_path.empty()) throw ConfigError("no config given (use --config PATH)");
        std::ifstream f(opts.config_path);
        if (!f) throw ConfigError("cannot read config file " + opts.config_path);
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    return parse_config(text);
}

// ---------------------------------------------------------------------------
// plot script emission (--emit-plots)

void emit_otoc_plot(Outputs& out) {
    auto f = out.open("plot_otoc.py");
    f << R"PY(#!/usr/bin/env python3
"""Log-scale C(t) panel from otoc.csv / rec.csv in this directory."""
import csv, os
import matplotlib.pyplot as plt

def load(name):
    if not os.path.exists(name):
        return None
    with open(name) as fh:
        rows = list(csv.DictReader(fh))
    return [int(r["t"]) for r in rows], [float(r["C_abs"]) for r in rows]

fig, ax = plt.subplots(figsize=(6, 4))
d = load("otoc.csv")
if d:
    ax.semilogy(d[0], d[1], "s", mfc="none", color="tab:blue", label="direct")
r = load("rec.csv")
if r:
    ax.semilogy(r[0], r[1], "o", color="tab:red", ms=4, label="spectral reconstruction")
ax.set_xlabel("t")
ax.set_ylabel("C(t)")
ax.legend()
fig.tight_layout()
fig.savefig("otoc.png", dpi=160)
print("wrote otoc.png")
)PY";
}

void emit_pij_plot(Outputs& out) {
    auto f = out.open("plot_pij.py");
    f << R"PY(#!/usr/bin/env python3
"""Heatmap panels of p_ij at each time in pij.csv (panels B-D layout)."""
import csv
from collections import defaultdict
import matplotlib.pyplot as plt
import numpy as np

data = defaultdict(dict)
with open("pij.csv") as fh:
    for r in csv.DictReader(fh):
        data[int(r["t"])][(int(r["i"]), int(r["j"]))] = float(r["p_ij"])

times = sorted(data)
fig, axes = plt.subplots(1, len(times), figsize=(4 * len(times), 3.6))
if len(times) == 1:
    axes = [axes]
for ax, t in zip(axes, times):
    k = max(i for i, _ in data[t]) + 1
    m = np.zeros((k, k))
    for (i, j), v in data[t].items():
        m[i, j] = v
    im = ax.imshow(m, origin="lower", cmap="Reds")
    ax.set_title(f"t = {t}")
    ax.set_xlabel("j")
    ax.set_ylabel("i")
    fig.colorbar(im, ax=ax, fraction=0.046)
fig.tight_layout()
fig.savefig("pij.png", dpi=160)
print("wrote pij.png")
)PY";
}

void emit_attractor_plot(Outputs& out) {
    auto f = out.open("plot_attractor.py");
    f << R"PY(#!/usr/bin/env python3
"""Phase-space scatter of attractor.csv."""
import csv
import matplotlib.pyplot as plt

with open("attractor.csv") as fh:
    rows = list(csv.DictReader(fh))
q = [float(r["q"]) for r in rows]
p = [float(r["p"]) for r in rows]
fig, ax = plt.subplots(figsize=(5, 4))
ax.plot(q, p, ",", color="black")
ax.set_xlabel("q")
ax.set_ylabel("p")
fig.tight_layout()
fig.savefig("attractor.png", dpi=160)
print("wrote attractor.png")
)PY";
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_spectrum(const ModelParams& p, const CliOptions& opts, Outputs& out) {
    HilbertSpace space(p.N, p.h_eff);
    PropagatorAction prop(space, p);
    RitzPairs pairs = top_eigenpairs([&](const Matrix& B) { return prop.adjoint_map(B); }, p.N,
                                     p.arnoldi, p.seed);
    auto f = out.open("eigs.csv");
    f << "index,re,im,modulus\n";
    for (int i = 0; i < pairs.values.size(); ++i)
        f << i << "," << num(pairs.values[i].real()) << "," << num(pairs.values[i].imag()) << ","
          << num(std::abs(pairs.values[i])) << "\n";
    write_manifest(out, "spectrum", p, json::object());
    return 0;
}

int cmd_otoc(const ModelParams& p, const CliOptions& opts, Outputs& out) {
    const int tmax = opts.tmax >= 0 ? opts.tmax : 50;
    HilbertSpace space(p.N, p.h_eff);
    const Matrix A = phase_operator(space);
    const Matrix B = momentum_operator(space);
    const Matrix rho0 = coherent_state(space, p.q0, p.p0);
    OtocSeries s = otoc_direct(space, p, A, B, rho0, tmax);
    write_series_csv(out, "otoc.csv", s);
    if (opts.emit_plots) emit_otoc_plot(out);
    write_manifest(out, "otoc", p, json{{"tmax", tmax}});
    return 0;
}

int cmd_reconstruct(const ModelParams& p, const CliOptions& opts, Outputs& out) {
    const int tmax = opts.tmax >= 0 ? opts.tmax : 50;
    HilbertSpace space(p.N, p.h_eff);
    const Matrix A = phase_operator(space);
    const Matrix B = momentum_operator(space);
    const Matrix rho0 = coherent_state(space, p.q0, p.p0);

    SpectralSet set = compute_spectral_set(space, p);
    SpectralCoefficients coeffs = spectral_coefficients(set, B, A, rho0);

    std::vector<int> subset = opts.subset;
    if (subset.empty())
        for (int i = 0; i < set.eigenvalues.size(); ++i) subset.push_back(i);
    std::vector<int> closed = close_under_conjugation(set.eigenvalues, subset);
    const bool closure_added = closed.size() != subset.size();

    OtocSeries s = otoc_reconstruct_series(set.eigenvalues, coeffs, closed, tmax);
    write_series_csv(out, "rec.csv", s);
    if (opts.emit_plots) emit_otoc_plot(out);
    write_manifest(out, "reconstruct", p,
                   json{{"tmax", tmax},
                        {"subset_requested", opts.subset},
                        {"subset_used", closed},
                        {"conjugation_closure_added", closure_added}});
    return 0;
}

int cmd_weights(const ModelParams& p, const CliOptions& opts, Outputs& out) {
    HilbertSpace space(p.N, p.h_eff);
    const Matrix A = phase_operator(space);
    const Matrix B = momentum_operator(space);
    const Matrix rho0 = coherent_state(space, p.q0, p.p0);

    ModelParams pk = p;
    pk.arnoldi.k = std::max(p.arnoldi.k, opts.top);
    pk.arnoldi.krylov_dim = std::max(pk.arnoldi.krylov_dim, pk.arnoldi.k + 20);
    SpectralSet set = compute_spectral_set(space, pk);
    SpectralCoefficients coeffs = spectral_coefficients(set, B, A, rho0);

    const int top = std::min<int>(opts.top, set.eigenvalues.size());
    auto f = out.open("pij.csv");
    f << "t,i,j,p_ij\n";
    for (int t : opts.times) {
        const RealMatrix w = weight_matrix(set.eigenvalues, coeffs, top, t);
        for (int i = 0; i < top; ++i)
            for (int j = 0; j < top; ++j)
                f << t << "," << i << "," << j << "," << num(w(i, j)) << "\n";
    }
    if (opts.emit_plots) emit_pij_plot(out);
    write_manifest(out, "weights", p, json{{"top", top}, {"times", opts.times}});
    return 0;
}

int cmd_classical(const ModelParams& p, const CliOptions& opts, Outputs& out) {
    if (opts.mode == "attractor") {
        const int steps = opts.tmax >= 0 ? opts.tmax : 5000;
        const int transient = 500;
        auto pts = trajectory(ClassicalState{p.p0, p.q0}, p, steps, transient);
        auto f = out.open("attractor.csv");
        f << "step,q,p\n";
        for (size_t i = 0; i < pts.size(); ++i)
            f << i << "," << num(pts[i].q) << "," << num(pts[i].p) << "\n";
        if (opts.emit_plots) emit_attractor_plot(out);
        write_manifest(out, "classical", p,
                       json{{"mode", "attractor"}, {"steps", steps}, {"transient", transient}});
        return 0;
    }
    if (opts.mode == "lyapunov") {
        const int steps = opts.tmax >= 0 ? opts.tmax : 2000;
        const int samples = 24, transient = 500;
        LyapunovResult r = lyapunov_exponent(p, samples, transient, steps, p.seed);
        auto f = out.open("lyapunov.csv");
        f << "sample,exponent\n";
        for (int i = 0; i < r.per_sample.size(); ++i) f << i << "," << num(r.per_sample[i]) << "\n";
        write_manifest(out, "classical", p,
                       json{{"mode", "lyapunov"},
                            {"steps", steps},
                            {"samples", samples},
                            {"transient", transient},
                            {"mean_exponent", r.top},
                            {"mean_sum", r.sum}});
        return 0;
    }
    throw ConfigError("mode must be attractor or lyapunov");
}

// Small-N oracle suite behind `validate`: dense references against the
// production kernels, plus the exact limits. Prints one line per check.
int cmd_validate(const ModelParams& cfg, const CliOptions&, Outputs& out) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, double value, double bound) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "  (" << value
                  << (ok ? " <= " : " > ") << bound << ")\n";
        if (!ok) ++failures;
    };
    auto run = [&](const std::string& name, double value, double bound) {
        check(name, value <= bound, value, bound);
    };

    ModelParams p = cfg;
    p.N = 16;
    HilbertSpace space(p.N, p.h_eff);
    auto eng = rng::engine(p.seed, rng::Stream::ArnoldiRight);
    auto random_matrix = [&](const HilbertSpace& s) {
        Matrix M(s.dim(), s.dim());
        for (int c = 0; c < s.dim(); ++c)
            for (int r = 0; r < s.dim(); ++r)
                M(r, c) = Cplx(rng::uniform_sym(eng), rng::uniform_sym(eng));
        return M;
    };

    // vec / unvec / Kronecker convention
    {
        const Matrix X = random_matrix(space);
        run("vec/unvec round trip", (unvec(vec(X)) - X).cwiseAbs().maxCoeff(), 0.0);
    }

    // channel against the dense exponential oracle, N in {8, 16}
    for (int n : {8, 16}) {
        HilbertSpace s(n, p.h_eff);
        const RealMatrix Phi = oracle::dense_channel_exponential(s, p.gamma);
        const Matrix Phic = Phi.cast<Cplx>();
        const Matrix X = random_matrix(s);
        const Matrix got = apply_channel(s, p.gamma, X);
        const Matrix want = unvec(Phic * vec(X));
        run("channel matches dense exponential (N=" + std::to_string(n) + ")",
            (got - want).cwiseAbs().maxCoeff(), 1e-10);
        const Matrix B = random_matrix(s);
        const Matrix gota = apply_adjoint_channel(s, p.gamma, B);
        const Matrix wanta = unvec(Phic.adjoint() * vec(B));
        run("adjoint channel matches dense exponential (N=" + std::to_string(n) + ")",
            (gota - wanta).cwiseAbs().maxCoeff(), 1e-10);
    }

    // adjointness identity on random pairs
    {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix B = random_matrix(space), rho = random_matrix(space);
            const Cplx lhs = (B.adjoint() * apply_channel(space, p.gamma, rho)).trace();
            const Cplx rhs = (apply_adjoint_channel(space, p.gamma, B).adjoint() * rho).trace();
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        run("channel adjointness on 20 random pairs", worst, 1e-10);
    }

    // propagator unitality and trace preservation
    {
        PropagatorAction prop(space, p);
        const Matrix I = Matrix::Identity(p.N, p.N);
        run("unitality || Lambda^dag(I) - I ||", (prop.adjoint_map(I) - I).cwiseAbs().maxCoeff(),
            1e-10);
        const Matrix rho0 = oracle::gaussian_state_unchecked(space, p.q0, p.p0);
        run("trace preservation |Tr Lambda(rho) - 1|",
            std::abs(prop.map(rho0).trace() - Cplx(1.0)), 1e-12);
    }

    // dense spectrum: conjugation closure, spectral radius, unique attractor
    {
        const Matrix Lh = materialize_dense(space, p);
        Eigen::ComplexEigenSolver<Matrix> ces(Lh);
        const Vector vals = ces.eigenvalues();
        double closure = 0.0;
        for (int i = 0; i < vals.size(); ++i) {
            double best = 1e300;
            for (int j = 0; j < vals.size(); ++j)
                best = std::min(best, std::abs(vals[j] - std::conj(vals[i])));
            closure = std::max(closure, best);
        }
        run("dense spectrum closed under conjugation", closure, 1e-10);
        run("spectral radius <= 1", vals.cwiseAbs().maxCoeff() - 1.0, 1e-10);
        if (p.gamma < 0.999) {
            int on_circle = 0;
            for (int i = 0; i < vals.size(); ++i)
                if (std::abs(vals[i]) >= 1.0 - 1e-8) ++on_circle;
            check("unique attractor (one eigenvalue on the unit circle)", on_circle == 1,
                  on_circle, 1);
        }
    }

    // full dense reconstruction against direct evolution
    {
        const Matrix Lh = materialize_dense(space, p);
        SpectralSet set = dense_spectral_set(Lh);
        const Matrix A = phase_operator(space);
        const Matrix B = momentum_operator(space);
        const Matrix rho0 = oracle::gaussian_state_unchecked(space, p.q0, p.p0);
        SpectralCoefficients coeffs = spectral_coefficients(set, B, A, rho0);
        std::vector<int> all(set.eigenvalues.size());
        for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        const OtocSeries rec = otoc_reconstruct_series(set.eigenvalues, coeffs, all, 50);
        const OtocSeries dir = otoc_direct(space, p, A, B, rho0, 50);
        double worst = 0.0;
        for (int t = 0; t <= 50; ++t)
            worst = std::max(worst, std::abs(rec.values[t] - dir.values[t]) /
                                        std::abs(dir.values[t]));
        run("full spectral reconstruction matches direct OTOC (rel)", worst, 1e-8);
    }

    // gamma = 1 limits
    {
        ModelParams pu = p;
        pu.gamma = 1.0;
        const Matrix X = random_matrix(space);
        run("gamma=1 channel is the identity",
            (apply_channel(space, 1.0, X) - X).cwiseAbs().maxCoeff(), 1e-12);
        const Matrix U = oracle::dense_floquet_unitary(space, pu);
        run("gamma=1 map is unitary conjugation",
            (apply_map(space, pu, X) - U * X * U.adjoint()).cwiseAbs().maxCoeff(), 1e-11);
        ModelParams pc = pu;
        const Eigen::Matrix2d J = step_jacobian(ClassicalState{0.3, 1.1}, pc);
        run("gamma=1 classical det J = 1", std::abs(J.determinant() - 1.0), 1e-13);
    }

    // classical tangent-map determinant
    {
        const Eigen::Matrix2d J = step_jacobian(ClassicalState{0.7, 2.3}, p);
        run("classical det J = gamma", std::abs(J.determinant() - p.gamma),
            1e-13 * (1.0 + std::abs(p.K)));
    }

    write_manifest(out, "validate", p, json{{"failures", failures}});
    std::cout << (failures == 0 ? "validate: all checks passed\n"
                                : "validate: " + std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int run_command(const std::string& command, const CliOptions& opts) {
    const ModelParams p = load_params(opts);
    Outputs out{fs::path(opts.out_dir), {}};
    if (command == "spectrum") return cmd_spectrum(p, opts, out);
    if (command == "otoc") return cmd_otoc(p, opts, out);
    if (command == "reconstruct") return cmd_reconstruct(p, opts, out);
    if (command == "weights") return cmd_weights(p, opts, out);
    if (command == "classical") return cmd_classical(p, opts, out);
    if (command == "validate") return cmd_validate(p, opts, out);
    throw ConfigError("unknown command: " + command);
}

}  // namespace dmkr

#include <CLI11.hpp>

namespace dmkr {

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"dissipative modified kicked rotator: propagator spectra and OTOC analysis"};
    app.require_subcommand(1);

    CliOptions opts;
    std::string times_csv, subset_csv;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "JSON config file")->required();
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_flag("--emit-plots", opts.emit_plots, "write plot scripts next to the CSVs");
    };

    auto* spectrum = app.add_subcommand("spectrum", "leading propagator eigenvalues");
    add_common(spectrum);
    auto* otoc = app.add_subcommand("otoc", "direct OTOC time series");
    add_common(otoc);
    otoc->add_option("--tmax", opts.tmax, "last kick time");
    auto* rec = app.add_subcommand("reconstruct", "truncated spectral reconstruction");
    add_common(rec);
    rec->add_option("--tmax", opts.tmax, "last kick time");
    rec->add_option("--subset", subset_csv, "eigenvalue indices, comma separated");
    auto* weights = app.add_subcommand("weights", "normalized term weights p_ij(t)");
    add_common(weights);
    weights->add_option("--top", opts.top, "number of leading eigenvalues");
    weights->add_option("--times", times_csv, "times, comma separated");
    auto* classical = app.add_subcommand("classical", "classical map diagnostics");
    add_common(classical);
    classical->add_option("--mode", opts.mode, "attractor | lyapunov");
    classical->add_option("--tmax", opts.tmax, "steps");
    auto* validate = app.add_subcommand("validate", "small-N oracle suite");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    auto parse_ints = [](const std::string& csv) {
        std::vector<int> out;
        std::stringstream ss(csv);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(std::stoi(item));
        return out;
    };
    if (!times_csv.empty()) opts.times = parse_ints(times_csv);
    if (!subset_csv.empty()) opts.subset = parse_ints(subset_csv);

    try {
        return run_command(app.get_subcommands().front()->get_name(), opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace dmkr
