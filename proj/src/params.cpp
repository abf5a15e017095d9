#include "dmkr/params.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

namespace dmkr {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown config key" + (where.empty() ? "" : " in " + where) + ": " +
                              it.key());
    }
}

template <typename T>
void read_into(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

void validate_params(const ModelParams& p) {
    if (!(p.gamma > 0.0 && p.gamma <= 1.0)) throw ConfigError("gamma must lie in (0,1]");
    if (p.N <= 0 || p.N % 2 != 0) throw ConfigError("N must be a positive even integer");
    if (!(p.K > 0.0)) throw ConfigError("K must be positive");
    if (!(p.h_eff > 0.0)) throw ConfigError("h_eff must be positive");
    if (p.arnoldi.k < 1) throw ConfigError("arnoldi.k must be >= 1");
    if (p.arnoldi.k >= p.arnoldi.krylov_dim)
        throw ConfigError("arnoldi.k must be smaller than arnoldi.krylov_dim");
    const long long n2 = static_cast<long long>(p.N) * p.N;
    if (p.arnoldi.krylov_dim > n2) throw ConfigError("arnoldi.krylov_dim must be <= N^2");
    if (!(p.arnoldi.tol > 0.0)) throw ConfigError("arnoldi.tol must be positive");
    if (p.arnoldi.max_restarts < 0) throw ConfigError("arnoldi.max_restarts must be >= 0");
}

ModelParams parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config document: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config document must be a JSON object");

    reject_unknown_keys(doc,
                        {"K", "h_eff", "gamma", "a", "phi", "N", "q0", "p0", "seed", "arnoldi",
                         "force_variant"},
                        "");

    ModelParams p;
    if (!doc.contains("K")) throw ConfigError("missing required key: K");
    read_into(doc, "K", p.K);
    read_into(doc, "h_eff", p.h_eff);
    read_into(doc, "gamma", p.gamma);
    read_into(doc, "a", p.a);
    read_into(doc, "phi", p.phi);
    read_into(doc, "N", p.N);
    read_into(doc, "q0", p.q0);
    read_into(doc, "p0", p.p0);
    read_into(doc, "seed", p.seed);

    if (doc.contains("arnoldi")) {
        const json& arn = doc.at("arnoldi");
        if (!arn.is_object()) throw ConfigError("arnoldi must be an object");
        reject_unknown_keys(arn, {"k", "krylov_dim", "tol", "max_restarts"}, "arnoldi");
        read_into(arn, "k", p.arnoldi.k);
        read_into(arn, "krylov_dim", p.arnoldi.krylov_dim);
        read_into(arn, "tol", p.arnoldi.tol);
        read_into(arn, "max_restarts", p.arnoldi.max_restarts);
    }
    if (doc.contains("force_variant")) {
        std::string v;
        read_into(doc, "force_variant", v);
        if (v == "potential")
            p.force = ForceVariant::Potential;
        else if (v == "map")
            p.force = ForceVariant::Map;
        else
            throw ConfigError("force_variant must be \"potential\" or \"map\"");
    }

    validate_params(p);
    return p;
}

std::string force_variant_name(ForceVariant v) {
    return v == ForceVariant::Potential ? "potential" : "map";
}

}  // namespace dmkr
