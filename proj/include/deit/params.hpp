#pragma once

// Scenario configuration in gamma-normalised units (gamma = 1, L = 1, hbar = 1).
//
// The config document may carry physical values: every frequency-like field
// is given in the same unit as `gamma` and every length in the unit of
// `length_L`. Loading divides them out and keeps the original scale in
// `ScenarioParams::units` for output labelling.

#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddi_kernel.hpp"
#include "errors.hpp"
#include "quadrature.hpp"

namespace deit {

using json = nlohmann::json;

/// Physical value of the normalisation units as read from the document.
struct UnitScale {
    double gamma = 1.0;  // frequency unit
    double length = 1.0; // length unit
};

struct ScenarioParams {
    double gamma = 1.0;
    double length_L = 1.0;
    int cloud_count = 1;
    double separation_ell = 0.0;
    double c3 = 0.0;
    double beta = 0.0;
    std::vector<double> omega_c;
    std::vector<double> delta_p;
    std::vector<double> delta_c;
    std::vector<double> kappa;
    std::vector<double> phi_c;
    double k_c = 0.0;
    double k_s = 0.0;
    double rho = 1.0;
    double c_light = std::numeric_limits<double>::infinity();
    bool retarded_frame = true;
    /// Fraction of the shared excitation held by each cloud; sums to 1.
    std::vector<double> spinwave_weights;
    UnitScale units;

    /// Peak inter-cloud exchange strength C3/ell^3.
    double v0() const
    {
        return separation_ell > 0.0 ? c3 / (separation_ell * separation_ell * separation_ell) : 0.0;
    }

    double phi_ab() const { return cloud_count >= 2 ? phi_c[0] - phi_c[1] : 0.0; }

    std::size_t clouds() const { return static_cast<std::size_t>(cloud_count); }
};

/// Delta_p = delta_p + i gamma.
struct ComplexDetuning {
    cplx value;
};

namespace detail {

inline const json& require(const json& doc, const char* key)
{
    if (!doc.contains(key))
        throw ConfigError(std::string("missing field '") + key + "'");
    return doc.at(key);
}

inline double number(const json& v, const char* key)
{
    if (!v.is_number())
        throw ConfigError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

// Scalars broadcast to every cloud; arrays must match cloud_count.
inline std::vector<double> per_cloud(const json& doc, const char* key, std::size_t n,
                                     std::optional<double> fallback = std::nullopt)
{
    if (!doc.contains(key)) {
        if (fallback)
            return std::vector<double>(n, *fallback);
        throw ConfigError(std::string("missing field '") + key + "'");
    }
    const json& v = doc.at(key);
    if (v.is_number())
        return std::vector<double>(n, v.get<double>());
    if (!v.is_array())
        throw ConfigError(std::string("field '") + key + "' must be a number or an array");
    if (v.size() != n)
        throw ConfigError(std::string("array '") + key + "' has length " + std::to_string(v.size()) +
                          ", expected cloud_count = " + std::to_string(n));
    std::vector<double> out;
    out.reserve(n);
    for (const auto& x : v)
        out.push_back(number(x, key));
    return out;
}

} // namespace detail

/// Throws ConfigError on the first violated invariant.
inline void validate(const ScenarioParams& p)
{
    if (!(p.gamma > 0.0))
        throw ConfigError("gamma must be positive");
    if (!(p.length_L > 0.0))
        throw ConfigError("length_L must be positive");
    if (p.cloud_count < 1)
        throw ConfigError("cloud_count must be >= 1");
    if (p.cloud_count >= 2 && !(p.separation_ell > 0.0))
        throw ConfigError("separation_ell must be positive when cloud_count >= 2");
    if (!(p.rho > 0.0))
        throw ConfigError("rho must be positive");
    const auto n = p.clouds();
    auto check = [n](const std::vector<double>& a, const char* name) {
        if (a.size() != n)
            throw ConfigError(std::string("array '") + name + "' has length " +
                              std::to_string(a.size()) + ", expected cloud_count = " +
                              std::to_string(n));
    };
    check(p.omega_c, "omega_c");
    check(p.delta_p, "delta_p");
    check(p.delta_c, "delta_c");
    check(p.kappa, "kappa");
    check(p.phi_c, "phi_c");
    check(p.spinwave_weights, "spinwave_weights");
    double wsum = 0.0;
    for (double w : p.spinwave_weights) {
        if (w < 0.0)
            throw ConfigError("spinwave_weights must be non-negative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw ConfigError("spinwave_weights must sum to 1");
}

/// Builds validated, gamma-normalised parameters from a config tree.
inline ScenarioParams load_scenario(const json& doc)
{
    using detail::number;
    using detail::require;

    ScenarioParams p;
    const double gamma = number(require(doc, "gamma"), "gamma");
    const double length = number(require(doc, "length_L"), "length_L");
    if (!(gamma > 0.0))
        throw ConfigError("gamma must be positive");
    if (!(length > 0.0))
        throw ConfigError("length_L must be positive");
    p.units = {gamma, length};

    const json& count = require(doc, "cloud_count");
    if (!count.is_number_integer() || count.get<long>() < 1)
        throw ConfigError("cloud_count must be an integer >= 1");
    p.cloud_count = count.get<int>();
    const auto n = p.clouds();

    const double freq = 1.0 / gamma;
    auto scaled = [](std::vector<double> v, double s) {
        for (double& x : v)
            x *= s;
        return v;
    };

    p.omega_c = scaled(detail::per_cloud(doc, "omega_c", n), freq);
    p.delta_p = scaled(detail::per_cloud(doc, "delta_p", n), freq);
    p.delta_c = scaled(detail::per_cloud(doc, "delta_c", n), freq);
    p.kappa = scaled(detail::per_cloud(doc, "kappa", n), length / gamma);
    p.phi_c = detail::per_cloud(doc, "phi_c", n, 0.0);

    if (doc.contains("beta")) {
        const json& b = doc.at("beta");
        if (b.is_string() && b.get<std::string>() == "magic")
            p.beta = magic_angle();
        else
            p.beta = number(b, "beta");
    } else {
        p.beta = magic_angle();
    }

    p.k_c = doc.contains("k_c") ? number(doc.at("k_c"), "k_c") * length : 0.0;
    p.k_s = doc.contains("k_s") ? number(doc.at("k_s"), "k_s") * length : 0.0;
    p.rho = doc.contains("rho") ? number(doc.at("rho"), "rho") * length : 1.0;
    if (doc.contains("c_light"))
        p.c_light = number(doc.at("c_light"), "c_light") / (gamma * length);
    if (doc.contains("retarded_frame")) {
        if (!doc.at("retarded_frame").is_boolean())
            throw ConfigError("field 'retarded_frame' must be a boolean");
        p.retarded_frame = doc.at("retarded_frame").get<bool>();
    }

    if (n >= 2) {
        p.separation_ell = number(require(doc, "separation_ell"), "separation_ell") / length;
        if (!(p.separation_ell > 0.0))
            throw ConfigError("separation_ell must be positive when cloud_count >= 2");
        const double ell3 = p.separation_ell * p.separation_ell * p.separation_ell;
        const bool has_c3 = doc.contains("c3");
        const bool has_v0 = doc.contains("v0");
        if (!has_c3 && !has_v0)
            throw ConfigError("missing field 'c3' (or 'v0')");
        const double c3 = has_c3 ? number(doc.at("c3"), "c3") / (gamma * length * length * length) : 0.0;
        const double v0 = has_v0 ? number(doc.at("v0"), "v0") * freq : 0.0;
        if (has_c3 && has_v0) {
            const double ref = std::max(std::abs(c3), std::abs(v0 * ell3));
            if (std::abs(c3 - v0 * ell3) > 1e-9 * ref)
                throw ConfigError("c3 and v0 are inconsistent (c3 != v0 * ell^3)");
        }
        p.c3 = has_c3 ? c3 : v0 * ell3;
    } else if (doc.contains("separation_ell")) {
        p.separation_ell = number(doc.at("separation_ell"), "separation_ell") / length;
    }

    if (doc.contains("spinwave_weights")) {
        p.spinwave_weights = detail::per_cloud(doc, "spinwave_weights", n);
        double s = 0.0;
        for (double w : p.spinwave_weights)
            s += w;
        if (!(s > 0.0))
            throw ConfigError("spinwave_weights must have a positive sum");
        for (double& w : p.spinwave_weights)
            w /= s;
    } else {
        p.spinwave_weights.assign(n, 1.0 / static_cast<double>(n));
    }

    validate(p);
    return p;
}

inline ScenarioParams load_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read scenario file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario file '" + path + "' is not valid JSON: " + e.what());
    }
    return load_scenario(doc);
}

/// Normalised-unit document; load_scenario(serialize_scenario(p)) == p.
inline json serialize_scenario(const ScenarioParams& p)
{
    json doc;
    doc["gamma"] = 1.0;
    doc["length_L"] = 1.0;
    doc["cloud_count"] = p.cloud_count;
    if (p.cloud_count >= 2 || p.separation_ell > 0.0)
        doc["separation_ell"] = p.separation_ell;
    if (p.cloud_count >= 2)
        doc["c3"] = p.c3;
    doc["beta"] = p.beta;
    doc["omega_c"] = p.omega_c;
    doc["delta_p"] = p.delta_p;
    doc["delta_c"] = p.delta_c;
    doc["kappa"] = p.kappa;
    doc["phi_c"] = p.phi_c;
    doc["k_c"] = p.k_c;
    doc["k_s"] = p.k_s;
    doc["rho"] = p.rho;
    if (std::isfinite(p.c_light))
        doc["c_light"] = p.c_light;
    doc["retarded_frame"] = p.retarded_frame;
    doc["spinwave_weights"] = p.spinwave_weights;
    doc["units"] = {{"gamma", p.units.gamma}, {"length", p.units.length}};
    return doc;
}

inline ComplexDetuning complex_probe_detuning(const ScenarioParams& p, std::size_t cloud)
{
    if (cloud >= p.clouds())
        throw std::out_of_range("cloud index " + std::to_string(cloud) + " out of range");
    return {cplx{p.delta_p[cloud], p.gamma}};
}

} // namespace deit
