#pragma once

// Named parameter sets for the standard figures.

#include <string>
#include <vector>

#include "errors.hpp"
#include "params.hpp"

namespace deit {

inline const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{"fig1c", "fig2", "fig3", "fig4"};
    return names;
}

/// Scenario document (gamma = 1, L = 1) for a named preset.
inline json preset_document(const std::string& name)
{
    json d{
        {"gamma", 1.0},
        {"length_L", 1.0},
        {"cloud_count", 2},
        {"separation_ell", 0.5},
        {"v0", 10.0},
        {"beta", "magic"},
        {"omega_c", 10.0},
        {"delta_p", -6.5},
        {"delta_c", 0.0},
        {"kappa", 9.0},
        {"phi_c", {0.0, 0.0}},
        {"k_c", 0.0},
        {"k_s", 0.0},
        {"rho", 1.0},
        {"retarded_frame", true},
    };
    if (name == "fig1c" || name == "fig2" || name == "fig3")
        return d;
    if (name == "fig4") {
        d["cloud_count"] = 9;
        d["phi_c"] = std::vector<double>(9, 0.0);
        return d;
    }
    throw ConfigError("unknown preset '" + name + "' (expected fig1c, fig2, fig3 or fig4)");
}

inline ScenarioParams preset(const std::string& name)
{
    return load_scenario(preset_document(name));
}

} // namespace deit
