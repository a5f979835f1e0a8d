#pragma once

// Command-line front end. Every subcommand writes CSV tables plus a
// manifest.json into the output directory.
//
// exit codes: 0 success, 1 invalid input, 2 solver abort

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <deit/deit.hpp>

namespace deit::cli {

inline constexpr const char* tool_version = "0.1.0";

inline std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a(const std::string& s)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string scenario_hash(const ScenarioParams& p)
{
    return fnv1a(serialize_scenario(p).dump());
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path)
    {
        if (!out_)
            throw ConfigError("cannot write '" + path.string() + "'");
        row(header);
    }

    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

    void row(std::initializer_list<double> cells)
    {
        bool first = true;
        for (double x : cells) {
            out_ << (first ? "" : ",") << fmt(x);
            first = false;
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

struct Common {
    std::string scenario;
    std::string preset_name;
    std::string out_dir;
    int threads = 1;
};

struct Session {
    std::filesystem::path dir;
    json manifest;
    std::vector<std::string> files;

    std::filesystem::path file(const std::string& name)
    {
        files.push_back(name);
        return dir / name;
    }
};

inline ScenarioParams load_params(const Common& c, const std::string& fallback)
{
    if (!c.scenario.empty() && !c.preset_name.empty())
        throw ConfigError("--scenario and --preset are mutually exclusive");
    if (!c.scenario.empty())
        return load_scenario_file(c.scenario);
    return preset(c.preset_name.empty() ? fallback : c.preset_name);
}

inline json grid_summary(const Grid& g)
{
    return {{"n_z", g.n_z}, {"n_t", g.n_t}, {"dz", g.dz}, {"dt", g.dt}, {"t_end", g.t_end()},
            {"retarded_frame", g.retarded_frame}};
}

// ---------------------------------------------------------------- ddi-scan

struct DdiScanOpts {
    int points = 1000;
    double span = 5.0; // in units of ell
};

inline void ddi_scan(const ScenarioParams& p, const DdiScanOpts& o, Session& s)
{
    if (o.points < 2)
        throw ConfigError("--points must be >= 2");
    if (p.cloud_count < 2)
        throw ConfigError("ddi-scan needs separation_ell (cloud_count >= 2)");
    const DdiKernel k(p.c3, p.beta, p.separation_ell);
    const double ell = p.separation_ell;
    // Even point counts on a symmetric span never hit dz = 0 exactly.
    const auto dz = linspace(-o.span * ell, o.span * ell, static_cast<std::size_t>(o.points));
    CsvWriter csv(s.file("ddi_scan.csv"),
                  {"dz[L]", "dz_over_ell[1]", "v_intra[gamma]", "v_inter[gamma]", "v_square_well[gamma]"});
    double intra_max = 0.0;
    for (double x : dz) {
        const double intra = x == 0.0 ? 0.0 : k.strength(x, 0.0, true);
        intra_max = std::max(intra_max, std::abs(intra));
        csv.row({x, x / ell, intra, k.strength(x, 0.0, false), k.square_well(x, 0.0)});
    }
    s.manifest["results"] = {{"v0", k.peak()},
                             {"z_d", k.halfwidth()},
                             {"fwhm", 2.0 * k.halfwidth()},
                             {"fwhm_over_ell", 2.0 * k.halfwidth() / ell},
                             {"max_abs_intra", intra_max}};
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOpts {
    double dp_min = -20.0;
    double dp_max = 20.0;
    int points = 2001;
    int depth_nz = 200;
};

inline void spectrum(const ScenarioParams& p, const SpectrumOpts& o, int threads, Session& s)
{
    if (p.cloud_count != 2)
        throw ConfigError("spectrum needs cloud_count = 2");
    if (o.points < 2 || o.depth_nz < 2)
        throw ConfigError("--points and --depth-nz must be >= 2");
    const DdiKernel k(p.c3, p.beta, p.separation_ell);
    Grid g{o.depth_nz, 1, p.length_L / o.depth_nz, 1.0, p.retarded_frame};
    const SpectralModel model(p, k, uniform_spinwave(p, g));
    const auto dps = linspace(o.dp_min, o.dp_max, static_cast<std::size_t>(o.points));
    const auto rows = spectrum_sweep(model, dps, threads);
    const double scale = p.gamma / p.kappa[0];
    CsvWriter csv(s.file("spectrum.csv"),
                  {"delta_p[gamma]", "im_eta_plus_L[1]", "im_eta_minus_L[1]", "im_X_plus_total[1]",
                   "im_X_minus_total[1]", "im_eta_noninteracting_L[1]", "im_eta_plus_L_scaled[gamma/kappa]",
                   "im_eta_minus_L_scaled[gamma/kappa]", "im_X_plus_total_scaled[gamma/kappa]",
                   "im_X_minus_total_scaled[gamma/kappa]", "im_eta_noninteracting_L_half_scaled[gamma/kappa]"});
    std::vector<double> ep, em, xp, xm;
    for (const auto& r : rows) {
        csv.row({r.delta_p, r.eta_plus.imag(), r.eta_minus.imag(), r.x_plus_total.imag(), r.x_minus_total.imag(),
                 r.eta_free.imag(), scale * r.eta_plus.imag(), scale * r.eta_minus.imag(),
                 scale * r.x_plus_total.imag(), scale * r.x_minus_total.imag(), 0.5 * scale * r.eta_free.imag()});
        ep.push_back(r.eta_plus.imag());
        em.push_back(r.eta_minus.imag());
        xp.push_back(r.x_plus_total.imag());
        xm.push_back(r.x_minus_total.imag());
    }
    auto peaks = [&](const std::vector<double>& y) {
        json a = json::array();
        for (const auto& pk : local_maxima(dps, y))
            a.push_back({{"delta_p", pk.x}, {"height", pk.height}, {"width", half_max_width(dps, y, pk.index)}});
        return a;
    };
    s.manifest["results"] = {
        {"peaks_eta_plus", peaks(ep)},
        {"peaks_eta_minus", peaks(em)},
        {"peaks_X_plus", peaks(xp)},
        {"peaks_X_minus", peaks(xm)},
        {"roots_re_delta_s_eq_plus_v0", shifted_peak_detunings(p, +1, o.dp_min, o.dp_max)},
        {"roots_re_delta_s_eq_minus_v0", shifted_peak_detunings(p, -1, o.dp_min, o.dp_max)},
    };
}

// ---------------------------------------------------------------- propagate

struct PropagateOpts {
    std::string input = "A";
    std::optional<double> phi;
    int n_z = 256;
    long n_t = 0;
    int stride = 4;
    std::string kernel = "actual";
    bool history = false;
};

inline std::vector<cplx> input_amplitudes(const std::string& name)
{
    if (name == "A")
        return {1.0, 0.0};
    if (name == "B")
        return {0.0, 1.0};
    if (name == "equal")
        return {std::sqrt(0.5), std::sqrt(0.5)};
    throw ConfigError("--input must be A, B or equal");
}

inline KernelShape kernel_shape(const std::string& name)
{
    if (name == "actual")
        return KernelShape::actual;
    if (name == "square")
        return KernelShape::square_well;
    throw ConfigError("--kernel must be actual or square");
}

inline void propagate_cmd(ScenarioParams p, const PropagateOpts& o, int threads, Session& s)
{
    if (p.cloud_count != 2)
        throw ConfigError("propagate needs cloud_count = 2");
    if (o.phi) {
        p.phi_c = {*o.phi, 0.0};
        validate(p);
    }
    const auto amps = input_amplitudes(o.input);
    const KernelShape shape = kernel_shape(o.kernel);
    const DdiKernel k(p.c3, p.beta, p.separation_ell);
    const PulseTiming timing = default_pulse_timing(p);
    double dt = default_dt(p, k, shape, o.n_z);
    long n_t = static_cast<long>(std::ceil(timing.t_end / dt));
    if (o.n_t > 0) {
        n_t = o.n_t;
        dt = timing.t_end / static_cast<double>(n_t);
    }
    const Grid g = make_grid(p, o.n_z, n_t, dt);
    const auto spin = uniform_spinwave(p, g);
    const auto pulse = gaussian_input_pulse(timing.center, timing.width, amps);
    const auto r = propagate(p, g, k, spin, pulse, SolverOptions{shape, o.stride, threads});

    const SpectralModel model(p, k, spin, shape);
    const auto depth = integrated_optical_depth(model, threads);
    const ModeWeights w0 = input_mode_weights(amps[0], amps[1], p.phi_ab());
    const auto an = analytic_prob_pm(depth, w0.plus, w0.minus);
    const auto sw = square_well_prob_pm(normal_mode_coeffs(p), g.z_nodes(), w0.plus, w0.minus);

    CsvWriter csv(s.file("prob_pm.csv"), {"z[L]", "P_plus[1]", "P_minus[1]", "P_plus_analytic[1]",
                                          "P_minus_analytic[1]", "P_plus_square_well[1]", "P_minus_square_well[1]"});
    for (std::size_t j = 0; j < g.nodes(); ++j)
        csv.row({g.z(j), r.pm->plus[j], r.pm->minus[j], an.plus[j], an.minus[j], sw.plus[j], sw.minus[j]});

    if (o.history) {
        CsvWriter h(s.file("field_history.csv"),
                    {"t[1/gamma]", "z[L]", "cloud[1]", "re_omega_p[1]", "im_omega_p[1]"});
        for (std::size_t i = 0; i < r.history.samples(); ++i)
            for (std::size_t mu = 0; mu < 2; ++mu)
                for (std::size_t j = 0; j < g.nodes(); ++j) {
                    const cplx v = r.history.at(mu, j, i);
                    h.row({r.history.times()[i], g.z(j), static_cast<double>(mu), v.real(), v.imag()});
                }
    }

    const std::size_t last = g.nodes() - 1;
    s.manifest["grid"] = grid_summary(g);
    s.manifest["warnings"] = r.warnings;
    s.manifest["results"] = {
        {"steps", r.steps},
        {"pulse", {{"center", timing.center}, {"width", timing.width}, {"t_end", timing.t_end}}},
        {"P_plus_L", r.pm->plus[last]},
        {"P_minus_L", r.pm->minus[last]},
        {"P_plus_L_analytic", an.plus[last]},
        {"P_minus_L_analytic", an.minus[last]},
    };
    for (const auto& w : r.warnings)
        std::cerr << "warning: " << w << '\n';
}

// ---------------------------------------------------------------- lattice

struct LatticeOpts {
    std::optional<int> source; // 1-based
    int points = 201;
    double sigma0 = 1.5;
    std::optional<int> clouds;
};

inline void write_diffusion(const LatticeSystem& sys, double ell, double sigma0, double length, int points,
                            Session& s, const std::string& name)
{
    const auto dp = diffusion_params(sys, ell);
    const double center = 0.5 * static_cast<double>(sys.size() - 1);
    const auto w0 = gaussian_lattice_input(sys.size(), sigma0, ell, center);
    const double n0 = total_intensity(w0);
    CsvWriter csv(s.file(name), {"z[L]", "h_analytic[1]", "sigma_sq_analytic[L^2]", "h_discrete[1]",
                                 "sigma_sq_discrete[L^2]"});
    double worst = 0.0;
    bool broke = false;
    for (double z : linspace(0.0, length, static_cast<std::size_t>(points))) {
        const auto m = lattice_moments(sys.propagate(w0, z), ell);
        double ha = NAN, sa = NAN;
        try {
            const auto law = gaussian_norm_width(z, sigma0, dp);
            ha = law.h;
            sa = law.sigma_sq;
            worst = std::max({worst, std::abs(m.norm / n0 / ha - 1.0), std::abs(m.sigma_sq / sa - 1.0)});
        } catch (const DomainError&) {
            broke = true;
        }
        csv.row({z, ha, sa, m.norm / n0, m.sigma_sq});
    }
    s.manifest["results"]["diffusion"] = {{"clouds", sys.size()},
                                          {"sigma0", sigma0},
                                          {"m_r_inv", dp.m_r_inv},
                                          {"m_i_inv", dp.m_i_inv},
                                          {"gamma_re", dp.gamma_cap.real()},
                                          {"gamma_im", dp.gamma_cap.imag()},
                                          {"max_rel_error", worst},
                                          {"closed_form_breakdown", broke}};
}

inline void multicloud(const ScenarioParams& p, const LatticeOpts& o, Session& s)
{
    if (p.cloud_count < 2)
        throw ConfigError("multicloud needs cloud_count >= 2");
    if (o.points < 2)
        throw ConfigError("--points must be >= 2");
    const int n = p.cloud_count;
    const int source = o.source.value_or((n + 1) / 2);
    if (source < 1 || source > n)
        throw ConfigError("--source must be in [1, cloud_count]");
    const LatticeSystem sys(static_cast<std::size_t>(n), lattice_chis(p));

    std::vector<cplx> w0(static_cast<std::size_t>(n));
    w0[static_cast<std::size_t>(source - 1)] = 1.0;
    {
        CsvWriter csv(s.file("intensity.csv"), {"z[L]", "cloud[1]", "intensity[1]", "total_intensity[1]"});
        for (double z : linspace(0.0, p.length_L, static_cast<std::size_t>(o.points))) {
            const auto w = sys.propagate(w0, z);
            const double tot = total_intensity(w);
            for (int mu = 0; mu < n; ++mu)
                csv.row({z, static_cast<double>(mu + 1), std::norm(w[static_cast<std::size_t>(mu)]), tot});
        }
    }
    {
        CsvWriter csv(s.file("eigenvalues.csv"), {"k[1]", "re_eps[1/L]", "im_eps[1/L]"});
        for (std::size_t k = 1; k <= sys.size(); ++k)
            csv.row({static_cast<double>(k), sys.eigenvalue(k).real(), sys.eigenvalue(k).imag()});
        CsvWriter vec(s.file("eigenvectors.csv"), {"k[1]", "cloud[1]", "re_u[1]", "im_u[1]"});
        for (std::size_t k = 1; k <= sys.size(); ++k) {
            const auto u = sys.eigenvector(k);
            for (std::size_t mu = 0; mu < u.size(); ++mu)
                vec.row({static_cast<double>(k), static_cast<double>(mu + 1), u[mu], 0.0});
        }
    }
    s.manifest["results"] = {{"clouds", n},
                             {"source", source},
                             {"chi_d", {sys.chi_d().real(), sys.chi_d().imag()}},
                             {"chi_s", {sys.chi_s().real(), sys.chi_s().imag()}}};
    write_diffusion(sys, p.separation_ell, o.sigma0, p.length_L, o.points, s, "diffusion.csv");
}

inline void diffusion_check(ScenarioParams p, const LatticeOpts& o, Session& s)
{
    const int n = o.clouds.value_or(41);
    if (n < 2)
        throw ConfigError("--clouds must be >= 2");
    if (o.points < 2)
        throw ConfigError("--points must be >= 2");
    if (p.cloud_count < 2 && !(p.separation_ell > 0.0))
        throw ConfigError("diffusion-check needs separation_ell");
    p.cloud_count = n;
    p.omega_c.assign(static_cast<std::size_t>(n), p.omega_c[0]);
    p.delta_p.assign(static_cast<std::size_t>(n), p.delta_p[0]);
    p.delta_c.assign(static_cast<std::size_t>(n), p.delta_c[0]);
    p.kappa.assign(static_cast<std::size_t>(n), p.kappa[0]);
    p.phi_c.assign(static_cast<std::size_t>(n), 0.0);
    p.spinwave_weights.assign(static_cast<std::size_t>(n), 1.0 / n);
    const LatticeSystem sys(static_cast<std::size_t>(n), lattice_chis(p));
    s.manifest["results"] = json::object();
    write_diffusion(sys, p.separation_ell, o.sigma0, p.length_L, o.points, s, "diffusion.csv");
    const auto& d = s.manifest["results"]["diffusion"];
    std::cout << "diffusion-check: N = " << n << ", sigma0 = " << fmt(o.sigma0)
              << ", max relative error = " << fmt(d["max_rel_error"].get<double>()) << '\n';
}

// ---------------------------------------------------------------- driver

inline int run(int argc, char** argv)
{
    CLI::App app{"Single-photon EIT propagation in dipole-coupled atomic clouds"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    Common common;
    const char* env_out = std::getenv("DEIT_OUT_DIR");
    common.out_dir = env_out && *env_out ? env_out : ".";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", common.scenario, "Scenario JSON file");
        sub->add_option("--preset", common.preset_name, "Named parameter set (fig1c, fig2, fig3, fig4)");
        sub->add_option("--out", common.out_dir, "Output directory (default: $DEIT_OUT_DIR or .)");
        sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
    };

    DdiScanOpts ddi;
    auto* c_ddi = app.add_subcommand("ddi-scan", "Exchange strength versus axial offset");
    add_common(c_ddi);
    c_ddi->add_option("--points", ddi.points, "Number of offsets");
    c_ddi->add_option("--span", ddi.span, "Half range in units of ell");

    SpectrumOpts spec;
    auto* c_spec = app.add_subcommand("spectrum", "Optical depth of both normal modes versus probe detuning");
    add_common(c_spec);
    c_spec->add_option("--dp-min", spec.dp_min, "Lowest probe detuning [gamma]");
    c_spec->add_option("--dp-max", spec.dp_max, "Highest probe detuning [gamma]");
    c_spec->add_option("--points", spec.points, "Sweep points");
    c_spec->add_option("--depth-nz", spec.depth_nz, "Intervals for the optical-depth quadrature");

    PropagateOpts prop;
    double phi = 0.0;
    auto* c_prop = app.add_subcommand("propagate", "Time-domain propagation through two clouds");
    add_common(c_prop);
    c_prop->add_option("--input", prop.input, "Input cloud amplitudes: A, B or equal");
    auto* phi_opt = c_prop->add_option("--phi", phi, "Control phase difference phi_A - phi_B [rad]");
    c_prop->add_option("--grid-nz", prop.n_z, "Intervals along z");
    c_prop->add_option("--grid-nt", prop.n_t, "Time steps (default: from the stability estimate)");
    c_prop->add_option("--stride", prop.stride, "Record every n-th time step");
    c_prop->add_option("--kernel", prop.kernel, "actual or square");
    c_prop->add_flag("--history", prop.history, "Also write the full field history");

    LatticeOpts lat;
    int source = 0;
    int clouds = 0;
    auto* c_multi = app.add_subcommand("multicloud", "Nearest-neighbour lattice of N clouds");
    add_common(c_multi);
    auto* source_opt = c_multi->add_option("--source", source, "Input cloud (1-based, default: centre)");
    c_multi->add_option("--points", lat.points, "Samples along z");
    c_multi->add_option("--sigma0", lat.sigma0, "Gaussian width for the diffusion table [L]");

    auto* c_diff = app.add_subcommand("diffusion-check", "Gaussian norm and width laws against the lattice");
    add_common(c_diff);
    auto* clouds_opt = c_diff->add_option("--clouds", clouds, "Number of clouds (default 41)");
    c_diff->add_option("--points", lat.points, "Samples along z");
    c_diff->add_option("--sigma0", lat.sigma0, "Initial width [L]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        Session s;
        s.dir = common.out_dir;
        std::filesystem::create_directories(s.dir);
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        ScenarioParams p;
        if (name == "ddi-scan") {
            p = load_params(common, "fig1c");
        } else if (name == "multicloud") {
            p = load_params(common, "fig4");
        } else {
            p = load_params(common, "fig3");
        }
        s.manifest["subcommand"] = name;
        s.manifest["tool"] = "deit";
        s.manifest["version"] = tool_version;
        s.manifest["scenario_hash"] = scenario_hash(p);
        s.manifest["scenario"] = serialize_scenario(p);

        if (name == "ddi-scan") {
            ddi_scan(p, ddi, s);
        } else if (name == "spectrum") {
            spectrum(p, spec, common.threads, s);
        } else if (name == "propagate") {
            if (phi_opt->count())
                prop.phi = phi;
            propagate_cmd(p, prop, common.threads, s);
        } else if (name == "multicloud") {
            if (source_opt->count())
                lat.source = source;
            multicloud(p, lat, s);
        } else {
            if (clouds_opt->count())
                lat.clouds = clouds;
            diffusion_check(p, lat, s);
        }

        s.manifest["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        s.files.push_back("manifest.json");
        s.manifest["files"] = s.files;
        std::ofstream(s.dir / "manifest.json") << s.manifest.dump(2) << '\n';
        for (const auto& f : s.files)
            std::cout << (s.dir / f).string() << '\n';
        return 0;
    } catch (const SolverAbort& e) {
        std::cerr << "solver abort: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace deit::cli
