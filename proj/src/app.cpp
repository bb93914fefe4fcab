#include "anisodec/app.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "anisodec/angdiff.hpp"
#include "anisodec/errors.hpp"
#include "anisodec/locrate.hpp"
#include "anisodec/parallel.hpp"
#include "anisodec/rotorsim.hpp"

namespace anisodec::app {

using json = nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Writers

namespace {

std::string fmt(double v) {
    if (v == 0.0) return "0";  // avoids "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

}  // namespace

std::string render_csv(const Table& t) {
    std::ostringstream os;
    os << "# anisodec output format " << output_format_version << "\n";
    for (const auto& [k, v] : t.header) os << "# " << k << ": " << v << "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << fmt(row[c]);
        os << "\n";
    }
    return os.str();
}

std::string render_json(const Table& t) {
    json header = json::object();
    header["format_version"] = output_format_version;
    for (const auto& [k, v] : t.header) header[k] = v;
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (std::isfinite(row[c]))
                r[t.columns[c]] = row[c];
            else
                r[t.columns[c]] = nullptr;
        }
        rows.push_back(std::move(r));
    }
    json doc = {{"header", header}, {"columns", t.columns}, {"rows", rows}};
    return doc.dump(2) + "\n";
}

fs::path write_table(const Table& t, const fs::path& dir, Format f) {
    fs::create_directories(dir);
    const fs::path path = dir / (t.name + (f == Format::csv ? ".csv" : ".json"));
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << (f == Format::csv ? render_csv(t) : render_json(t));
    if (!os) throw std::runtime_error("failed writing " + path.string());
    return path;
}

// ---------------------------------------------------------------------------
// Schema helpers

namespace {

class Block {
public:
    Block(const json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw SchemaError(path_ + ": expected an object");
        for (const auto& [k, v] : j_.items())
            if (!allowed.count(k)) throw SchemaError(path_ + ": unknown key '" + k + "'");
    }

    bool has(const std::string& k) const { return j_.contains(k); }
    std::string where(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    double number(const std::string& k) const {
        if (!has(k)) throw SchemaError("missing key '" + where(k) + "'");
        const auto& v = j_.at(k);
        if (!v.is_number()) throw SchemaError(where(k) + ": expected a number");
        return v.get<double>();
    }
    double number(const std::string& k, double fallback) const { return has(k) ? number(k) : fallback; }

    long long integer(const std::string& k) const {
        if (!has(k)) throw SchemaError("missing key '" + where(k) + "'");
        const auto& v = j_.at(k);
        if (!v.is_number_integer()) throw SchemaError(where(k) + ": expected an integer");
        return v.get<long long>();
    }
    long long integer(const std::string& k, long long fallback) const { return has(k) ? integer(k) : fallback; }

    std::string string(const std::string& k, const std::string& fallback) const {
        if (!has(k)) return fallback;
        const auto& v = j_.at(k);
        if (!v.is_string()) throw SchemaError(where(k) + ": expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& k) const {
        if (!has(k)) throw SchemaError("missing key '" + where(k) + "'");
        const auto& v = j_.at(k);
        if (!v.is_array()) throw SchemaError(where(k) + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw SchemaError(where(k) + ": expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<std::string> strings(const std::string& k) const {
        if (!has(k)) throw SchemaError("missing key '" + where(k) + "'");
        const auto& v = j_.at(k);
        if (!v.is_array()) throw SchemaError(where(k) + ": expected an array of strings");
        std::vector<std::string> out;
        for (const auto& e : v) {
            if (!e.is_string()) throw SchemaError(where(k) + ": expected an array of strings");
            out.push_back(e.get<std::string>());
        }
        return out;
    }

    Vec3 vec3(const std::string& k) const {
        const auto v = numbers(k);
        if (v.size() != 3) throw SchemaError(where(k) + ": expected three components");
        return {v[0], v[1], v[2]};
    }
    Vec3 vec3(const std::string& k, const Vec3& fallback) const { return has(k) ? vec3(k) : fallback; }

    Block child(const std::string& k, std::set<std::string> allowed) const {
        if (!has(k)) throw SchemaError("missing section '" + where(k) + "'");
        return {j_.at(k), where(k), std::move(allowed)};
    }

private:
    const json& j_;
    std::string path_;
};

const std::set<std::string> scenarios = {"rate-gas", "rate-photon", "rate-photon-isotropic", "diffusion",
                                         "populations", "classical-sim", "fig1", "fig2a", "fig2b"};

struct Common {
    std::string scenario;
    fs::path out_dir;
    std::string stem;
    Format format = Format::csv;
    std::vector<std::pair<std::string, std::string>> echo;  // flattened config
};

std::vector<double> theta_grid(const Block& root) {
    if (!root.has("theta")) return theta_grid(Block(json{{"points", 181}}, "theta", {"points"}));
    const Block t = root.child("theta", {"points", "values_rad"});
    if (t.has("values_rad")) {
        auto v = t.numbers("values_rad");
        detail::require(!v.empty(), "theta_grid", "must contain at least one angle");
        for (double x : v) detail::require(std::isfinite(x), "theta_grid", "angles must be finite");
        return v;
    }
    const long long n = t.integer("points");
    detail::require(n >= 1, "theta_grid", "must contain at least one angle");
    std::vector<double> v(n);
    for (long long i = 0; i < n; ++i) v[i] = n == 1 ? 0.5 * constants::pi : constants::pi * i / (n - 1);
    return v;
}

struct Grid {
    int sphere_order = default_sphere_order;
    int radial_nodes = default_radial_nodes;
};

Grid grid_options(const Block& root) {
    Grid g;
    if (!root.has("grid")) return g;
    const Block b = root.child("grid", {"sphere_order", "radial_nodes"});
    g.sphere_order = static_cast<int>(b.integer("sphere_order", g.sphere_order));
    g.radial_nodes = static_cast<int>(b.integer("radial_nodes", g.radial_nodes));
    detail::require(g.sphere_order >= 2 && g.sphere_order <= 200, "grid.sphere_order", "must lie in [2, 200]");
    detail::require(g.radial_nodes >= 4 && g.radial_nodes <= 1024, "grid.radial_nodes", "must lie in [4, 1024]");
    return g;
}

GasEnvironment gas_block(const Block& root) {
    const Block g = root.child("gas", {"temperature_K", "mass_amu", "number_density_per_m3"});
    return {g.number("temperature_K"), g.number("mass_amu") * constants::amu, g.number("number_density_per_m3")};
}

struct PotentialFamily {
    AnisotropicPotential base;
    std::vector<double> a_values;
};

PotentialFamily potential_block(const Block& root) {
    const Block p = root.child("potential", {"alpha0_angstrom3", "d0_debye", "C_J_m_s", "s", "a_values"});
    const bool dipole = p.has("alpha0_angstrom3") || p.has("d0_debye");
    if (dipole && p.has("C_J_m_s")) throw SchemaError("potential: give either the dipole pair or C_J_m_s, not both");
    std::vector<double> as;
    if (dipole) {
        auto base = dipole_induced_dipole(convert_polarizability_volume(p.number("alpha0_angstrom3")),
                                          convert_debye(p.number("d0_debye")));
        as = p.has("a_values") ? p.numbers("a_values") : std::vector<double>{base.anisotropy};
        if (p.has("s")) throw SchemaError("potential.s: fixed to 6 for the dipole-induced-dipole interaction");
        detail::require(!as.empty(), "potential.a_values", "must not be empty");
        return {base, as};
    }
    const long long s = p.integer("s");
    as = p.numbers("a_values");
    detail::require(!as.empty(), "potential.a_values", "must not be empty");
    return {AnisotropicPotential(p.number("C_J_m_s"), static_cast<int>(s), as.front()), as};
}

struct RodFamily {
    double length, radius;
    std::vector<double> permittivities;
    std::vector<DielectricRod> rods() const {
        std::vector<DielectricRod> out;
        for (double e : permittivities) out.emplace_back(length, radius, e);
        return out;
    }
};

RodFamily rod_block(const Block& root) {
    const Block r = root.child("rod", {"length_m", "radius_m", "permittivities"});
    RodFamily f{r.number("length_m"), r.number("radius_m"), r.numbers("permittivities")};
    detail::require(!f.permittivities.empty(), "rod.permittivities", "must not be empty");
    f.rods();  // validates
    return f;
}

WavenumberDistribution light_block(const Block& root) {
    const Block l = root.child("light", {"wavelength_m", "field_amplitude_V_per_m", "blackbody_temperature_K"});
    if (l.has("blackbody_temperature_K")) {
        if (l.has("wavelength_m")) throw SchemaError("light: give a wavelength or a black-body temperature, not both");
        return BlackBodyEnvironment(l.number("blackbody_temperature_K"));
    }
    const double lambda = l.number("wavelength_m");
    detail::require(lambda > 0.0 && std::isfinite(lambda), "light.wavelength_m", "must be positive");
    const double e0 = l.number("field_amplitude_V_per_m");
    detail::require(e0 >= 0.0 && std::isfinite(e0), "light.field_amplitude_V_per_m", "must be non-negative");
    return Monochromatic{2.0 * constants::pi / lambda, e0};
}

std::string label(const std::string& key, double v) {
    std::ostringstream os;
    os << key << v;
    return os.str();
}

// Header entries common to every table.
std::vector<std::pair<std::string, std::string>> base_header(const Common& c, const Grid* g) {
    std::vector<std::pair<std::string, std::string>> h = {{"tool", "anisodec"},
                                                          {"constants", constants::version},
                                                          {"scenario", c.scenario}};
    if (g) {
        h.emplace_back("grid.sphere_order", std::to_string(g->sphere_order));
        h.emplace_back("grid.radial_nodes", std::to_string(g->radial_nodes));
    }
    for (const auto& e : c.echo) h.push_back(e);
    return h;
}

void curve_summary(Table& t, double reference, const std::string& reference_name) {
    double max_err = 0.0, max_rel = 0.0;
    for (const auto& row : t.rows) {
        max_err = std::max(max_err, row[3]);
        if (row[1] != 0.0) max_rel = std::max(max_rel, row[3] / std::abs(row[1]));
    }
    t.header.emplace_back("reference_rate_per_s", fmt(reference));
    t.header.emplace_back("reference", reference_name);
    t.header.emplace_back("max_quad_error_per_s", fmt(max_err));
    t.header.emplace_back("max_relative_quad_error", fmt(max_rel));
}

const std::vector<std::string> curve_columns = {"theta_rad", "rate", "rate_over_gamma", "quad_error"};

void note(RunReport& rep, const RateResult& r, const std::string& where) {
    if (!r.converged) rep.converged = false;
    for (const auto& w : r.warnings) {
        const std::string line = where + ": " + w;
        if (std::find(rep.warnings.begin(), rep.warnings.end(), line) == rep.warnings.end())
            rep.warnings.push_back(line);
    }
}

void attach_warnings(Table& t, const RunReport& rep, std::size_t from) {
    for (std::size_t i = from; i < rep.warnings.size(); ++i) t.header.emplace_back("warning", rep.warnings[i]);
}

// ---------------------------------------------------------------------------
// Scenarios

void run_gas(const Block& root, const Common& c, RunReport& rep) {
    const GasEnvironment gas = gas_block(root);
    const PotentialFamily pf = potential_block(root);
    const auto thetas = theta_grid(root);
    const Grid g = grid_options(root);
    const Vec3 R = root.vec3("separation_m", Vec3{});
    if (c.scenario == "fig1")
        detail::require(norm2(R) == 0.0, "separation_m", "the fig1 preset is purely orientational");
    const GasRateOptions opts{g.sphere_order, g.radial_nodes};
    const auto gamma = gas_diffusion_rate(pf.base, gas, g.radial_nodes);

    for (double a : pf.a_values) {
        const AnisotropicPotential pot = pf.base.with_anisotropy(a);
        std::vector<GasRates> curve(thetas.size());
        if (norm2(R) == 0.0) {
            curve = gas_rate_curve(pot, gas, thetas, opts);
        } else {
            parallel_for(thetas.size(), [&](std::size_t i) {
                auto cfg = PairConfiguration::orientational(thetas[i]);
                cfg.separation = R;
                curve[i] = gas_rates(pot, gas, cfg, opts);
            });
        }
        const std::size_t warn_from = rep.warnings.size();
        Table F{c.stem + "_" + label("a", a), base_header(c, &g), curve_columns, {}};
        Table G{c.stem + "_" + label("a", a) + "_phase", base_header(c, &g), curve_columns, {}};
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            const auto& r = curve[i];
            F.rows.push_back({thetas[i], r.localization.rate, r.localization.rate / gamma.value,
                              r.localization.quadrature_error});
            G.rows.push_back({thetas[i], r.phase.rate, r.phase.rate / gamma.value, r.phase.quadrature_error});
            note(rep, r.localization, F.name);
            note(rep, r.phase, G.name);
        }
        for (Table* t : {&F, &G}) {
            t->header.emplace_back("curve.a", fmt(a));
            t->header.emplace_back("separation_over_thermal_wavelength",
                                   fmt(thermal_momentum(gas) * norm(R) / constants::hbar));
            t->header.emplace_back("gamma_quad_error_per_s", fmt(gamma.abs_error));
            curve_summary(*t, gamma.value, "gamma (a-independent diffusion rate)");
            attach_warnings(*t, rep, warn_from);
            rep.files.push_back(write_table(*t, c.out_dir, c.format));
        }
    }
}

void run_photon_mode(const Block& root, const Common& c, RunReport& rep) {
    const RodFamily rf = rod_block(root);
    const auto light = light_block(root);
    const auto* mono = std::get_if<Monochromatic>(&light);
    if (!mono) throw SchemaError("light: rate-photon needs a monochromatic wavelength");
    Vec3 dir{0, 1, 0}, pol{1, 0, 0};
    if (root.has("mode")) {
        const Block m = root.child("mode", {"direction", "polarization"});
        dir = m.vec3("direction", dir);
        pol = m.vec3("polarization", pol);
    }
    if (norm2(dir) == 0.0) throw DomainError("mode.direction", "must be non-zero");
    if (norm2(pol) == 0.0) throw DomainError("mode.polarization", "must be non-zero");
    const PhotonMode mode(mono->wavenumber, dir, pol, mono->field_amplitude);
    const auto thetas = theta_grid(root);
    const Grid g = grid_options(root);
    const Vec3 R = root.vec3("separation_m", Vec3{});
    for (const auto& rod : rf.rods()) {
        std::vector<RateResult> curve(thetas.size());
        parallel_for(thetas.size(), [&](std::size_t i) {
            auto cfg = PairConfiguration::orientational(thetas[i]);
            cfg.separation = R;
            curve[i] = localization_rate_photon(rod, mode, cfg, {g.sphere_order, g.radial_nodes});
        });
        const std::size_t warn_from = rep.warnings.size();
        Table t{c.stem + "_" + label("eps", rod.permittivity()), base_header(c, &g), curve_columns, {}};
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            t.rows.push_back({thetas[i], curve[i].rate, curve[i].normalized, curve[i].quadrature_error});
            note(rep, curve[i], t.name);
        }
        t.header.emplace_back("curve.permittivity", fmt(rod.permittivity()));
        curve_summary(t, scattering_rate_gamma0(rod, mode), "gamma0 |b|^2 of this rod");
        attach_warnings(t, rep, warn_from);
        rep.files.push_back(write_table(t, c.out_dir, c.format));
    }
}

void run_photon_isotropic(const Block& root, const Common& c, RunReport& rep) {
    const RodFamily rf = rod_block(root);
    const auto light = light_block(root);
    const auto thetas = theta_grid(root);
    const Grid g = grid_options(root);
    const auto rods = rf.rods();
    const auto curves = isotropic_photon_rate_curves(rods, light, thetas, {g.sphere_order, g.radial_nodes});
    for (std::size_t r = 0; r < rods.size(); ++r) {
        const double ref = unit_susceptibility_rate(rods[r], light);
        const std::size_t warn_from = rep.warnings.size();
        Table t{c.stem + "_" + label("eps", rods[r].permittivity()), base_header(c, &g), curve_columns, {}};
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            const auto& res = curves[r][i];
            t.rows.push_back({thetas[i], res.rate, res.rate / ref, res.quadrature_error});
            note(rep, res, t.name);
        }
        t.header.emplace_back("curve.permittivity", fmt(rods[r].permittivity()));
        if (const auto* mono = std::get_if<Monochromatic>(&light))
            t.header.emplace_back("k_ell", fmt(mono->wavenumber * rods[r].length()));
        curve_summary(t, ref, "gamma0 |b|^2 of the same geometry with chi_par = 1");
        attach_warnings(t, rep, warn_from);
        rep.files.push_back(write_table(t, c.out_dir, c.format));
    }
}

void run_diffusion(const Block& root, const Common& c, RunReport& rep) {
    const Block d = root.child("diffusion", {"sources"});
    const auto sources = d.strings("sources");
    detail::require(!sources.empty(), "diffusion.sources", "must not be empty");
    const Grid g = grid_options(root);
    Table t{c.stem, base_header(c, &g), {"source_id", "parameter", "D", "D_over_hbar2", "quad_error"}, {}};
    t.header.emplace_back("source_ids", "0 = gas (parameter a), 1 = rayleigh-gans (parameter eps_r), "
                                        "2 = blackbody (parameter eps_r)");
    const double h2 = constants::hbar * constants::hbar;
    for (const auto& s : sources) {
        if (s == "gas") {
            const GasEnvironment gas = gas_block(root);
            const PotentialFamily pf = potential_block(root);
            for (double a : pf.a_values) {
                const auto D = diffusion_coefficient_gas(pf.base.with_anisotropy(a), gas, g.radial_nodes);
                t.rows.push_back({0, a, D.D, D.D / h2, D.abs_error});
            }
        } else if (s == "rayleigh-gans" || s == "blackbody") {
            const RodFamily rf = rod_block(root);
            const auto light = light_block(root);
            for (const auto& rod : rf.rods()) {
                if (s == "rayleigh-gans") {
                    const auto* mono = std::get_if<Monochromatic>(&light);
                    if (!mono) throw SchemaError("light: rayleigh-gans diffusion needs a monochromatic wavelength");
                    const auto D = diffusion_coefficient_rg(
                        rod, PhotonMode(mono->wavenumber, {0, 0, 1}, {1, 0, 0}, mono->field_amplitude));
                    t.rows.push_back({1, rod.permittivity(), D.D, D.D / h2, 0.0});
                } else {
                    const auto* bb = std::get_if<BlackBodyEnvironment>(&light);
                    if (!bb) throw SchemaError("light: blackbody diffusion needs blackbody_temperature_K");
                    const auto D = diffusion_coefficient_blackbody(rod, *bb);
                    t.rows.push_back({2, rod.permittivity(), D.D, D.D / h2, 0.0});
                }
            }
        } else {
            throw SchemaError("diffusion.sources: unknown source '" + s + "'");
        }
    }
    rep.files.push_back(write_table(t, c.out_dir, c.format));
}

void run_populations(const Block& root, const Common& c, RunReport& rep) {
    const Block p = root.child("populations", {"tau_values", "D", "times_s", "j_max"});
    std::vector<double> taus;
    double D = 0.0;
    std::vector<double> times;
    if (p.has("tau_values")) {
        if (p.has("D") || p.has("times_s")) throw SchemaError("populations: give tau_values or D with times_s");
        taus = p.numbers("tau_values");
    } else {
        D = p.number("D");
        times = p.numbers("times_s");
        detail::require(D >= 0.0 && std::isfinite(D), "populations.D", "must be non-negative");
        for (double t : times) {
            detail::require(t >= 0.0 && std::isfinite(t), "populations.times_s", "must be non-negative");
            taus.push_back(D * t / (constants::hbar * constants::hbar));
        }
    }
    detail::require(!taus.empty(), "populations.tau_values", "must not be empty");
    const int j_max = static_cast<int>(p.integer("j_max", 0));
    detail::require(j_max >= 0, "populations.j_max", "must be non-negative");
    std::vector<PopulationVector> pvs(taus.size());
    parallel_for(taus.size(), [&](std::size_t i) { pvs[i] = populations_at(taus[i], j_max); });
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const auto& pv = pvs[i];
        Table t{c.stem + "_" + label("tau", taus[i]), base_header(c, nullptr), {"j", "p", "gaussian_asymptote"}, {}};
        double sum = 0.0;
        for (int j = 0; j <= pv.j_max(); ++j) {
            t.rows.push_back({static_cast<double>(j), pv.p[j], taus[i] > 0.0 ? gaussian_asymptote_at(taus[i], j) : 0.0});
            sum += pv.p[j];
        }
        t.header.emplace_back("tau", fmt(taus[i]));
        if (!times.empty()) t.header.emplace_back("time_s", fmt(times[i]));
        t.header.emplace_back("legendre_nodes", std::to_string(pv.nodes));
        t.header.emplace_back("sum_p", fmt(sum));
        t.header.emplace_back("second_moment_over_hbar2", fmt(second_moment(pv)));
        t.header.emplace_back("expected_second_moment", fmt(4.0 * taus[i]));
        t.header.emplace_back("tail_mass", fmt(pv.tail));
        if (pv.truncated) {
            rep.converged = false;
            rep.warnings.push_back(t.name + ": j_max cap reached with tail mass " + fmt(pv.tail));
            t.header.emplace_back("warning", "truncated at the j_max cap");
        }
        rep.files.push_back(write_table(t, c.out_dir, c.format));
    }
}

void run_classical(const Block& root, const Common& c, RunReport& rep) {
    if (!root.has("seed")) throw SchemaError("missing key 'seed' (classical-sim draws its seed from the config)");
    const long long seed = root.integer("seed");
    const Block s = root.child("simulation", {"inertia_kg_m2", "D", "temperature_K", "dt_s", "t_final_s", "n_traj",
                                              "records", "initial", "histogram_bins"});
    SimulationConfig cfg;
    cfg.inertia = s.number("inertia_kg_m2");
    cfg.D = s.number("D");
    cfg.temperature = s.number("temperature_K", 0.0);
    cfg.dt = s.number("dt_s");
    const long long n_traj = s.integer("n_traj");
    detail::require(n_traj >= 1, "simulation.n_traj", "must be at least 1");
    cfg.n_traj = static_cast<std::size_t>(n_traj);
    cfg.seed = static_cast<std::uint64_t>(seed);
    if (s.has("initial")) {
        const Block i = s.child("initial", {"m", "J"});
        const Vec3 m = i.vec3("m", {0, 0, 1});
        if (norm2(m) == 0.0) throw DomainError("simulation.initial.m", "must be non-zero");
        cfg.initial.m = normalized(m);
        cfg.initial.J = i.vec3("J", {});
    }
    const double t_final = s.number("t_final_s");
    const int records = static_cast<int>(s.integer("records", 50));
    const int bins = static_cast<int>(s.integer("histogram_bins", 50));
    detail::require(bins >= 1, "simulation.histogram_bins", "must be at least 1");
    const auto series = evolve_ensemble(cfg, t_final, records);

    Table t{c.stem + "_series", base_header(c, nullptr),
            {"t_s", "mean_J2", "sem_J2", "mean_H", "mean_Jx", "mean_Jy", "mean_Jz"}, {}};
    for (std::size_t i = 0; i < series.times.size(); ++i)
        t.rows.push_back({series.times[i], series.mean_J2[i], series.sem_J2[i], series.mean_H[i],
                          series.mean_J[i].x, series.mean_J[i].y, series.mean_J[i].z});
    if (series.times.size() >= 2) {
        t.header.emplace_back("fitted_dJ2_dt", fmt(fit_slope(series.times, series.mean_J2)));
        t.header.emplace_back("expected_dJ2_dt_without_friction", fmt(4.0 * cfg.D));
    }
    t.header.emplace_back("max_orthogonality_error", fmt(series.max_orthogonality_error));
    t.header.emplace_back("seed", std::to_string(seed));
    rep.files.push_back(write_table(t, c.out_dir, c.format));

    // Energy histogram at t_final.
    const auto& E = series.final_energies;
    const double kT = constants::k_B * cfg.temperature;
    double emax = *std::max_element(E.begin(), E.end());
    if (emax <= 0.0) emax = kT > 0.0 ? 10.0 * kT : 1.0;
    const double width = emax / bins;
    std::vector<double> counts(bins, 0.0);
    for (double e : E) counts[std::min(bins - 1, static_cast<int>(e / width))] += 1.0;
    Table h{c.stem + "_energy_histogram", base_header(c, nullptr),
            {"energy_J", "density_per_J", "boltzmann_density_per_J"}, {}};
    for (int b = 0; b < bins; ++b) {
        const double centre = (b + 0.5) * width;
        const double boltz = kT > 0.0 ? std::exp(-centre / kT) / kT : 0.0;
        h.rows.push_back({centre, counts[b] / (static_cast<double>(E.size()) * width), boltz});
    }
    if (kT > 0.0) {
        double mean = 0.0;
        for (double e : E) mean += e;
        mean /= static_cast<double>(E.size());
        h.header.emplace_back("mean_energy_over_kT", fmt(mean / kT));
        h.header.emplace_back("ks_statistic_vs_exponential", fmt(ks_statistic_exponential(E, kT)));
    }
    rep.files.push_back(write_table(h, c.out_dir, c.format));
}

}  // namespace

RunReport run_config_text(const std::string& text, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    const Block root(j, "",
                     {"scenario", "seed", "output", "theta", "grid", "gas", "potential", "separation_m", "rod",
                      "light", "mode", "diffusion", "populations", "simulation"});
    Common c;
    c.scenario = root.string("scenario", "");
    if (!scenarios.count(c.scenario)) throw SchemaError("scenario: expected one of rate-gas, rate-photon, "
                                                        "rate-photon-isotropic, diffusion, populations, "
                                                        "classical-sim, fig1, fig2a, fig2b");
    fs::path dir = ".";
    c.stem = c.scenario;
    std::string format = "csv";
    if (root.has("output")) {
        const Block o = root.child("output", {"directory", "stem", "format"});
        dir = o.string("directory", ".");
        c.stem = o.string("stem", c.stem);
        format = o.string("format", "csv");
    }
    if (format == "csv")
        c.format = Format::csv;
    else if (format == "json")
        c.format = Format::json;
    else
        throw SchemaError("output.format: expected csv or json");
    if (c.stem.empty() || c.stem.find('/') != std::string::npos)
        throw SchemaError("output.stem: must be a non-empty file stem");
    c.out_dir = dir.is_absolute() ? dir : base_dir / dir;

    // Echo every input except the output location, which must not change the content.
    const json flat = j.flatten();
    for (const auto& [k, v] : flat.items())
        if (k.rfind("/output/directory", 0) != 0) c.echo.emplace_back("input" + k, v.dump());

    RunReport rep;
    const std::string& s = c.scenario;
    if (s == "rate-gas" || s == "fig1")
        run_gas(root, c, rep);
    else if (s == "rate-photon")
        run_photon_mode(root, c, rep);
    else if (s == "rate-photon-isotropic" || s == "fig2a" || s == "fig2b")
        run_photon_isotropic(root, c, rep);
    else if (s == "diffusion")
        run_diffusion(root, c, rep);
    else if (s == "populations")
        run_populations(root, c, rep);
    else
        run_classical(root, c, rep);
    return rep;
}

RunReport run_config_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw SchemaError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return run_config_text(ss.str(), path.has_parent_path() ? path.parent_path() : fs::path("."));
}

std::string preset_config(const std::string& name, const fs::path& out_dir) {
    json j;
    const json output = {{"directory", out_dir.string()}, {"stem", name}, {"format", "csv"}};
    if (name == "fig1") {
        j = {{"scenario", "fig1"},
             {"output", output},
             {"theta", {{"points", 181}}},
             // Helium at 300 K and 1e-4 Pa; the figure is normalized, so the density only scales `rate`.
             {"gas", {{"temperature_K", 300.0}, {"mass_amu", 4.002602}, {"number_density_per_m3", 2.4e16}}},
             {"potential", {{"alpha0_angstrom3", 0.2}, {"d0_debye", 5.0}, {"a_values", {0.5, 1.0, 2.0, 3.0}}}}};
    } else if (name == "fig2a" || name == "fig2b") {
        const bool a = name == "fig2a";
        j = {{"scenario", name},
             {"output", output},
             {"theta", {{"points", 181}}},
             {"rod",
              {{"length_m", a ? 20e-9 : 0.8e-6},
               {"radius_m", a ? 2e-9 : 25e-9},
               {"permittivities", {1.0, 2.0, 4.0, 12.0}}}},
             {"light", {{"wavelength_m", 1.56e-6}, {"field_amplitude_V_per_m", 1e5}}}};
    } else {
        throw SchemaError("preset: expected fig1, fig2a or fig2b");
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Self-test

namespace {

struct Check {
    std::ostream& out;
    bool all = true;

    void operator()(const std::string& name, bool ok, const std::string& measured) {
        all = all && ok;
        out << (ok ? "PASS " : "FAIL ") << name << " " << measured << "\n";
    }
};

std::string kv(const std::string& k, double v, const std::string& tk, double tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.3e %s=%.1e", k.c_str(), v, tk.c_str(), tol);
    return buf;
}

}  // namespace

bool selftest(std::ostream& out, const SelftestOptions& opts) {
    Check check{out};

    {  // Optical theorem on a random battery.
        CounterRng rng(default_mc_seed, 1);
        const double hbar = constants::hbar * (1.0 + opts.perturb_hbar);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const int s = 6 + static_cast<int>(rng() % 3);
            const double a = -0.9 + 5.9 * rng.uniform();
            const double p = std::pow(10.0, -26.0 + 4.0 * rng.uniform());
            const double cth = 2.0 * rng.uniform() - 1.0;
            const EikonalScatterer sc(AnisotropicPotential(1e-79, s, a), 4.0 * constants::amu);
            const double lhs = 4.0 * constants::pi * hbar * sc.forward_amplitude(p, cth).imag() / p;
            worst = std::max(worst, std::abs(lhs / sc.cross_section(p, cth) - 1.0));
        }
        check("optical_theorem", worst < 1e-12, kv("max_rel_err", worst, "tol", 1e-12));
    }
    {  // Maxwell-Boltzmann normalization and second moment.
        const GasEnvironment gas(300.0, 4.002602 * constants::amu, 1e20);
        const auto grid = RadialGrid::maxwell_boltzmann(gas);
        const auto norm = integrate_radial(grid, [&](double p) {
            return complex(4.0 * constants::pi * p * p * maxwell_boltzmann_pdf(gas, p));
        });
        check("maxwell_boltzmann_normalization", std::abs(norm.value.real() - 1.0) < 1e-10,
              kv("abs_err", std::abs(norm.value.real() - 1.0), "tol", 1e-10));
    }
    {  // Planck normalization.
        const BlackBodyEnvironment env(300.0);
        const auto grid = RadialGrid::planck(env);
        const auto norm =
            integrate_radial(grid, [&](double k) { return complex(planck_wavenumber_pdf(env, k).density); });
        check("planck_normalization", std::abs(norm.value.real() - 1.0) < 1e-8,
              kv("abs_err", std::abs(norm.value.real() - 1.0), "tol", 1e-8));
    }
    {  // Solid angle.
        const auto est = integrate_sphere(SphereGrid::cached(default_sphere_order), [](const Vec3&) {
            return complex(1.0);
        });
        const double err = std::abs(est.value.real() - 4.0 * constants::pi);
        check("sphere_solid_angle", err < 1e-12, kv("abs_err", err, "tol", 1e-12));
    }
    {  // Population normalization and the 4 D t law.
        double worst_norm = 0.0, worst_moment = 0.0;
        for (double tau : {0.01, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
            const auto pv = populations_at(tau);
            double sum = 0.0;
            for (double x : pv.p) sum += x;
            worst_norm = std::max(worst_norm, std::abs(sum - 1.0));
            worst_moment = std::max(worst_moment, std::abs(second_moment(pv) / (4.0 * tau) - 1.0));
        }
        check("population_normalization", worst_norm < 1e-8, kv("max_abs_err", worst_norm, "tol", 1e-8));
        check("second_moment_4Dt", worst_moment < 1e-3, kv("max_rel_err", worst_moment, "tol", 1e-3));
    }
    {  // Diagonal gas rate vanishes.
        const GasEnvironment gas(300.0, 4.002602 * constants::amu, 1e20);
        const auto pot = dipole_induced_dipole(convert_polarizability_volume(0.2), convert_debye(5.0));
        const auto r = localization_rate_gas(pot, gas, PairConfiguration::orientational(0.0), {11, 24});
        check("gas_diagonal_vanishes", std::abs(r.rate) <= r.quadrature_error,
              kv("rate", r.rate, "error", r.quadrature_error));
    }
    {  // Classical rotor: free diffusion slope and Boltzmann steady state.
        SimulationConfig cfg;
        cfg.inertia = 1e-40;
        cfg.D = 1e-55;
        cfg.dt = 1e-6;
        cfg.n_traj = 20000;
        cfg.seed = default_mc_seed;
        const auto free = evolve_ensemble(cfg, 50 * cfg.dt, 11);
        const double slope = fit_slope(free.times, free.mean_J2) / (4.0 * cfg.D);
        check("classical_diffusion_slope", std::abs(slope - 1.0) < 0.03,
              kv("slope_over_4D_minus_1", slope - 1.0, "tol", 0.03));

        cfg.temperature = 300.0;
        cfg.dt = friction_step_fraction / cfg.friction_rate();
        const auto relaxed = evolve_ensemble(cfg, 600 * cfg.dt, 2);
        const double kT = constants::k_B * cfg.temperature;
        double mean = 0.0;
        for (double e : relaxed.final_energies) mean += e;
        mean /= static_cast<double>(relaxed.final_energies.size());
        const double ks = ks_statistic_exponential(relaxed.final_energies, kT);
        const double ks_tol = 1.63 / std::sqrt(static_cast<double>(cfg.n_traj));  // 1% significance
        check("boltzmann_mean_energy", std::abs(mean / kT - 1.0) < 0.03,
              kv("rel_err", mean / kT - 1.0, "tol", 0.03));
        check("boltzmann_ks", ks < ks_tol, kv("ks", ks, "tol", ks_tol));
    }
    out << (check.all ? "selftest: all checks passed\n" : "selftest: FAILED\n");
    return check.all;
}

int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return exit_schema;
    } catch (const DomainError& e) {
        err << "precondition violated: field '" << e.field() << "': " << e.what() << "\n";
        return exit_precondition;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_nonconvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

}  // namespace anisodec::app
