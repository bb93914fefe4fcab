#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "anisodec/app.hpp"
#include "anisodec/errors.hpp"

using namespace anisodec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("anisodec_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int code_of(const std::string& text) {
    try {
        app::run_config_text(text, scratch("codes"));
    } catch (...) {
        std::ostringstream err;
        return app::exit_code_for_current_exception(err);
    }
    return app::exit_ok;
}

const char* gas_config = R"({
  "scenario": "rate-gas",
  "output": {"directory": "out", "stem": "gas", "format": "csv"},
  "theta": {"values_rad": [0.0, 0.5, 1.5707963267948966]},
  "grid": {"sphere_order": 9, "radial_nodes": 16},
  "gas": {"temperature_K": 300.0, "mass_amu": 4.002602, "number_density_per_m3": 1e20},
  "potential": {"alpha0_angstrom3": 0.2, "d0_debye": 5.0, "a_values": [1.0]}
})";

}  // namespace

TEST_CASE("csv and json rendering") {
    app::Table t{"x", {{"k", "v"}}, {"theta_rad", "rate", "rate_over_gamma", "quad_error"}, {{0.0, 1.5, -0.0, 1e-300}}};
    const auto csv = app::render_csv(t);
    CHECK(csv.find("# k: v\n") != std::string::npos);
    CHECK(csv.find("theta_rad,rate,rate_over_gamma,quad_error\n0,1.500000000000e+00,0,1.000000000000e-300\n") !=
          std::string::npos);
    const auto js = app::render_json(t);
    CHECK(js.find("\"columns\"") != std::string::npos);
    CHECK(js.find("\"k\": \"v\"") != std::string::npos);
}

TEST_CASE("rate-gas run writes headed, reproducible curves") {
    const fs::path dir = scratch("gas");
    const auto rep = app::run_config_text(gas_config, dir);
    REQUIRE(rep.files.size() == 2);  // F and G
    CHECK(rep.converged);
    const std::string a = slurp(rep.files[0]);
    CHECK(a.find("# constants: CODATA-2018") != std::string::npos);
    CHECK(a.find("# grid.sphere_order: 9") != std::string::npos);
    CHECK(a.find("# input/gas/temperature_K: 300.0") != std::string::npos);
    CHECK(a.find("# max_quad_error_per_s:") != std::string::npos);
    CHECK(a.find("theta_rad,rate,rate_over_gamma,quad_error") != std::string::npos);
    app::run_config_text(gas_config, dir);
    CHECK(slurp(rep.files[0]) == a);
}

TEST_CASE("schema errors") {
    CHECK(code_of("{not json") == app::exit_schema);
    CHECK(code_of(R"({"scenario": "nope"})") == app::exit_schema);
    CHECK(code_of(R"({"scenario": "rate-gas", "bogus": 1})") == app::exit_schema);
    CHECK(code_of(R"({"scenario": "rate-gas"})") == app::exit_schema);  // missing gas
    CHECK(code_of(R"({"scenario": "rate-gas", "gas": {"temperature_K": "hot", "mass_amu": 4,
                     "number_density_per_m3": 1}})") == app::exit_schema);
    CHECK(code_of(R"({"scenario": "classical-sim", "simulation": {}})") == app::exit_schema);  // no seed
}

TEST_CASE("precondition violations name the field") {
    const std::string empty_theta = R"({"scenario": "rate-gas", "theta": {"values_rad": []},
      "gas": {"temperature_K": 300, "mass_amu": 4, "number_density_per_m3": 1e20},
      "potential": {"alpha0_angstrom3": 0.2, "d0_debye": 5}})";
    CHECK(code_of(empty_theta) == app::exit_precondition);
    try {
        app::run_config_text(empty_theta, scratch("theta"));
    } catch (const DomainError& e) {
        CHECK(e.field() == "theta_grid");
    }
    const std::string cold = R"({"scenario": "rate-gas",
      "gas": {"temperature_K": -1, "mass_amu": 4, "number_density_per_m3": 1e20},
      "potential": {"alpha0_angstrom3": 0.2, "d0_debye": 5}})";
    std::ostringstream err;
    try {
        app::run_config_text(cold, scratch("cold"));
    } catch (...) {
        CHECK(app::exit_code_for_current_exception(err) == app::exit_precondition);
    }
    CHECK(err.str().find("temperature_K") != std::string::npos);
}

TEST_CASE("population truncation maps to non-convergence") {
    const fs::path dir = scratch("pop");
    const auto rep = app::run_config_text(
        R"({"scenario": "populations", "output": {"directory": "."}, "populations": {"tau_values": [1e6]}})", dir);
    CHECK_FALSE(rep.converged);
}

TEST_CASE("classical simulation scenario") {
    const fs::path dir = scratch("sim");
    const std::string cfg = R"({"scenario": "classical-sim", "seed": 5, "output": {"directory": ".", "format": "json"},
      "simulation": {"inertia_kg_m2": 1.0, "D": 1.0, "dt_s": 0.001, "t_final_s": 0.01, "n_traj": 200, "records": 3}})";
    const auto rep = app::run_config_text(cfg, dir);
    REQUIRE(rep.files.size() == 2);
    const std::string a = slurp(rep.files[0]);
    app::run_config_text(cfg, dir);
    CHECK(slurp(rep.files[0]) == a);
    CHECK(a.find("\"seed\": \"5\"") != std::string::npos);
}

TEST_CASE("diffusion scenario") {
    const fs::path dir = scratch("diff");
    const auto rep = app::run_config_text(R"({"scenario": "diffusion", "output": {"directory": "."},
      "diffusion": {"sources": ["rayleigh-gans"]},
      "rod": {"length_m": 1e-7, "radius_m": 1e-8, "permittivities": [1.0, 2.0]},
      "light": {"wavelength_m": 1.56e-6, "field_amplitude_V_per_m": 1e5}})",
                                          dir);
    REQUIRE(rep.files.size() == 1);
    const std::string a = slurp(rep.files[0]);
    CHECK(a.find("source_id,parameter,D,D_over_hbar2,quad_error\n1.000000000000e+00,1.000000000000e+00,0,0,0\n") !=
          std::string::npos);
}

TEST_CASE("presets are valid configurations") {
    for (const char* name : {"fig1", "fig2a", "fig2b"}) {
        const auto text = app::preset_config(name, "/tmp/x");
        CHECK(text.find(std::string("\"scenario\": \"") + name + "\"") != std::string::npos);
    }
    CHECK_THROWS_AS(app::preset_config("fig3", "/tmp/x"), app::SchemaError);
}
