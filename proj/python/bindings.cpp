#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "anisodec/angdiff.hpp"
#include "anisodec/app.hpp"
#include "anisodec/errors.hpp"
#include "anisodec/locrate.hpp"
#include "anisodec/rotorsim.hpp"

namespace py = pybind11;
using namespace anisodec;

namespace {

Vec3 vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

PairConfiguration pair(const std::array<double, 3>& m1, const std::array<double, 3>& m2,
                       const std::array<double, 3>& R) {
    return {vec(R), UnitVector(vec(m1)), UnitVector(vec(m2))};
}

py::dict as_dict(const RateResult& r) {
    py::dict d;
    d["rate"] = r.rate;
    d["quad_error"] = r.quadrature_error;
    d["rate_over_gamma"] = r.normalized;
    d["converged"] = r.converged;
    d["warnings"] = r.warnings;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Orientational decoherence rates of anisotropic rotors";
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<app::SchemaError>(m, "SchemaError", PyExc_ValueError);

    m.attr("hbar") = constants::hbar;
    m.attr("k_B") = constants::k_B;
    m.attr("amu") = constants::amu;
    m.attr("constants_version") = constants::version;

    m.def("convert_debye", &convert_debye);
    m.def("convert_polarizability_volume", &convert_polarizability_volume);

    m.def(
        "gas_rates",
        [](double alpha0_A3, double d0_debye, double a, double T, double mass_amu, double n_g,
           std::array<double, 3> m1, std::array<double, 3> m2, std::array<double, 3> R, int sphere_order,
           int radial_nodes) {
            const auto pot = dipole_induced_dipole(convert_polarizability_volume(alpha0_A3), convert_debye(d0_debye))
                                 .with_anisotropy(a);
            const GasEnvironment gas(T, mass_amu * constants::amu, n_g);
            GasRates r;
            {
                py::gil_scoped_release release;
                r = gas_rates(pot, gas, pair(m1, m2, R), {sphere_order, radial_nodes});
            }
            return py::make_tuple(as_dict(r.localization), as_dict(r.phase));
        },
        py::arg("alpha0_angstrom3"), py::arg("d0_debye"), py::arg("a"), py::arg("temperature_K"),
        py::arg("mass_amu"), py::arg("number_density_per_m3"), py::arg("m1"), py::arg("m2"),
        py::arg("separation_m") = std::array<double, 3>{0, 0, 0}, py::arg("sphere_order") = default_sphere_order,
        py::arg("radial_nodes") = default_radial_nodes,
        "Localization rate F and phase frequency G for the dipole-induced-dipole potential.");

    m.def(
        "gas_diffusion_coefficient",
        [](double alpha0_A3, double d0_debye, double a, double T, double mass_amu, double n_g) {
            const auto pot = dipole_induced_dipole(convert_polarizability_volume(alpha0_A3), convert_debye(d0_debye))
                                 .with_anisotropy(a);
            const auto D = diffusion_coefficient_gas(pot, GasEnvironment(T, mass_amu * constants::amu, n_g));
            return py::make_tuple(D.D, D.abs_error);
        },
        py::arg("alpha0_angstrom3"), py::arg("d0_debye"), py::arg("a"), py::arg("temperature_K"),
        py::arg("mass_amu"), py::arg("number_density_per_m3"));

    m.def(
        "isotropic_photon_rate",
        [](double length, double radius, double eps, double wavelength, double E0, double theta) {
            const DielectricRod rod(length, radius, eps);
            const WavenumberDistribution light = Monochromatic{2.0 * constants::pi / wavelength, E0};
            return as_dict(photon_rate_isotropic_average(rod, light, PairConfiguration::orientational(theta)));
        },
        py::arg("length_m"), py::arg("radius_m"), py::arg("permittivity"), py::arg("wavelength_m"),
        py::arg("field_amplitude_V_per_m"), py::arg("theta_rad"));

    m.def(
        "populations",
        [](double tau, int j_max) {
            const auto pv = populations_at(tau, j_max);
            py::dict d;
            d["p"] = pv.p;
            d["second_moment"] = second_moment(pv);
            d["truncated"] = pv.truncated;
            return d;
        },
        py::arg("tau"), py::arg("j_max") = 0, "Angular-momentum populations at D t / hbar^2 = tau.");
    m.def("gaussian_asymptote", &gaussian_asymptote_at, py::arg("tau"), py::arg("j"));

    m.def(
        "simulate",
        [](double inertia, double D, double T, double dt, double t_final, std::size_t n_traj, std::uint64_t seed,
           int records) {
            SimulationConfig c;
            c.inertia = inertia;
            c.D = D;
            c.temperature = T;
            c.dt = dt;
            c.n_traj = n_traj;
            c.seed = seed;
            EnsembleSeries es;
            {
                py::gil_scoped_release release;
                es = evolve_ensemble(c, t_final, records);
            }
            py::dict d;
            d["t"] = es.times;
            d["mean_J2"] = es.mean_J2;
            d["sem_J2"] = es.sem_J2;
            d["mean_H"] = es.mean_H;
            d["final_energies"] = es.final_energies;
            return d;
        },
        py::arg("inertia_kg_m2"), py::arg("D"), py::arg("temperature_K"), py::arg("dt_s"), py::arg("t_final_s"),
        py::arg("n_traj"), py::arg("seed"), py::arg("records") = 50);

    m.def(
        "run_config",
        [](const std::string& text, const std::string& base_dir) {
            const auto rep = app::run_config_text(text, base_dir);
            std::vector<std::string> files;
            for (const auto& f : rep.files) files.push_back(f.string());
            return py::make_tuple(files, rep.converged, rep.warnings);
        },
        py::arg("config_json"), py::arg("base_dir") = ".");
    m.def("preset_config", [](const std::string& name, const std::string& out) { return app::preset_config(name, out); });
    m.def(
        "selftest",
        [](double perturb) {
            std::ostringstream os;
            const bool ok = app::selftest(os, {perturb});
            return py::make_tuple(ok, os.str());
        },
        py::arg("perturb_hbar") = 0.0);
}
