#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "anisodec/app.hpp"

namespace app = anisodec::app;

int main(int argc, char** argv) {
    CLI::App cli{"Orientational decoherence rates of anisotropic rotors"};
    cli.require_subcommand(1);

    std::string config;
    auto* run = cli.add_subcommand("run", "Run a JSON configuration");
    run->add_option("config", config, "configuration file")->required();

    double perturb = 0.0;
    auto* self = cli.add_subcommand("selftest", "Run the invariant battery");
    self->add_option("--perturb-hbar", perturb, "relative perturbation of hbar in the optical-theorem check");

    std::string preset_name, out_dir;
    auto* preset = cli.add_subcommand("preset", "Reproduce a figure");
    preset->add_option("name", preset_name, "fig1, fig2a or fig2b")->required();
    preset->add_option("--out", out_dir, "output directory")->required();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : app::exit_schema;
    }

    try {
        if (*self) return app::selftest(std::cout, {perturb}) ? app::exit_ok : app::exit_failure;

        app::RunReport rep;
        if (*run) {
            rep = app::run_config_file(config);
        } else {
            const auto text = app::preset_config(preset_name, out_dir);
            rep = app::run_config_text(text, std::filesystem::current_path());
        }
        for (const auto& f : rep.files) std::cout << f.string() << "\n";
        for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
        if (!rep.converged) {
            std::cerr << "error: quadrature did not converge at one or more points (see warnings)\n";
            return app::exit_nonconvergence;
        }
        return app::exit_ok;
    } catch (...) {
        return app::exit_code_for_current_exception(std::cerr);
    }
}
