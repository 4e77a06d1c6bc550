// eigsim: biphoton wave-packet shaping by an electromagnetically induced
// grating -- transmission profiles, coincidence traces, joint spectra and
// far-field diffraction, exported as CSV/JSON data files.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eig/config.hpp"
#include "eig/runner.hpp"
#include "eig/version.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string regime;
    std::string out;
    std::string format;
    bool emit_plot_script = false;
};

void add_common(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "flat key=value config file (defaults if omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--regime", opt.regime, "resonance|phase_matching|full")
        ->check(CLI::IsMember({"resonance", "phase_matching", "full"}));
    cmd->add_option("--out", opt.out, "output data file path");
    cmd->add_option("--format", opt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--emit-plot-script", opt.emit_plot_script, "also write a gnuplot script");
}

eig::RunConfig make_config(const CliOptions& opt) {
    eig::RawConfig raw;
    if (!opt.config_path.empty()) raw = eig::RawConfig::parse_file(opt.config_path);
    if (!opt.regime.empty()) raw.set("regime", opt.regime);
    if (!opt.out.empty()) raw.set("out", opt.out);
    if (!opt.format.empty()) raw.set("format", opt.format);
    if (opt.emit_plot_script) raw.set("emit_plot_script", "true");
    return eig::resolve_config(raw);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("eigsim ") + eig::version +
                 " -- biphoton wave packets shaped by an electromagnetically induced grating"};
    app.require_subcommand(1);

    CliOptions opt;
    auto* transmission = app.add_subcommand("transmission", "anti-Stokes transmission grating profile");
    auto* coincidence = app.add_subcommand("coincidence", "two-photon coincidence trace");
    auto* diffraction = app.add_subcommand("diffraction", "angular diffraction pattern");
    auto* spectrum = app.add_subcommand("spectrum", "joint spectral intensity");
    auto* orders = app.add_subcommand("orders", "propagating diffraction orders");
    for (auto* cmd : {transmission, coincidence, diffraction, spectrum, orders}) add_common(cmd, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        const eig::RunConfig cfg = make_config(opt);
        eig::RunResult res;
        if (transmission->parsed()) res = eig::run_transmission(cfg);
        else if (coincidence->parsed()) res = eig::run_coincidence(cfg);
        else if (diffraction->parsed()) res = eig::run_diffraction(cfg);
        else if (spectrum->parsed()) res = eig::run_spectrum(cfg);
        else res = eig::run_orders(cfg);
        for (const auto& f : res.files) std::cout << "wrote " << f << "\n";
        return 0;
    } catch (const eig::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const eig::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
