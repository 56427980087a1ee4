// Command-line driver: single runs, sweeps, the validation suite and the
// bundled presets. Exit codes: 0 success, 2 configuration error,
// 3 convergence failure, 4 numerical abort.

#include <CLI11.hpp>

#include <iostream>

#include "vibrodyn/presets.hpp"
#include "vibrodyn/runner.hpp"

namespace {

vibrodyn::RunSpec load_spec(const std::string& config_path, const std::string& preset_name,
                            const std::string& output_dir) {
    if (config_path.empty() == preset_name.empty())
        throw vibrodyn::ConfigError("give exactly one of a config file or --preset");
    vibrodyn::RunSpec spec = preset_name.empty() ? vibrodyn::parse_config_file(config_path)
                                                 : vibrodyn::preset(preset_name);
    if (!output_dir.empty()) spec.output_dir = output_dir;
    return spec;
}

void print_run_summary(const vibrodyn::RunSpec& spec, const vibrodyn::RunResult& res) {
    using vibrodyn::format_number;
    std::cout << "wrote " << spec.output_dir << "/trajectory.csv, spectrum.csv, result.json\n";
    std::cout << "time unit: 1 hbar/eV = " << format_number(vibrodyn::kFsPerHbarEv)
              << " fs; t_end = " << format_number(spec.t_end) << " hbar/eV = "
              << format_number(spec.t_end * vibrodyn::kFsPerHbarEv) << " fs\n";
    std::cout << "rayleigh_weight = " << format_number(res.spec.rayleigh_weight) << ", "
              << res.peaks.peaks.size() << " spectral peak(s)\n";
    if (res.collapse.collapsed) {
        std::cout << "collapse at t = " << format_number(res.collapse.t_col) << " hbar/eV ("
                  << format_number(res.collapse.t_col * vibrodyn::kFsPerHbarEv) << " fs), "
                  << res.collapse.revivals.size() << " revival(s)";
        if (!res.collapse.revivals.empty())
            std::cout << ", first at t = " << format_number(res.collapse.revivals.front());
        std::cout << "\n";
    } else {
        std::cout << "no collapse detected\n";
    }
    if (!res.estimate.divergent)
        std::cout << "analytic estimates: t_col = " << format_number(res.estimate.t_col_analytic)
                  << ", t_rev = " << format_number(res.estimate.t_rev_analytic) << " hbar/eV\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"driven exciton-vibron Lindblad dynamics in the displaced-Fock eigenbasis"};
    app.require_subcommand(1);

    std::string config_path, preset_name, output_dir;

    auto* run = app.add_subcommand("run", "single run from a config file or preset");
    run->add_option("config", config_path, "plain-text key = value config file");
    run->add_option("--preset", preset_name, "bundled preset name (see 'presets')");
    run->add_option("--output-dir", output_dir, "override the output directory");

    auto* sweep = app.add_subcommand("sweep", "collapse-time sweep over g or omega_v");
    sweep->add_option("config", config_path, "config file with sweep_* keys");
    sweep->add_option("--preset", preset_name, "bundled sweep preset (fig7a, fig7b)");
    sweep->add_option("--output-dir", output_dir, "override the output directory");

    app.add_subcommand("validate", "run the oracle/invariant suite at small N");
    app.add_subcommand("presets", "list the bundled figure presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const vibrodyn::RunSpec spec = load_spec(config_path, preset_name, output_dir);
            const vibrodyn::RunResult res = vibrodyn::run_single(spec);
            print_run_summary(spec, res);
            if (res.exit_code == 3) std::cerr << "convergence check failed\n";
            return res.exit_code;
        }
        if (sweep->parsed()) {
            const vibrodyn::RunSpec spec = load_spec(config_path, preset_name, output_dir);
            const auto rows = vibrodyn::run_sweep(spec);
            std::cout << "wrote " << spec.output_dir << "/sweep.csv, sweep.json ("
                      << rows.size() << " points)\n";
            return 0;
        }
        if (app.get_subcommand("validate")->parsed())
            return vibrodyn::validate(std::cout) == 0 ? 0 : 1;
        if (app.get_subcommand("presets")->parsed()) {
            for (const auto& name : vibrodyn::preset_names())
                std::cout << name << "  " << vibrodyn::preset_description(name) << "\n";
            return 0;
        }
    } catch (const vibrodyn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const vibrodyn::NumericalAbort& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
