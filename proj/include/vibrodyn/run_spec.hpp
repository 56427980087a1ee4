#ifndef VIBRODYN_RUN_SPEC_HPP
#define VIBRODYN_RUN_SPEC_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "vibrodyn/analysis.hpp"
#include "vibrodyn/liouvillian.hpp"
#include "vibrodyn/model.hpp"
#include "vibrodyn/observables.hpp"
#include "vibrodyn/rk45.hpp"

namespace vibrodyn {

inline constexpr const char* kVersionTag = "vibrodyn 1.0.0";

enum class RunMode { lindblad, pure, both };
enum class SpectrumOf { sigma, abs_sigma };

/// Unreadable or malformed configuration; mapped to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fully resolved description of a run or sweep, parsed from a plain-text
/// key = value file (# comments allowed, all energies in eV, times in
/// hbar/eV).
struct RunSpec {
    SystemParams params;
    RunMode mode = RunMode::lindblad;
    DissipatorConfig cfg;
    double t_end = 8000.0;
    int grid_points = 4096;
    SpectrumWindow window = SpectrumWindow::hann;
    SpectrumOf spectrum_of = SpectrumOf::sigma;
    std::string output_dir = ".";
    StepControl step;
    CollapseRevivalOptions detect;
    double peak_prominence = 0.05;
    bool check_convergence = false;
    int threads = 0;

    // sweep section (used by the sweep command)
    SweepVariable sweep_vary = SweepVariable::g;
    std::vector<double> sweep_values;
    bool sweep_lindblad = false;
    double sweep_t_end = 0.0;

    std::string preset_name;   // provenance when built from a preset
};

RunSpec parse_config_text(const std::string& text, const std::string& filename);
RunSpec parse_config_file(const std::string& path);

/// Canonical key = value rendering of the resolved spec (12 significant
/// digits; reparses to an identical spec).
std::string serialize_config(const RunSpec& spec);

/// Fixed-format numeric rendering used for all CSV/JSON output (12
/// significant digits, byte-stable for identical inputs).
std::string format_number(double v);

} // namespace vibrodyn

#endif
