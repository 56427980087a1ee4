#ifndef VIBRODYN_RUNNER_HPP
#define VIBRODYN_RUNNER_HPP

#include <optional>
#include <string>

#include "vibrodyn/analysis.hpp"
#include "vibrodyn/observables.hpp"
#include "vibrodyn/propagate.hpp"
#include "vibrodyn/run_spec.hpp"

namespace vibrodyn {

/// Everything a single run produced, kept in memory so tests and the
/// acceptance suite can drive the exact CLI pipeline without reparsing
/// files.
struct RunResult {
    int exit_code = 0;
    std::optional<Trajectory> lindblad;
    std::optional<Trajectory> pure;
    Spectrum spec;
    PeakSet peaks;
    CollapseRevival collapse;
    std::optional<CollapseRevival> collapse_pure;
    CollapseEstimate estimate;
    ConvergenceReport convergence;      // filled when check_convergence
    bool convergence_checked = false;
    double thermal_tail = 0.0;

    const Trajectory& primary() const { return lindblad ? *lindblad : *pure; }
};

/// Execute a run spec end to end; when write_files is set, emits
/// trajectory.csv (+ trajectory_pure.csv for mode = both), spectrum.csv and
/// result.json under spec.output_dir. Throws ConfigError (exit 2) and
/// NumericalAbort (exit 4); returns 3 inside RunResult on a failed
/// convergence check.
RunResult run_single(const RunSpec& spec, bool write_files = true);

/// Execute the sweep described by the spec; emits sweep.csv and sweep.json
/// when write_files is set. Per-point failures are table rows, not errors.
std::vector<SweepRow> run_sweep(const RunSpec& spec, bool write_files = true);

/// Full oracle/invariant suite at small N; prints one line per check and
/// returns the number of failed checks.
int validate(std::ostream& out);

} // namespace vibrodyn

#endif
