#ifndef VIBRODYN_PROPAGATE_HPP
#define VIBRODYN_PROPAGATE_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "vibrodyn/liouvillian.hpp"
#include "vibrodyn/model.hpp"
#include "vibrodyn/rk45.hpp"

namespace vibrodyn {

struct DensityMatrix {
    Eigen::MatrixXcd matrix;
    FrameKind frame = FrameKind::rotating;
    double time = 0.0;
};

struct StateVector {
    Eigen::VectorXcd amplitudes;
    FrameKind frame = FrameKind::rotating;
    double time = 0.0;
};

/// Numerical abort from a propagation (trace drift beyond tolerance or a
/// step-size underflow). Mapped to exit code 4 by the CLI.
struct NumericalAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform-grid record of expectation values, with optional sparse full-state
/// snapshots and integration diagnostics.
struct Trajectory {
    std::vector<double> times;                           // hbar/eV, uniform
    std::map<std::string, Eigen::VectorXcd> records;     // named series
    std::vector<std::pair<double, Eigen::MatrixXcd>> snapshots;
    FrameKind frame = FrameKind::rotating;
    double omega_drive = 0.0;

    double max_trace_drift = 0.0;
    double max_herm_dev = 0.0;
    double min_eigenvalue = 0.0;      // most negative monitored eigenvalue
    long n_steps = 0;
    long n_rejected = 0;

    const Eigen::VectorXcd& record(const std::string& name) const;
};

struct EvolveOptions {
    int grid_points = 4096;
    StepControl step;
    bool store_states = false;        // keep every grid state (small N only)
    int monitor_stride = 64;          // positivity checkpoints every k-th grid point
    double trace_abort = 1e-6;        // abort threshold on |tr rho - 1|
};

/// rho(0) = |g><g| tensor thermal vibron state with mean occupation n_v.
/// If tail_weight is given it receives the thermal weight truncated away
/// (caller may warn when it exceeds 1e-8).
DensityMatrix initial_state(const SystemParams& params, double* tail_weight = nullptr);

/// Integrate d rho/dt = L[rho] on [0, t_end] with the adaptive embedded
/// Runge-Kutta scheme, recording Tr(rho op) for each requested operator at
/// every point of the uniform output grid. Piecewise-constant schedules
/// restart the integrator exactly at each switch time.
Trajectory evolve_density(const DensityMatrix& rho0, const GeneratorSchedule& schedule,
                          double t_end, const std::vector<OperatorRep>& observables,
                          const EvolveOptions& opts = {});

/// Schroedinger propagation of a pure state under the rotating-frame
/// Hamiltonian (no dissipators): psi(t) = V exp(-i Lambda t) V^dag psi(0)
/// through one eigendecomposition, so the norm is conserved to roundoff.
Trajectory evolve_pure(const StateVector& psi0, const SystemParams& params,
                       const EigenBasis& basis, const FranckCondonTable& fc, double t_end,
                       const std::vector<OperatorRep>& observables,
                       const EvolveOptions& opts = {});

struct ConvergenceReport {
    std::vector<int> Ns;
    std::vector<double> max_abs_diff;   // vs the largest-N run, per N (last is 0)
    bool converged = false;             // last successive difference < 1e-4
};

/// Repeat a run at each truncation in N_list (ascending) and compare the
/// recorded sigma series against the largest-N run.
ConvergenceReport converge_in_truncation(const SystemParams& base, const DissipatorConfig& cfg,
                                         bool pure_state, double t_end,
                                         const std::vector<int>& N_list,
                                         const EvolveOptions& opts = {});

} // namespace vibrodyn

#endif
