#ifndef VIBRODYN_ANALYSIS_HPP
#define VIBRODYN_ANALYSIS_HPP

#include <string>
#include <vector>

#include "vibrodyn/liouvillian.hpp"
#include "vibrodyn/model.hpp"
#include "vibrodyn/observables.hpp"

namespace vibrodyn {

/// Analytic collapse/revival estimates: t_col = omega_v / (pi g^2 M(alpha)^2)
/// with M(alpha) the largest |<0|nt_alpha>|, and t_rev = 2 pi / omega_v.
/// t_col_alt carries the order-of-magnitude variant 1/(g alpha M(alpha)^2).
struct CollapseEstimate {
    double t_col_analytic = 0.0;   // hbar/eV
    double t_col_alt = 0.0;        // hbar/eV, secondary column
    double t_rev_analytic = 0.0;   // hbar/eV
    double M_alpha = 0.0;
    double alpha = 0.0;
    bool divergent = false;        // g == 0: no finite estimate
};

CollapseEstimate estimate_collapse_time(const SystemParams& params);

enum class SweepVariable { g, omega_v };

struct SweepRow {
    double value = 0.0;
    double t_col_num = 0.0;
    double t_col_analytic = 0.0;
    double t_rev_num = 0.0;
    double t_rev_analytic = 0.0;
    int N_used = 0;
    std::string status;   // "ok", "divergent", "no-collapse", or an error message
};

struct SweepOptions {
    bool lindblad = false;        // default: pure-state Hermitian runs
    double t_end = 0.0;           // 0: auto, a little past two revival periods
    int grid_points = 4096;
    int threads = 0;              // 0: hardware concurrency
    CollapseRevivalOptions detect;
    DissipatorConfig cfg;         // used when lindblad = true
};

/// For each value of the varied parameter: propagate, extract the numeric
/// collapse time and first revival, and pair them with the analytic
/// estimates. Per-point failures land in the row status instead of aborting
/// the sweep. Points run concurrently; the table order follows the input.
std::vector<SweepRow> sweep(const SystemParams& base, SweepVariable vary,
                            const std::vector<double>& values, const SweepOptions& opts = {});

/// Worker count: explicit request, else VIBRODYN_THREADS, else hardware.
int sweep_thread_count(int requested);

} // namespace vibrodyn

#endif
