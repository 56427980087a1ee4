#include "vibrodyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <thread>

#include "vibrodyn/propagate.hpp"

namespace vibrodyn {

CollapseEstimate estimate_collapse_time(const SystemParams& params) {
    CollapseEstimate est;
    est.alpha = params.alpha();
    est.t_rev_analytic = 2.0 * M_PI / params.omega_v;
    if (params.g <= 0.0) {
        est.divergent = true;
        est.t_col_analytic = std::numeric_limits<double>::infinity();
        est.t_col_alt = std::numeric_limits<double>::infinity();
        return est;
    }
    const DisplacementAmplitude a(est.alpha);
    const int N = std::max(params.N, required_truncation(a) + 5);
    est.M_alpha = max_overlap(a, N).first;
    const double M2 = est.M_alpha * est.M_alpha;
    est.t_col_analytic = params.omega_v / (M_PI * params.g * params.g * M2);
    est.t_col_alt = 1.0 / (params.g * est.alpha * M2);
    return est;
}

int sweep_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("VIBRODYN_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? int(hc) : 1;
}

namespace {

SweepRow run_point(const SystemParams& base, SweepVariable vary, double value,
                   const SweepOptions& opts) {
    SweepRow row;
    row.value = value;
    try {
        SystemParams p = base;
        if (vary == SweepVariable::g)
            p.g = value;
        else
            p.omega_v = value;
        p.N = std::max(p.N, required_truncation(DisplacementAmplitude(p.alpha())));
        row.N_used = p.N;

        const CollapseEstimate est = estimate_collapse_time(p);
        row.t_col_analytic = est.t_col_analytic;
        row.t_rev_analytic = est.t_rev_analytic;
        if (est.divergent) {
            row.status = "divergent";
            return row;
        }

        const double period = 2.0 * M_PI / p.omega_v;
        const double t_end = (opts.t_end > 0.0) ? opts.t_end : 2.2 * period;
        EvolveOptions eopts;
        eopts.grid_points = opts.grid_points;

        const EigenBasis basis = build_basis(p);
        const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
        std::vector<OperatorRep> obs{op_sigma(basis, fc)};

        Trajectory traj;
        if (opts.lindblad) {
            const GeneratorSchedule sched = assemble(p, basis, fc, opts.cfg);
            traj = evolve_density(initial_state(p), sched, t_end, obs, eopts);
        } else {
            StateVector psi;
            psi.amplitudes = Eigen::VectorXcd::Zero(basis.dim());
            psi.amplitudes(0) = 1.0;
            traj = evolve_pure(psi, p, basis, fc, t_end, obs, eopts);
        }

        const Eigen::VectorXd env = envelope(traj.record("sigma"), traj.times);
        const CollapseRevival cr = detect_collapse_revival(env, traj.times, p.omega_v, opts.detect);
        if (!cr.collapsed) {
            row.status = "no-collapse";
            return row;
        }
        row.t_col_num = cr.t_col;
        row.t_rev_num = cr.revivals.empty() ? 0.0 : cr.revivals.front();
        row.status = cr.revivals.empty() ? "no-revival" : "ok";
    } catch (const std::exception& e) {
        row.status = e.what();
    }
    return row;
}

} // namespace

std::vector<SweepRow> sweep(const SystemParams& base, SweepVariable vary,
                            const std::vector<double>& values, const SweepOptions& opts) {
    const int workers = sweep_thread_count(opts.threads);
    std::vector<SweepRow> rows(values.size());
    std::size_t next = 0;
    while (next < values.size()) {
        const std::size_t batch = std::min<std::size_t>(workers, values.size() - next);
        std::vector<std::future<SweepRow>> fut;
        for (std::size_t i = 0; i < batch; ++i)
            fut.push_back(std::async(std::launch::async, run_point, std::cref(base), vary,
                                     values[next + i], std::cref(opts)));
        for (std::size_t i = 0; i < batch; ++i) rows[next + i] = fut[i].get();
        next += batch;
    }
    return rows;
}

} // namespace vibrodyn
