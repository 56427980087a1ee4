#include "vibrodyn/propagate.hpp"

#include <cmath>
#include <stdexcept>

namespace vibrodyn {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::complex;

const VectorXcd& Trajectory::record(const std::string& name) const {
    auto it = records.find(name);
    if (it == records.end())
        throw std::invalid_argument("Trajectory: no record named '" + name + "'");
    return it->second;
}

DensityMatrix initial_state(const SystemParams& params, double* tail_weight) {
    params.validate();
    const int N = params.N;
    DensityMatrix rho;
    rho.frame = FrameKind::rotating;
    rho.time = 0.0;
    rho.matrix = MatrixXcd::Zero(2 * N, 2 * N);
    if (params.n_v <= 0.0) {
        rho.matrix(0, 0) = 1.0;
        if (tail_weight) *tail_weight = 0.0;
        return rho;
    }
    // Geometric thermal distribution with q = exp(-omega_v/kT) = n_v/(1+n_v),
    // renormalised over the kept levels.
    const double q = params.n_v / (1.0 + params.n_v);
    double sum = 0.0;
    std::vector<double> p(N);
    for (int n = 0; n < N; ++n) {
        p[n] = (1.0 - q) * std::pow(q, n);
        sum += p[n];
    }
    if (tail_weight) *tail_weight = 1.0 - sum;
    for (int n = 0; n < N; ++n) rho.matrix(n, n) = p[n] / sum;
    return rho;
}

namespace {

struct Recorder {
    const std::vector<OperatorRep>* ops;
    Trajectory* traj;
    std::vector<int> grid_index;   // next slot per record (all identical)
};

void record_point(Trajectory& traj, const std::vector<OperatorRep>& ops, int slot,
                  const MatrixXcd& rho) {
    for (const auto& op : ops) {
        // Tr(op rho) without forming the product
        complex<double> v = (op.matrix.transpose().cwiseProduct(rho)).sum();
        traj.records[op.name](slot) = v;
    }
}

void monitor(Trajectory& traj, const MatrixXcd& rho, bool eigencheck) {
    const double tr_err = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    traj.max_trace_drift = std::max(traj.max_trace_drift, tr_err);
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    traj.max_herm_dev = std::max(traj.max_herm_dev, herm);
    if (eigencheck) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (rho + rho.adjoint()),
                                                    Eigen::EigenvaluesOnly);
        traj.min_eigenvalue = std::min(traj.min_eigenvalue, es.eigenvalues().minCoeff());
    }
}

} // namespace

Trajectory evolve_density(const DensityMatrix& rho0, const GeneratorSchedule& schedule,
                          double t_end, const std::vector<OperatorRep>& observables,
                          const EvolveOptions& opts) {
    if (schedule.phases.empty()) throw std::invalid_argument("evolve_density: empty schedule");
    const int d = schedule.phases.front().dim();
    if (rho0.matrix.rows() != d || rho0.matrix.cols() != d)
        throw std::invalid_argument("evolve_density: state dimension does not match generator");
    if (!(t_end > 0.0)) throw std::invalid_argument("evolve_density: t_end must be > 0");
    const int M = opts.grid_points;
    if (M < 2) throw std::invalid_argument("evolve_density: need at least 2 grid points");

    Trajectory traj;
    traj.frame = rho0.frame;
    traj.omega_drive = schedule.phases.front().omega_drive();
    traj.times.resize(M);
    for (int m = 0; m < M; ++m) traj.times[m] = t_end * double(m) / double(M - 1);
    for (const auto& op : observables) traj.records[op.name] = VectorXcd::Zero(M);

    MatrixXcd rho = rho0.matrix;
    Dopri5<MatrixXcd> stepper(opts.step);
    double t = 0.0;

    record_point(traj, observables, 0, rho);
    monitor(traj, rho, true);
    if (opts.store_states) traj.snapshots.emplace_back(0.0, rho);

    std::size_t phase = 0;
    for (int m = 1; m < M; ++m) {
        double target = traj.times[m];
        // honour generator switch times exactly
        while (phase < schedule.switch_times.size() && schedule.switch_times[phase] <= target) {
            const double ts = schedule.switch_times[phase];
            if (ts > t) {
                const Generator& gen = schedule.phases[phase];
                stepper.advance([&](double tt, const MatrixXcd& y,
                                    MatrixXcd& dy) { gen.apply(tt, y, dy); },
                                rho, t, ts);
            }
            ++phase;
        }
        const Generator& gen = schedule.phases[phase];
        try {
            stepper.advance(
                [&](double tt, const MatrixXcd& y, MatrixXcd& dy) { gen.apply(tt, y, dy); }, rho,
                t, target);
        } catch (const StepUnderflowError& e) {
            throw NumericalAbort(e.what());
        }
        record_point(traj, observables, m, rho);
        const bool checkpoint = (m % std::max(1, opts.monitor_stride) == 0) || m == M - 1;
        monitor(traj, rho, checkpoint);
        if (opts.store_states) traj.snapshots.emplace_back(target, rho);
        if (traj.max_trace_drift > opts.trace_abort)
            throw NumericalAbort("evolve_density: trace drift " +
                                 std::to_string(traj.max_trace_drift) + " at t=" +
                                 std::to_string(target));
    }
    traj.n_steps = stepper.stats().n_steps;
    traj.n_rejected = stepper.stats().n_rejected;
    return traj;
}

Trajectory evolve_pure(const StateVector& psi0, const SystemParams& params,
                       const EigenBasis& basis, const FranckCondonTable& fc, double t_end,
                       const std::vector<OperatorRep>& observables, const EvolveOptions& opts) {
    const int d = basis.dim();
    if (psi0.amplitudes.size() != d)
        throw std::invalid_argument("evolve_pure: state dimension does not match basis");
    if (std::abs(psi0.amplitudes.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("evolve_pure: state must be normalised");
    const int M = opts.grid_points;

    const OperatorRep H = hamiltonian_rotating(params, basis, fc);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H.matrix);
    const MatrixXcd& V = es.eigenvectors();
    const Eigen::VectorXd& lam = es.eigenvalues();
    const VectorXcd c0 = V.adjoint() * psi0.amplitudes;

    Trajectory traj;
    traj.frame = psi0.frame;
    traj.omega_drive = params.omega_drive;
    traj.times.resize(M);
    for (const auto& op : observables) traj.records[op.name] = VectorXcd::Zero(M);

    VectorXcd psi(d), phase(d);
    for (int m = 0; m < M; ++m) {
        const double t = t_end * double(m) / double(M - 1);
        traj.times[m] = t;
        for (int k = 0; k < d; ++k) phase(k) = std::exp(complex<double>(0.0, -lam(k) * t)) * c0(k);
        psi.noalias() = V * phase;
        for (const auto& op : observables)
            traj.records[op.name](m) = psi.dot(op.matrix * psi);   // <psi|A|psi>
        traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(psi.norm() - 1.0));
        if (opts.store_states) traj.snapshots.emplace_back(t, psi * psi.adjoint());
    }
    return traj;
}

ConvergenceReport converge_in_truncation(const SystemParams& base, const DissipatorConfig& cfg,
                                         bool pure_state, double t_end,
                                         const std::vector<int>& N_list,
                                         const EvolveOptions& opts) {
    if (N_list.size() < 2)
        throw std::invalid_argument("converge_in_truncation: need at least two N values");
    for (std::size_t i = 1; i < N_list.size(); ++i)
        if (N_list[i] <= N_list[i - 1])
            throw std::invalid_argument("converge_in_truncation: N_list must be increasing");

    std::vector<VectorXcd> sigmas;
    for (int N : N_list) {
        SystemParams p = base;
        p.N = N;
        const EigenBasis basis = build_basis(p);
        const FranckCondonTable fc = build_fc_table(N, basis.alpha);
        std::vector<OperatorRep> obs{op_sigma(basis, fc)};
        Trajectory traj;
        if (pure_state) {
            StateVector psi;
            psi.amplitudes = VectorXcd::Zero(2 * N);
            psi.amplitudes(0) = 1.0;
            traj = evolve_pure(psi, p, basis, fc, t_end, obs, opts);
        } else {
            const DensityMatrix rho0 = initial_state(p);
            const GeneratorSchedule sched = assemble(p, basis, fc, cfg);
            traj = evolve_density(rho0, sched, t_end, obs, opts);
        }
        sigmas.push_back(traj.record("sigma"));
    }

    ConvergenceReport rep;
    rep.Ns = N_list;
    const VectorXcd& ref = sigmas.back();
    for (const auto& s : sigmas) rep.max_abs_diff.push_back((s - ref).cwiseAbs().maxCoeff());
    const std::size_t k = sigmas.size();
    rep.converged = rep.max_abs_diff[k - 2] < 1e-4;
    return rep;
}

} // namespace vibrodyn
