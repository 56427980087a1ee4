#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <iostream>
#include <random>

#include "vibrodyn/oracle.hpp"
#include "vibrodyn/runner.hpp"

namespace vibrodyn {

namespace {

using Eigen::MatrixXcd;
using std::complex;

struct Reporter {
    std::ostream& out;
    int failed = 0;
    void check(const std::string& name, bool ok, const std::string& detail = "") {
        out << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) out << "  (" << detail << ")";
        out << "\n";
        if (!ok) ++failed;
    }
    void info(const std::string& name, const std::string& detail) {
        out << "[INFO] " << name << "  (" << detail << ")\n";
    }
};

SystemParams toy_params(int N, double g = 0.025) {
    SystemParams p;
    p.omega_sigma = 2.4;
    p.omega_v = 0.025;
    p.g = g;
    p.Omega = 1e-3;
    p.omega_drive = 1.5;
    p.gamma_D = 1e-3;
    p.gamma_deph = 5e-3;
    p.gamma_v = 2e-4;
    p.N = N;
    return p;
}

MatrixXcd random_density(int d, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXcd A(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) A(i, j) = complex<double>(gauss(rng), gauss(rng));
    MatrixXcd rho = A * A.adjoint();
    rho /= rho.trace().real();
    return rho;
}

} // namespace

int validate(std::ostream& out) {
    Reporter rep{out};

    // Franck-Condon truncated unitarity over the working alpha range.
    {
        double worst = 0.0;
        for (double a : {0.25, 0.5, 1.0, 2.0}) {
            const DisplacementAmplitude alpha(a);
            const int N = required_truncation(alpha) + 10;
            const int keep = usable_columns(alpha, N);
            const FranckCondonTable t = build_fc_table(N, alpha);
            for (int c1 = 0; c1 <= keep; ++c1)
                for (int c2 = 0; c2 <= keep; ++c2) {
                    double dot = 0.0;
                    for (int n = 0; n < N; ++n) dot += t(n, c1) * t(n, c2);
                    worst = std::max(worst, std::abs(dot - (c1 == c2 ? 1.0 : 0.0)));
                }
        }
        rep.check("fc_truncated_unitarity", worst < 1e-8, "worst " + format_number(worst));
    }

    // Overlap table vs the displacement matrix exponential.
    {
        const int N = 12;
        const double a = 1.0;
        const FranckCondonTable t = build_fc_table(N, DisplacementAmplitude(a));
        const Eigen::MatrixXd ref = oracle::displaced_overlaps(N, a);
        const double diff = (t.entry - ref).cwiseAbs().maxCoeff();
        rep.check("fc_vs_displacement_expm", diff < 1e-10, "max diff " + format_number(diff));
    }

    // Eigenstructure against dense diagonalization in the bare basis.
    {
        SystemParams p = toy_params(50);
        const EigenBasis basis = build_basis(p);
        const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
        const auto bd = oracle::diag_bare(p, p.N);
        // classify eigenvectors by their excited-block weight
        std::vector<double> ground, excited;
        std::vector<int> excited_idx;
        for (int k = 0; k < 2 * p.N; ++k) {
            const double we = bd.eigenvectors.col(k).tail(p.N).squaredNorm();
            if (we > 0.5) {
                excited.push_back(bd.eigenvalues(k));
                excited_idx.push_back(k);
            } else {
                ground.push_back(bd.eigenvalues(k));
            }
        }
        const int keep = usable_columns(basis.alpha, p.N);
        double worst = 0.0;
        for (int n = 0; n <= keep; ++n) {
            worst = std::max(worst, std::abs(ground[n] - basis.energies[basis.index_g(n)]));
            worst = std::max(worst, std::abs(excited[n] - basis.energies[basis.index_e(n)]));
        }
        rep.check("bare_diag_energies", worst < 1e-6, "worst " + format_number(worst) + " eV");

        double worst_ov = 1.0;
        for (int nt = 0; nt <= std::min(20, keep); ++nt) {
            const auto v = bd.eigenvectors.col(excited_idx[nt]).tail(p.N);
            double ov = 0.0;
            for (int n = 0; n < p.N; ++n) ov += v(n) * fc(n, nt);
            worst_ov = std::min(worst_ov, std::abs(ov));
        }
        rep.check("bare_diag_eigenvectors", worst_ov > 1.0 - 1e-6,
                  "min overlap " + format_number(worst_ov));
    }

    // Trace preservation on all matrix units, both groupings, pump on.
    {
        double worst = 0.0;
        for (auto grouping : {DecayGrouping::secular_by_dw, DecayGrouping::single_collective}) {
            SystemParams p = toy_params(4);
            p.pump.gamma_p0 = 2e-3;
            p.pump.shape = PumpShape::constant;
            p.n_v = 0.3;
            const EigenBasis basis = build_basis(p);
            const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
            DissipatorConfig cfg;
            cfg.decay_grouping = grouping;
            const Generator gen = assemble_phase(p, basis, fc, cfg, p.pump.gamma_p0);
            const int d = 2 * p.N;
            MatrixXcd unit = MatrixXcd::Zero(d, d), dr;
            for (int j = 0; j < d; ++j)
                for (int i = 0; i < d; ++i) {
                    unit(i, j) = 1.0;
                    gen.apply(0.0, unit, dr);
                    worst = std::max(worst, std::abs(dr.trace()));
                    unit(i, j) = 0.0;
                }
        }
        rep.check("trace_preservation_matrix_units", worst < 1e-12,
                  "worst " + format_number(worst));
    }

    // Hermiticity preservation on random states.
    {
        SystemParams p = toy_params(4);
        p.pump.gamma_p0 = 1e-3;
        p.pump.shape = PumpShape::constant;
        const EigenBasis basis = build_basis(p);
        const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
        const Generator gen = assemble_phase(p, basis, fc, DissipatorConfig{}, p.pump.gamma_p0);
        std::mt19937 rng(7);
        double worst = 0.0;
        MatrixXcd dr;
        for (int k = 0; k < 20; ++k) {
            const MatrixXcd rho = random_density(2 * p.N, rng);
            gen.apply(0.0, rho, dr);
            worst = std::max(worst, (dr - dr.adjoint()).cwiseAbs().maxCoeff());
        }
        rep.check("hermiticity_preservation", worst < 1e-12, "worst " + format_number(worst));
    }

    // Complete positivity of the jump (gain) part via its Choi matrix.
    {
        SystemParams p = toy_params(4);
        p.pump.gamma_p0 = 2e-3;
        p.pump.shape = PumpShape::constant;
        p.n_v = 0.2;
        const EigenBasis basis = build_basis(p);
        const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
        double worst = 0.0;
        for (auto grouping : {DecayGrouping::secular_by_dw, DecayGrouping::single_collective}) {
            DissipatorConfig cfg;
            cfg.decay_grouping = grouping;
            const Generator gen = assemble_phase(p, basis, fc, cfg, p.pump.gamma_p0);
            const int d = 2 * p.N;
            MatrixXcd choi = MatrixXcd::Zero(d * d, d * d);
            MatrixXcd unit = MatrixXcd::Zero(d, d), img;
            for (int j = 0; j < d; ++j)
                for (int i = 0; i < d; ++i) {
                    unit(i, j) = 1.0;
                    gen.apply_jump_part(unit, img);
                    // Choi = sum_{ij} Phi(E_ij) (x) E_ij
                    for (int l = 0; l < d; ++l)
                        for (int k = 0; k < d; ++k) choi(k * d + i, l * d + j) = img(k, l);
                    unit(i, j) = 0.0;
                }
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (choi + choi.adjoint()),
                                                        Eigen::EigenvaluesOnly);
            worst = std::min(worst, es.eigenvalues().minCoeff());
        }
        rep.check("choi_jump_part_psd", worst > -1e-10, "min eigenvalue " + format_number(worst));
    }

    // Generator spectrum: stability and a unique steady state without pump.
    {
        SystemParams p = toy_params(5);
        const EigenBasis basis = build_basis(p);
        const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
        const Generator gen = assemble_phase(p, basis, fc, DissipatorConfig{}, 0.0);
        const MatrixXcd L = gen.dense_superoperator();
        Eigen::ComplexEigenSolver<MatrixXcd> es(L);
        double max_re = -1.0;
        int zeros = 0;
        for (int k = 0; k < L.rows(); ++k) {
            max_re = std::max(max_re, es.eigenvalues()(k).real());
            if (std::abs(es.eigenvalues()(k)) < 1e-10) ++zeros;
        }
        rep.check("generator_stability", max_re < 1e-10, "max Re " + format_number(max_re));
        rep.check("generator_unique_steady_state", zeros == 1,
                  std::to_string(zeros) + " zero eigenvalues");
    }

    // Elementwise master equation (lab frame, collective) vs the assembled
    // generator on random states.
    {
        SystemParams p = toy_params(4);
        p.pump.gamma_p0 = 1.5e-3;
        p.pump.shape = PumpShape::constant;
        p.n_v = 0.4;
        const EigenBasis basis = build_basis(p);
        const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
        DissipatorConfig cfg;
        cfg.decay_grouping = DecayGrouping::single_collective;
        const Generator gen =
            assemble_phase(p, basis, fc, cfg, p.pump.gamma_p0, FrameKind::lab);
        const Eigen::MatrixXd W = oracle::displaced_overlaps(p.N, p.alpha());
        std::mt19937 rng(11);
        double worst = 0.0;
        MatrixXcd dr;
        for (int k = 0; k < 100; ++k) {
            const MatrixXcd rho = random_density(2 * p.N, rng);
            const double t = 0.37 * k;
            gen.apply(t, rho, dr);
            const MatrixXcd ref = oracle::element_ode_rhs(rho, p, W, t);
            worst = std::max(worst, (dr - ref).cwiseAbs().maxCoeff());
        }
        rep.check("elementwise_equations_match", worst < 1e-12, "worst " + format_number(worst));
    }

    // Adaptive integration vs dense matrix-exponential propagation.
    {
        SystemParams p = toy_params(5);
        const EigenBasis basis = build_basis(p);
        const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
        const GeneratorSchedule sched = assemble(p, basis, fc, DissipatorConfig{});
        const DensityMatrix rho0 = initial_state(p);
        EvolveOptions opts;
        opts.grid_points = 11;
        opts.step.rtol = 1e-10;
        opts.step.atol = 1e-13;
        opts.store_states = true;
        const Trajectory traj =
            evolve_density(rho0, sched, 50.0, {op_sigma(basis, fc)}, opts);
        double worst = 0.0;
        for (const auto& [t, rho] : traj.snapshots) {
            const MatrixXcd ref = oracle::expm_propagate(rho0.matrix, sched.phases[0], t);
            worst = std::max(worst, (rho - ref).cwiseAbs().maxCoeff());
        }
        rep.check("rk_vs_expm", worst < 1e-7, "worst " + format_number(worst));
    }

    // Thermal ground-manifold state is a fixed point of the vibron
    // dissipator alone (detailed balance at the KMS ratio).
    {
        SystemParams p = toy_params(8, 0.0);
        p.Omega = 0.0;
        p.n_v = 0.7;
        const EigenBasis basis = build_basis(p);
        const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
        DissipatorConfig cfg;
        cfg.include_decay = cfg.include_pump = cfg.include_dephasing = false;
        const Generator gen = assemble_phase(p, basis, fc, cfg, 0.0);
        const DensityMatrix rho_th = initial_state(p);
        MatrixXcd dr;
        gen.apply(0.0, rho_th.matrix, dr);
        const double worst = dr.cwiseAbs().maxCoeff();
        rep.check("kms_thermal_fixed_point", worst < 1e-12, "max |drho| " + format_number(worst));
    }

    // Two-level resonant Rabi flopping against the analytic solution.
    {
        SystemParams p;
        p.omega_sigma = 2.4;
        p.omega_v = 0.025;
        p.g = 0.0;
        p.Omega = 1e-3;
        p.omega_drive = 2.4;
        p.N = 2;
        const EigenBasis basis = build_basis(p);
        const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
        const GeneratorSchedule sched = assemble(p, basis, fc, DissipatorConfig{});
        const DensityMatrix rho0 = initial_state(p);
        EvolveOptions opts;
        opts.grid_points = 65;
        const double t_end = 2.0 * 2.0 * M_PI / p.Omega;
        const Trajectory traj = evolve_density(rho0, sched, t_end, {op_D(basis)}, opts);
        double worst = 0.0;
        for (std::size_t m = 0; m < traj.times.size(); ++m) {
            const double pe = 0.5 * (1.0 - std::cos(p.Omega * traj.times[m]));
            const double pe_num = 0.5 * (traj.record("D")(m).real() + 1.0);
            worst = std::max(worst, std::abs(pe - pe_num));
        }
        rep.check("resonant_rabi_flopping", worst < 1e-6, "worst " + format_number(worst));
    }

    // Decay-grouping comparison: identical populations for a coherence-free
    // initial state with the drive off, and the bounded |sigma| difference
    // in the strong-coupling regime (reported, not asserted).
    {
        SystemParams p = toy_params(30);   // comfortably margin-compliant for alpha = 1
        p.Omega = 0.0;
        const EigenBasis basis = build_basis(p);
        const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
        MatrixXcd rho0m = MatrixXcd::Zero(2 * p.N, 2 * p.N);
        rho0m(p.N + 2, p.N + 2) = 0.6;   // populated excited levels, no coherences
        rho0m(0, 0) = 0.4;
        DensityMatrix rho0{rho0m, FrameKind::rotating, 0.0};
        EvolveOptions opts;
        opts.grid_points = 33;
        opts.step.rtol = 1e-11;
        opts.step.atol = 1e-14;
        std::vector<OperatorRep> obs{op_D(basis)};
        DissipatorConfig cfg_s, cfg_c;
        cfg_c.decay_grouping = DecayGrouping::single_collective;
        Trajectory ts = evolve_density(rho0, assemble(p, basis, fc, cfg_s), 3000.0, obs, opts);
        Trajectory tc = evolve_density(rho0, assemble(p, basis, fc, cfg_c), 3000.0, obs, opts);
        const double dD = (ts.record("D") - tc.record("D")).cwiseAbs().maxCoeff();
        rep.check("grouping_population_equivalence", dD < 1e-10, "max |dD| " + format_number(dD));

        SystemParams pf = toy_params(14);
        const EigenBasis bf = build_basis(pf);
        const FranckCondonTable fcf = build_fc_table(pf.N, bf.alpha);
        EvolveOptions o2;
        o2.grid_points = 512;
        std::vector<OperatorRep> o2s{op_sigma(bf, fcf)};
        const DensityMatrix r0 = initial_state(pf);
        Trajectory fs = evolve_density(r0, assemble(pf, bf, fcf, cfg_s), 800.0, o2s, o2);
        Trajectory fc2 = evolve_density(r0, assemble(pf, bf, fcf, cfg_c), 800.0, o2s, o2);
        double dmax = 0.0, smax = 0.0;
        for (int m = 0; m < 512; ++m) {
            dmax = std::max(dmax, std::abs(std::abs(fs.record("sigma")(m)) -
                                           std::abs(fc2.record("sigma")(m))));
            smax = std::max(smax, std::abs(fs.record("sigma")(m)));
        }
        rep.info("grouping_sigma_difference",
                 "max ||sigma|_secular - |sigma|_collective| = " + format_number(dmax) +
                     " vs max |sigma| = " + format_number(smax));
    }

    out << (rep.failed == 0 ? "all checks passed\n"
                            : std::to_string(rep.failed) + " check(s) failed\n");
    return rep.failed;
}

} // namespace vibrodyn
