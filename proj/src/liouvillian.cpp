#include "vibrodyn/liouvillian.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace vibrodyn {

using Eigen::MatrixXcd;
using std::complex;

void DissipatorConfig::validate(double omega_v) const {
    if (!(grouping_tol > 0.0) || !(grouping_tol < 0.5 * omega_v))
        throw std::invalid_argument("DissipatorConfig: grouping_tol must lie in (0, omega_v/2)");
    // Delta_omega values of distinct channels are exact multiples of omega_v
    // apart; channels from different k colliding within the tolerance would
    // make the grouping ambiguous.
    if (omega_v < 2.0 * grouping_tol)
        throw std::invalid_argument("DissipatorConfig: omega_v too small for grouping_tol");
}

namespace {

// Standard harmonic-ladder dissipator restricted to one N x N manifold
// block: gdn D[b] + gup D[b^dag] applied to X, accumulated into out. The
// raising channel uses the truncated operator, so its anticommutator
// coefficient vanishes on the top level (keeps the Lindblad form, and with
// it exact trace preservation, at finite N).
void ladder_dissipator(const Eigen::Block<const MatrixXcd>& X,
                       Eigen::Block<MatrixXcd> out, double gdn, double gup) {
    const int N = static_cast<int>(X.rows());
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            complex<double> v(0.0, 0.0);
            if (gdn != 0.0) {
                if (i + 1 < N && j + 1 < N)
                    v += gdn * std::sqrt(double(i + 1) * double(j + 1)) * X(i + 1, j + 1);
                v -= 0.5 * gdn * double(i + j) * X(i, j);
            }
            if (gup != 0.0) {
                if (i >= 1 && j >= 1)
                    v += gup * std::sqrt(double(i) * double(j)) * X(i - 1, j - 1);
                const double ci = (i + 1 < N) ? double(i + 1) : 0.0;
                const double cj = (j + 1 < N) ? double(j + 1) : 0.0;
                v -= 0.5 * gup * (ci + cj) * X(i, j);
            }
            out(i, j) += v;
        }
    }
}

// Gain part of the ladder dissipator only (sandwich terms).
void ladder_sandwich(const Eigen::Block<const MatrixXcd>& X,
                     Eigen::Block<MatrixXcd> out, double gdn, double gup) {
    const int N = static_cast<int>(X.rows());
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            complex<double> v(0.0, 0.0);
            if (gdn != 0.0 && i + 1 < N && j + 1 < N)
                v += gdn * std::sqrt(double(i + 1) * double(j + 1)) * X(i + 1, j + 1);
            if (gup != 0.0 && i >= 1 && j >= 1)
                v += gup * std::sqrt(double(i) * double(j)) * X(i - 1, j - 1);
            out(i, j) += v;
        }
    }
}

} // namespace

void Generator::decay_sandwich(const MatrixXcd& ree, MatrixXcd& out_gg) const {
    const int N = n_;
    if (grouping_ == DecayGrouping::single_collective) {
        out_gg.noalias() += gamma_D_ * (W_ * ree * W_.adjoint());
        return;
    }
    // One jump operator per k = nt - n; pairs within a channel share k.
    for (int k = -(N - 1); k <= N - 1; ++k) {
        const int n_lo = std::max(0, -k);
        const int n_hi = N - 1 - std::max(0, k);   // n and n + k both in range
        for (int n1 = n_lo; n1 <= n_hi; ++n1)
            for (int n2 = n_lo; n2 <= n_hi; ++n2)
                out_gg(n1, n2) += gamma_D_ * W_(n1, n1 + k) * std::conj(W_(n2, n2 + k)) *
                                  ree(n1 + k, n2 + k);
    }
}

void Generator::pump_sandwich(const MatrixXcd& rgg, MatrixXcd& out_ee) const {
    const int N = n_;
    if (grouping_ == DecayGrouping::single_collective) {
        out_ee.noalias() += gamma_p_ * (W_.adjoint() * rgg * W_);
        return;
    }
    for (int k = -(N - 1); k <= N - 1; ++k) {
        const int n_lo = std::max(0, -k);
        const int n_hi = N - 1 - std::max(0, k);
        for (int n1 = n_lo; n1 <= n_hi; ++n1)
            for (int n2 = n_lo; n2 <= n_hi; ++n2)
                out_ee(n1 + k, n2 + k) += gamma_p_ * std::conj(W_(n1, n1 + k)) *
                                          W_(n2, n2 + k) * rgg(n1, n2);
    }
}

void Generator::apply(double t, const MatrixXcd& rho, MatrixXcd& drho) const {
    const int N = n_;
    const int d = 2 * N;
    drho.resize(d, d);

    // Hamiltonian diagonal: -i (E_i - E_j) rho_ij
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            drho(i, j) = complex<double>(0.0, -(ediag_(i) - ediag_(j))) * rho(i, j);

    // Drive commutator -i (Omega/2) [z sigma + conj(z) sigma^dag, rho],
    // z = exp(i omega t) in the lab frame and 1 in the rotating frame.
    if (Omega_ != 0.0) {
        complex<double> z(1.0, 0.0);
        if (frame_ == FrameKind::lab) z = std::exp(complex<double>(0.0, omega_drive_ * t));
        MatrixXcd Trho(d, d), rhoT(d, d);
        Trho.topRows(N).noalias() = z * (W_ * rho.bottomRows(N));
        Trho.bottomRows(N).noalias() = std::conj(z) * (W_.adjoint() * rho.topRows(N));
        rhoT.rightCols(N).noalias() = z * (rho.leftCols(N) * W_);
        rhoT.leftCols(N).noalias() = std::conj(z) * (rho.rightCols(N) * W_.adjoint());
        drho += complex<double>(0.0, -0.5 * Omega_) * (Trho - rhoT);
    }

    // Dephasing (gamma/4)(D rho D - rho): -gamma/2 on cross-manifold blocks.
    if (gamma_deph_ != 0.0) {
        drho.block(0, N, N, N) -= 0.5 * gamma_deph_ * rho.block(0, N, N, N);
        drho.block(N, 0, N, N) -= 0.5 * gamma_deph_ * rho.block(N, 0, N, N);
    }

    // Exciton decay: feed rho_gg from rho_ee, damp excited rows/cols with
    // the (gamma_D/2) A^dag A kernel.
    if (gamma_D_ != 0.0) {
        const MatrixXcd ree = rho.block(N, N, N, N);
        MatrixXcd feed = MatrixXcd::Zero(N, N);
        decay_sandwich(ree, feed);
        drho.block(0, 0, N, N) += feed;
        drho.block(N, 0, N, d).noalias() -= Ke_ * rho.block(N, 0, N, d);
        drho.block(0, N, d, N).noalias() -= rho.block(0, N, d, N) * Ke_;
    }

    // Incoherent pump: adjoint jump operators at rate gamma_p.
    if (gamma_p_ != 0.0) {
        const MatrixXcd rgg = rho.block(0, 0, N, N);
        MatrixXcd feed = MatrixXcd::Zero(N, N);
        pump_sandwich(rgg, feed);
        drho.block(N, N, N, N) += feed;
        drho.block(0, 0, N, d).noalias() -= Kg_ * rho.block(0, 0, N, d);
        drho.block(0, 0, d, N).noalias() -= rho.block(0, 0, d, N) * Kg_;
    }

    // Vibron relaxation, blockwise: thermal ladder within each manifold,
    // cross-manifold coherences untouched by this term.
    if (inc_vibron_ && (gv_down_ != 0.0 || gv_up_ != 0.0)) {
        ladder_dissipator(rho.block(0, 0, N, N), drho.block(0, 0, N, N), gv_down_, gv_up_);
        ladder_dissipator(rho.block(N, N, N, N), drho.block(N, N, N, N), gv_down_, gv_up_);
    }
}

void Generator::apply_jump_part(const MatrixXcd& rho, MatrixXcd& out) const {
    const int N = n_;
    const int d = 2 * N;
    out = MatrixXcd::Zero(d, d);

    if (gamma_D_ != 0.0) {
        const MatrixXcd ree = rho.block(N, N, N, N);
        MatrixXcd feed = MatrixXcd::Zero(N, N);
        decay_sandwich(ree, feed);
        out.block(0, 0, N, N) += feed;
    }
    if (gamma_p_ != 0.0) {
        const MatrixXcd rgg = rho.block(0, 0, N, N);
        MatrixXcd feed = MatrixXcd::Zero(N, N);
        pump_sandwich(rgg, feed);
        out.block(N, N, N, N) += feed;
    }
    if (gamma_deph_ != 0.0) {
        // jump operator sqrt(gamma_deph)/2 D: sandwich (gamma/4) D rho D
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) {
                const double si = (i < N) ? -1.0 : 1.0;
                const double sj = (j < N) ? -1.0 : 1.0;
                out(i, j) += 0.25 * gamma_deph_ * si * sj * rho(i, j);
            }
    }
    if (inc_vibron_ && (gv_down_ != 0.0 || gv_up_ != 0.0)) {
        ladder_sandwich(rho.block(0, 0, N, N), out.block(0, 0, N, N), gv_down_, gv_up_);
        ladder_sandwich(rho.block(N, N, N, N), out.block(N, N, N, N), gv_down_, gv_up_);
    }
}

Eigen::MatrixXcd Generator::dense_superoperator(double t) const {
    const int d = dim();
    const int d2 = d * d;
    MatrixXcd L(d2, d2);
    MatrixXcd unit = MatrixXcd::Zero(d, d);
    MatrixXcd col;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            unit(i, j) = 1.0;
            apply(t, unit, col);
            L.col(i + j * d) = Eigen::Map<const Eigen::VectorXcd>(col.data(), d2);
            unit(i, j) = 0.0;
        }
    return L;
}

const Generator& GeneratorSchedule::at(double t) const {
    std::size_t i = 0;
    while (i < switch_times.size() && t >= switch_times[i]) ++i;
    return phases.at(i);
}

bool GeneratorSchedule::time_dependent() const {
    if (phases.size() > 1) return true;
    for (const auto& p : phases)
        if (p.time_dependent()) return true;
    return false;
}

Generator assemble_phase(const SystemParams& params, const EigenBasis& basis,
                         const FranckCondonTable& fc, const DissipatorConfig& cfg,
                         double gamma_p, FrameKind frame) {
    params.validate();
    cfg.validate(params.omega_v);
    if (fc.dim != basis.N)
        throw std::invalid_argument("assemble: FC table dimension does not match basis");
    if (std::abs(fc.alpha.alpha - basis.alpha.alpha) > 1e-14)
        throw std::invalid_argument("assemble: FC table alpha does not match basis");

    const int N = basis.N;
    Generator g;
    g.n_ = N;
    g.frame_ = frame;
    g.omega_drive_ = params.omega_drive;
    g.Omega_ = params.Omega;
    g.W_ = fc.entry.cast<complex<double>>();
    g.grouping_ = cfg.decay_grouping;

    g.ediag_.resize(2 * N);
    for (int k = 0; k < 2 * N; ++k) {
        double e = basis.energies[k];
        if (frame == FrameKind::rotating && basis.is_excited(k)) e -= params.omega_drive;
        g.ediag_(k) = e;
    }

    g.gamma_deph_ = cfg.include_dephasing ? params.gamma_deph : 0.0;
    g.gamma_D_ = cfg.include_decay ? params.gamma_D : 0.0;
    g.gamma_p_ = cfg.include_pump ? gamma_p : 0.0;
    g.inc_vibron_ = cfg.include_vibron;
    if (cfg.include_vibron) {
        g.gv_down_ = params.gamma_v * (1.0 + params.n_v);
        g.gv_up_ = params.gamma_v * params.n_v;
    }

    // Anticommutator kernels (1/2) sum_k rate A_k^dag A_k. For the secular
    // grouping these are the diagonals of the collective Gram matrices.
    MatrixXcd gram_e = g.W_.adjoint() * g.W_;   // sum_n <n|nt1><n|nt2>
    MatrixXcd gram_g = g.W_ * g.W_.adjoint();
    if (cfg.decay_grouping == DecayGrouping::secular_by_dw) {
        const Eigen::VectorXcd de = gram_e.diagonal();
        const Eigen::VectorXcd dg = gram_g.diagonal();
        gram_e = de.asDiagonal();
        gram_g = dg.asDiagonal();
    }
    g.Ke_ = 0.5 * g.gamma_D_ * gram_e;
    g.Kg_ = 0.5 * g.gamma_p_ * gram_g;
    return g;
}

GeneratorSchedule assemble(const SystemParams& params, const EigenBasis& basis,
                           const FranckCondonTable& fc, const DissipatorConfig& cfg,
                           FrameKind frame) {
    GeneratorSchedule s;
    const PumpSchedule& pump = params.pump;
    const bool pulsed = cfg.include_pump && pump.shape == PumpShape::rectangular_pulse &&
                        pump.gamma_p0 > 0.0 && pump.t0 > 0.0;
    if (pulsed) {
        s.phases.push_back(assemble_phase(params, basis, fc, cfg, pump.gamma_p0, frame));
        s.phases.push_back(assemble_phase(params, basis, fc, cfg, 0.0, frame));
        s.switch_times.push_back(pump.t0);
    } else {
        const double gp = (cfg.include_pump && pump.shape == PumpShape::constant)
                              ? pump.gamma_p0
                              : 0.0;
        s.phases.push_back(assemble_phase(params, basis, fc, cfg, gp, frame));
    }
    return s;
}

} // namespace vibrodyn
