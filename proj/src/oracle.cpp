#include "vibrodyn/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace vibrodyn::oracle {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using std::complex;

BareDiag diag_bare(const SystemParams& params, int N) {
    if (N < 1 || N > 200) throw std::invalid_argument("diag_bare: N out of range [1, 200]");
    const int d = 2 * N;
    MatrixXd H = MatrixXd::Zero(d, d);
    for (int n = 0; n < N; ++n) {
        H(n, n) = params.omega_v * n;                                  // |g,n>
        H(N + n, N + n) = params.omega_sigma + params.omega_v * n;     // |e,n>
        if (n + 1 < N) {
            const double c = params.g * std::sqrt(n + 1.0);
            H(N + n, N + n + 1) = c;
            H(N + n + 1, N + n) = c;
        }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::MatrixXd displaced_overlaps(int N, double alpha) {
    if (N < 1) throw std::invalid_argument("displaced_overlaps: N must be >= 1");
    // Pad the working basis so the cropped block is free of truncation error.
    const int pad = static_cast<int>(std::ceil(4.0 * alpha * alpha + 10.0 * alpha + 20.0));
    const int D = N + pad;
    // Generator of D(-alpha) = exp(-alpha (b^dag - b)): the displaced states
    // of the b~ = b + alpha ladder.
    MatrixXd A = MatrixXd::Zero(D, D);
    for (int n = 0; n + 1 < D; ++n) {
        A(n + 1, n) = -alpha * std::sqrt(n + 1.0);
        A(n, n + 1) = alpha * std::sqrt(n + 1.0);
    }
    MatrixXd disp = A.exp();
    return disp.topLeftCorner(N, N);
}

Eigen::MatrixXcd element_ode_rhs(const MatrixXcd& rho, const SystemParams& params,
                                 const MatrixXd& W, double t) {
    const int N = W.rows();
    if (rho.rows() != 2 * N || rho.cols() != 2 * N || W.cols() != N)
        throw std::invalid_argument("element_ode_rhs: dimension mismatch");

    const double wv = params.omega_v;
    const double a = params.alpha();
    const double origin = (params.origin == OriginConvention::shifted)
                              ? params.omega_sigma - params.g * params.g / params.omega_v
                              : params.omega_sigma * (1.0 - a * a);
    const double gD = params.gamma_D;
    const double gp = params.pump.rate_at(t);
    const double gdeph = params.gamma_deph;
    const double qdn = params.gamma_v * (1.0 + params.n_v);
    const double qup = params.gamma_v * params.n_v;
    const complex<double> I(0.0, 1.0);
    const complex<double> eip = std::exp(I * params.omega_drive * t);    // e^{+i w t}
    const complex<double> eim = std::conj(eip);
    const double hO = 0.5 * params.Omega;

    // Truncated Gram matrices of the overlap columns/rows.
    const MatrixXd Ge = W.transpose() * W;   // Ge(nt1,nt2) = sum_n W(n,nt1) W(n,nt2)
    const MatrixXd Gg = W * W.transpose();

    auto gg = [&](int n1, int n2) { return rho(n1, n2); };
    auto ge = [&](int n, int nt) { return rho(n, N + nt); };
    auto eg = [&](int nt, int n) { return rho(N + nt, n); };
    auto ee = [&](int nt1, int nt2) { return rho(N + nt1, N + nt2); };

    MatrixXcd out = MatrixXcd::Zero(2 * N, 2 * N);

    // excited-excited elements
    for (int nt1 = 0; nt1 < N; ++nt1)
        for (int nt2 = 0; nt2 < N; ++nt2) {
            complex<double> v = -I * wv * double(nt1 - nt2) * ee(nt1, nt2);
            for (int n1 = 0; n1 < N; ++n1) v += -I * hO * eim * W(n1, nt1) * ge(n1, nt2);
            for (int n2 = 0; n2 < N; ++n2) v += I * hO * eip * W(n2, nt2) * eg(nt1, n2);
            for (int nt = 0; nt < N; ++nt)
                v -= 0.5 * gD * (Ge(nt1, nt) * ee(nt, nt2) + ee(nt1, nt) * Ge(nt, nt2));
            if (gp != 0.0)
                for (int n1 = 0; n1 < N; ++n1)
                    for (int n2 = 0; n2 < N; ++n2)
                        v += gp * W(n1, nt1) * W(n2, nt2) * gg(n1, n2);
            if (nt1 + 1 < N && nt2 + 1 < N)
                v += qdn * std::sqrt(double(nt1 + 1) * double(nt2 + 1)) * ee(nt1 + 1, nt2 + 1);
            v -= 0.5 * qdn * double(nt1 + nt2) * ee(nt1, nt2);
            if (qup != 0.0) {
                if (nt1 >= 1 && nt2 >= 1)
                    v += qup * std::sqrt(double(nt1) * double(nt2)) * ee(nt1 - 1, nt2 - 1);
                const double c1 = (nt1 + 1 < N) ? double(nt1 + 1) : 0.0;
                const double c2 = (nt2 + 1 < N) ? double(nt2 + 1) : 0.0;
                v -= 0.5 * qup * (c1 + c2) * ee(nt1, nt2);
            }
            out(N + nt1, N + nt2) = v;
        }

    // ground-excited coherences
    for (int n = 0; n < N; ++n)
        for (int nt = 0; nt < N; ++nt) {
            complex<double> v = I * (origin + wv * double(nt - n)) * ge(n, nt);
            complex<double> drive(0.0, 0.0);
            for (int nt1 = 0; nt1 < N; ++nt1) drive += W(n, nt1) * ee(nt1, nt);
            for (int n2 = 0; n2 < N; ++n2) drive -= W(n2, nt) * gg(n, n2);
            v += -I * hO * eip * drive;
            v -= 0.5 * gdeph * ge(n, nt);
            for (int nt2 = 0; nt2 < N; ++nt2) v -= 0.5 * gD * ge(n, nt2) * Ge(nt2, nt);
            if (gp != 0.0)
                for (int n2 = 0; n2 < N; ++n2) v -= 0.5 * gp * Gg(n, n2) * ge(n2, nt);
            out(n, N + nt) = v;
        }

    // excited-ground coherences
    for (int nt = 0; nt < N; ++nt)
        for (int n = 0; n < N; ++n) {
            complex<double> v = -I * (origin + wv * double(nt - n)) * eg(nt, n);
            complex<double> drive(0.0, 0.0);
            for (int n1 = 0; n1 < N; ++n1) drive += W(n1, nt) * gg(n1, n);
            for (int nt2 = 0; nt2 < N; ++nt2) drive -= W(n, nt2) * ee(nt, nt2);
            v += -I * hO * eim * drive;
            v -= 0.5 * gdeph * eg(nt, n);
            for (int nt2 = 0; nt2 < N; ++nt2) v -= 0.5 * gD * Ge(nt, nt2) * eg(nt2, n);
            if (gp != 0.0)
                for (int n2 = 0; n2 < N; ++n2) v -= 0.5 * gp * eg(nt, n2) * Gg(n2, n);
            out(N + nt, n) = v;
        }

    // ground-ground elements
    for (int n1 = 0; n1 < N; ++n1)
        for (int n2 = 0; n2 < N; ++n2) {
            complex<double> v = -I * wv * double(n1 - n2) * gg(n1, n2);
            for (int nt1 = 0; nt1 < N; ++nt1) v += -I * hO * eip * W(n1, nt1) * eg(nt1, n2);
            for (int nt2 = 0; nt2 < N; ++nt2) v += I * hO * eim * W(n2, nt2) * ge(n1, nt2);
            if (gp != 0.0)
                for (int n = 0; n < N; ++n)
                    v -= 0.5 * gp * (Gg(n1, n) * gg(n, n2) + gg(n1, n) * Gg(n, n2));
            for (int nt1 = 0; nt1 < N; ++nt1)
                for (int nt2 = 0; nt2 < N; ++nt2)
                    v += gD * W(n1, nt1) * W(n2, nt2) * ee(nt1, nt2);
            if (n1 + 1 < N && n2 + 1 < N)
                v += qdn * std::sqrt(double(n1 + 1) * double(n2 + 1)) * gg(n1 + 1, n2 + 1);
            v -= 0.5 * qdn * double(n1 + n2) * gg(n1, n2);
            if (qup != 0.0) {
                if (n1 >= 1 && n2 >= 1)
                    v += qup * std::sqrt(double(n1) * double(n2)) * gg(n1 - 1, n2 - 1);
                const double c1 = (n1 + 1 < N) ? double(n1 + 1) : 0.0;
                const double c2 = (n2 + 1 < N) ? double(n2 + 1) : 0.0;
                v -= 0.5 * qup * (c1 + c2) * gg(n1, n2);
            }
            out(n1, n2) = v;
        }

    return out;
}

Eigen::MatrixXcd expm_propagate(const MatrixXcd& rho0, const Generator& gen, double t) {
    const int d = gen.dim();
    if (d * d > 10000)
        throw std::invalid_argument("expm_propagate: dimension cap (2N)^2 <= 1e4 exceeded");
    if (gen.time_dependent())
        throw std::invalid_argument("expm_propagate: generator must be time-independent");
    if (rho0.rows() != d || rho0.cols() != d)
        throw std::invalid_argument("expm_propagate: state dimension mismatch");
    MatrixXcd L = gen.dense_superoperator(0.0);
    MatrixXcd U = (t * L).exp();
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), d * d);
    Eigen::VectorXcd w = U * v;
    return Eigen::Map<const MatrixXcd>(w.data(), d, d);
}

} // namespace vibrodyn::oracle
