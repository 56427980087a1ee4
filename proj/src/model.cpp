#include "vibrodyn/model.hpp"

#include <cmath>
#include <stdexcept>

namespace vibrodyn {

void SystemParams::validate() const {
    if (!(omega_v > 0.0)) throw std::invalid_argument("SystemParams: omega_v must be > 0");
    if (N < 1) throw std::invalid_argument("SystemParams: N must be >= 1");
    if (gamma_D < 0.0 || gamma_deph < 0.0 || gamma_v < 0.0 || pump.gamma_p0 < 0.0)
        throw std::invalid_argument("SystemParams: rates must be >= 0");
    if (n_v < 0.0) throw std::invalid_argument("SystemParams: n_v must be >= 0");
    if (g < 0.0) throw std::invalid_argument("SystemParams: g must be >= 0");
    if (!std::isfinite(omega_sigma) || !std::isfinite(omega_drive) || !std::isfinite(Omega))
        throw std::invalid_argument("SystemParams: frequencies must be finite");
}

double thermal_occupation(double omega_v, double kT) {
    if (kT <= 0.0) return 0.0;
    return 1.0 / std::expm1(omega_v / kT);
}

EigenBasis build_basis(const SystemParams& params) {
    params.validate();
    EigenBasis b;
    b.N = params.N;
    b.alpha = DisplacementAmplitude(params.alpha());
    b.omega_v = params.omega_v;
    const double a = b.alpha.alpha;
    b.electronic_origin = (params.origin == OriginConvention::shifted)
                              ? params.omega_sigma - params.g * params.g / params.omega_v
                              : params.omega_sigma * (1.0 - a * a);
    b.energies.resize(b.dim());
    for (int n = 0; n < b.N; ++n) b.energies[b.index_g(n)] = params.omega_v * n;
    for (int nt = 0; nt < b.N; ++nt)
        b.energies[b.index_e(nt)] = b.electronic_origin + params.omega_v * nt;
    return b;
}

OperatorRep op_sigma(const EigenBasis& basis, const FranckCondonTable& fc) {
    if (fc.dim != basis.N)
        throw std::invalid_argument("op_sigma: FC table dimension does not match basis");
    if (std::abs(fc.alpha.alpha - basis.alpha.alpha) > 1e-14)
        throw std::invalid_argument("op_sigma: FC table alpha does not match basis");
    const int N = basis.N;
    OperatorRep op;
    op.name = "sigma";
    op.matrix = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    for (int n = 0; n < N; ++n)
        for (int nt = 0; nt < N; ++nt)
            op.matrix(basis.index_g(n), basis.index_e(nt)) = fc(n, nt);
    return op;
}

OperatorRep op_D(const EigenBasis& basis) {
    const int N = basis.N;
    OperatorRep op;
    op.name = "D";
    op.matrix = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    for (int n = 0; n < N; ++n) {
        op.matrix(basis.index_g(n), basis.index_g(n)) = -1.0;
        op.matrix(basis.index_e(n), basis.index_e(n)) = 1.0;
    }
    return op;
}

OperatorRep op_b(const EigenBasis& basis) {
    const int N = basis.N;
    const double a = basis.alpha.alpha;
    OperatorRep op;
    op.name = "b";
    op.matrix = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    for (int n = 1; n < N; ++n)
        op.matrix(basis.index_g(n - 1), basis.index_g(n)) = std::sqrt(double(n));
    for (int nt = 0; nt < N; ++nt) {
        if (nt >= 1)
            op.matrix(basis.index_e(nt - 1), basis.index_e(nt)) = std::sqrt(double(nt));
        op.matrix(basis.index_e(nt), basis.index_e(nt)) = -a;   // b = b~ - alpha
    }
    return op;
}

OperatorRep op_number_vibron(const EigenBasis& basis) {
    OperatorRep b = op_b(basis);
    OperatorRep op;
    op.name = "n_v";
    op.matrix = b.matrix.adjoint() * b.matrix;
    return op;
}

OperatorRep hamiltonian_rotating(const SystemParams& params, const EigenBasis& basis,
                                 const FranckCondonTable& fc) {
    const int N = basis.N;
    OperatorRep sig = op_sigma(basis, fc);
    OperatorRep op;
    op.name = "H_rot";
    op.matrix = 0.5 * params.Omega * (sig.matrix + sig.matrix.adjoint());
    for (int k = 0; k < 2 * N; ++k) {
        double e = basis.energies[k];
        if (basis.is_excited(k)) e -= params.omega_drive;
        op.matrix(k, k) += e;
    }
    return op;
}

OperatorRep hamiltonian_bare(const SystemParams& params, int N) {
    // Bare product basis, same ordering convention as the eigenbasis:
    // index n -> |g>|n>, index N+n -> |e>|n>.
    OperatorRep op;
    op.name = "H_bare";
    op.matrix = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    for (int n = 0; n < N; ++n) {
        op.matrix(n, n) = params.omega_v * n;
        op.matrix(N + n, N + n) = params.omega_sigma + params.omega_v * n;
        if (n + 1 < N) {
            const double c = params.g * std::sqrt(n + 1.0);
            op.matrix(N + n, N + n + 1) += c;   // g sigma^dag sigma b
            op.matrix(N + n + 1, N + n) += c;   // g sigma^dag sigma b^dag
        }
    }
    return op;
}

} // namespace vibrodyn
