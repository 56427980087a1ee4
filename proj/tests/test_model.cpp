#include <doctest.h>

#include <cmath>

#include "vibrodyn/model.hpp"
#include "vibrodyn/oracle.hpp"

using namespace vibrodyn;
using Eigen::MatrixXcd;

namespace {

SystemParams fig3_params(int N = 22) {
    SystemParams p;
    p.omega_sigma = 2.4;
    p.omega_v = 0.025;
    p.g = 0.025;
    p.Omega = 1e-3;
    p.omega_drive = 1.5;
    p.N = N;
    return p;
}

} // namespace

TEST_CASE("params validation") {
    SystemParams p = fig3_params();
    CHECK_NOTHROW(p.validate());
    p.gamma_D = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = fig3_params();
    p.omega_v = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = fig3_params();
    p.N = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("thermal occupation helper") {
    // n_v = 1/(exp(omega_v/kT) - 1)
    CHECK(thermal_occupation(0.025, 0.025) == doctest::Approx(1.0 / std::expm1(1.0)));
    CHECK(thermal_occupation(0.025, 0.0) == 0.0);
}

TEST_CASE("build_basis electronic origin") {
    SystemParams p = fig3_params();
    p.g = 0.0;
    CHECK(build_basis(p).electronic_origin == doctest::Approx(2.4).epsilon(1e-15));

    p = fig3_params();
    const EigenBasis b = build_basis(p);
    CHECK(b.electronic_origin == doctest::Approx(2.375).epsilon(1e-12));
    CHECK(b.alpha.alpha == doctest::Approx(1.0));

    p.g = 0.0125;
    CHECK(build_basis(p).alpha.alpha == doctest::Approx(0.5));

    // printed-formula convention collapses to zero at alpha = 1
    p = fig3_params();
    p.origin = OriginConvention::paper_printed;
    CHECK(build_basis(p).electronic_origin == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("basis ladder spacing is exactly omega_v") {
    const EigenBasis b = build_basis(fig3_params());
    for (int n = 0; n + 1 < b.N; ++n) {
        CHECK(b.energies[b.index_g(n + 1)] - b.energies[b.index_g(n)] ==
              doctest::Approx(0.025).epsilon(1e-15));
        CHECK(b.energies[b.index_e(n + 1)] - b.energies[b.index_e(n)] ==
              doctest::Approx(0.025).epsilon(1e-15));
    }
}

TEST_CASE("op_sigma structure") {
    SystemParams p = fig3_params(12);
    const EigenBasis b = build_basis(p);
    const FranckCondonTable fc = build_fc_table(p.N, b.alpha);
    const OperatorRep sig = op_sigma(b, fc);

    // strictly block-off-diagonal
    for (int n = 0; n < p.N; ++n)
        for (int m = 0; m < p.N; ++m) {
            CHECK(sig.matrix(b.index_g(n), b.index_g(m)) == std::complex<double>(0.0));
            CHECK(sig.matrix(b.index_e(n), b.index_e(m)) == std::complex<double>(0.0));
            CHECK(sig.matrix(b.index_e(n), b.index_g(m)) == std::complex<double>(0.0));
        }
    CHECK(sig.matrix(b.index_g(0), b.index_e(0)).real() ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

    // alpha = 0: identity overlap block
    SystemParams p0 = fig3_params(6);
    p0.g = 0.0;
    const EigenBasis b0 = build_basis(p0);
    const OperatorRep sig0 = op_sigma(b0, build_fc_table(p0.N, b0.alpha));
    for (int n = 0; n < p0.N; ++n)
        CHECK(sig0.matrix(b0.index_g(n), b0.index_e(n)) == std::complex<double>(1.0));

    // sigma^dag sigma approximates the excited projector away from truncation
    const MatrixXcd proj = sig.matrix.adjoint() * sig.matrix;
    const int keep = usable_columns(b.alpha, p.N);
    for (int nt = 0; nt <= keep; ++nt)
        for (int mt = 0; mt <= keep; ++mt) {
            const double expect = (nt == mt) ? 1.0 : 0.0;
            CHECK(std::abs(proj(b.index_e(nt), b.index_e(mt)).real() - expect) < 1e-8);
        }

    // mismatch detection
    const FranckCondonTable bad = build_fc_table(p.N, DisplacementAmplitude(0.3));
    CHECK_THROWS_AS(op_sigma(b, bad), std::invalid_argument);
    const FranckCondonTable small = build_fc_table(p.N - 1, b.alpha);
    CHECK_THROWS_AS(op_sigma(b, small), std::invalid_argument);
}

TEST_CASE("op_D squares to identity") {
    const EigenBasis b = build_basis(fig3_params(8));
    const MatrixXcd D = op_D(b).matrix;
    CHECK((D * D - MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("op_b shifted expectation and commutator") {
    SystemParams p = fig3_params(14);
    const EigenBasis b = build_basis(p);
    const MatrixXcd bm = op_b(b).matrix;
    // <e,0~| b |e,0~> = -alpha
    CHECK(bm(b.index_e(0), b.index_e(0)).real() == doctest::Approx(-1.0).epsilon(1e-12));
    // [b, b^dag] = 1 away from the truncation boundary row/column
    const MatrixXcd comm = bm * bm.adjoint() - bm.adjoint() * bm;
    for (int k = 0; k < 2 * p.N; ++k) {
        const int level = (k < p.N) ? k : k - p.N;
        if (level >= p.N - 1) continue;
        for (int l = 0; l < 2 * p.N; ++l) {
            const int ll = (l < p.N) ? l : l - p.N;
            if (ll >= p.N - 1) continue;
            const double expect = (k == l) ? 1.0 : 0.0;
            CHECK(std::abs(comm(k, l) - expect) < 1e-12);
        }
    }
}

TEST_CASE("number operator from ladder") {
    const EigenBasis b = build_basis(fig3_params(10));
    const MatrixXcd nv = op_number_vibron(b).matrix;
    // ground manifold: diag(n)
    for (int n = 0; n < 10; ++n)
        CHECK(nv(b.index_g(n), b.index_g(n)).real() == doctest::Approx(double(n)));
    // excited manifold: nt + alpha^2 on the diagonal (b = b~ - alpha)
    for (int nt = 0; nt + 1 < 10; ++nt)
        CHECK(nv(b.index_e(nt), b.index_e(nt)).real() ==
              doctest::Approx(double(nt) + 1.0).epsilon(1e-12));
}

TEST_CASE("rotating-frame Hamiltonian") {
    SystemParams p = fig3_params(10);
    const EigenBasis b = build_basis(p);
    const FranckCondonTable fc = build_fc_table(p.N, b.alpha);

    SUBCASE("hermitian") {
        const MatrixXcd H = hamiltonian_rotating(p, b, fc).matrix;
        CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("drive off: diagonal with excited manifold shifted down by omega") {
        SystemParams q = p;
        q.Omega = 0.0;
        const MatrixXcd H = hamiltonian_rotating(q, b, fc).matrix;
        for (int k = 0; k < 2 * q.N; ++k)
            for (int l = 0; l < 2 * q.N; ++l)
                if (k != l) CHECK(H(k, l) == std::complex<double>(0.0));
        CHECK(H(b.index_e(0), b.index_e(0)).real() ==
              doctest::Approx(2.375 - 1.5).epsilon(1e-12));
    }
    SUBCASE("uncoupled resonant drive gives two-level Rabi blocks") {
        SystemParams q = p;
        q.g = 0.0;
        q.omega_drive = q.omega_sigma;
        const EigenBasis b0 = build_basis(q);
        const FranckCondonTable fc0 = build_fc_table(q.N, b0.alpha);
        const MatrixXcd H = hamiltonian_rotating(q, b0, fc0).matrix;
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
        // eigenvalues come in pairs n omega_v +- Omega/2
        for (int n = 0; n < q.N; ++n) {
            CHECK(es.eigenvalues()(2 * n) ==
                  doctest::Approx(n * q.omega_v - 0.5 * q.Omega).epsilon(1e-10));
            CHECK(es.eigenvalues()(2 * n + 1) ==
                  doctest::Approx(n * q.omega_v + 0.5 * q.Omega).epsilon(1e-10));
        }
    }
}

TEST_CASE("bare Hamiltonian limits") {
    SystemParams p = fig3_params();
    SUBCASE("uncoupled: diagonal") {
        SystemParams q = p;
        q.g = 0.0;
        const MatrixXcd H = hamiltonian_bare(q, 8).matrix;
        for (int k = 0; k < 16; ++k)
            for (int l = 0; l < 16; ++l)
                if (k != l) CHECK(H(k, l) == std::complex<double>(0.0));
    }
    SUBCASE("ground block is the bare ladder") {
        const MatrixXcd H = hamiltonian_bare(p, 8).matrix;
        for (int n = 0; n < 8; ++n)
            CHECK(H(n, n).real() == doctest::Approx(0.025 * n).epsilon(1e-15));
    }
    SUBCASE("lowest excited eigenvalue approaches the shifted origin") {
        const auto bd = oracle::diag_bare(p, 60);
        // lowest excited level: first eigenvalue above 2 eV
        double lowest = 0.0;
        for (int k = 0; k < 120; ++k)
            if (bd.eigenvalues(k) > 2.0) {
                lowest = bd.eigenvalues(k);
                break;
            }
        CHECK(lowest == doctest::Approx(2.375).epsilon(1e-8));
    }
}

TEST_CASE("eigenbasis operators match the bare-basis transform") {
    // Transform sigma_bare = |g><e| (x) 1 into the eigenbasis obtained from
    // dense diagonalization and compare with op_sigma entrywise.
    SystemParams p = fig3_params(40);
    const EigenBasis basis = build_basis(p);
    const FranckCondonTable fc = build_fc_table(p.N, basis.alpha);
    const auto bd = oracle::diag_bare(p, p.N);

    const int N = p.N;
    // columns of V: eigenvectors ordered (g,0..N-1), (e,0..N-1), signs
    // aligned with the expected components
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    int ig = 0, ie = 0;
    for (int k = 0; k < 2 * N; ++k) {
        const auto v = bd.eigenvectors.col(k);
        if (v.tail(N).squaredNorm() > 0.5) {
            V.col(N + ie) = v;
            ++ie;
        } else {
            V.col(ig) = v;
            ++ig;
        }
    }
    REQUIRE(ig == N);
    REQUIRE(ie == N);
    for (int nt = 0; nt < N; ++nt) {   // fix eigenvector signs by FC overlap
        double ov = 0.0;
        for (int n = 0; n < N; ++n) ov += V(N + n, N + nt) * fc(n, nt);
        if (ov < 0.0) V.col(N + nt) *= -1.0;
    }

    Eigen::MatrixXd sig_bare = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    for (int n = 0; n < N; ++n) sig_bare(n, N + n) = 1.0;
    const Eigen::MatrixXd sig_eig = V.transpose() * sig_bare * V;

    const OperatorRep sig = op_sigma(basis, fc);
    const int keep = usable_columns(basis.alpha, N);
    double worst = 0.0;
    for (int n = 0; n <= keep; ++n)
        for (int nt = 0; nt <= keep; ++nt)
            worst = std::max(worst, std::abs(sig_eig(n, N + nt) -
                                             sig.matrix(n, N + nt).real()));
    CHECK(worst < 1e-8);
}
