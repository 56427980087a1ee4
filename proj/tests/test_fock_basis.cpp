#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "vibrodyn/fock_basis.hpp"
#include "vibrodyn/oracle.hpp"

using namespace vibrodyn;

namespace {

// Independent extended-precision oracles.

long double binomial_ld(int n, int k) {
    long double v = 1.0L;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

// L_n^{(k)}(x) = sum_{i=0}^{n} (-1)^i C(n+k, n-i) x^i / i!
long double laguerre_series_ld(int n, int k, long double x) {
    long double sum = 0.0L, xi = 1.0L, fact = 1.0L;
    for (int i = 0; i <= n; ++i) {
        if (i > 0) {
            xi *= x;
            fact *= i;
        }
        const long double term = binomial_ld(n + k, n - i) * xi / fact;
        sum += (i % 2 == 0) ? term : -term;
    }
    return sum;
}

long double factorial_ld(int n) {
    long double v = 1.0L;
    for (int i = 2; i <= n; ++i) v *= i;
    return v;
}

// <n|nt_alpha> for the b~ = b + alpha ladder (displacement -alpha), by the
// explicit factorial series.
long double overlap_series_ld(int n, int nt, long double a) {
    const int lo = std::min(n, nt);
    const int m = std::abs(n - nt);
    const long double pref = powl(a, m) * sqrtl(factorial_ld(lo) / factorial_ld(lo + m)) *
                             expl(-0.5L * a * a);
    const long double lag = laguerre_series_ld(lo, m, a * a);
    const long double sign = (nt < n && m % 2 != 0) ? -1.0L : 1.0L;
    return sign * pref * lag;
}

} // namespace

TEST_CASE("laguerre_assoc base cases") {
    CHECK(laguerre_assoc(0, 0, 0.7) == 1.0);
    CHECK(laguerre_assoc(0, 5, 123.0) == 1.0);
    CHECK(laguerre_assoc(1, 2, 0.5) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("laguerre_assoc matches the explicit series") {
    for (int n = 0; n <= 8; ++n)
        for (int k = 0; k <= 6; k += 2)
            for (double x : {0.05, 0.25, 1.0, 4.0, 9.0}) {
                const double ref = double(laguerre_series_ld(n, k, x));
                const double got = laguerre_assoc(n, k, x);
                CHECK(got == doctest::Approx(ref).epsilon(1e-10));
            }
}

TEST_CASE("laguerre_assoc larger degree against series") {
    const double ref = double(laguerre_series_ld(5, 3, 1.0L));
    CHECK(laguerre_assoc(5, 3, 1.0) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("laguerre_assoc input and overflow errors") {
    CHECK_THROWS_AS(laguerre_assoc(-1, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(laguerre_assoc(0, -2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(laguerre_assoc(2, 0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(laguerre_assoc(400, 100, 1e300), std::range_error);
}

TEST_CASE("displacement amplitude domain") {
    CHECK_THROWS_AS(DisplacementAmplitude(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(DisplacementAmplitude(std::nan("")), std::invalid_argument);
    CHECK(DisplacementAmplitude(5.0).alpha == 5.0);
}

TEST_CASE("franck_condon fixed values") {
    const DisplacementAmplitude one(1.0);
    CHECK(franck_condon(0, 0, one) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    // zero displacement is the identity
    const DisplacementAmplitude zero(0.0);
    for (int n = 0; n < 5; ++n)
        for (int nt = 0; nt < 5; ++nt)
            CHECK(franck_condon(n, nt, zero) == (n == nt ? 1.0 : 0.0));
    // one-quantum-up element: alpha sqrt(1/2) L_1^{(1)}(1) exp(-1/2), with
    // L_1^{(1)}(1) = 1; positive in the b~ = b + alpha convention
    CHECK(franck_condon(1, 2, one) ==
          doctest::Approx(std::sqrt(0.5) * std::exp(-0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(franck_condon(-1, 0, one), std::invalid_argument);
}

TEST_CASE("franck_condon matches the extended-precision series") {
    for (double a : {0.3, 1.0, 2.0}) {
        const DisplacementAmplitude alpha(a);
        for (int n = 0; n <= 10; ++n)
            for (int nt = 0; nt <= 10; ++nt) {
                const double ref = double(overlap_series_ld(n, nt, a));
                const double got = franck_condon(n, nt, alpha);
                CHECK(got == doctest::Approx(ref).epsilon(1e-10));
            }
    }
}

TEST_CASE("franck_condon matches the displacement matrix exponential") {
    for (double a : {0.5, 2.0}) {
        const FranckCondonTable t = build_fc_table(15, DisplacementAmplitude(a));
        const Eigen::MatrixXd ref = oracle::displaced_overlaps(15, a);
        CHECK((t.entry - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("build_fc_table basic structure") {
    const FranckCondonTable t1 = build_fc_table(1, DisplacementAmplitude(0.0));
    CHECK(t1.dim == 1);
    CHECK(t1(0, 0) == 1.0);
    CHECK_THROWS_AS(build_fc_table(0, DisplacementAmplitude(1.0)), std::invalid_argument);

    const FranckCondonTable t = build_fc_table(30, DisplacementAmplitude(1.0));
    // n = 0 row: alpha^nt / sqrt(nt!) exp(-alpha^2/2) at alpha = 1
    double lf = 0.0;
    for (int nt = 0; nt < 30; ++nt) {
        if (nt > 0) lf += std::log(double(nt));
        const double ref = std::exp(-0.5 * lf - 0.5);
        CHECK(t(0, nt) == doctest::Approx(ref).epsilon(1e-10));
    }
    // sum rule on the nt = 0 column
    double s = 0.0;
    for (int n = 0; n < 30; ++n) s += t(n, 0) * t(n, 0);
    CHECK(std::abs(s - 1.0) < 1e-12);
}

TEST_CASE("truncated unitarity within the usable band") {
    for (double a : {0.25, 0.5, 1.0, 2.0}) {
        const DisplacementAmplitude alpha(a);
        const int N = required_truncation(alpha) + 10;
        const int keep = usable_columns(alpha, N);
        REQUIRE(keep >= 0);
        const FranckCondonTable t = build_fc_table(N, alpha);
        double worst = 0.0;
        for (int c1 = 0; c1 <= keep; ++c1)
            for (int c2 = 0; c2 <= keep; ++c2) {
                double dot = 0.0;
                for (int n = 0; n < N; ++n) dot += t(n, c1) * t(n, c2);
                worst = std::max(worst, std::abs(dot - (c1 == c2 ? 1.0 : 0.0)));
            }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("reflection symmetry of overlap magnitudes") {
    const FranckCondonTable t = build_fc_table(25, DisplacementAmplitude(1.3));
    for (int n = 0; n < 25; ++n)
        for (int nt = 0; nt < 25; ++nt)
            CHECK(std::abs(t(n, nt)) == doctest::Approx(std::abs(t(nt, n))).epsilon(1e-12));
}

TEST_CASE("max_overlap values and tie-breaking") {
    auto [v0, a0] = max_overlap(DisplacementAmplitude(0.0), 10);
    CHECK(v0 == 1.0);
    CHECK(a0 == 0);

    // alpha = 1: |<0|0~>| = |<0|1~>| = exp(-1/2); tie goes to nt = 0
    auto [v1, a1] = max_overlap(DisplacementAmplitude(1.0), 30);
    CHECK(v1 == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(a1 == 0);
    const double other = std::abs(franck_condon(0, 1, DisplacementAmplitude(1.0)));
    CHECK(std::abs(other - v1) < 1e-12);

    // alpha = 2: maximum near 0.4420 at nt = 3, nt = 4 degenerate
    auto [v2, a2] = max_overlap(DisplacementAmplitude(2.0), 40);
    CHECK(v2 == doctest::Approx(0.44203).epsilon(1e-4));
    CHECK(a2 == 3);
    const double other2 = std::abs(franck_condon(0, 4, DisplacementAmplitude(2.0)));
    CHECK(std::abs(other2 - v2) < 1e-12);

    CHECK_THROWS_AS(max_overlap(DisplacementAmplitude(3.0), 5), std::range_error);
}

TEST_CASE("required truncation margin rule") {
    CHECK(required_truncation(DisplacementAmplitude(0.0)) == 15);
    CHECK(required_truncation(DisplacementAmplitude(1.0)) == 22);
    CHECK(required_truncation(DisplacementAmplitude(2.0)) == 31);
    for (double a : {0.5, 1.0, 2.0}) {
        const DisplacementAmplitude alpha(a);
        CHECK(usable_columns(alpha, required_truncation(alpha)) >= 0);
    }
}

TEST_CASE("large displacements up to alpha = 5 stay well conditioned") {
    const DisplacementAmplitude alpha(5.0);
    const int N = required_truncation(alpha) + 20;   // 90
    const FranckCondonTable t = build_fc_table(N, alpha);
    CHECK(t.entry.allFinite());
    const int keep = usable_columns(alpha, N);
    REQUIRE(keep >= 0);
    double worst = 0.0;
    for (int c1 = 0; c1 <= keep; ++c1)
        for (int c2 = 0; c2 <= keep; ++c2) {
            double dot = 0.0;
            for (int n = 0; n < N; ++n) dot += t(n, c1) * t(n, c2);
            worst = std::max(worst, std::abs(dot - (c1 == c2 ? 1.0 : 0.0)));
        }
    CHECK(worst < 1e-8);
    auto [v, arg] = max_overlap(alpha, N);
    CHECK(v > 0.0);
    CHECK(arg >= 20);   // maximum sits near alpha^2 = 25
    CHECK(arg <= 30);
}
