#include "vibrodyn/fock_basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vibrodyn {

DisplacementAmplitude::DisplacementAmplitude(double a) : alpha(a) {
    if (!std::isfinite(a) || a < 0.0)
        throw std::invalid_argument("DisplacementAmplitude: alpha must be finite and >= 0, got " +
                                    std::to_string(a));
}

double laguerre_assoc(int n, int k, double x) {
    if (n < 0 || k < 0)
        throw std::invalid_argument("laguerre_assoc: n and k must be non-negative");
    if (x < 0.0)
        throw std::invalid_argument("laguerre_assoc: x must be >= 0");

    double p0 = 1.0;               // L_0^{(k)}
    if (n == 0) return p0;
    double p1 = 1.0 + k - x;       // L_1^{(k)}
    for (int m = 1; m < n; ++m) {
        // (m+1) L_{m+1} = (2m + k + 1 - x) L_m - (m + k) L_{m-1}
        const double p2 = ((2.0 * m + k + 1.0 - x) * p1 - (m + k) * p0) / (m + 1.0);
        p0 = p1;
        p1 = p2;
    }
    if (!std::isfinite(p1))
        throw std::range_error("laguerre_assoc: recurrence overflowed for n=" + std::to_string(n) +
                               " k=" + std::to_string(k) + " x=" + std::to_string(x));
    return p1;
}

double franck_condon(int n, int nt, DisplacementAmplitude alpha) {
    if (n < 0 || nt < 0)
        throw std::invalid_argument("franck_condon: indices must be non-negative");
    const double a = alpha.alpha;
    if (a == 0.0) return (n == nt) ? 1.0 : 0.0;

    const int lo = std::min(n, nt);
    const int m = std::abs(nt - n);
    // |prefactor| = alpha^m sqrt(lo!/hi!), folded with exp(-alpha^2/2) in log space
    const double logmag = m * std::log(a) +
                          0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + m + 1.0)) -
                          0.5 * a * a;
    const double lag = laguerre_assoc(lo, m, a * a);
    // The excited-manifold ladder b~ = b + alpha has eigenstates displaced by
    // -alpha, so (-alpha) appears in the nt < n branch. (The overlap formula
    // is often quoted for D(+alpha), which flips the odd-difference signs;
    // the two conventions are related by vibron parity and give identical
    // observables. The dense bare-basis diagonalization fixes this one.)
    const double sign = (nt < n && (m % 2) != 0) ? -1.0 : 1.0;
    return sign * std::exp(logmag) * lag;
}

FranckCondonTable build_fc_table(int N, DisplacementAmplitude alpha) {
    if (N < 1)
        throw std::invalid_argument("build_fc_table: N must be >= 1");
    FranckCondonTable t;
    t.dim = N;
    t.alpha = alpha;
    t.entry.resize(N, N);
    for (int n = 0; n < N; ++n)
        for (int nt = 0; nt < N; ++nt)
            t.entry(n, nt) = franck_condon(n, nt, alpha);
    return t;
}

std::pair<double, int> max_overlap(DisplacementAmplitude alpha, int N) {
    if (N < 1)
        throw std::invalid_argument("max_overlap: N must be >= 1");
    double best = 0.0;
    int arg = 0;
    for (int nt = 0; nt < N; ++nt) {
        const double v = std::abs(franck_condon(0, nt, alpha));
        if (v > best) {   // strict: ties keep the smaller nt
            best = v;
            arg = nt;
        }
    }
    if (arg >= N - 1 && alpha.alpha > 0.0)
        throw std::range_error("max_overlap: maximum at truncation boundary, increase N");
    return {best, arg};
}

int required_truncation(DisplacementAmplitude alpha) {
    const double a = alpha.alpha;
    return static_cast<int>(std::ceil(a * a + 6.0 * a + 15.0));
}

int usable_columns(DisplacementAmplitude alpha, int N) {
    const double a = alpha.alpha;
    int best = -1;
    for (int nt = 0; nt < N; ++nt) {
        if (nt + a * a + 3.0 * a * std::sqrt(nt + 1.0) + 8.0 <= double(N))
            best = nt;
        else
            break;
    }
    return best;
}

} // namespace vibrodyn
