#ifndef VIBRODYN_FOCK_BASIS_HPP
#define VIBRODYN_FOCK_BASIS_HPP

#include <Eigen/Dense>
#include <utility>

namespace vibrodyn {

/// Dimensionless vibron displacement alpha = g / omega_v.
///
/// Restricted to real alpha >= 0: the coupling and vibron frequency are both
/// real and non-negative here, so the displaced-Fock overlaps form a real
/// matrix. Supported at least up to alpha = 5.
struct DisplacementAmplitude {
    double alpha = 0.0;

    DisplacementAmplitude() = default;
    explicit DisplacementAmplitude(double a);
};

/// Truncated matrix of overlaps <n|n~_alpha> between bare Fock states |n>
/// and displaced Fock states |n~_alpha> = D(alpha)|n~>.
///
/// entry(n, nt) is real for real alpha. Columns are orthonormal up to
/// truncation: for columns far enough from the boundary the norm deficit is
/// below 1e-8 (see required_truncation for the margin rule).
struct FranckCondonTable {
    int dim = 0;                 // vibron truncation N
    Eigen::MatrixXd entry;       // N x N, entry(n, nt) = <n|nt_alpha>
    DisplacementAmplitude alpha;

    double operator()(int n, int nt) const { return entry(n, nt); }
};

/// Associated Laguerre polynomial L_n^{(k)}(x) by the three-term recurrence
/// in the degree n. Exact for n in {0, 1}. Throws std::range_error if the
/// recurrence overflows (never returns a silent NaN/Inf).
double laguerre_assoc(int n, int k, double x);

/// Single overlap <n|nt_alpha> between a bare Fock state and an eigenstate
/// of the shifted ladder b~ = b + alpha (displacement -alpha).
///
/// Sign convention: for nt >= n the prefactor is alpha^(nt-n), for nt < n
/// it is (-alpha)^(n-nt). Factorial ratios go through lgamma so large
/// indices do not overflow; results that underflow to 0 are returned as 0.
double franck_condon(int n, int nt, DisplacementAmplitude alpha);

/// Full N x N overlap table.
FranckCondonTable build_fc_table(int N, DisplacementAmplitude alpha);

/// M(alpha) = max_nt |<0|nt_alpha>| together with the maximising nt.
/// Ties break toward smaller nt. Throws std::range_error when the maximum
/// sits at the truncation boundary (N too small to bracket it).
std::pair<double, int> max_overlap(DisplacementAmplitude alpha, int N);

/// Smallest truncation N that keeps the column norms of all columns used
/// downstream above 1 - 1e-8: ceil(alpha^2 + 6 alpha + 15).
int required_truncation(DisplacementAmplitude alpha);

/// Largest column index nt whose truncated norm deficit stays below 1e-8 at
/// truncation N. The displaced-Fock number distribution spreads as
/// alpha sqrt(nt), so the safe band is nt + alpha^2 + 3 alpha sqrt(nt+1) + 8
/// <= N (calibrated conservatively). Returns -1 when no column qualifies.
int usable_columns(DisplacementAmplitude alpha, int N);

} // namespace vibrodyn

#endif
