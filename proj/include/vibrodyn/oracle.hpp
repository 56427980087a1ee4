#ifndef VIBRODYN_ORACLE_HPP
#define VIBRODYN_ORACLE_HPP

#include <Eigen/Dense>

#include "vibrodyn/liouvillian.hpp"
#include "vibrodyn/model.hpp"

// Independent brute-force checks. Everything here is built on its own code
// path (no operator-assembly helpers shared with the main modules) so
// agreement with the main path is evidence rather than tautology. Speed is
// a non-goal.
namespace vibrodyn::oracle {

struct BareDiag {
    Eigen::VectorXd eigenvalues;    // ascending
    Eigen::MatrixXd eigenvectors;   // columns, bare product basis
};

/// Dense diagonalization of the undriven molecular Hamiltonian in the bare
/// product basis {|g,n>, |e,n>}. N <= 200.
BareDiag diag_bare(const SystemParams& params, int N);

/// Overlap matrix <n|nt_alpha> computed by exponentiating the displacement
/// generator alpha (b^dag - b) in a padded bare Fock basis, then cropping.
/// Independent of the Laguerre-recurrence route.
Eigen::MatrixXd displaced_overlaps(int N, double alpha);

/// Literal right-hand side of the elementwise master equation in the lab
/// frame: explicit exp(+-i omega t) drive factors and the unrestricted
/// (single-collective) feeding double sums. The decay/pump loss terms use
/// the truncated overlap Gram matrices, which is the finite-N closure of
/// the completeness relation assumed by the printed equations.
Eigen::MatrixXcd element_ode_rhs(const Eigen::MatrixXcd& rho, const SystemParams& params,
                                 const Eigen::MatrixXd& overlaps, double t);

/// rho(t) = exp(t L) rho(0) through a dense scaling-and-squaring matrix
/// exponential of the vectorized generator. Requires (2N)^2 <= 10^4 and a
/// time-independent generator.
Eigen::MatrixXcd expm_propagate(const Eigen::MatrixXcd& rho0, const Generator& gen, double t);

} // namespace vibrodyn::oracle

#endif
