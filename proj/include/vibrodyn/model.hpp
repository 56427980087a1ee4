#ifndef VIBRODYN_MODEL_HPP
#define VIBRODYN_MODEL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "vibrodyn/fock_basis.hpp"

namespace vibrodyn {

// hbar = 1 throughout: energies in eV, times in hbar/eV.
// One time unit hbar/eV = 0.6582119569 fs.
constexpr double kFsPerHbarEv = 0.6582119569;

enum class PumpShape { off, constant, rectangular_pulse };

/// Incoherent pump profile: gamma_p(t) = gamma_p0 for 0 <= t <= t0 and 0
/// afterwards when rectangular, gamma_p0 for all t when constant.
struct PumpSchedule {
    double gamma_p0 = 0.0;   // eV
    double t0 = 0.0;         // hbar/eV, pulse end for rectangular shape
    PumpShape shape = PumpShape::off;

    double rate_at(double t) const {
        switch (shape) {
            case PumpShape::off: return 0.0;
            case PumpShape::constant: return gamma_p0;
            case PumpShape::rectangular_pulse: return (t <= t0) ? gamma_p0 : 0.0;
        }
        return 0.0;
    }
};

/// Which excited-manifold electronic origin to use. `shifted` is the
/// algebra-consistent value omega_sigma - g^2/omega_v; `paper_printed`
/// reproduces omega_sigma (1 - alpha^2) for comparison only.
enum class OriginConvention { shifted, paper_printed };

/// All physical constants of the driven exciton-vibron model plus the
/// dissipation rates and bath occupation.
struct SystemParams {
    double omega_sigma = 2.4;    // exciton frequency, eV
    double omega_v = 0.025;      // vibron frequency, eV
    double g = 0.0;              // Frohlich coupling, eV
    double Omega = 1e-3;         // Rabi constant, eV
    double omega_drive = 1.5;    // drive frequency, eV
    double gamma_D = 0.0;        // exciton decay rate, eV
    double gamma_deph = 0.0;     // dephasing rate, eV
    double gamma_v = 0.0;        // vibron decay rate, eV
    double n_v = 0.0;            // bath occupation at omega_v
    PumpSchedule pump;
    int N = 15;                  // vibron truncation
    OriginConvention origin = OriginConvention::shifted;

    double alpha() const { return g / omega_v; }
    void validate() const;       // throws std::invalid_argument
};

/// Convert a bath temperature (eV units, i.e. kT in eV) to the mean vibron
/// occupation n_v = 1/(exp(omega_v/kT) - 1).
double thermal_occupation(double omega_v, double kT);

/// Ordered eigenbasis {|g,0>..|g,N-1>, |e,0~>..|e,(N-1)~>} of the undriven
/// molecular Hamiltonian, with the zero-point offset dropped: only energy
/// differences enter any observable.
struct EigenBasis {
    int N = 0;                        // states per manifold, total dim 2N
    std::vector<double> energies;     // size 2N, eV
    DisplacementAmplitude alpha;
    double electronic_origin = 0.0;   // excited-manifold zero-vibron offset, eV
    double omega_v = 0.0;

    int dim() const { return 2 * N; }
    int index_g(int n) const { return n; }
    int index_e(int nt) const { return N + nt; }
    bool is_excited(int k) const { return k >= N; }
};

/// System operator as a dense matrix over the eigenbasis ordering.
struct OperatorRep {
    Eigen::MatrixXcd matrix;
    std::string name;
};

EigenBasis build_basis(const SystemParams& params);

/// sigma = sum_{n,nt} <n|nt_alpha> |g,n><e,nt|: strictly block-off-diagonal.
OperatorRep op_sigma(const EigenBasis& basis, const FranckCondonTable& fc);

/// D = diag(-1 on the ground manifold, +1 on the excited manifold).
OperatorRep op_D(const EigenBasis& basis);

/// Bare vibron annihilation operator b. Within the ground manifold it is the
/// sqrt(n) ladder; within the excited manifold b = b~ - alpha.
OperatorRep op_b(const EigenBasis& basis);

/// Vibron number operator b^dag b.
OperatorRep op_number_vibron(const EigenBasis& basis);

/// Time-independent Hamiltonian in the frame rotating at the drive
/// frequency: diag(E_k - omega [k excited]) + (Omega/2)(sigma + sigma^dag).
OperatorRep hamiltonian_rotating(const SystemParams& params, const EigenBasis& basis,
                                 const FranckCondonTable& fc);

/// Dense molecular Hamiltonian (no drive) in the bare product basis
/// {|g,0>..|g,N-1>, |e,0>..|e,N-1>}. Used only by the oracle checks.
OperatorRep hamiltonian_bare(const SystemParams& params, int N);

} // namespace vibrodyn

#endif
