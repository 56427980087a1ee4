#ifndef VIBRODYN_LIOUVILLIAN_HPP
#define VIBRODYN_LIOUVILLIAN_HPP

#include <Eigen/Dense>
#include <vector>

#include "vibrodyn/model.hpp"

namespace vibrodyn {

enum class FrameKind { rotating, lab };

/// How the exciton decay (and pump) jump channels are grouped.
///
/// secular_by_dw builds one jump operator per transition frequency
/// Delta_omega = omega_e,nt - omega_g,n (all pairs with equal nt - n share
/// one channel). single_collective uses the one collective sigma operator,
/// which reproduces the unrestricted double feeding sum of the elementwise
/// master equation. Both are exact Lindblad forms; they differ at finite
/// truncation and for states with cross-channel coherences.
enum class DecayGrouping { secular_by_dw, single_collective };

struct DissipatorConfig {
    DecayGrouping decay_grouping = DecayGrouping::secular_by_dw;
    double grouping_tol = 1e-9;   // eV, degenerate-Delta_omega identification
    bool include_decay = true;
    bool include_pump = true;
    bool include_dephasing = true;
    bool include_vibron = true;

    void validate(double omega_v) const;   // throws std::invalid_argument
};

/// One constant-in-time Lindblad generator over the 2N eigenbasis,
/// L[rho] = -i[H, rho] + dissipators. Immutable once assembled; apply() is
/// const and safe to call concurrently on distinct states.
///
/// The vibron dissipators act blockwise (only on rho_gg and rho_ee, leaving
/// ground-excited coherences untouched); decay, pump and dephasing are
/// full-space Lindblad terms.
class Generator {
  public:
    Generator() = default;

    int dim() const { return 2 * n_; }
    int manifold_dim() const { return n_; }
    FrameKind frame() const { return frame_; }
    double omega_drive() const { return omega_drive_; }
    bool time_dependent() const { return frame_ == FrameKind::lab && Omega_ != 0.0; }

    /// drho = L(t)[rho]. t only matters for lab-frame generators.
    void apply(double t, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& drho) const;

    /// Gain part only: sum_k rate_k A_k rho A_k^dag over every jump channel.
    /// Used by the complete-positivity (Choi) checks.
    void apply_jump_part(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;

    /// Dense (2N)^2 x (2N)^2 superoperator acting on column-stacked rho.
    /// Small-N diagnostics only.
    Eigen::MatrixXcd dense_superoperator(double t = 0.0) const;

  private:
    friend Generator assemble_phase(const SystemParams&, const EigenBasis&,
                                    const FranckCondonTable&, const DissipatorConfig&,
                                    double gamma_p, FrameKind);
    int n_ = 0;
    FrameKind frame_ = FrameKind::rotating;
    double omega_drive_ = 0.0;
    Eigen::VectorXd ediag_;        // 2N frame energies
    double Omega_ = 0.0;
    Eigen::MatrixXcd W_;           // N x N overlap block <n|nt>
    double gamma_deph_ = 0.0;
    double gamma_D_ = 0.0;
    double gamma_p_ = 0.0;
    DecayGrouping grouping_ = DecayGrouping::secular_by_dw;
    Eigen::MatrixXcd Ke_;          // (gamma_D/2) * anticommutator kernel, excited block
    Eigen::MatrixXcd Kg_;          // (gamma_p/2) * anticommutator kernel, ground block
    double gv_down_ = 0.0;         // gamma_v (1 + n_v)
    double gv_up_ = 0.0;           // gamma_v n_v
    bool inc_vibron_ = false;

    void decay_sandwich(const Eigen::MatrixXcd& ree, Eigen::MatrixXcd& out_gg) const;
    void pump_sandwich(const Eigen::MatrixXcd& rgg, Eigen::MatrixXcd& out_ee) const;
};

/// Piecewise-constant generator: phase i is active on
/// [switch_times[i-1], switch_times[i]) with switch_times implicit 0 at the
/// front and +inf at the back. A rectangular pump pulse yields two phases
/// switching at t0.
struct GeneratorSchedule {
    std::vector<Generator> phases;
    std::vector<double> switch_times;   // size phases.size() - 1, ascending

    const Generator& at(double t) const;
    bool time_dependent() const;
};

/// Single-phase assembly with an explicit pump rate.
Generator assemble_phase(const SystemParams& params, const EigenBasis& basis,
                         const FranckCondonTable& fc, const DissipatorConfig& cfg,
                         double gamma_p, FrameKind frame = FrameKind::rotating);

/// Full Lindblad generator of the model. Returns one phase for off/constant
/// pump and a two-phase piecewise-constant schedule for a rectangular pulse.
GeneratorSchedule assemble(const SystemParams& params, const EigenBasis& basis,
                           const FranckCondonTable& fc, const DissipatorConfig& cfg,
                           FrameKind frame = FrameKind::rotating);

} // namespace vibrodyn

#endif
