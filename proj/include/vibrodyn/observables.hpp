#ifndef VIBRODYN_OBSERVABLES_HPP
#define VIBRODYN_OBSERVABLES_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "vibrodyn/propagate.hpp"

namespace vibrodyn {

/// Expectation series extracted from a trajectory by record name. With
/// lab_frame = true, block-off-diagonal observables recorded in the rotating
/// frame acquire the exp(-i omega t) reconstruction phase (applies to the
/// polarization sigma; D, b and n_v are frame-invariant).
Eigen::VectorXcd expval(const Trajectory& traj, const std::string& name, bool lab_frame = false);

enum class SpectrumWindow { hann, rect };

struct SpectrumOptions {
    SpectrumWindow window = SpectrumWindow::hann;
    bool subtract_rayleigh = true;   // fit steady component over final quarter
    double lab_shift = 0.0;          // map rotating-frame bins to lab: omega_lab = shift - nu
    int pad_factor = 4;              // zero padding (rounded up to a power of two)
    double span_lo = 0.0, span_hi = 0.0;   // emitted frequency range; 0,0 = full band
};

/// Windowed power spectrum of a (complex) series on a uniform grid.
struct Spectrum {
    std::vector<double> frequencies;   // eV, ascending
    std::vector<double> amplitude;     // |X|^2 per bin, >= 0
    double rayleigh_weight = 0.0;      // |fitted steady amplitude|^2
    // Parseval bookkeeping over the full (unclipped) band:
    double spectral_power_sum = 0.0;   // sum_k |X_k|^2 / n_fft
    double windowed_power = 0.0;       // sum_m |w_m (s_m - A)|^2
};

/// Fits the asymptotic steady component A (least squares over the final
/// quarter of the record), reports |A|^2 as rayleigh_weight, subtracts it,
/// tapers, and returns the squared-magnitude transform on a zero-padded
/// grid. Throws std::invalid_argument on a non-uniform time grid.
Spectrum spectrum(const Eigen::VectorXcd& series, const std::vector<double>& times,
                  const SpectrumOptions& opts = {});

struct Peak {
    double center = 0.0;   // eV
    double width = 0.0;    // half width at half maximum, eV
    double height = 0.0;
};

struct PeakSet {
    std::vector<Peak> peaks;   // sorted by center
};

/// Local maxima above the prominence threshold, each refined by a
/// three-point Lorentzian fit. min_prominence is relative to the tallest
/// spectral value.
PeakSet find_peaks(const Spectrum& spec, double min_prominence);

/// Envelope of an oscillatory series: magnitude of the spectrally one-sided
/// reconstruction of the series after removing its least-squares constant.
Eigen::VectorXd envelope(const Eigen::VectorXcd& series, const std::vector<double>& times);

struct CollapseRevivalOptions {
    double collapse_threshold = std::exp(-1.0);   // fraction of initial maximum
    double revival_fraction = 0.3;                // minimum revival height
    double sustain_fraction = 0.25;               // of the vibron period 2pi/omega_v
    double revival_prominence = 0.5;              // peak fraction above the preceding minimum
};

struct CollapseRevival {
    bool collapsed = false;
    double t_col = 0.0;
    std::vector<double> revivals;    // times of detected revival maxima
    double initial_max = 0.0;
    std::vector<double> revival_heights;
};

/// Collapse time (first sustained drop of the envelope below the threshold)
/// and subsequent revival maxima. "No transient" is reported through
/// collapsed = false.
CollapseRevival detect_collapse_revival(const Eigen::VectorXd& env,
                                        const std::vector<double>& times, double omega_v,
                                        const CollapseRevivalOptions& opts = {});

} // namespace vibrodyn

#endif
