#include "vibrodyn/observables.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace vibrodyn {

using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

namespace {

double uniform_dt(const std::vector<double>& times) {
    if (times.size() < 2) throw std::invalid_argument("spectrum: need at least 2 samples");
    const double dt = times[1] - times[0];
    for (std::size_t m = 1; m + 1 < times.size(); ++m)
        if (std::abs((times[m + 1] - times[m]) - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("spectrum: non-uniform time grid");
    return dt;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

VectorXcd expval(const Trajectory& traj, const std::string& name, bool lab_frame) {
    VectorXcd s = traj.record(name);
    const bool cross_block = (name == "sigma");
    if (lab_frame && traj.frame == FrameKind::rotating && cross_block) {
        for (Eigen::Index m = 0; m < s.size(); ++m)
            s(m) *= std::exp(complex<double>(0.0, -traj.omega_drive * traj.times[m]));
    }
    return s;
}

Spectrum spectrum(const VectorXcd& series, const std::vector<double>& times,
                  const SpectrumOptions& opts) {
    const std::size_t M = series.size();
    if (times.size() != M) throw std::invalid_argument("spectrum: series/times length mismatch");
    const double dt = uniform_dt(times);

    Spectrum out;

    // Steady (Rayleigh) component: least-squares constant over the final
    // quarter of the record.
    complex<double> A(0.0, 0.0);
    {
        const std::size_t m0 = (3 * M) / 4;
        for (std::size_t m = m0; m < M; ++m) A += series(m);
        A /= double(M - m0);
    }
    out.rayleigh_weight = std::norm(A);

    VectorXcd resid = series;
    if (opts.subtract_rayleigh) resid.array() -= A;

    // Taper
    VectorXd w(M);
    switch (opts.window) {
        case SpectrumWindow::hann:
            for (std::size_t m = 0; m < M; ++m)
                w(m) = 0.5 * (1.0 - std::cos(2.0 * M_PI * double(m) / double(M - 1)));
            break;
        case SpectrumWindow::rect:
            w.setOnes();
            break;
    }
    VectorXcd x = resid.cwiseProduct(w.cast<complex<double>>());
    out.windowed_power = x.squaredNorm();

    const std::size_t P = next_pow2(M * std::max(1, opts.pad_factor));
    std::vector<complex<double>> xt(P, complex<double>(0.0, 0.0));
    for (std::size_t m = 0; m < M; ++m) xt[m] = x(m);
    std::vector<complex<double>> X(P);
    Eigen::FFT<double> fft;
    fft.fwd(X, xt);

    // Signed bin frequency nu_k; a component exp(-i Delta t) sits at
    // nu = -Delta, so the emitted (lab) frequency is lab_shift - nu.
    std::vector<std::pair<double, double>> pts;
    pts.reserve(P);
    double power_sum = 0.0;
    for (std::size_t k = 0; k < P; ++k) {
        const double p = std::norm(X[k]);
        power_sum += p;
        const long ks = (k < P / 2) ? long(k) : long(k) - long(P);
        const double nu = 2.0 * M_PI * double(ks) / (double(P) * dt);
        pts.emplace_back(opts.lab_shift - nu, p);
    }
    out.spectral_power_sum = power_sum / double(P);

    std::sort(pts.begin(), pts.end());
    const bool clip = opts.span_hi > opts.span_lo;
    for (const auto& [f, p] : pts) {
        if (clip && (f < opts.span_lo || f > opts.span_hi)) continue;
        out.frequencies.push_back(f);
        out.amplitude.push_back(p);
    }
    if (out.frequencies.empty())
        throw std::invalid_argument("spectrum: requested span outside the representable band");
    return out;
}

PeakSet find_peaks(const Spectrum& spec, double min_prominence) {
    PeakSet set;
    const auto& y = spec.amplitude;
    const auto& f = spec.frequencies;
    const std::size_t M = y.size();
    if (M < 3) return set;
    const double ymax = *std::max_element(y.begin(), y.end());
    if (ymax <= 0.0) return set;
    const double thresh = min_prominence * ymax;

    for (std::size_t i = 1; i + 1 < M; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
        // prominence: drop to the lowest valley before a higher point is met
        double left_min = y[i];
        for (std::size_t j = i; j-- > 0;) {
            left_min = std::min(left_min, y[j]);
            if (y[j] > y[i]) break;
        }
        double right_min = y[i];
        for (std::size_t j = i + 1; j < M; ++j) {
            right_min = std::min(right_min, y[j]);
            if (y[j] > y[i]) break;
        }
        const double prom = y[i] - std::max(left_min, right_min);
        if (prom < thresh) continue;

        // Three-point Lorentzian refinement: 1/y is locally a parabola.
        Peak pk;
        pk.center = f[i];
        pk.height = y[i];
        pk.width = (f[i + 1] - f[i - 1]) / 2.0;
        if (y[i - 1] > 0.0 && y[i + 1] > 0.0) {
            const double u0 = 1.0 / y[i - 1], u1 = 1.0 / y[i], u2 = 1.0 / y[i + 1];
            const double x0 = f[i - 1], x1 = f[i], x2 = f[i + 1];
            const double d21 = (u2 - u1) / (x2 - x1);
            const double d10 = (u1 - u0) / (x1 - x0);
            const double a = (d21 - d10) / (x2 - x0);
            if (a > 0.0) {
                const double b = d10 - a * (x0 + x1);
                const double c = u0 - a * x0 * x0 - b * x0;
                const double center = -b / (2.0 * a);
                const double umin = c - b * b / (4.0 * a);
                if (umin > 0.0) {
                    pk.center = center;
                    pk.height = 1.0 / umin;
                    pk.width = std::sqrt(umin / a);   // HWHM of the fitted Lorentzian
                }
            }
        }
        if (pk.width <= 0.0) pk.width = (f[i + 1] - f[i - 1]) / 2.0;
        set.peaks.push_back(pk);
    }
    std::sort(set.peaks.begin(), set.peaks.end(),
              [](const Peak& a, const Peak& b) { return a.center < b.center; });
    return set;
}

VectorXd envelope(const VectorXcd& series, const std::vector<double>& times) {
    const std::size_t M = series.size();
    if (times.size() != M) throw std::invalid_argument("envelope: series/times length mismatch");
    uniform_dt(times);

    VectorXcd x = series;
    x.array() -= x.mean();

    std::vector<complex<double>> xt(x.data(), x.data() + M);
    std::vector<complex<double>> X(M);
    Eigen::FFT<double> fft;
    fft.fwd(X, xt);

    // One-sided reconstruction: keep the dominant frequency half-plane.
    // A real input has equal halves; then the classic analytic-signal
    // doubling of the positive side applies.
    double pos = 0.0, neg = 0.0;
    for (std::size_t k = 1; k < M; ++k) {
        if (k < M / 2)
            pos += std::norm(X[k]);
        else if (k > M / 2)
            neg += std::norm(X[k]);
    }
    const bool balanced = std::abs(pos - neg) <= 0.05 * (pos + neg + 1e-300);
    if (balanced) {
        for (std::size_t k = 1; k < M; ++k) {
            if (k < M / 2)
                X[k] *= 2.0;
            else if (k > M / 2)
                X[k] = 0.0;
        }
    } else if (pos > neg) {
        for (std::size_t k = M / 2 + 1; k < M; ++k) X[k] = 0.0;
    } else {
        for (std::size_t k = 1; k < M / 2; ++k) X[k] = 0.0;
    }
    std::vector<complex<double>> xa(M);
    fft.inv(xa, X);
    VectorXd env(M);
    for (std::size_t m = 0; m < M; ++m) env(m) = std::abs(xa[m]);
    return env;
}

CollapseRevival detect_collapse_revival(const VectorXd& env, const std::vector<double>& times,
                                        double omega_v, const CollapseRevivalOptions& opts) {
    CollapseRevival res;
    const std::size_t M = env.size();
    if (times.size() != M || M < 4)
        throw std::invalid_argument("detect_collapse_revival: bad input sizes");
    const double period = 2.0 * M_PI / omega_v;
    const double T = times.back();

    // Reference level: maximum over the first vibron period.
    double M0 = 0.0;
    for (std::size_t m = 0; m < M && times[m] <= std::min(period, T); ++m)
        M0 = std::max(M0, env(m));
    res.initial_max = M0;
    if (M0 <= 0.0) return res;   // no transient

    const double thr = opts.collapse_threshold * M0;
    const double sustain = opts.sustain_fraction * period;

    // First drop below threshold that persists for the sustain window.
    std::size_t i_col = M;
    for (std::size_t m = 0; m < M; ++m) {
        if (env(m) >= thr) continue;
        bool ok = true;
        for (std::size_t j = m; j < M && times[j] < times[m] + sustain; ++j)
            if (env(j) >= thr) {
                ok = false;
                break;
            }
        if (ok) {
            i_col = m;
            break;
        }
    }
    if (i_col == M) return res;   // envelope never collapses
    res.collapsed = true;
    res.t_col = times[i_col];

    // Revival maxima after the collapse: local maxima above the revival
    // fraction that also rise clearly above the envelope minimum reached
    // since the previous event, so trailing wiggles of the collapse edge do
    // not count. Peaks closer than half a vibron period merge into the
    // higher one.
    const double min_sep = 0.5 * period;
    const double rev_thr = opts.revival_fraction * M0;
    double run_min = env(i_col);
    for (std::size_t m = i_col + 1; m + 1 < M; ++m) {
        run_min = std::min(run_min, env(m));
        if (!(env(m) > env(m - 1) && env(m) >= env(m + 1))) continue;
        if (env(m) < rev_thr) continue;
        if (run_min > (1.0 - opts.revival_prominence) * env(m)) continue;
        if (!res.revivals.empty() && times[m] - res.revivals.back() < min_sep) {
            if (env(m) > res.revival_heights.back()) {
                res.revivals.back() = times[m];
                res.revival_heights.back() = env(m);
                run_min = env(m);
            }
            continue;
        }
        res.revivals.push_back(times[m]);
        res.revival_heights.push_back(env(m));
        run_min = env(m);
    }
    return res;
}

} // namespace vibrodyn
