#ifndef VIBRODYN_RK45_HPP
#define VIBRODYN_RK45_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vibrodyn {

struct StepControl {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h_max = 0.0;      // 0: no cap
    double h_init = 1e-3;
    double safety = 0.9;
};

struct IntegrationStats {
    long n_steps = 0;
    long n_rejected = 0;
};

struct StepUnderflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dormand-Prince 5(4) with FSAL and a standard step controller. State is
/// any Eigen dense type (complex vector or matrix). The step size persists
/// across advance() calls so stopping exactly at output-grid points and at
/// generator switch times costs nothing.
template <class State>
class Dopri5 {
  public:
    explicit Dopri5(StepControl ctrl = {}) : ctrl_(ctrl), h_(ctrl.h_init) {}

    const IntegrationStats& stats() const { return stats_; }

    /// Integrate dy/dt = f(t, y) from t to t_end (exactly); on return
    /// t == t_end. f has signature f(double t, const State& y, State& dydt).
    template <class RHS>
    void advance(RHS&& f, State& y, double& t, double t_end) {
        if (t_end <= t) return;
        State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr;
        f(t, y, k1);
        bool k1_fresh = true;
        while (t < t_end) {
            if (!k1_fresh) f(t, y, k1);
            double h = std::min(h_, t_end - t);
            if (ctrl_.h_max > 0.0) h = std::min(h, ctrl_.h_max);
            bool accepted = false;
            while (!accepted) {
                if (h < 1e-13 * std::max(1.0, std::abs(t)))
                    throw StepUnderflowError("rk45: step size underflow at t=" + std::to_string(t));

                ytmp = y + h * (a21 * k1);
                f(t + c2 * h, ytmp, k2);
                ytmp = y + h * (a31 * k1 + a32 * k2);
                f(t + c3 * h, ytmp, k3);
                ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
                f(t + c4 * h, ytmp, k4);
                ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
                f(t + c5 * h, ytmp, k5);
                ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
                f(t + h, ytmp, k6);
                ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
                f(t + h, ynew, k7);
                yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

                const double err = wrms_norm(yerr, y, ynew);
                if (err <= 1.0) {
                    accepted = true;
                    t += h;
                    y.swap(ynew);
                    k1.swap(k7);
                    k1_fresh = true;
                    ++stats_.n_steps;
                    double fac = ctrl_.safety * std::pow(std::max(err, 1e-10), -0.2);
                    h_ = h * std::clamp(fac, 0.2, 5.0);
                } else {
                    ++stats_.n_rejected;
                    double fac = ctrl_.safety * std::pow(err, -0.2);
                    h = h * std::clamp(fac, 0.1, 0.9);
                }
            }
        }
    }

  private:
    double wrms_norm(const State& err, const State& y0, const State& y1) const {
        const auto ea = err.array().abs();
        const auto sc = ctrl_.atol + ctrl_.rtol * y0.array().abs().max(y1.array().abs());
        const double m = (ea / sc).square().sum() / double(err.size());
        return std::sqrt(m);
    }

    // Dormand-Prince coefficients
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double bh1 = 5179.0 / 57600, bh3 = 7571.0 / 16695, bh4 = 393.0 / 640,
                            bh5 = -92097.0 / 339200, bh6 = 187.0 / 2100, bh7 = 1.0 / 40;
    static constexpr double e1 = b1 - bh1, e3 = b3 - bh3, e4 = b4 - bh4, e5 = b5 - bh5,
                            e6 = b6 - bh6, e7 = -bh7;

    StepControl ctrl_;
    double h_;
    IntegrationStats stats_;
};

} // namespace vibrodyn

#endif
