#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ppsolve::rk {

// Embedded Dormand-Prince 5(4) pair with the classic quartic continuous
// extension. Fixed 2-component state (the systems integrated here are planar).
using Vec2 = Eigen::Vector2d;

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    long max_steps = 10'000'000;
    double initial_step = 0.0;  // 0 = automatic
    /// When set, every internal stage state must satisfy this predicate;
    /// otherwise the step is rejected and the step size halved.
    std::function<bool(const Vec2&)> stage_guard;
    bool record_dense = true;
};

struct DenseStep {
    double t0, h;
    Vec2 c0, c1, c2, c3, c4;

    Vec2 eval(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        return c0 + th * (c1 + th1 * (c2 + th * (c3 + th1 * c4)));
    }
};

// Dense-output trajectory over [t_begin, t_end].
class Trajectory {
  public:
    double t_begin() const { return t_begin_; }
    double t_end() const { return t_end_; }
    const Vec2& initial() const { return y_begin_; }
    const Vec2& final() const { return y_end_; }
    long accepted() const { return n_accepted_; }
    long rejected() const { return n_rejected_; }
    long evaluations() const { return n_eval_; }

    Vec2 operator()(double t) const {
        const double span = t_end_ - t_begin_;
        if (t < t_begin_ - 1e-9 * span || t > t_end_ + 1e-9 * span)
            throw std::out_of_range("trajectory evaluated outside its time span");
        t = std::clamp(t, t_begin_, t_end_);
        if (steps_.empty()) return y_begin_;
        auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                                   [](double v, const DenseStep& s) { return v < s.t0; });
        if (it != steps_.begin()) --it;
        return it->eval(t);
    }

    std::vector<DenseStep> steps_;
    double t_begin_ = 0, t_end_ = 0;
    Vec2 y_begin_ = Vec2::Zero(), y_end_ = Vec2::Zero();
    long n_accepted_ = 0, n_rejected_ = 0, n_eval_ = 0;
};

namespace tableau {
// Node and stage coefficients of the Dormand-Prince 5(4) pair.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// Error weights (5th order minus embedded 4th order).
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace tableau

/// Integrates y' = f(t, y) forward from t0 to t1 (t1 > t0).
template <class RHS>
Trajectory integrate(RHS&& f, double t0, double t1, Vec2 y0, const IntegratorOptions& opts) {
    using namespace tableau;
    if (!(t1 > t0)) throw std::invalid_argument("integration requires t1 > t0");
    if (opts.stage_guard && !opts.stage_guard(y0))
        throw std::invalid_argument("initial state rejected by the stage guard");

    Trajectory traj;
    traj.t_begin_ = t0;
    traj.y_begin_ = y0;

    auto scaled_err = [&](const Vec2& err, const Vec2& ya, const Vec2& yb) {
        double sum = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double sc = opts.atol + opts.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            const double q = err[i] / sc;
            sum += q * q;
        }
        return std::sqrt(0.5 * sum);
    };

    double t = t0;
    Vec2 y = y0;
    Vec2 k1 = f(t, y);
    traj.n_eval_ = 1;

    double h = opts.initial_step;
    if (h <= 0.0) {
        // Curvature-based first guess, then a trial Euler step to refine.
        const double d0 = y.cwiseQuotient(Vec2::Constant(opts.atol) + opts.rtol * y.cwiseAbs()).norm();
        const double d1n = k1.cwiseQuotient(Vec2::Constant(opts.atol) + opts.rtol * y.cwiseAbs()).norm();
        double h0 = (d0 < 1e-10 || d1n < 1e-10) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, t1 - t0);
        Vec2 y_trial = y + h0 * k1;
        if (!opts.stage_guard || opts.stage_guard(y_trial)) {
            Vec2 k_trial = f(t + h0, y_trial);
            ++traj.n_eval_;
            const double d2 = (k_trial - k1)
                                  .cwiseQuotient(Vec2::Constant(opts.atol) + opts.rtol * y.cwiseAbs())
                                  .norm() /
                              h0;
            const double der = std::max(d1n, d2);
            const double h1 = (der <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                             : std::pow(0.01 / der, 0.2);
            h = std::min({100.0 * h0, h1, t1 - t0});
        } else {
            h = h0;
        }
    }

    bool rejected_last = false;
    long guard_rejections = 0;
    long steps = 0;
    while (t < t1) {
        if (++steps > opts.max_steps) throw std::runtime_error("integrator exceeded max step count");
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
            if (guard_rejections > 0)
                throw std::runtime_error("positivity lost at minimum step size");
            throw std::runtime_error("step size underflow");
        }
        bool last = false;
        if (t + 1.01 * h >= t1) {
            h = t1 - t;
            last = true;
        }

        Vec2 k2, k3, k4, k5, k6, k7, y1;
        bool guard_hit = false;
        auto stage = [&](double frac, const Vec2& arg, Vec2& out) {
            if (opts.stage_guard && !opts.stage_guard(arg)) {
                guard_hit = true;
                return false;
            }
            out = f(t + frac * h, arg);
            ++traj.n_eval_;
            return true;
        };

        do {
            if (!stage(c2, y + h * (a21 * k1), k2)) break;
            if (!stage(c3, y + h * (a31 * k1 + a32 * k2), k3)) break;
            if (!stage(c4, y + h * (a41 * k1 + a42 * k2 + a43 * k3), k4)) break;
            if (!stage(c5, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), k5)) break;
            if (!stage(1.0, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), k6))
                break;
            y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
            if (!stage(1.0, y1, k7)) break;
        } while (false);

        if (guard_hit) {
            ++guard_rejections;
            ++traj.n_rejected_;
            h *= 0.5;
            rejected_last = true;
            continue;
        }

        const Vec2 err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double err = scaled_err(err_vec, y, y1);
        if (err > 1.0) {
            ++traj.n_rejected_;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            rejected_last = true;
            continue;
        }

        if (opts.record_dense) {
            DenseStep step;
            step.t0 = t;
            step.h = h;
            step.c0 = y;
            step.c1 = y1 - y;
            step.c2 = h * k1 - step.c1;
            step.c3 = step.c1 - h * k7 - step.c2;
            step.c4 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            traj.steps_.push_back(step);
        }

        t += h;
        y = y1;
        k1 = k7;  // FSAL
        ++traj.n_accepted_;
        guard_rejections = 0;
        if (last) {
            t = t1;
            break;
        }

        double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
        if (rejected_last) fac = std::min(fac, 1.0);
        rejected_last = false;
        h *= fac;
    }

    traj.t_end_ = t1;
    traj.y_end_ = y;
    return traj;
}

}  // namespace ppsolve::rk
