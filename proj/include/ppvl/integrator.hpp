#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <numbers>
#include <vector>

#include "ppvl/errors.hpp"
#include "ppvl/model.hpp"

namespace ppvl {

struct IntegratorConfig {
    double relTol = 1e-10;
    double absTol = 1e-10;
    double maxStep = std::numbers::pi / 8;
    double initialStep = 1e-2;
    /// |v| (or |s|) above this aborts the integration.
    double blowupLimit = 1e3;

    static IntegratorConfig analysis() { return {}; }
    static IntegratorConfig sweep() {
        IntegratorConfig c;
        c.relTol = c.absTol = 1e-8;
        return c;
    }

    /// Tolerances in (0, 1e-2], 0 < maxStep <= pi/4, initialStep > 0.
    void validate() const;
};

struct Sample {
    double tau;
    double theta;
    double v;
};

struct Trajectory {
    Params params;
    State initial;
    IntegratorConfig config;
    /// Samples at tau = initial.tau + 2 pi n, n = 0, 1, ...
    std::vector<Sample> sections;
    /// Every accepted step endpoint, when requested.
    std::vector<Sample> dense;
};

using Vec2 = std::array<double, 2>;

/// Dormand-Prince 5(4) with PI step-size control. The first component is an
/// angle; its error scale is capped at pi so that unwrapped angles of long
/// rotations do not loosen the control.
template <class Rhs>
class AdaptiveStepper {
public:
    AdaptiveStepper(Rhs rhs, double tau, Vec2 y, const IntegratorConfig& cfg)
        : rhs_(std::move(rhs)), cfg_(cfg), tau_(tau), y_(y) {
        cfg_.validate();
        h_ = std::min(cfg_.initialStep, cfg_.maxStep);
        k1_ = rhs_(tau_, y_);
    }

    double tau() const { return tau_; }
    const Vec2& state() const { return y_; }
    long acceptedSteps() const { return accepted_; }
    long rejectedSteps() const { return rejected_; }

    /// Advances to exactly `target` (either direction). `observe(tau, y)` is
    /// called after every accepted step, the last call being at `target`.
    template <class Observer>
    void advanceTo(double target, Observer&& observe) {
        if (target == tau_) return;
        const double dir = target > tau_ ? 1.0 : -1.0;
        while (dir * (target - tau_) > 0.0) {
            const double minStep = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(tau_));
            const double remaining = dir * (target - tau_);
            if (remaining <= minStep) {
                // Rounding residue from earlier steps: snap onto the target.
                tau_ = target;
                observe(tau_, y_);
                break;
            }
            double h = std::min(h_, cfg_.maxStep);
            bool last = false;
            if (remaining <= h * (1.0 + 1e-12)) {
                h = remaining;
                last = true;
            }
            if (h < minStep) throw IntegrationError("step size underflow", tau_);

            Vec2 yNew, err, k7;
            step(dir * h, yNew, err, k7);
            const double e = errorNorm(yNew, err);
            if (!std::isfinite(e)) {
                h_ = 0.25 * h;
                ++rejected_;
                continue;
            }
            const double fac11 = std::pow(e, 0.17);
            if (e <= 1.0) {
                double fac = fac11 / std::pow(errOld_, 0.04);
                fac = std::clamp(fac / 0.9, 0.2, 10.0);
                const double hNext = h / fac;
                errOld_ = std::max(e, 1e-4);
                tau_ = last ? target : tau_ + dir * h;
                y_ = yNew;
                k1_ = k7;
                ++accepted_;
                if (std::abs(y_[1]) > cfg_.blowupLimit) {
                    throw IntegrationError("velocity exceeded blowup limit", tau_);
                }
                // A step shortened to land on the target does not shrink the next one.
                h_ = last ? std::max(hNext, h_) : hNext;
                observe(tau_, y_);
            } else {
                h_ = h / std::min(10.0, fac11 / 0.9);
                ++rejected_;
            }
        }
    }

    void advanceTo(double target) {
        advanceTo(target, [](double, const Vec2&) {});
    }

private:
    void step(double h, Vec2& yNew, Vec2& err, Vec2& k7) {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                         a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                         b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                         e6 = 22.0 / 525, e7 = -1.0 / 40;

        const Vec2& k1 = k1_;
        Vec2 y;
        for (int i = 0; i < 2; ++i) y[i] = y_[i] + h * a21 * k1[i];
        const Vec2 k2 = rhs_(tau_ + c2 * h, y);
        for (int i = 0; i < 2; ++i) y[i] = y_[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const Vec2 k3 = rhs_(tau_ + c3 * h, y);
        for (int i = 0; i < 2; ++i) y[i] = y_[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const Vec2 k4 = rhs_(tau_ + c4 * h, y);
        for (int i = 0; i < 2; ++i) y[i] = y_[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const Vec2 k5 = rhs_(tau_ + c5 * h, y);
        for (int i = 0; i < 2; ++i) {
            y[i] = y_[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        }
        const Vec2 k6 = rhs_(tau_ + h, y);
        for (int i = 0; i < 2; ++i) {
            yNew[i] = y_[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        }
        k7 = rhs_(tau_ + h, yNew);
        for (int i = 0; i < 2; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
    }

    double errorNorm(const Vec2& yNew, const Vec2& err) const {
        const double angleScale =
            cfg_.absTol + cfg_.relTol * std::min(std::max(std::abs(y_[0]), std::abs(yNew[0])), std::numbers::pi);
        const double rateScale = cfg_.absTol + cfg_.relTol * std::max(std::abs(y_[1]), std::abs(yNew[1]));
        const double e0 = err[0] / angleScale;
        const double e1 = err[1] / rateScale;
        return std::max(std::abs(e0), std::abs(e1));
    }

    Rhs rhs_;
    IntegratorConfig cfg_;
    double tau_;
    Vec2 y_;
    Vec2 k1_{};
    double h_ = 0.0;
    double errOld_ = 1e-4;
    long accepted_ = 0;
    long rejected_ = 0;
};

/// Right-hand side of the angle form as a stepper functor.
struct AngleRhs {
    const Params* params;
    Vec2 operator()(double tau, const Vec2& y) const {
        const AngleRate r = rhsAngle(State{y[0], y[1], tau}, *params);
        return {r.dtheta, r.dv};
    }
};

struct MomentumRhs {
    const Params* params;
    Vec2 operator()(double tau, const Vec2& y) const {
        const MomentumRate r = rhsMomentum(MomentumState{y[0], y[1], tau}, *params);
        return {r.dtheta, r.ds};
    }
};

/// Integrates the angle form from `init` to `upTo`, recording every section
/// tau = init.tau + 2 pi n on the way (hit as step endpoints).
Trajectory integrate(const State& init, const Params& p, double upTo, const IntegratorConfig& cfg,
                     bool keepDense = false);

/// Same for the momentum form; samples carry s in place of v.
Trajectory integrateMomentum(const MomentumState& init, const Params& p, double upTo, const IntegratorConfig& cfg,
                             bool keepDense = false);

/// nPeriods + 1 samples at tau = init.tau + 2 pi n, n = 0..nPeriods.
std::vector<Sample> poincareMap(const State& init, const Params& p, int nPeriods, const IntegratorConfig& cfg);

/// CSV with a '#'-prefixed header carrying the serialized Params, then
/// columns tau,theta,v. Writes dense samples when present, else sections.
void writeTrajectoryCsv(std::ostream& out, const Trajectory& traj);

} // namespace ppvl
