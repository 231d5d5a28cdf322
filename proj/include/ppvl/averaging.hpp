#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ppvl/boundary.hpp"
#include "ppvl/model.hpp"

namespace ppvl::averaging {

/// Phi(tau) = integral_0^tau d eta / (1 + eps phi(eta))^2, tabulated on one
/// excitation period and extended by Phi(tau + 2 pi) = Phi(tau) + Phi(2 pi).
class PhiTable {
public:
    static PhiTable compute(const Params& p, int nSamples = 4096);

    double operator()(double tau) const;
    /// dPhi/dtau, exact.
    double rate(double tau) const;
    /// Phi(2 pi).
    double period() const { return values_.back(); }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> values() const { return values_; }
    const Params& params() const { return params_; }

private:
    Params params_;
    double step_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> values_;
    std::vector<double> rates_;
};

struct ABPair {
    double a;
    double b;
};

/// s0 = (r/q) 2 pi / Phi(2 pi).
double steadySectorVelocity(const PhiTable& phi, int r, int q);

/// A(s), B(s): weighted means of sin(s Phi), cos(s Phi) over [0, 2 pi r q].
ABPair abIntegrals(const PhiTable& phi, double s, int r, int q);
/// A'(s), B'(s).
ABPair abDerivatives(const PhiTable& phi, double s, int r, int q);

enum class Stability { stable, unstable, marginal };

std::string_view toString(Stability s);

/// |F'(s0)| below this, or branches merged at the existence border, is "marginal".
inline constexpr double kMarginalBand = 1e-10;

/// Steady r:q rotation of the averaged equation and its two phase branches.
struct AveragedRotation {
    int r = 1;
    int q = 1;
    double s0 = 0.0;
    double a = 0.0, b = 0.0;    ///< A(s0), B(s0)
    double da = 0.0, db = 0.0;  ///< A'(s0), B'(s0)
    double betaOverOmega = 0.0;
    /// Minimal omega/beta for existence, s0 / sqrt(A^2 + B^2).
    double thresholdOmegaOverBeta = 0.0;
    bool exists = false;
    std::optional<double> thetaPlus;   ///< in [0, 2 pi)
    std::optional<double> thetaMinus;
    std::optional<Stability> stablePlus;
    std::optional<Stability> stableMinus;
    /// F'(s0) on each branch (negative = stable).
    std::optional<double> slopePlus;
    std::optional<double> slopeMinus;
};

/// Solves A cos(theta0) + B sin(theta0) = -(beta/omega) s0 for both branches
/// and evaluates their stability. Throws NumericalError when A = B = 0.
AveragedRotation solveBranches(const Params& p, const PhiTable& phi, int r, int q);
AveragedRotation solveBranches(const Params& p, int r, int q);

/// Residual A cos(theta) + B sin(theta) + (beta/omega) s0 of the steady equation.
double steadyResidual(const AveragedRotation& rot, double theta0);

struct BranchStability {
    Stability plus;
    Stability minus;
};

/// stable <=> A'(s0) cos(theta0) + B'(s0) sin(theta0) > -beta/omega.
BranchStability stability(const Params& p, const AveragedRotation& rot);

/// Minimal omega/beta versus eps for resonance r:q. Points where A^2 + B^2
/// vanishes (no rotation can be sustained) are left out.
BoundaryCurve existenceBoundary(int r, int q, std::span<const double> epsGrid,
                                const Excitation& excitation = Excitation::cosine());

enum class BranchSign { plus, minus };

/// First-order rotation theta(tau) = s0 Phi(tau) + theta0.
class ApproximateRotation {
public:
    ApproximateRotation(std::shared_ptr<const PhiTable> phi, double s0, double theta0);

    double operator()(double tau) const { return s0_ * (*phi_)(tau) + theta0_; }
    double velocity(double tau) const { return s0_ * phi_->rate(tau); }
    /// Phase point on the approximation, usable as an initial condition.
    State stateAt(double tau) const { return {(*this)(tau), velocity(tau), tau}; }

private:
    std::shared_ptr<const PhiTable> phi_;
    double s0_;
    double theta0_;
};

ApproximateRotation approximateRotationSolution(const Params& p, const AveragedRotation& rot, BranchSign branch);

} // namespace ppvl::averaging
