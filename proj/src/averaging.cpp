#include "ppvl/averaging.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "ppvl/errors.hpp"
#include "ppvl/quadrature.hpp"

namespace ppvl::averaging {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
// Panels per excitation period for the A/B family of integrals.
constexpr int kPanelsPerPeriod = 64;
constexpr int kGaussOrder = 16;

void checkResonance(int r, int q) {
    if (r < 1 || q < 1) throw DomainError("resonance indices must be natural numbers");
    if (std::gcd(r, q) != 1) throw DomainError("resonance indices r and q must be coprime");
}

double wrapPositive(double x) {
    double w = std::fmod(x, kTwoPi);
    if (w < 0) w += kTwoPi;
    if (w >= kTwoPi) w -= kTwoPi;
    return w;
}

// Weighted mean over [0, 2 pi r q] of (1 + eps phi) g(tau).
template <class G>
double weightedMean(const PhiTable& phi, int r, int q, G&& g) {
    const Params& p = phi.params();
    const int periods = r * q;
    auto integrand = [&](double t) { return (1.0 + p.eps * p.excitation.value(t)) * g(t); };
    const double total =
        quadrature::compositeGauss(integrand, 0.0, kTwoPi * periods, kPanelsPerPeriod * periods, kGaussOrder);
    return total / (kTwoPi * periods);
}

} // namespace

PhiTable PhiTable::compute(const Params& p, int nSamples) {
    validate(p, /*allowZeroOmega=*/true);
    if (nSamples < 16) throw DomainError("PhiTable needs at least 16 samples");
    PhiTable t;
    t.params_ = p;
    t.step_ = kTwoPi / nSamples;
    t.nodes_.resize(nSamples + 1);
    t.values_.resize(nSamples + 1);
    t.rates_.resize(nSamples + 1);
    auto density = [&](double tau) {
        const double len = 1.0 + p.eps * p.excitation.value(tau);
        if (!(len > 0.0)) throw DomainError("1 + eps*phi(tau) must be > 0");
        return 1.0 / (len * len);
    };
    double acc = 0.0;
    for (int i = 0; i <= nSamples; ++i) {
        const double tau = i == nSamples ? kTwoPi : t.step_ * i;
        if (i > 0) acc += quadrature::compositeGauss(density, t.nodes_[i - 1], tau, 1, 8);
        t.nodes_[i] = tau;
        t.values_[i] = acc;
        t.rates_[i] = density(tau);
    }
    return t;
}

double PhiTable::operator()(double tau) const {
    const double turns = std::floor(tau / kTwoPi);
    double local = tau - turns * kTwoPi;
    const int n = static_cast<int>(nodes_.size()) - 1;
    int i = static_cast<int>(local / step_);
    if (i >= n) i = n - 1;
    if (i < 0) i = 0;
    // Cubic Hermite with the exact end slopes.
    const double h = nodes_[i + 1] - nodes_[i];
    const double x = (local - nodes_[i]) / h;
    const double x2 = x * x, x3 = x2 * x;
    const double h00 = 2 * x3 - 3 * x2 + 1, h10 = x3 - 2 * x2 + x;
    const double h01 = -2 * x3 + 3 * x2, h11 = x3 - x2;
    const double val = h00 * values_[i] + h10 * h * rates_[i] + h01 * values_[i + 1] + h11 * h * rates_[i + 1];
    return val + turns * period();
}

double PhiTable::rate(double tau) const {
    const double len = 1.0 + params_.eps * params_.excitation.value(tau);
    return 1.0 / (len * len);
}

double steadySectorVelocity(const PhiTable& phi, int r, int q) {
    checkResonance(r, q);
    return static_cast<double>(r) / q * kTwoPi / phi.period();
}

ABPair abIntegrals(const PhiTable& phi, double s, int r, int q) {
    checkResonance(r, q);
    return {weightedMean(phi, r, q, [&](double t) { return std::sin(s * phi(t)); }),
            weightedMean(phi, r, q, [&](double t) { return std::cos(s * phi(t)); })};
}

ABPair abDerivatives(const PhiTable& phi, double s, int r, int q) {
    checkResonance(r, q);
    return {weightedMean(phi, r, q,
                         [&](double t) {
                             const double f = phi(t);
                             return f * std::cos(s * f);
                         }),
            -weightedMean(phi, r, q, [&](double t) {
                const double f = phi(t);
                return f * std::sin(s * f);
            })};
}

std::string_view toString(Stability s) {
    switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
    }
    return "unknown";
}

double steadyResidual(const AveragedRotation& rot, double theta0) {
    return rot.a * std::cos(theta0) + rot.b * std::sin(theta0) + rot.betaOverOmega * rot.s0;
}

namespace {

double slope(const AveragedRotation& rot, double theta0) {
    return -rot.betaOverOmega - rot.da * std::cos(theta0) - rot.db * std::sin(theta0);
}

Stability classifySlope(double fPrime, bool merged) {
    if (merged || std::abs(fPrime) < kMarginalBand) return Stability::marginal;
    return fPrime < 0 ? Stability::stable : Stability::unstable;
}

// |1 - ratio| below this counts as sitting on the existence border.
constexpr double kMergedBand = 1e-12;

double existenceRatio(const AveragedRotation& rot) {
    return rot.betaOverOmega * rot.s0 / std::hypot(rot.a, rot.b);
}

} // namespace

BranchStability stability(const Params& p, const AveragedRotation& rot) {
    validate(p, true);
    if (!rot.exists || !rot.thetaPlus || !rot.thetaMinus) {
        throw DomainError("stability requires an existing averaged rotation");
    }
    const bool merged = std::abs(1.0 - existenceRatio(rot)) < kMergedBand;
    return {classifySlope(slope(rot, *rot.thetaPlus), merged), classifySlope(slope(rot, *rot.thetaMinus), merged)};
}

AveragedRotation solveBranches(const Params& p, const PhiTable& phi, int r, int q) {
    validate(p, true);
    checkResonance(r, q);
    AveragedRotation rot;
    rot.r = r;
    rot.q = q;
    rot.s0 = steadySectorVelocity(phi, r, q);
    const ABPair ab = abIntegrals(phi, rot.s0, r, q);
    const ABPair dab = abDerivatives(phi, rot.s0, r, q);
    rot.a = ab.a;
    rot.b = ab.b;
    rot.da = dab.a;
    rot.db = dab.b;
    rot.betaOverOmega = p.betaOverOmega();

    const double radius = std::hypot(rot.a, rot.b);
    if (!(radius > 1e-14)) {
        throw NumericalError("averaged forcing vanishes (A = B = 0): steady phase is undetermined");
    }
    rot.thresholdOmegaOverBeta = rot.s0 / radius;
    const double ratio = existenceRatio(rot);
    rot.exists = ratio <= 1.0;
    if (!rot.exists) return rot;

    const double sgnB = rot.b >= 0.0 ? 1.0 : -1.0;
    const double thetaStar = sgnB * std::acos(std::clamp(rot.a / radius, -1.0, 1.0));
    const double spread = std::acos(std::clamp(ratio, -1.0, 1.0));
    rot.thetaPlus = wrapPositive(thetaStar + kPi + spread);
    rot.thetaMinus = wrapPositive(thetaStar + kPi - spread);
    rot.slopePlus = slope(rot, *rot.thetaPlus);
    rot.slopeMinus = slope(rot, *rot.thetaMinus);
    const BranchStability st = stability(p, rot);
    rot.stablePlus = st.plus;
    rot.stableMinus = st.minus;
    return rot;
}

AveragedRotation solveBranches(const Params& p, int r, int q) {
    return solveBranches(p, PhiTable::compute(p), r, q);
}

BoundaryCurve existenceBoundary(int r, int q, std::span<const double> epsGrid, const Excitation& excitation) {
    checkResonance(r, q);
    BoundaryCurve curve{BoundaryKind::averagingExistence, r, q, "eps", "omega_over_beta", {}};
    for (double eps : epsGrid) {
        if (!(eps > 0.0 && eps * excitation.maxAbs() < 1.0)) throw DomainError("eps grid must lie in (0, 1/max|phi|)");
        Params p;
        p.eps = eps;
        p.excitation = excitation;
        const PhiTable phi = PhiTable::compute(p);
        const double s0 = steadySectorVelocity(phi, r, q);
        const ABPair ab = abIntegrals(phi, s0, r, q);
        const double radius = std::hypot(ab.a, ab.b);
        if (!(radius > 1e-14)) continue;
        const double threshold = s0 / radius;
        if (std::isfinite(threshold)) curve.points.push_back({eps, threshold});
    }
    return curve;
}

ApproximateRotation::ApproximateRotation(std::shared_ptr<const PhiTable> phi, double s0, double theta0)
    : phi_(std::move(phi)), s0_(s0), theta0_(theta0) {
    if (!phi_) throw DomainError("ApproximateRotation needs a Phi table");
}

ApproximateRotation approximateRotationSolution(const Params& p, const AveragedRotation& rot, BranchSign branch) {
    if (!rot.exists) throw DomainError("no steady rotation exists at these parameters");
    const auto theta = branch == BranchSign::plus ? rot.thetaPlus : rot.thetaMinus;
    if (!theta) throw DomainError("branch phase missing");
    return ApproximateRotation(std::make_shared<const PhiTable>(PhiTable::compute(p)), rot.s0, *theta);
}

} // namespace ppvl::averaging
