#include "ppvl/melnikov.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "ppvl/errors.hpp"
#include "ppvl/quadrature.hpp"

namespace ppvl::melnikov {

namespace {

using elliptic::Modulus;
using elliptic::RotationalModulus;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kHomoclinicCutoff = 40.0;

void checkOmega(double omega, const char* who) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError(std::string(who) + ": omega must be > 0");
}

void checkEven(int q, const char* who) {
    if (q < 2 || q % 2 != 0) throw DomainError(std::string(who) + ": closed form requires even q");
}

MelnikovResult makeResult(double eps, double beta, double unitAmplitude, double unitOffset) {
    // M = eps * unitAmplitude * sin(tau0) - beta * unitOffset
    MelnikovResult res;
    res.amplitude = eps * unitAmplitude;
    res.offset = -beta * unitOffset;
    res.thresholdRatio = unitOffset / unitAmplitude;
    res.signChanging = beta == 0.0 ? eps > 0.0 && unitAmplitude > 0.0 : eps / beta > res.thresholdRatio;
    return res;
}

Modulus oscillatoryModulus(double omega, int q, const char* who) {
    auto k = elliptic::solveOscillatoryModulus(omega, 1, q);
    if (!k) throw DomainError(std::string(who) + ": no 1:q libration at this omega (omega*q < 1)");
    return *k;
}

// Unit coefficients of the 1:q libration closed form:
// M = 4 omega^2 (3 eps pi sin(tau0) / (omega^2 sinh(K(k')/omega)) - 4 beta (E - k'^2 K)).
struct Unit {
    double amplitude;
    double offset;
};

Unit oscillatoryUnit(double omega, int q) {
    const Modulus k = oscillatoryModulus(omega, q, "oscillatory Melnikov");
    if (k.k == 0.0) return {0.0, 0.0};
    const double kPrimeK = elliptic::ellipK(k.complement());
    const double bracket = elliptic::ellipE(k) - k.kc * k.kc * elliptic::ellipK(k);
    return {12.0 * kPi / std::sinh(kPrimeK / omega), 16.0 * omega * omega * bracket};
}

// M = 2 omega^2 (3 eps pi sin(tau0) / (omega^2 sinh(K'/(omega k))) - 4 beta k E(1/k)).
Unit rotationalUnit(double omega, int q) {
    const RotationalModulus k = elliptic::solveRotationalModulus(omega, 1, q);
    const double kPrime = elliptic::ellipK(k.reciprocal.complement());
    const double e = elliptic::ellipE(k.reciprocal);
    return {6.0 * kPi / std::sinh(kPrime / (omega * k.k)), 8.0 * omega * omega * k.k * e};
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    const int panels = std::max(8, static_cast<int>(std::ceil((b - a) / (kPi / 4))));
    return quadrature::adaptive(f, a, b, {1e-14, 1e-13, 30}, panels);
}

Params cosineParams(double eps, double beta, double omega) {
    Params p;
    p.eps = eps;
    p.beta = beta;
    p.omega = omega;
    return p;
}

} // namespace

void ResonanceSpec::validate() const {
    if (first < 1 || q < 1) throw DomainError("resonance indices must be natural numbers");
    if (std::gcd(first, q) != 1) throw DomainError("resonance indices must be coprime");
}

bool ResonanceSpec::hasClosedForm() const {
    if (kind == ResonanceKind::oscillatory) return first == 1 && q % 2 == 0;
    return first == 1;
}

double MelnikovResult::at(double tau0) const { return amplitude * std::sin(tau0) + offset; }

SeparatrixOrbit::SeparatrixOrbit(double omega, double tau0, int branch)
    : omega_(omega), tau0_(tau0), sign_(branch >= 0 ? 1.0 : -1.0) {
    checkOmega(omega, "SeparatrixOrbit");
}

PhasePoint SeparatrixOrbit::operator()(double tau) const {
    const double x = omega_ * (tau - tau0_);
    // tan(theta/2) = sinh(x): sin(theta/2) = tanh x, cos(theta/2) = sech x.
    return {sign_ * 2.0 * std::atan(std::sinh(x)), sign_ * 2.0 * omega_ / std::cosh(x)};
}

OscillatoryOrbit::OscillatoryOrbit(double omega, const Modulus& k, double tau0) : omega_(omega), tau0_(tau0), k_(k) {
    checkOmega(omega, "OscillatoryOrbit");
    if (!(k.k > 0.0)) throw DomainError("OscillatoryOrbit: modulus must be > 0");
    if (1.0 - k.k < 1e-9) throw DomainError("OscillatoryOrbit: modulus too close to 1 (separatrix)");
}

PhasePoint OscillatoryOrbit::operator()(double tau) const {
    const auto [sn, cn, dn] = elliptic::jacobiSnCnDn(omega_ * (tau - tau0_), k_);
    return {2.0 * std::atan2(k_.k * sn, dn), 2.0 * omega_ * k_.k * cn};
}

double OscillatoryOrbit::period() const { return 4.0 * elliptic::ellipK(k_) / omega_; }

RotationalOrbit::RotationalOrbit(double omega, const RotationalModulus& k, double tau0)
    : omega_(omega), tau0_(tau0), k_(k) {
    checkOmega(omega, "RotationalOrbit");
    if (!(k.k > 1.0)) throw DomainError("RotationalOrbit: modulus must be > 1");
}

PhasePoint RotationalOrbit::operator()(double tau) const {
    const double u = omega_ * k_.k * (tau - tau0_);
    const double am = elliptic::jacobiAm(u, k_.reciprocal);
    const double sn = std::sin(am);
    const double cn = std::cos(am);
    const double dn = std::sqrt(cn * cn + k_.reciprocal.kc * k_.reciprocal.kc * sn * sn);
    return {2.0 * am, 2.0 * omega_ * k_.k * dn};
}

double RotationalOrbit::period() const { return 2.0 * elliptic::ellipK(k_.reciprocal) / (omega_ * k_.k); }

double homoclinicThreshold(double omega) {
    checkOmega(omega, "homoclinicThreshold");
    return 4.0 * omega * omega / (3.0 * kPi) * std::sinh(kPi / (2.0 * omega));
}

MelnikovResult homoclinicCoefficients(double eps, double beta, double omega) {
    checkOmega(omega, "homoclinicCoefficients");
    return makeResult(eps, beta, 6.0 * kPi / std::sinh(kPi / (2.0 * omega)), 8.0 * omega * omega);
}

double homoclinicMelnikov(double eps, double beta, double omega, double tau0) {
    return homoclinicCoefficients(eps, beta, omega).at(tau0);
}

MelnikovResult oscillatoryCoefficients(double eps, double beta, double omega, int q) {
    checkOmega(omega, "oscillatoryCoefficients");
    checkEven(q, "oscillatoryCoefficients");
    const Unit u = oscillatoryUnit(omega, q);
    if (u.amplitude == 0.0 && u.offset == 0.0) {
        // omega*q = 1: zero-amplitude libration, M vanishes identically.
        return MelnikovResult{};
    }
    return makeResult(eps, beta, u.amplitude, u.offset);
}

double subharmonicOscMelnikov(double eps, double beta, double omega, int q, double tau0) {
    return oscillatoryCoefficients(eps, beta, omega, q).at(tau0);
}

std::optional<double> oscThreshold(double omega, int q) {
    checkOmega(omega, "oscThreshold");
    checkEven(q, "oscThreshold");
    const auto k = elliptic::solveOscillatoryModulus(omega, 1, q);
    if (!k || k->k == 0.0) return std::nullopt;
    const double bracket = elliptic::ellipE(*k) - k->kc * k->kc * elliptic::ellipK(*k);
    return 4.0 * omega * omega / (3.0 * kPi) * bracket * std::sinh(elliptic::ellipK(k->complement()) / omega);
}

MelnikovResult rotationalCoefficients(double eps, double beta, double omega, int q) {
    checkOmega(omega, "rotationalCoefficients");
    const Unit u = rotationalUnit(omega, q);
    return makeResult(eps, beta, u.amplitude, u.offset);
}

double subharmonicRotMelnikov(double eps, double beta, double omega, int q, double tau0) {
    return rotationalCoefficients(eps, beta, omega, q).at(tau0);
}

double rotThreshold(double omega, int q) {
    checkOmega(omega, "rotThreshold");
    const RotationalModulus k = elliptic::solveRotationalModulus(omega, 1, q);
    const double kPrime = elliptic::ellipK(k.reciprocal.complement());
    return 4.0 * omega * omega * k.k / (3.0 * kPi) * elliptic::ellipE(k.reciprocal) *
           std::sinh(kPrime / (omega * k.k));
}

MelnikovResult homoclinicCoefficients(const Params& p) {
    validate(p);
    if (!p.excitation.isPureCosine()) throw DomainError("Melnikov closed forms require phi = cos(tau)");
    return homoclinicCoefficients(p.eps, p.beta, p.omega);
}

MelnikovResult coefficients(const Params& p, const ResonanceSpec& res) {
    validate(p);
    res.validate();
    if (!p.excitation.isPureCosine()) throw DomainError("Melnikov closed forms require phi = cos(tau)");
    if (!res.hasClosedForm()) throw DomainError("no closed-form Melnikov distance for this resonance");
    if (res.kind == ResonanceKind::oscillatory) return oscillatoryCoefficients(p.eps, p.beta, p.omega, res.q);
    return rotationalCoefficients(p.eps, p.beta, p.omega, res.q);
}

MelnikovIntegrals homoclinicIntegrals(double omega, double tau0) {
    checkOmega(omega, "homoclinicIntegrals");
    const double a = tau0 - kHomoclinicCutoff / omega;
    const double b = tau0 + kHomoclinicCutoff / omega;
    auto sech2 = [&](double t) {
        const double c = std::cosh(omega * (t - tau0));
        return 1.0 / (c * c);
    };
    MelnikovIntegrals out;
    out.i1 = integrate([&](double t) { return std::sin(t) * sech2(t); }, a, b);
    out.i2 = integrate(sech2, a, b);
    out.i3 = integrate(
        [&](double t) {
            const double x = omega * (t - tau0);
            return std::cos(t) * std::tanh(x) * sech2(t);
        },
        a, b);
    return out;
}

MelnikovIntegrals oscillatoryIntegrals(double omega, int p, int q, double tau0) {
    checkOmega(omega, "oscillatoryIntegrals");
    const auto k = elliptic::solveOscillatoryModulus(omega, p, q);
    if (!k) throw DomainError("oscillatoryIntegrals: no p:q libration at this omega");
    auto jac = [&](double t) { return elliptic::jacobiSnCnDn(omega * (t - tau0), *k); };
    const double b = kTwoPi * q;
    MelnikovIntegrals out;
    out.i1 = integrate([&](double t) { const auto j = jac(t); return std::sin(t) * j.cn * j.cn; }, 0.0, b);
    out.i2 = integrate([&](double t) { const auto j = jac(t); return j.cn * j.cn; }, 0.0, b);
    out.i3 = integrate([&](double t) { const auto j = jac(t); return std::cos(t) * j.sn * j.cn * j.dn; }, 0.0, b);
    return out;
}

MelnikovIntegrals rotationalIntegrals(double omega, int r, int q, double tau0) {
    checkOmega(omega, "rotationalIntegrals");
    const RotationalModulus k = elliptic::solveRotationalModulus(omega, r, q);
    auto jac = [&](double t) { return elliptic::jacobiSnCnDn(omega * k.k * (t - tau0), k.reciprocal); };
    const double b = kTwoPi * q;
    MelnikovIntegrals out;
    out.i1 = integrate([&](double t) { const auto j = jac(t); return std::sin(t) * j.dn * j.dn; }, 0.0, b);
    out.i2 = integrate([&](double t) { const auto j = jac(t); return j.dn * j.dn; }, 0.0, b);
    out.i3 = integrate([&](double t) { const auto j = jac(t); return std::cos(t) * j.sn * j.cn * j.dn; }, 0.0, b);
    return out;
}

double homoclinicMelnikovQuadrature(double eps, double beta, double omega, double tau0) {
    checkOmega(omega, "homoclinicMelnikovQuadrature");
    const Params p = cosineParams(eps, beta, omega);
    const SeparatrixOrbit orbit(omega, tau0, +1);
    auto integrand = [&](double t) {
        const PhasePoint x = orbit(t);
        return x.v * perturbationG1(State{x.theta, x.v, t}, p);
    };
    return integrate(integrand, tau0 - kHomoclinicCutoff / omega, tau0 + kHomoclinicCutoff / omega);
}

double subharmonicMelnikovQuadrature(double eps, double beta, double omega, const ResonanceSpec& res, double tau0) {
    checkOmega(omega, "subharmonicMelnikovQuadrature");
    res.validate();
    const Params p = cosineParams(eps, beta, omega);
    auto alongOrbit = [&](const auto& orbit) {
        auto integrand = [&](double t) {
            const PhasePoint x = orbit(t);
            return x.v * perturbationG1(State{x.theta, x.v, t}, p);
        };
        return integrate(integrand, 0.0, kTwoPi * res.q);
    };
    if (res.kind == ResonanceKind::oscillatory) {
        const auto k = elliptic::solveOscillatoryModulus(omega, res.first, res.q);
        if (!k) throw DomainError("no p:q libration at this omega");
        if (k->k == 0.0) return 0.0;
        return alongOrbit(OscillatoryOrbit(omega, *k, tau0));
    }
    return alongOrbit(RotationalOrbit(omega, elliptic::solveRotationalModulus(omega, res.first, res.q), tau0));
}

BoundaryCurve homoclinicBoundary(std::span<const double> omegas, double scale) {
    BoundaryCurve c{BoundaryKind::homoclinic, 0, 0, "omega", "threshold", {}};
    for (double w : omegas) {
        const double y = scale * homoclinicThreshold(w);
        if (std::isfinite(y)) c.points.push_back({w, y});
    }
    return c;
}

BoundaryCurve oscillatoryBoundary(std::span<const double> omegas, int q, double scale) {
    BoundaryCurve c{BoundaryKind::oscillatory, 1, q, "omega", "threshold", {}};
    for (double w : omegas) {
        const auto t = oscThreshold(w, q);
        if (t && std::isfinite(scale * *t)) c.points.push_back({w, scale * *t});
    }
    return c;
}

BoundaryCurve rotationalBoundary(std::span<const double> omegas, int q, double scale) {
    BoundaryCurve c{BoundaryKind::rotational, 1, q, "omega", "threshold", {}};
    for (double w : omegas) {
        const double y = scale * rotThreshold(w, q);
        if (std::isfinite(y)) c.points.push_back({w, y});
    }
    return c;
}

} // namespace ppvl::melnikov
