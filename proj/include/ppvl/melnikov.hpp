#pragma once

#include <optional>
#include <span>

#include "ppvl/boundary.hpp"
#include "ppvl/elliptic.hpp"
#include "ppvl/model.hpp"

namespace ppvl::melnikov {

enum class ResonanceKind { oscillatory, rotational };

/// p:q oscillation or r:q rotation; `first` is p or r.
struct ResonanceSpec {
    ResonanceKind kind = ResonanceKind::oscillatory;
    int first = 1;
    int q = 1;

    /// Coprime naturals; throws DomainError otherwise.
    void validate() const;
    /// True where a closed-form Melnikov distance exists (p = 1 with q even,
    /// or r = 1).
    bool hasClosedForm() const;
};

/// M(tau0) = amplitude * sin(tau0) + offset, with amplitude ~ eps, offset ~ -beta.
struct MelnikovResult {
    double amplitude = 0.0;
    double offset = 0.0;
    bool signChanging = false;
    double thresholdRatio = 0.0;  ///< eps/beta above which M changes sign

    double at(double tau0) const;
};

struct PhasePoint {
    double theta;
    double v;
};

/// Homoclinic orbit of the unperturbed pendulum through theta = 0 at tau0.
/// branch = +1 runs from -pi to pi, -1 the mirror image.
class SeparatrixOrbit {
public:
    SeparatrixOrbit(double omega, double tau0, int branch = +1);
    PhasePoint operator()(double tau) const;

private:
    double omega_, tau0_;
    double sign_;
};

/// Libration v = 2 omega k cn(omega (tau - tau0), k).
class OscillatoryOrbit {
public:
    /// Rejects |k - 1| < 1e-9 (the separatrix is handled by SeparatrixOrbit).
    OscillatoryOrbit(double omega, const elliptic::Modulus& k, double tau0);
    PhasePoint operator()(double tau) const;
    double period() const;

private:
    double omega_, tau0_;
    elliptic::Modulus k_;
};

/// Counter-clockwise rotation theta = 2 am(omega k (tau - tau0), 1/k).
class RotationalOrbit {
public:
    RotationalOrbit(double omega, const elliptic::RotationalModulus& k, double tau0);
    PhasePoint operator()(double tau) const;
    double period() const;

private:
    double omega_, tau0_;
    elliptic::RotationalModulus k_;
};

// Closed forms (phi = cos tau).

double homoclinicMelnikov(double eps, double beta, double omega, double tau0);
MelnikovResult homoclinicCoefficients(double eps, double beta, double omega);
/// (4 omega^2 / 3 pi) sinh(pi / 2 omega).
double homoclinicThreshold(double omega);

/// Requires q even and omega*q >= 1 (the 1:q libration exists).
double subharmonicOscMelnikov(double eps, double beta, double omega, int q, double tau0);
MelnikovResult oscillatoryCoefficients(double eps, double beta, double omega, int q);
/// Empty when the 1:q libration does not exist at this omega.
std::optional<double> oscThreshold(double omega, int q);

double subharmonicRotMelnikov(double eps, double beta, double omega, int q, double tau0);
MelnikovResult rotationalCoefficients(double eps, double beta, double omega, int q);
double rotThreshold(double omega, int q);

/// Overloads taking Params check that the excitation is cos(tau).
MelnikovResult coefficients(const Params& p, const ResonanceSpec& res);
MelnikovResult homoclinicCoefficients(const Params& p);

// Quadrature route: v * g1 integrated along the unperturbed orbit.

/// The three component integrals (I1 with sin tau, I2 damping, I3 with cos tau)
/// as defined for each orbit family.
struct MelnikovIntegrals {
    double i1;
    double i2;
    double i3;
};

/// Truncated at |omega (tau - tau0)| = 40.
MelnikovIntegrals homoclinicIntegrals(double omega, double tau0);
MelnikovIntegrals oscillatoryIntegrals(double omega, int p, int q, double tau0);
MelnikovIntegrals rotationalIntegrals(double omega, int r, int q, double tau0);

double homoclinicMelnikovQuadrature(double eps, double beta, double omega, double tau0);
/// Any coprime p:q / r:q; over tau in [0, 2 pi q].
double subharmonicMelnikovQuadrature(double eps, double beta, double omega, const ResonanceSpec& res,
                                     double tau0);

// Threshold curves sampled on an omega grid, ordinate multiplied by `scale`
// (pass beta to get the eps-axis boundary). Omegas without a resonance are skipped.
BoundaryCurve homoclinicBoundary(std::span<const double> omegas, double scale = 1.0);
BoundaryCurve oscillatoryBoundary(std::span<const double> omegas, int q, double scale = 1.0);
BoundaryCurve rotationalBoundary(std::span<const double> omegas, int q, double scale = 1.0);

} // namespace ppvl::melnikov
