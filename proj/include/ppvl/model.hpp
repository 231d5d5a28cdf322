#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ppvl {

/// One term a*cos(n tau) + b*sin(n tau) of the length law.
struct Harmonic {
    int index = 1;
    double cosCoef = 0.0;
    double sinCoef = 0.0;

    bool operator==(const Harmonic&) const = default;
};

/// Zero-mean 2*pi-periodic length law phi(tau) as a finite Fourier series.
class Excitation {
public:
    Excitation() : Excitation(cosine()) {}
    explicit Excitation(std::vector<Harmonic> terms);

    /// phi(tau) = cos(tau).
    static Excitation cosine();

    double value(double tau) const;
    /// Exact term-by-term derivative.
    double rate(double tau) const;
    /// max |phi| over one period.
    double maxAbs() const { return maxAbs_; }

    bool isPureCosine() const;
    const std::vector<Harmonic>& terms() const { return terms_; }

    bool operator==(const Excitation& o) const { return terms_ == o.terms_; }

private:
    std::vector<Harmonic> terms_;
    double maxAbs_ = 0.0;
};

struct DimensionalParams {
    double mass = 1.0;
    double meanLength = 1.0;
    double amplitude = 0.0;       ///< a
    double frequency = 1.0;       ///< Omega, excitation angular frequency
    double damping = 0.0;         ///< gamma
    double gravity = 9.81;
};

/// Nondimensional configuration (eps, beta, omega, phi).
struct Params {
    double eps = 0.0;
    double beta = 0.0;
    double omega = 1.0;
    Excitation excitation;

    /// beta/omega, taken as 0 when beta = 0 so the omega -> 0 limit is usable.
    double betaOverOmega() const { return beta == 0.0 ? 0.0 : beta / omega; }

    bool operator==(const Params&) const = default;
};

/// Throws DomainError unless eps >= 0, beta >= 0, omega > 0 (or >= 0 when
/// `allowZeroOmega`), and eps * max|phi| < 1.
void validate(const Params& p, bool allowZeroOmega = false);

Params nondimensionalize(const DimensionalParams& d);

/// Phase point of the angle form. theta is cumulative (never wrapped).
struct State {
    double theta = 0.0;
    double v = 0.0;
    double tau = 0.0;
};

/// Momentum form: s = (1 + eps phi)^2 dtheta/dtau.
struct MomentumState {
    double theta = 0.0;
    double s = 0.0;
    double tau = 0.0;
};

MomentumState toMomentum(const State& x, const Params& p);
State toAngle(const MomentumState& x, const Params& p);

struct AngleRate {
    double dtheta;
    double dv;
};

struct MomentumRate {
    double dtheta;
    double ds;
};

AngleRate rhsAngle(const State& x, const Params& p);
MomentumRate rhsMomentum(const MomentumState& x, const Params& p);

/// Unperturbed energy v^2/2 - omega^2 cos(theta).
double hamiltonian(const State& x, const Params& p);

/// First-order perturbation g1 for phi = cos; throws for other excitations.
double perturbationG1(const State& x, const Params& p);

/// Wraps to (-pi, pi]. For display only.
double wrapAngle(double theta);

// Plain-text "key = value" serialization. Keys: eps, beta, omega, harmonics
// ("n:cos:sin" terms separated by commas).
std::string formatParams(const Params& p);
Params parseParams(std::string_view text);

std::string formatHarmonics(const Excitation& e);
Excitation parseHarmonics(std::string_view text);

} // namespace ppvl
