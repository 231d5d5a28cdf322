#pragma once

#include <optional>

namespace ppvl::elliptic {

/// Elliptic modulus stored together with its complement k' = sqrt(1 - k^2).
///
/// Near the separatrix k rounds to 1 in double precision long before k' does,
/// so every routine that needs both takes them from here instead of
/// recomputing one from the other.
struct Modulus {
    double k = 0.0;
    double kc = 1.0;

    static Modulus fromK(double k);
    static Modulus fromComplement(double kc);

    /// The complementary modulus as a Modulus (k and k' swapped).
    Modulus complement() const { return Modulus{kc, k}; }
};

/// Modulus of a rotational orbit: k > 1, evaluated through the reciprocal 1/k.
struct RotationalModulus {
    double k = 1.0;
    Modulus reciprocal;  ///< (1/k, sqrt(1 - 1/k^2))
};

/// Complete elliptic integral of the first kind, k in [0, 1).
double ellipK(double k);
double ellipK(const Modulus& m);

/// Complete elliptic integral of the second kind, k in [0, 1].
double ellipE(double k);
double ellipE(const Modulus& m);

/// Jacobi amplitude am(u, k).
double jacobiAm(double u, double k);
double jacobiAm(double u, const Modulus& m);

struct SnCnDn {
    double sn;
    double cn;
    double dn;
};

SnCnDn jacobiSnCnDn(double u, double k);
SnCnDn jacobiSnCnDn(double u, const Modulus& m);

/// Modulus of the p:q oscillatory resonance, K(k) = pi*omega*q/(2p).
/// Empty when omega*q/p < 1 (no oscillation is that slow).
std::optional<Modulus> solveOscillatoryModulus(double omega, int p, int q);

/// Modulus k > 1 of the r:q rotational resonance,
/// 2 K(1/k) r / (omega k) = 2 pi q.
RotationalModulus solveRotationalModulus(double omega, int r, int q);

} // namespace ppvl::elliptic
