#include "ppvl/elliptic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "ppvl/errors.hpp"

namespace ppvl::elliptic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAgmTol = 1e-16;

void checkModulus(const Modulus& m, const char* who) {
    if (!(m.k >= 0.0) || !(m.kc >= 0.0) || !std::isfinite(m.k) || !std::isfinite(m.kc)) {
        throw DomainError(std::string(who) + ": modulus outside [0, 1]");
    }
}

double agm(double a, double b) {
    for (int it = 0; it < 64 && std::abs(a - b) > kAgmTol * a; ++it) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return 0.5 * (a + b);
}

void checkCoprime(int a, int b, const char* who) {
    if (a < 1 || b < 1) throw DomainError(std::string(who) + ": resonance indices must be natural");
    if (std::gcd(a, b) != 1) throw DomainError(std::string(who) + ": resonance indices must be coprime");
}

// Hybrid bisection/secant (Illinois) on a bracket [lo, hi] with f(lo) < 0 < f(hi).
template <class F>
double solveBracketed(F&& f, double lo, double hi, double flo, double fhi, double tol) {
    int side = 0;
    for (int it = 0; it < 300; ++it) {
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double fx = f(x);
        if (std::abs(fx) <= tol || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
            return x;
        }
        if (fx < 0) {
            lo = x;
            flo = fx;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
        // Plain bisection every few rounds guarantees bracket shrinkage.
        if (it % 8 == 7) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (fm < 0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
                fhi = fm;
            }
            side = 0;
        }
    }
    throw NumericalError("modulus solver did not converge");
}

} // namespace

Modulus Modulus::fromK(double k) {
    if (!(k >= 0.0 && k <= 1.0)) throw DomainError("modulus k must lie in [0, 1]");
    return Modulus{k, std::sqrt((1.0 - k) * (1.0 + k))};
}

Modulus Modulus::fromComplement(double kc) {
    if (!(kc >= 0.0 && kc <= 1.0)) throw DomainError("complementary modulus must lie in [0, 1]");
    return Modulus{std::sqrt((1.0 - kc) * (1.0 + kc)), kc};
}

double ellipK(const Modulus& m) {
    checkModulus(m, "ellipK");
    if (m.kc <= 0.0) throw DomainError("ellipK: k = 1 is a logarithmic singularity");
    return kPi / (2.0 * agm(1.0, m.kc));
}

double ellipK(double k) {
    if (!(k >= 0.0 && k < 1.0)) throw DomainError("ellipK: k must lie in [0, 1)");
    return ellipK(Modulus::fromK(k));
}

double ellipE(const Modulus& m) {
    checkModulus(m, "ellipE");
    if (m.kc <= 0.0) return 1.0;
    // E = K (1 - sum 2^(n-1) c_n^2), c_0 = k.
    double a = 1.0, b = m.kc, c = m.k;
    double sum = 0.5 * c * c;
    double pow2 = 0.5;
    for (int it = 0; it < 64 && std::abs(c) > kAgmTol; ++it) {
        c = 0.5 * (a - b);
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    return kPi / (2.0 * a) * (1.0 - sum);
}

double ellipE(double k) {
    if (!(k >= 0.0 && k <= 1.0)) throw DomainError("ellipE: k must lie in [0, 1]");
    return ellipE(Modulus::fromK(k));
}

double jacobiAm(double u, const Modulus& m) {
    checkModulus(m, "jacobiAm");
    if (!std::isfinite(u)) throw DomainError("jacobiAm: argument must be finite");
    if (m.kc <= 0.0) throw DomainError("jacobiAm: k must be < 1");
    if (m.k == 0.0) return u;

    // Reduce to [-K, K] using am(u + 2K) = am(u) + pi.
    const double bigK = ellipK(m);
    const double turns = std::nearbyint(u / (2.0 * bigK));
    const double ur = u - 2.0 * bigK * turns;

    // Descending AGM phase recursion.
    double a[40], c[40];
    a[0] = 1.0;
    double b = m.kc;
    c[0] = m.k;
    int n = 0;
    while (std::abs(c[n]) > kAgmTol && n < 38) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
    }
    double phi = std::ldexp(a[n] * ur, n);
    for (int j = n; j > 0; --j) {
        phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
    }
    return phi + kPi * turns;
}

double jacobiAm(double u, double k) {
    if (!(k >= 0.0 && k < 1.0)) throw DomainError("jacobiAm: k must lie in [0, 1)");
    return jacobiAm(u, Modulus::fromK(k));
}

SnCnDn jacobiSnCnDn(double u, const Modulus& m) {
    const double phi = jacobiAm(u, m);
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    // 1 - k^2 sn^2 rewritten without cancellation near k = 1.
    const double dn = std::sqrt(cn * cn + m.kc * m.kc * sn * sn);
    return {sn, cn, dn};
}

SnCnDn jacobiSnCnDn(double u, double k) {
    if (!(k >= 0.0 && k < 1.0)) throw DomainError("jacobiSnCnDn: k must lie in [0, 1)");
    return jacobiSnCnDn(u, Modulus::fromK(k));
}

std::optional<Modulus> solveOscillatoryModulus(double omega, int p, int q) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("solveOscillatoryModulus: omega must be > 0");
    checkCoprime(p, q, "solveOscillatoryModulus");
    const double target = kPi * omega * q / (2.0 * p);
    const double half = 0.5 * kPi;
    if (target < half * (1.0 - 1e-15)) return std::nullopt;
    if (target <= half * (1.0 + 1e-15)) return Modulus{0.0, 1.0};

    // K is decreasing in y = ln k'; solve K(e^y) = target on y < 0.
    auto g = [&](double y) { return target - ellipK(Modulus::fromComplement(std::exp(y))); };
    double hi = 0.0;  // g(0) = target - pi/2 > 0
    double lo = std::log(4.0) - target - 2.0;
    while (g(lo) > 0) lo -= 2.0;
    // g increases with y: g(lo) < 0 < g(hi).
    const double y = solveBracketed(g, lo, hi, g(lo), g(hi), 1e-12 * target);
    return Modulus::fromComplement(std::exp(y));
}

RotationalModulus solveRotationalModulus(double omega, int r, int q) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("solveRotationalModulus: omega must be > 0");
    checkCoprime(r, q, "solveRotationalModulus");
    // With m = 1/k: m K(m) = pi q omega / r, increasing from 0 to infinity on (0, 1).
    const double target = kPi * q * omega / r;
    Modulus m;
    if (target < 1.0) {
        auto g = [&](double x) { return x * ellipK(Modulus::fromK(x)) - target; };
        const double lo = 0.0, hi = std::min(1.0 - 1e-12, 2.0 * target / kPi + 0.5);
        if (!(g(hi) > 0)) throw NumericalError("solveRotationalModulus: bracketing failed");
        const double x = solveBracketed(g, lo, hi, -target, g(hi), 1e-12 * target);
        m = Modulus::fromK(x);
    } else {
        // Parametrise by y = ln(m'), m K(m) decreasing in y.
        auto g = [&](double y) {
            const Modulus mm = Modulus::fromComplement(std::exp(y));
            return target - mm.k * ellipK(mm);
        };
        double hi = std::log(0.99);
        while (g(hi) < 0) hi = 0.5 * hi;  // move toward m' -> 1 (m -> 0)
        double lo = std::log(4.0) - target - 2.0;
        while (g(lo) > 0) lo -= 2.0;
        if (!(g(hi) > 0) || !(g(lo) < 0)) throw NumericalError("solveRotationalModulus: bracketing failed");
        const double y = solveBracketed(g, lo, hi, g(lo), g(hi), 1e-12 * target);
        m = Modulus::fromComplement(std::exp(y));
    }
    return RotationalModulus{1.0 / m.k, m};
}

} // namespace ppvl::elliptic
