#include <doctest.h>

#include <cmath>
#include <memory>
#include <numeric>

#include "oracles.hpp"
#include "ppvl/averaging.hpp"
#include "ppvl/classify.hpp"
#include "ppvl/errors.hpp"
#include "ppvl/integrator.hpp"

using namespace ppvl;
using namespace ppvl::averaging;
using oracle::kPi;

namespace {

Params cosine(double eps, double beta = 0.0, double omega = 1.0) { return {eps, beta, omega, Excitation::cosine()}; }

// Weighted mean over [0, 2 pi r q] with the Kepler closed form for Phi.
template <class F>
double keplerMean(double eps, int r, int q, F f) {
    const double span = 2 * kPi * r * q;
    return oracle::integratePanels(
               [&](double t) { return (1 + eps * std::cos(t)) * f(oracle::phiCosine(eps, t)); }, 0.0, span, 0.5) /
           span;
}

} // namespace

TEST_CASE("Phi table") {
    const PhiTable flat = PhiTable::compute(cosine(0.0));
    for (double t : {0.0, 0.5, 3.0, 6.2, 17.0, -4.0}) CHECK(std::abs(flat(t) - t) < 1e-14 * std::max(1.0, std::abs(t)));

    for (double eps : {0.05, 0.3, 0.6}) {
        const PhiTable phi = PhiTable::compute(cosine(eps));
        CHECK(phi(0.0) == 0.0);
        CHECK(phi.period() > 2 * kPi);
        CHECK(std::abs(phi.period() - 2 * kPi * std::pow(1 - eps * eps, -1.5)) < 1e-12);
        double prev = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double t = 4 * kPi * i / 1000.0;
            CHECK(phi(t) > prev);
            prev = phi(t);
            CHECK(std::abs(phi(t) - oracle::phiCosine(eps, t)) < 1e-11);
            CHECK(std::abs(phi(t + 2 * kPi) - phi(t) - phi.period()) < 1e-11);
            CHECK(std::abs(phi.rate(t) - std::pow(1 + eps * std::cos(t), -2)) < 1e-14);
        }
    }
}

TEST_CASE("Phi table for a two-harmonic excitation matches quadrature") {
    const Params p{0.3, 0.0, 1.0, Excitation({{1, 1.0, 0.0}, {2, 0.0, 0.5}})};
    const PhiTable phi = PhiTable::compute(p);
    auto w = [&](double t) { return std::pow(1 + p.eps * p.excitation.value(t), -2); };
    CHECK(std::abs(phi.period() - oracle::integratePanels(w, 0.0, 2 * kPi, 0.25)) < 1e-12);
    CHECK(std::abs(phi(2.1) - oracle::integratePanels(w, 0.0, 2.1, 0.25)) < 1e-11);
}

TEST_CASE("steady sector velocity") {
    CHECK(steadySectorVelocity(PhiTable::compute(cosine(0.0)), 2, 3) == doctest::Approx(2.0 / 3).epsilon(1e-14));
    const PhiTable phi = PhiTable::compute(cosine(0.3));
    const double s0 = steadySectorVelocity(phi, 1, 1);
    CHECK(s0 < 1.0);
    CHECK(std::abs(s0 - 2 * kPi / oracle::phiCosine(0.3, 2 * kPi)) < 1e-12);
    CHECK(steadySectorVelocity(phi, 2, 1) == doctest::Approx(2 * s0).epsilon(1e-15));
    // Resonance identity: s0 q Phi(2 pi) = 2 pi r.
    for (int r : {1, 2, 3}) {
        for (int q : {1, 2, 5}) {
            if (std::gcd(r, q) != 1) continue;
            CHECK(std::abs(steadySectorVelocity(phi, r, q) * q * phi.period() - 2 * kPi * r) < 1e-12);
        }
    }
    CHECK_THROWS_AS(steadySectorVelocity(phi, 2, 4), DomainError);
}

TEST_CASE("A and B integrals") {
    const PhiTable flat = PhiTable::compute(cosine(0.0));
    const ABPair z = abIntegrals(flat, 1.0, 1, 1);
    CHECK(std::abs(z.a) < 1e-14);
    CHECK(std::abs(z.b) < 1e-14);

    const PhiTable phi = PhiTable::compute(cosine(0.3));
    const ABPair s0 = abIntegrals(phi, 0.0, 1, 1);
    CHECK(std::abs(s0.a) < 1e-15);
    CHECK(std::abs(s0.b - 1.0) < 1e-14);

    const double s = steadySectorVelocity(phi, 1, 1);
    const ABPair ab = abIntegrals(phi, s, 1, 1);
    CHECK(std::abs(ab.a - keplerMean(0.3, 1, 1, [&](double f) { return std::sin(s * f); })) < 1e-10);
    CHECK(std::abs(ab.b - keplerMean(0.3, 1, 1, [&](double f) { return std::cos(s * f); })) < 1e-10);
}

TEST_CASE("A' and B' derivatives") {
    const PhiTable phi = PhiTable::compute(cosine(0.3));
    const double h = 1e-5;
    for (double s : {0.3, 0.87, 2.0}) {
        for (int r : {1, 2}) {
            const ABPair d = abDerivatives(phi, s, r, 1);
            const ABPair p = abIntegrals(phi, s + h, r, 1), m = abIntegrals(phi, s - h, r, 1);
            CHECK(std::abs(d.a - (p.a - m.a) / (2 * h)) < 1e-8);
            CHECK(std::abs(d.b - (p.b - m.b) / (2 * h)) < 1e-8);
        }
    }
    const ABPair zero = abDerivatives(phi, 0.0, 1, 1);
    CHECK(zero.b == 0.0);
    CHECK(std::abs(zero.a - keplerMean(0.3, 1, 1, [](double f) { return f; })) < 1e-10);

    const ABPair flat = abDerivatives(PhiTable::compute(cosine(0.0)), 1.0, 1, 1);
    CHECK(std::abs(flat.a) < 1e-12);
    CHECK(std::abs(flat.b - 1.0) < 1e-12);
}

TEST_CASE("branches") {
    const AveragedRotation free = solveBranches(cosine(0.3, 0.0, 0.5), 1, 1);
    REQUIRE(free.exists);
    const double thetaStar = std::atan2(free.b, free.a);
    auto sameAngle = [](double x, double y) { return std::abs(std::remainder(x - y, 2 * kPi)) < 1e-12; };
    CHECK(sameAngle(*free.thetaPlus, thetaStar + kPi + kPi / 2));
    CHECK(sameAngle(*free.thetaMinus, thetaStar + kPi - kPi / 2));

    const Params p = cosine(0.3, 0.05, 0.1);
    const AveragedRotation rot = solveBranches(p, 1, 1);
    REQUIRE(rot.exists);
    CHECK(std::abs(steadyResidual(rot, *rot.thetaPlus)) < 1e-10);
    CHECK(std::abs(steadyResidual(rot, *rot.thetaMinus)) < 1e-10);
    CHECK(*rot.thetaPlus >= 0.0);
    CHECK(*rot.thetaPlus < 2 * kPi);
    CHECK(rot.thresholdOmegaOverBeta == doctest::Approx(2.0).epsilon(0.01));

    const AveragedRotation none = solveBranches(cosine(0.3, 0.05, 0.05), 1, 1);
    CHECK_FALSE(none.exists);
    CHECK_FALSE(none.thetaPlus.has_value());
    CHECK_FALSE(none.stablePlus.has_value());
    CHECK_THROWS_AS(approximateRotationSolution(cosine(0.3, 0.05, 0.05), none, BranchSign::plus), DomainError);
    CHECK_THROWS_AS(solveBranches(cosine(0.0, 0.05, 0.5), 1, 1), NumericalError);
}

TEST_CASE("branches merge at the existence threshold") {
    const double beta = 0.05;
    const AveragedRotation probe = solveBranches(cosine(0.3, beta, 1.0), 1, 1);
    const double omega = beta * probe.thresholdOmegaOverBeta * (1 + 1e-13);
    const AveragedRotation rot = solveBranches(cosine(0.3, beta, omega), 1, 1);
    REQUIRE(rot.exists);
    CHECK(std::abs(*rot.thetaPlus - *rot.thetaMinus) < 1e-5);
    CHECK((*rot.stablePlus == Stability::marginal));
    CHECK((*rot.stableMinus == Stability::marginal));
}

TEST_CASE("only the plus branch is ever stable") {
    int stablePlus = 0;
    for (double eps = 0.05; eps <= 0.5; eps += 0.05) {
        for (double ratio : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0}) {
            for (int r : {1, 2, 3}) {
                const double beta = 0.05;
                const AveragedRotation rot = solveBranches(cosine(eps, beta, beta * ratio * 10), r, 1);
                if (!rot.exists) continue;
                CAPTURE(eps);
                CAPTURE(ratio);
                CHECK((*rot.stableMinus != Stability::stable));
                stablePlus += *rot.stablePlus == Stability::stable;
                const BranchStability st = stability(cosine(eps, beta, beta * ratio * 10), rot);
                CHECK((st.plus == *rot.stablePlus));
            }
        }
    }
    CHECK(stablePlus > 20);

    // Both branches unstable just above the border at eps = 0.3 (hatched band).
    const AveragedRotation edge = solveBranches(cosine(0.3, 0.05, 0.1), 1, 1);
    CHECK((*edge.stablePlus == Stability::unstable));
    const AveragedRotation deep = solveBranches(cosine(0.3, 0.05, 0.4), 1, 1);
    CHECK((*deep.stablePlus == Stability::stable));
    CHECK((*deep.stableMinus == Stability::unstable));
    CHECK(*deep.slopePlus < 0.0);
}

TEST_CASE("existence boundary") {
    std::vector<double> eps;
    for (int i = 0; i <= 9; ++i) eps.push_back(0.05 + 0.05 * i);
    for (int r : {1, 2, 3}) {
        const BoundaryCurve c = existenceBoundary(r, 1, eps);
        CHECK(c.points.size() == eps.size());
        for (const auto& pt : c.points) {
            CHECK(std::isfinite(pt.y));
            CHECK(pt.y > 0.0);
        }
        CHECK(c.xName == "eps");
    }
    const BoundaryCurve c1 = existenceBoundary(1, 1, std::vector<double>{0.001, 0.01, 0.05, 0.3});
    CHECK(c1.points[0].y > c1.points[1].y);
    CHECK(c1.points[1].y > c1.points[2].y);
    CHECK(c1.points[0].y == doctest::Approx(2.0 / 3e-3).epsilon(0.01));
    // Reference values read off the averaged equation for r = 1.
    CHECK(c1.points[2].y == doctest::Approx(13.3).epsilon(0.01));
    CHECK(c1.points[3].y == doctest::Approx(2.0).epsilon(0.01));
    CHECK_THROWS_AS(existenceBoundary(1, 1, std::vector<double>{0.0}), DomainError);
}

TEST_CASE("approximate rotation") {
    const Params p = cosine(0.3, 0.05, 0.3);
    const AveragedRotation rot = solveBranches(p, 1, 1);
    const ApproximateRotation approx = approximateRotationSolution(p, rot, BranchSign::plus);
    for (double t : {0.0, 1.3, 9.0}) CHECK(std::abs(approx(t + 2 * kPi) - approx(t) - 2 * kPi) < 1e-12);
    CHECK(approx(0.0) == *rot.thetaPlus);

    const Params flat = cosine(0.0, 0.0, 0.3);
    const ApproximateRotation uniform(std::make_shared<const PhiTable>(PhiTable::compute(flat)), 1.0, 0.25);
    for (double t : {0.0, 2.0, 7.5}) {
        CHECK(uniform(t) == doctest::Approx(t + 0.25).epsilon(1e-14));
        CHECK(uniform.velocity(t) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("approximate rotation tracks the full simulation") {
    const Params p = cosine(0.3, 0.0025, 0.05);
    const AveragedRotation rot = solveBranches(p, 1, 1);
    REQUIRE(rot.exists);
    REQUIRE((*rot.stablePlus == Stability::stable));
    const ApproximateRotation approx = approximateRotationSolution(p, rot, BranchSign::plus);
    const Trajectory t = integrate(approx.stateAt(0.0), p, 20 * kPi, IntegratorConfig::analysis(), true);
    double worst = 0.0;
    for (const auto& s : t.dense) worst = std::max(worst, std::abs(s.theta - approx(s.tau)));
    CHECK(worst < 0.2);

    // Relaxation time grows like 1 / beta.
    ClassifierConfig cfg;
    cfg.transientPeriods = 16000;
    cfg.maxTransientPeriods = 30000;
    const RegimeLabel label = classify(approx.stateAt(0.0), p, cfg);
    CHECK((label.kind == RegimeKind::rotation));
    CHECK(label.r == 1);
    CHECK(label.q == 1);
}
