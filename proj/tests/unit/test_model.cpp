#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "ppvl/config.hpp"
#include "ppvl/errors.hpp"
#include "ppvl/model.hpp"

using namespace ppvl;
using oracle::kPi;

TEST_CASE("nondimensionalize examples") {
    DimensionalParams d;
    d.amplitude = 0.0;
    CHECK(nondimensionalize(d).eps == 0.0);

    d.meanLength = 2.0;
    d.frequency = 3.0;
    d.gravity = 2.0 * 9.0;
    CHECK(nondimensionalize(d).omega == doctest::Approx(1.0).epsilon(1e-15));

    const DimensionalParams e{1.0, 1.0, 0.1, 2.0, 0.05, 1.0};
    const Params p = nondimensionalize(e);
    CHECK(p.eps == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p.omega == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.beta == doctest::Approx(0.05).epsilon(1e-15));

    CHECK_THROWS_AS(nondimensionalize({1.0, 1.0, 1.0, 1.0, 0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(nondimensionalize({0.0, 1.0, 0.1, 1.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("Params validation") {
    CHECK_NOTHROW(validate(Params{0.3, 0.05, 0.5, Excitation::cosine()}));
    CHECK_THROWS_AS(validate(Params{1.0, 0.05, 0.5, Excitation::cosine()}), DomainError);
    CHECK_THROWS_AS(validate(Params{-0.1, 0.05, 0.5, Excitation::cosine()}), DomainError);
    CHECK_THROWS_AS(validate(Params{0.1, 0.05, 0.0, Excitation::cosine()}), DomainError);
    CHECK_NOTHROW(validate(Params{0.1, 0.0, 0.0, Excitation::cosine()}, true));
    const Excitation two({{1, 1.0, 0.0}, {2, 0.0, 1.0}});
    CHECK_THROWS_AS(validate(Params{0.6, 0.0, 1.0, two}), DomainError);  // max|phi| > 1
}

TEST_CASE("Excitation: zero mean, 2 pi period, exact derivative") {
    const Excitation e({{1, 0.7, -0.2}, {3, 0.1, 0.25}});
    const double mean = oracle::integrate([&](double t) { return e.value(t); }, 0.0, 2 * kPi) / (2 * kPi);
    CHECK(std::abs(mean) < 1e-14);
    const double h = 1e-6;
    for (double t : {0.0, 0.4, 2.2, 5.9}) {
        CHECK(std::abs(e.value(t + 2 * kPi) - e.value(t)) < 1e-14);
        CHECK(std::abs((e.value(t + h) - e.value(t - h)) / (2 * h) - e.rate(t)) < 1e-8);
    }
    double scan = 0.0;
    for (int i = 0; i < 100000; ++i) scan = std::max(scan, std::abs(e.value(2 * kPi * i / 100000.0)));
    CHECK(e.maxAbs() >= scan - 1e-12);
    CHECK(e.maxAbs() < scan + 1e-6);
    CHECK(Excitation::cosine().maxAbs() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(Excitation({{0, 1.0, 0.0}}), DomainError);
    CHECK_THROWS_AS(Excitation({{1, 1.0, 0.0}, {1, 0.5, 0.0}}), DomainError);
}

TEST_CASE("rhsAngle examples") {
    const Params free{0.0, 0.0, 0.8, Excitation::cosine()};
    const AngleRate a = rhsAngle({1.0, 0.3, 2.0}, free);
    CHECK(a.dtheta == 0.3);
    CHECK(a.dv == doctest::Approx(-0.64 * std::sin(1.0)).epsilon(1e-15));

    const Params p{0.2, 0.05, 0.8, Excitation::cosine()};
    for (double tau : {0.0, 1.0, 4.0}) {
        const AngleRate rest = rhsAngle({0.0, 0.0, tau}, p);
        CHECK(rest.dtheta == 0.0);
        CHECK(rest.dv == 0.0);
    }
    const AngleRate inv = rhsAngle({kPi, 0.0, 0.0}, free);
    CHECK(inv.dtheta == 0.0);
    CHECK(std::abs(inv.dv) < 1e-15);
}

TEST_CASE("rhsMomentum examples and consistency with rhsAngle") {
    const Params ballistic{0.3, 0.0, 0.0, Excitation::cosine()};
    CHECK(rhsMomentum({1.0, 0.7, 0.3}, ballistic).ds == 0.0);

    const Params p{0.25, 0.05, 0.7, Excitation({{1, 1.0, 0.0}, {2, 0.2, 0.1}})};
    const MomentumRate zero = rhsMomentum({0.0, 0.0, 1.0}, p);
    CHECK(zero.dtheta == 0.0);
    CHECK(zero.ds == 0.0);

    auto g = oracle::rng();
    for (int i = 0; i < 50; ++i) {
        const State x{oracle::uniform(g, -4, 4), oracle::uniform(g, -2, 2), oracle::uniform(g, 0, 7)};
        const MomentumState m = toMomentum(x, p);
        const AngleRate a = rhsAngle(x, p);
        const MomentumRate b = rhsMomentum(m, p);
        const double len = 1.0 + p.eps * p.excitation.value(x.tau);
        const double lenRate = p.eps * p.excitation.rate(x.tau);
        // s = len^2 v  =>  ds = 2 len len' v + len^2 dv
        const double ds = 2.0 * len * lenRate * x.v + len * len * a.dv;
        CHECK(std::abs(b.dtheta - a.dtheta) < 1e-12);
        CHECK(std::abs(b.ds - ds) < 1e-12);
        const State back = toAngle(m, p);
        CHECK(std::abs(back.v - x.v) < 1e-15);
    }
}

TEST_CASE("hamiltonian examples") {
    const Params p{0.0, 0.0, 0.9, Excitation::cosine()};
    CHECK(hamiltonian({0.0, 0.0, 0.0}, p) == doctest::Approx(-0.81).epsilon(1e-15));
    CHECK(hamiltonian({kPi, 0.0, 0.0}, p) == doctest::Approx(0.81).epsilon(1e-15));
}

TEST_CASE("perturbationG1 examples") {
    CHECK(perturbationG1({0.4, 1.3, 2.0}, Params{0.0, 0.0, 0.7, Excitation::cosine()}) == 0.0);
    CHECK(perturbationG1({0.0, 0.0, 2.0}, Params{0.2, 0.05, 0.7, Excitation::cosine()}) == 0.0);
    const double g = perturbationG1({kPi / 2, 1.0, kPi / 2}, Params{0.1, 0.05, 0.8, Excitation::cosine()});
    CHECK(g == doctest::Approx(0.16).epsilon(1e-14));
    CHECK_THROWS_AS(perturbationG1({0, 0, 0}, Params{0.1, 0.0, 1.0, Excitation({{2, 1.0, 0.0}})}), DomainError);
}

TEST_CASE("g1 is the first-order perturbation of dv/dtau") {
    const Params p{1e-4, 1e-4, 0.9, Excitation::cosine()};
    const Params free{0.0, 0.0, 0.9, Excitation::cosine()};
    for (double tau : {0.3, 2.0, 5.0}) {
        const State x{0.7, -0.4, tau};
        const double dv = rhsAngle(x, p).dv - rhsAngle(x, free).dv;
        CHECK(std::abs(dv - perturbationG1(x, p)) < 1e-7);
    }
}

TEST_CASE("wrapAngle") {
    CHECK(wrapAngle(0.0) == 0.0);
    CHECK(wrapAngle(kPi) == doctest::Approx(kPi));
    CHECK(wrapAngle(-kPi) == doctest::Approx(kPi));
    CHECK(wrapAngle(7.0) == doctest::Approx(7.0 - 2 * kPi));
}

TEST_CASE("parameter text round trip") {
    const Params p{0.123456789012345, 0.05, 0.8, Excitation({{1, 1.0, 0.0}, {3, 0.1, -0.2}})};
    CHECK(parseParams(formatParams(p)) == p);
    CHECK(parseHarmonics(formatHarmonics(p.excitation)) == p.excitation);
    CHECK_THROWS_AS(parseParams("eps = x\n"), DomainError);
    CHECK_THROWS_AS(parseParams("gamma = 1\n"), DomainError);
    CHECK_THROWS_AS(parseHarmonics("1:2"), DomainError);
}

TEST_CASE("key = value parsing") {
    const auto kv = parseKeyValue("# comment\n eps = 0.3 \n\nbeta=0.05 # trailing\n");
    CHECK(kv.size() == 2);
    CHECK(kv.at("eps") == "0.3");
    CHECK(kv.at("beta") == "0.05");
    CHECK_THROWS_AS(parseKeyValue("novalue\n"), DomainError);
    CHECK_THROWS_AS(parseKeyValue(" = 3\n"), DomainError);
    CHECK_THROWS_AS(readKeyValueFile("/nonexistent/file.conf"), DomainError);
}
