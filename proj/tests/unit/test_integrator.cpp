#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "ppvl/errors.hpp"
#include "ppvl/integrator.hpp"

using namespace ppvl;
using oracle::kPi;

namespace {

IntegratorConfig tight(double tol) {
    IntegratorConfig c;
    c.relTol = tol;
    c.absTol = tol;
    return c;
}

// Upward zero crossings of v, located by linear interpolation between steps.
std::vector<double> upCrossings(const std::vector<Sample>& d) {
    std::vector<double> out;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i - 1].v < 0.0 && d[i].v >= 0.0) {
            const double w = d[i - 1].v / (d[i - 1].v - d[i].v);
            out.push_back(d[i - 1].tau + w * (d[i].tau - d[i - 1].tau));
        }
    }
    return out;
}

} // namespace

TEST_CASE("small-amplitude period tends to 2 pi / omega") {
    const Params p{0.0, 0.0, 0.8, Excitation::cosine()};
    const Trajectory t = integrate({1e-3, 0.0, 0.0}, p, 40.0 * kPi, tight(1e-12), true);
    const auto c = upCrossings(t.dense);
    REQUIRE(c.size() >= 5);
    const double period = (c.back() - c.front()) / static_cast<double>(c.size() - 1);
    CHECK(std::abs(period / (2 * kPi / p.omega) - 1.0) < 1e-3);
}

TEST_CASE("energy drift over 100 periods") {
    auto drift = [](double omega, const State& init) {
        const Params p{0.0, 0.0, omega, Excitation::cosine()};
        const Trajectory t = integrate(init, p, 200.0 * kPi, IntegratorConfig::analysis(), true);
        const double h0 = hamiltonian(init, p);
        double worst = 0.0;
        for (const auto& s : t.dense) worst = std::max(worst, std::abs(hamiltonian({s.theta, s.v, s.tau}, p) - h0));
        return worst;
    };
    CHECK(drift(0.8, {0.3, 0.0, 0.0}) < 1e-8);
    CHECK(drift(0.5, {1.0, 0.3, 0.0}) < 1e-8);
    // Large librations and rotations accumulate more: about 1e-12 per step.
    for (double omega : {0.8, 1.2}) {
        for (double theta : {1.0, 2.0, 3.0}) CHECK(drift(omega, {theta, 0.3, 0.0}) < 5e-8);
    }
}

TEST_CASE("separatrix data follows theta = 2 atan(sinh(omega tau))") {
    const double omega = 0.7;
    const Params p{0.0, 0.0, omega, Excitation::cosine()};
    const Trajectory t = integrate({0.0, 2.0 * omega, 0.0}, p, 10.0 / omega, tight(1e-13), true);
    double worst = 0.0;
    for (const auto& s : t.dense) {
        worst = std::max(worst, std::abs(s.theta - 2.0 * std::atan(std::sinh(omega * s.tau))));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("sections sit exactly on tau0 + 2 pi n and tau increases") {
    const Params p{0.2, 0.05, 0.6, Excitation::cosine()};
    const double tau0 = 0.37;
    const Trajectory t = integrate({0.5, 0.0, tau0}, p, tau0 + 30.5 * kPi, IntegratorConfig::analysis(), true);
    REQUIRE(t.sections.size() == 16);
    for (std::size_t n = 0; n < t.sections.size(); ++n) {
        CHECK(t.sections[n].tau == tau0 + 2.0 * kPi * static_cast<double>(n));
    }
    for (std::size_t i = 1; i < t.dense.size(); ++i) CHECK(t.dense[i].tau > t.dense[i - 1].tau);
    CHECK(t.dense.back().tau == tau0 + 30.5 * kPi);
    // Section values coincide with dense samples at the same time.
    std::size_t hits = 0;
    for (const auto& s : t.sections) {
        for (const auto& d : t.dense) {
            if (d.tau == s.tau) {
                CHECK(d.theta == s.theta);
                ++hits;
            }
        }
    }
    CHECK(hits == t.sections.size());
}

TEST_CASE("global error shrinks like tol and step count like tol^(-1/5)") {
    const Params p{0.0, 0.0, 1.0, Excitation::cosine()};
    const double omega = p.omega, end = 8.0 / omega;
    auto run = [&](double tol, long& steps) {
        AdaptiveStepper st(AngleRhs{&p}, 0.0, Vec2{0.0, 2.0 * omega}, tight(tol));
        st.advanceTo(end);
        steps = st.acceptedSteps();
        return std::abs(st.state()[0] - 2.0 * std::atan(std::sinh(omega * end)));
    };
    long s1 = 0, s2 = 0;
    const double e1 = run(1e-6, s1);
    const double e2 = run(1e-11, s2);
    const double stepRatio = static_cast<double>(s2) / static_cast<double>(s1);
    CHECK(stepRatio > 10.0 * 0.6);
    CHECK(stepRatio < 10.0 * 1.6);
    CHECK(e2 < e1 * 1e-3);
    // Implied order from the two runs is close to 5.
    const double order = std::log(e1 / e2) / std::log(stepRatio);
    CHECK(order > 3.5);
}

TEST_CASE("time reversal returns to the initial state") {
    const Params p{0.3, 0.05, 0.7, Excitation::cosine()};
    AdaptiveStepper st(AngleRhs{&p}, 0.0, Vec2{0.8, -0.2}, tight(1e-12));
    st.advanceTo(25.0);
    st.advanceTo(0.0);
    CHECK(st.tau() == 0.0);
    CHECK(std::abs(st.state()[0] - 0.8) < 1e-8);
    CHECK(std::abs(st.state()[1] + 0.2) < 1e-8);
}

TEST_CASE("mirror symmetry theta -> -theta, v -> -v") {
    const Params p{0.25, 0.05, 0.6, Excitation::cosine()};
    const auto a = poincareMap({0.9, 0.4, 0.0}, p, 40, IntegratorConfig::analysis());
    const auto b = poincareMap({-0.9, -0.4, 0.0}, p, 40, IntegratorConfig::analysis());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].theta == -b[i].theta);
        CHECK(a[i].v == -b[i].v);
    }
}

TEST_CASE("momentum form agrees with the angle form") {
    const Params p{0.3, 0.05, 0.5, Excitation::cosine()};
    const State x{0.6, 0.2, 0.0};
    const Trajectory a = integrate(x, p, 20.0 * kPi, tight(1e-12));
    const Trajectory b = integrateMomentum(toMomentum(x, p), p, 20.0 * kPi, tight(1e-12));
    REQUIRE(a.sections.size() == b.sections.size());
    for (std::size_t i = 0; i < a.sections.size(); ++i) {
        const State back = toAngle({b.sections[i].theta, b.sections[i].v, b.sections[i].tau}, p);
        CHECK(std::abs(back.theta - a.sections[i].theta) < 1e-8);
        CHECK(std::abs(back.v - a.sections[i].v) < 1e-8);
    }
}

TEST_CASE("poincareMap examples") {
    const Params still{0.0, 0.05, 0.8, Excitation::cosine()};
    for (const auto& s : poincareMap({0.0, 0.0, 0.0}, still, 10, IntegratorConfig::analysis())) {
        CHECK(s.theta == 0.0);
        CHECK(s.v == 0.0);
    }
    for (const State init : {State{2.5, 0.0, 0.0}, State{-1.0, 0.5, 0.0}, State{0.3, -1.2, 0.0}}) {
        REQUIRE(hamiltonian(init, still) < still.omega * still.omega);
        const auto s = poincareMap(init, still, 400, IntegratorConfig::analysis());
        const double m = std::nearbyint(s.back().theta / (2 * kPi));
        CHECK(std::abs(s.back().theta - 2 * kPi * m) < 1e-6);
        CHECK(std::abs(s.back().v) < 1e-6);
    }
    CHECK(poincareMap({0.1, 0.0, 0.0}, still, 5, IntegratorConfig::analysis()).size() == 6);
}

TEST_CASE("configuration and blowup errors") {
    IntegratorConfig bad;
    bad.relTol = 0.5;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = {};
    bad.maxStep = 1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    const Params p{0.0, 0.0, 0.8, Excitation::cosine()};
    IntegratorConfig low;
    low.blowupLimit = 1.0;
    CHECK_THROWS_AS(integrate({0.0, 5.0, 0.0}, p, 10.0, low), IntegrationError);
    CHECK_THROWS_AS(integrate({0.0, 0.0, 1.0}, p, 0.5, IntegratorConfig::analysis()), DomainError);
}

TEST_CASE("trajectory CSV output") {
    const Params p{0.1, 0.05, 0.8, Excitation::cosine()};
    const Trajectory t = integrate({0.5, 0.0, 0.0}, p, 4.0 * kPi, IntegratorConfig::analysis());
    std::ostringstream out;
    writeTrajectoryCsv(out, t);
    const std::string text = out.str();
    CHECK(text.find("# eps = 0.1") != std::string::npos);
    CHECK(text.find("tau,theta,v\n") != std::string::npos);
    std::istringstream in(text);
    int rows = 0;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#' && line != "tau,theta,v") ++rows;
    }
    CHECK(rows == 3);
}
