#include "ppvl/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <json.hpp>

namespace ppvl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PeriodMatch {
    double residual = std::numeric_limits<double>::infinity();
    int r = 0;
};

// Worst distance |P_{n+q} - P_n| over the window, theta compared modulo the
// (common) winding r.
PeriodMatch matchPeriod(std::span<const Sample> s, int q) {
    PeriodMatch m;
    if (s.size() <= static_cast<std::size_t>(q)) return m;
    const long r0 = std::lround((s[q].theta - s[0].theta) / kTwoPi);
    double worst = 0.0;
    for (std::size_t n = 0; n + q < s.size(); ++n) {
        const double dTheta = s[n + q].theta - s[n].theta;
        const long r = std::lround(dTheta / kTwoPi);
        if (r != r0) return m;
        const double d = std::hypot(dTheta - kTwoPi * static_cast<double>(r), s[n + q].v - s[n].v);
        worst = std::max(worst, d);
    }
    m.residual = worst;
    m.r = static_cast<int>(r0);
    return m;
}

double distanceToRest(const Sample& s) {
    return std::hypot(s.theta - kTwoPi * std::nearbyint(s.theta / kTwoPi), s.v);
}

// Sections still closing in on the hanging rest state: the last quarter of the
// window is near rest and at most half as far out as the first quarter.
bool decayingToRest(std::span<const Sample> s) {
    constexpr double kNearRest = 0.05;
    const std::size_t quarter = s.size() / 4;
    if (quarter == 0) return false;
    double head = 0.0, tail = 0.0;
    for (std::size_t n = 0; n < quarter; ++n) {
        head = std::max(head, distanceToRest(s[n]));
        tail = std::max(tail, distanceToRest(s[s.size() - 1 - n]));
    }
    return tail < kNearRest && tail < 0.5 * head;
}

constexpr const char* kDecayingNote = "decaying toward equilibrium";

} // namespace

std::string_view toString(RegimeKind kind) {
    switch (kind) {
    case RegimeKind::equilibrium: return "equilibrium";
    case RegimeKind::oscillation: return "oscillation";
    case RegimeKind::rotation: return "rotation";
    case RegimeKind::rotationOscillation: return "rotation-oscillation";
    case RegimeKind::chaotic: return "chaotic";
    case RegimeKind::undecided: return "undecided";
    }
    return "undecided";
}

RegimeKind parseRegimeKind(std::string_view name) {
    for (auto k : {RegimeKind::equilibrium, RegimeKind::oscillation, RegimeKind::rotation,
                   RegimeKind::rotationOscillation, RegimeKind::chaotic, RegimeKind::undecided}) {
        if (toString(k) == name) return k;
    }
    throw DomainError("unknown regime kind: " + std::string(name));
}

void ClassifierConfig::validate() const {
    if (transientPeriods < 0) throw DomainError("transientPeriods must be >= 0");
    if (qMax < 1) throw DomainError("qMax must be >= 1");
    if (samplePeriods <= 2 * qMax) throw DomainError("samplePeriods must exceed 2*qMax");
    if (!(matchTol > 0.0)) throw DomainError("matchTol must be > 0");
    if (maxTransientPeriods < transientPeriods) throw DomainError("maxTransientPeriods must be >= transientPeriods");
    integrator.validate();
}

RegimeLabel classifySamples(std::span<const Sample> samples, bool velocityChangedSign, const ClassifierConfig& cfg) {
    RegimeLabel label;
    if (samples.empty()) {
        label.note = "no samples";
        return label;
    }
    label.theta = samples.back().theta;
    label.v = samples.back().v;

    bool resting = true;
    for (const auto& s : samples) {
        if (distanceToRest(s) >= cfg.matchTol) {
            resting = false;
            break;
        }
    }
    if (resting) {
        label.kind = RegimeKind::equilibrium;
        label.q = 1;
        return label;
    }
    if (decayingToRest(samples)) {
        label.note = kDecayingNote;
        return label;
    }

    bool marginal = false;
    for (int q = 1; q <= cfg.qMax; ++q) {
        const PeriodMatch m = matchPeriod(samples, q);
        if (m.residual < cfg.matchTol) {
            label.q = q;
            label.r = m.r;
            if (m.r == 0) label.kind = RegimeKind::oscillation;
            else label.kind = velocityChangedSign ? RegimeKind::rotationOscillation : RegimeKind::rotation;
            return label;
        }
        if (m.residual < 10.0 * cfg.matchTol) marginal = true;
    }
    label.kind = marginal ? RegimeKind::undecided : RegimeKind::chaotic;
    if (marginal) label.note = "period match within 10x matchTol only";
    return label;
}

RegimeLabel classify(const State& init, const Params& p, const ClassifierConfig& cfg) {
    validate(p);
    cfg.validate();
    RegimeLabel label;
    try {
        AdaptiveStepper stepper(AngleRhs{&p}, init.tau, Vec2{init.theta, init.v}, cfg.integrator);
        const auto section = [&](long n) { return init.tau + kTwoPi * static_cast<double>(n); };
        long spent = cfg.transientPeriods;
        stepper.advanceTo(section(spent));

        std::vector<Sample> window;
        window.reserve(cfg.samplePeriods + 1);
        while (true) {
            window.clear();
            window.push_back({stepper.tau(), stepper.state()[0], stepper.state()[1]});
            int sign = 0;
            bool changed = false;
            auto watch = [&](double, const Vec2& y) {
                const int s = (y[1] > 0) - (y[1] < 0);
                if (s == 0) return;
                if (sign != 0 && s != sign) changed = true;
                sign = s;
            };
            watch(0.0, stepper.state());
            for (int n = 1; n <= cfg.samplePeriods; ++n) {
                stepper.advanceTo(section(spent + n), watch);
                window.push_back({stepper.tau(), stepper.state()[0], stepper.state()[1]});
            }
            label = classifySamples(window, changed, cfg);
            label.transientUsed = static_cast<int>(spent);
            const bool settled = label.kind != RegimeKind::chaotic && label.kind != RegimeKind::undecided;
            if (settled) break;
            if (spent + cfg.samplePeriods > cfg.maxTransientPeriods) {
                // Out of budget while the envelope still shrinks toward rest.
                if (label.note == kDecayingNote) {
                    label.kind = RegimeKind::equilibrium;
                    label.q = 1;
                }
                break;
            }
            spent += cfg.samplePeriods;
        }
    } catch (const IntegrationError& e) {
        label = RegimeLabel{};
        label.kind = RegimeKind::undecided;
        label.note = e.what();
    }
    return label;
}

WindingNumber windingNumber(const Trajectory& traj, int q, std::size_t first) {
    if (q < 1) throw DomainError("windingNumber: q must be >= 1");
    const auto& s = traj.sections;
    if (s.size() < first + q + 1) throw DomainError("windingNumber: not enough Poincare samples");
    WindingNumber w;
    w.q = q;
    w.r = static_cast<int>(std::lround((s[first + q].theta - s[first].theta) / kTwoPi));
    w.consistent = true;
    for (std::size_t n = first; n + q < s.size(); ++n) {
        if (std::lround((s[n + q].theta - s[n].theta) / kTwoPi) != w.r) {
            w.consistent = false;
            break;
        }
    }
    return w;
}

std::string labelToJson(const RegimeLabel& label) {
    nlohmann::json j;
    j["kind"] = std::string(toString(label.kind));
    j["r"] = label.r;
    j["q"] = label.q;
    j["theta"] = label.theta;
    j["v"] = label.v;
    j["transient_periods"] = label.transientUsed;
    if (!label.note.empty()) j["note"] = label.note;
    return j.dump();
}

} // namespace ppvl
