#include "ppvl/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

#include "ppvl/config.hpp"
#include "ppvl/errors.hpp"

namespace ppvl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string shortest(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parseDouble(std::string_view s, const char* what) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw DomainError(std::string("invalid number for ") + what + ": '" + std::string(s) + "'");
    }
    return x;
}

} // namespace

Excitation::Excitation(std::vector<Harmonic> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw DomainError("excitation needs at least one harmonic");
    std::set<int> seen;
    for (const auto& h : terms_) {
        if (h.index < 1) throw DomainError("harmonic index must be >= 1 (phi has zero mean)");
        if (!seen.insert(h.index).second) throw DomainError("duplicate harmonic index");
        if (!std::isfinite(h.cosCoef) || !std::isfinite(h.sinCoef)) throw DomainError("non-finite harmonic coefficient");
    }
    std::sort(terms_.begin(), terms_.end(), [](const Harmonic& a, const Harmonic& b) { return a.index < b.index; });

    // Dense scan, then Newton on phi' = 0 from the best sample.
    constexpr int kScan = 8192;
    double best = 0.0, bestTau = 0.0;
    for (int i = 0; i < kScan; ++i) {
        const double t = kTwoPi * i / kScan;
        const double a = std::abs(value(t));
        if (a > best) {
            best = a;
            bestTau = t;
        }
    }
    double t = bestTau;
    for (int it = 0; it < 20; ++it) {
        double d2 = 0.0;
        for (const auto& h : terms_) {
            const double n = h.index;
            d2 += -n * n * (h.cosCoef * std::cos(n * t) + h.sinCoef * std::sin(n * t));
        }
        if (d2 == 0.0) break;
        const double step = rate(t) / d2;
        t -= step;
        if (std::abs(step) < 1e-15) break;
    }
    maxAbs_ = std::max(best, std::abs(value(t)));
}

Excitation Excitation::cosine() { return Excitation(std::vector<Harmonic>{{1, 1.0, 0.0}}); }

double Excitation::value(double tau) const {
    double sum = 0.0;
    for (const auto& h : terms_) sum += h.cosCoef * std::cos(h.index * tau) + h.sinCoef * std::sin(h.index * tau);
    return sum;
}

double Excitation::rate(double tau) const {
    double sum = 0.0;
    for (const auto& h : terms_) {
        sum += h.index * (h.sinCoef * std::cos(h.index * tau) - h.cosCoef * std::sin(h.index * tau));
    }
    return sum;
}

bool Excitation::isPureCosine() const {
    return terms_.size() == 1 && terms_[0].index == 1 && terms_[0].cosCoef == 1.0 && terms_[0].sinCoef == 0.0;
}

void validate(const Params& p, bool allowZeroOmega) {
    if (!std::isfinite(p.eps) || p.eps < 0.0) throw DomainError("eps must be finite and >= 0");
    if (!std::isfinite(p.beta) || p.beta < 0.0) throw DomainError("beta must be finite and >= 0");
    if (!std::isfinite(p.omega) || p.omega < 0.0 || (p.omega == 0.0 && !allowZeroOmega)) {
        throw DomainError("omega must be finite and > 0");
    }
    if (p.omega == 0.0 && p.beta != 0.0) throw DomainError("omega = 0 requires beta = 0");
    if (p.eps * p.excitation.maxAbs() >= 1.0) {
        throw DomainError("eps * max|phi| must be < 1 so that 1 + eps*phi > 0");
    }
}

Params nondimensionalize(const DimensionalParams& d) {
    if (!(d.mass > 0) || !(d.meanLength > 0) || !(d.frequency > 0) || !(d.gravity > 0)) {
        throw DomainError("mass, mean length, frequency and gravity must be > 0");
    }
    if (!(d.amplitude >= 0) || !(d.damping >= 0)) throw DomainError("amplitude and damping must be >= 0");
    if (!(d.amplitude < d.meanLength)) throw DomainError("amplitude must be smaller than the mean length");
    const double natural = std::sqrt(d.gravity / d.meanLength);
    Params p;
    p.eps = d.amplitude / d.meanLength;
    p.omega = natural / d.frequency;
    p.beta = d.damping / (d.mass * natural);
    return p;
}

MomentumState toMomentum(const State& x, const Params& p) {
    const double len = 1.0 + p.eps * p.excitation.value(x.tau);
    return {x.theta, len * len * x.v, x.tau};
}

State toAngle(const MomentumState& x, const Params& p) {
    const double len = 1.0 + p.eps * p.excitation.value(x.tau);
    return {x.theta, x.s / (len * len), x.tau};
}

AngleRate rhsAngle(const State& x, const Params& p) {
    const double len = 1.0 + p.eps * p.excitation.value(x.tau);
    if (!(len > 0.0)) throw DomainError("1 + eps*phi(tau) must be > 0");
    const double lenRate = p.eps * p.excitation.rate(x.tau);
    const double dv = -(2.0 * lenRate / len + p.beta * p.omega) * x.v - p.omega * p.omega * std::sin(x.theta) / len;
    return {x.v, dv};
}

MomentumRate rhsMomentum(const MomentumState& x, const Params& p) {
    const double len = 1.0 + p.eps * p.excitation.value(x.tau);
    if (!(len > 0.0)) throw DomainError("1 + eps*phi(tau) must be > 0");
    const double f = -p.betaOverOmega() * x.s - len * std::sin(x.theta);
    return {x.s / (len * len), p.omega * p.omega * f};
}

double hamiltonian(const State& x, const Params& p) {
    return 0.5 * x.v * x.v - p.omega * p.omega * std::cos(x.theta);
}

double perturbationG1(const State& x, const Params& p) {
    if (!p.excitation.isPureCosine()) throw DomainError("g1 is defined for phi = cos(tau) only");
    return (2.0 * p.eps * std::sin(x.tau) - p.beta * p.omega) * x.v +
           p.eps * p.omega * p.omega * std::cos(x.tau) * std::sin(x.theta);
}

double wrapAngle(double theta) {
    double w = std::remainder(theta, kTwoPi);
    if (w <= -std::numbers::pi) w += kTwoPi;
    return w;
}

std::string formatHarmonics(const Excitation& e) {
    std::string out;
    for (const auto& h : e.terms()) {
        if (!out.empty()) out += ',';
        out += std::to_string(h.index) + ':' + shortest(h.cosCoef) + ':' + shortest(h.sinCoef);
    }
    return out;
}

Excitation parseHarmonics(std::string_view text) {
    std::vector<Harmonic> terms;
    while (!text.empty()) {
        const auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        const auto c1 = item.find(':');
        const auto c2 = c1 == std::string_view::npos ? c1 : item.find(':', c1 + 1);
        if (c2 == std::string_view::npos) throw DomainError("harmonic must be written n:cos:sin");
        Harmonic h;
        const double idx = parseDouble(item.substr(0, c1), "harmonic index");
        if (idx != std::floor(idx)) throw DomainError("harmonic index must be an integer");
        h.index = static_cast<int>(idx);
        h.cosCoef = parseDouble(item.substr(c1 + 1, c2 - c1 - 1), "cosine coefficient");
        h.sinCoef = parseDouble(item.substr(c2 + 1), "sine coefficient");
        terms.push_back(h);
    }
    return Excitation(std::move(terms));
}

std::string formatParams(const Params& p) {
    return "eps = " + shortest(p.eps) + "\nbeta = " + shortest(p.beta) + "\nomega = " + shortest(p.omega) +
           "\nharmonics = " + formatHarmonics(p.excitation) + "\n";
}

Params parseParams(std::string_view text) {
    Params p;
    for (const auto& [key, value] : parseKeyValue(text)) {
        if (key == "eps") p.eps = parseDouble(value, "eps");
        else if (key == "beta") p.beta = parseDouble(value, "beta");
        else if (key == "omega") p.omega = parseDouble(value, "omega");
        else if (key == "harmonics") p.excitation = parseHarmonics(value);
        else throw DomainError("unknown parameter key: " + key);
    }
    validate(p);
    return p;
}

} // namespace ppvl
