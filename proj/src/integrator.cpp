#include "ppvl/integrator.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

namespace ppvl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class Rhs>
Trajectory run(Rhs rhs, double tau0, Vec2 y0, const Params& p, double upTo, const IntegratorConfig& cfg,
               bool keepDense) {
    if (!(upTo > tau0)) throw DomainError("integration end must lie after the initial time");
    Trajectory traj;
    traj.params = p;
    traj.config = cfg;
    traj.sections.push_back({tau0, y0[0], y0[1]});
    if (keepDense) traj.dense.push_back({tau0, y0[0], y0[1]});

    AdaptiveStepper stepper(rhs, tau0, y0, cfg);
    auto record = [&](double tau, const Vec2& y) {
        if (keepDense) traj.dense.push_back({tau, y[0], y[1]});
    };
    for (long n = 1;; ++n) {
        const double section = tau0 + kTwoPi * static_cast<double>(n);
        if (section > upTo) break;
        stepper.advanceTo(section, record);
        traj.sections.push_back({section, stepper.state()[0], stepper.state()[1]});
    }
    if (stepper.tau() < upTo) stepper.advanceTo(upTo, record);
    return traj;
}

} // namespace

void IntegratorConfig::validate() const {
    if (!(relTol > 0.0 && relTol <= 1e-2) || !(absTol > 0.0 && absTol <= 1e-2)) {
        throw DomainError("integrator tolerances must lie in (0, 1e-2]");
    }
    if (!(maxStep > 0.0 && maxStep <= std::numbers::pi / 4 + 1e-15)) {
        throw DomainError("integrator maxStep must lie in (0, pi/4]");
    }
    if (!(initialStep > 0.0)) throw DomainError("integrator initialStep must be > 0");
    if (!(blowupLimit > 0.0)) throw DomainError("integrator blowup limit must be > 0");
}

Trajectory integrate(const State& init, const Params& p, double upTo, const IntegratorConfig& cfg,
                     bool keepDense) {
    validate(p);
    Trajectory traj = run(AngleRhs{&p}, init.tau, Vec2{init.theta, init.v}, p, upTo, cfg, keepDense);
    traj.initial = init;
    traj.params = p;
    return traj;
}

Trajectory integrateMomentum(const MomentumState& init, const Params& p, double upTo, const IntegratorConfig& cfg,
                             bool keepDense) {
    validate(p, /*allowZeroOmega=*/true);
    Trajectory traj = run(MomentumRhs{&p}, init.tau, Vec2{init.theta, init.s}, p, upTo, cfg, keepDense);
    traj.initial = toAngle(init, p);
    traj.params = p;
    return traj;
}

std::vector<Sample> poincareMap(const State& init, const Params& p, int nPeriods, const IntegratorConfig& cfg) {
    if (nPeriods < 0) throw DomainError("nPeriods must be >= 0");
    if (nPeriods == 0) return {Sample{init.tau, init.theta, init.v}};
    const double end = init.tau + kTwoPi * nPeriods;
    return integrate(init, p, end, cfg).sections;
}

void writeTrajectoryCsv(std::ostream& out, const Trajectory& traj) {
    std::istringstream header(formatParams(traj.params));
    for (std::string line; std::getline(header, line);) out << "# " << line << '\n';
    out << "tau,theta,v\n";
    const auto& rows = traj.dense.empty() ? traj.sections : traj.dense;
    out << std::setprecision(17);
    for (const auto& s : rows) out << s.tau << ',' << s.theta << ',' << s.v << '\n';
}

} // namespace ppvl
