#pragma once

#include <span>
#include <string>
#include <string_view>

#include "ppvl/integrator.hpp"
#include "ppvl/model.hpp"

namespace ppvl {

enum class RegimeKind { equilibrium, oscillation, rotation, rotationOscillation, chaotic, undecided };

std::string_view toString(RegimeKind kind);
RegimeKind parseRegimeKind(std::string_view name);

/// Long-run regime. Periodic kinds carry the period q (in excitation periods)
/// and r, the net number of turns per q periods (0 for oscillations).
struct RegimeLabel {
    RegimeKind kind = RegimeKind::undecided;
    int r = 0;
    int q = 0;
    /// Last Poincare sample (theta unwrapped).
    double theta = 0.0;
    double v = 0.0;
    /// Excitation periods integrated before the decisive sample window.
    int transientUsed = 0;
    std::string note;

    bool sameRegime(const RegimeLabel& o) const { return kind == o.kind && r == o.r && q == o.q; }
};

struct ClassifierConfig {
    int transientPeriods = 300;
    int samplePeriods = 200;
    int qMax = 8;
    double matchTol = 1e-4;
    /// Undecided or aperiodic windows are retried, sliding the sample window
    /// forward, until this many periods have been spent on the transient.
    int maxTransientPeriods = 1500;
    IntegratorConfig integrator = IntegratorConfig::sweep();

    /// samplePeriods > 2 qMax, matchTol > 0, transient limits consistent.
    void validate() const;
};

/// Classifies a window of consecutive Poincare samples. `velocityChangedSign`
/// tells whether v crossed zero anywhere inside the window; it separates
/// monotone rotations from rotation-oscillations.
RegimeLabel classifySamples(std::span<const Sample> samples, bool velocityChangedSign, const ClassifierConfig& cfg);

RegimeLabel classify(const State& init, const Params& p, const ClassifierConfig& cfg = {});

struct WindingNumber {
    int r = 0;  ///< turns per q periods
    int q = 1;
    bool consistent = false;
};

/// r = round((theta_{n+q} - theta_n) / 2 pi) over the sections from `first` on.
WindingNumber windingNumber(const Trajectory& traj, int q, std::size_t first = 0);

/// {"kind":..., "r":..., "q":..., "theta":..., "v":...}
std::string labelToJson(const RegimeLabel& label);

} // namespace ppvl
