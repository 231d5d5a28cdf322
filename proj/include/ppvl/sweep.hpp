#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ppvl/boundary.hpp"
#include "ppvl/classify.hpp"
#include "ppvl/model.hpp"

namespace ppvl::sweep {

struct AxisRange {
    double min = 0.0;
    double max = 1.0;
    int n = 2;

    double at(int i) const { return n == 1 ? min : min + (max - min) * i / (n - 1); }
    std::vector<double> values() const;

    bool operator==(const AxisRange&) const = default;
};

/// Analytic curve to overlay: homoclinic, oscillatory 1:q, rotational 1:q
/// (index = q) or averaging existence r:1 (index = r).
struct BoundaryRequest {
    BoundaryKind kind = BoundaryKind::homoclinic;
    int index = 0;

    bool operator==(const BoundaryRequest&) const = default;
};

struct SweepSpec {
    AxisRange omega{0.1, 1.2, 60};
    AxisRange eps{0.0, 0.3, 60};
    double beta = 0.05;
    Excitation excitation;
    ClassifierConfig classifier;
    /// Every cell is classified from each of these; the first has priority.
    std::vector<State> initialConditions{State{0.1, 0.0, 0.0}};
    std::vector<BoundaryRequest> boundaries;

    void validate() const;
};

struct SweepCell {
    double omega = 0.0;
    double eps = 0.0;
    /// Reported regime: the first start that did not come to rest, otherwise
    /// the first start's label.
    RegimeLabel label;
    std::vector<RegimeLabel> starts;
};

struct SweepResult {
    SweepSpec spec;
    /// Row-major with eps as the slow index: cells[iy * nx + ix].
    std::vector<SweepCell> cells;
    std::vector<BoundaryCurve> curves;

    const SweepCell& at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * spec.omega.n + ix]; }
};

using Progress = std::function<void(std::size_t done, std::size_t total)>;

/// Classifies every cell with `jobs` workers pulling cells off a shared index. The
/// grid does not depend on `jobs`. Per-cell failures become `undecided`.
SweepResult runSweep(const SweepSpec& spec, int jobs = 1, const Progress& progress = {});

/// Boundary curves in the (omega, eps) plane of the sweep.
std::vector<BoundaryCurve> sampleBoundaries(const SweepSpec& spec);

// Export.
void writeCsv(std::ostream& out, const SweepResult& result);
void writeJson(std::ostream& out, const SweepResult& result);
void writeSvg(std::ostream& out, const SweepResult& result);
SweepResult readJson(std::istream& in);

/// "sweep_<beta>_<nx>x<ny>" (without extension).
std::string fileStem(const SweepSpec& spec);

enum class Format { csv, json, svg };

/// Writes <dir>/<fileStem>.<ext> and returns the path. Throws DomainError
/// naming the path on I/O failure.
std::filesystem::path exportMap(const SweepResult& result, Format format, const std::filesystem::path& dir);

} // namespace ppvl::sweep
