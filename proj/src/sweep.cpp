#include "ppvl/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "ppvl/averaging.hpp"
#include "ppvl/errors.hpp"
#include "ppvl/melnikov.hpp"

namespace ppvl::sweep {

std::vector<double> AxisRange::values() const {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = at(i);
    return out;
}

void SweepSpec::validate() const {
    if (omega.n < 2 || eps.n < 2) throw DomainError("sweep axes need at least 2 points each");
    if (!(omega.min > 0.0) || !(omega.max > omega.min)) throw DomainError("omega range must be positive and increasing");
    if (!(eps.min >= 0.0) || !(eps.max > eps.min)) throw DomainError("eps range must be non-negative and increasing");
    if (!(beta >= 0.0)) throw DomainError("beta must be >= 0");
    if (eps.max * excitation.maxAbs() >= 1.0) throw DomainError("eps*max|phi| must stay below 1 over the grid");
    if (initialConditions.empty()) throw DomainError("sweep needs at least one initial condition");
    for (const auto& b : boundaries) {
        if (b.kind == BoundaryKind::homoclinic) continue;
        if (b.index < 1) throw DomainError("boundary request needs a positive resonance index");
        if (b.kind == BoundaryKind::oscillatory && b.index % 2 != 0) {
            throw DomainError("oscillatory boundaries exist for even q only");
        }
        if (b.kind != BoundaryKind::averagingExistence && !excitation.isPureCosine()) {
            throw DomainError("Melnikov boundaries require phi = cos(tau)");
        }
    }
    classifier.validate();
}

std::vector<BoundaryCurve> sampleBoundaries(const SweepSpec& spec) {
    std::vector<BoundaryCurve> curves;
    const auto omegas = spec.omega.values();
    for (const auto& req : spec.boundaries) {
        BoundaryCurve c;
        switch (req.kind) {
        case BoundaryKind::homoclinic: c = melnikov::homoclinicBoundary(omegas, spec.beta); break;
        case BoundaryKind::oscillatory: c = melnikov::oscillatoryBoundary(omegas, req.index, spec.beta); break;
        case BoundaryKind::rotational: c = melnikov::rotationalBoundary(omegas, req.index, spec.beta); break;
        case BoundaryKind::averagingExistence: {
            std::vector<double> epsValues;
            for (double e : spec.eps.values()) {
                if (e > 0.0) epsValues.push_back(e);
            }
            c = averaging::existenceBoundary(req.index, 1, epsValues, spec.excitation);
            for (auto& pt : c.points) pt.y *= spec.beta;
            c.yName = "omega";
            break;
        }
        }
        if (c.kind != BoundaryKind::averagingExistence) c.yName = "eps";
        curves.push_back(std::move(c));
    }
    return curves;
}

namespace {

SweepCell classifyCell(const SweepSpec& spec, double omega, double eps) {
    SweepCell cell;
    cell.omega = omega;
    cell.eps = eps;
    Params p;
    p.eps = eps;
    p.beta = spec.beta;
    p.omega = omega;
    p.excitation = spec.excitation;
    for (const auto& init : spec.initialConditions) {
        RegimeLabel label;
        try {
            label = classify(init, p, spec.classifier);
        } catch (const std::exception& e) {
            label.kind = RegimeKind::undecided;
            label.note = e.what();
        }
        cell.starts.push_back(std::move(label));
    }
    cell.label = cell.starts.front();
    for (const auto& l : cell.starts) {
        if (l.kind != RegimeKind::equilibrium && l.kind != RegimeKind::undecided) {
            cell.label = l;
            break;
        }
    }
    return cell;
}

} // namespace

SweepResult runSweep(const SweepSpec& spec, int jobs, const Progress& progress) {
    spec.validate();
    SweepResult result;
    result.spec = spec;
    const std::size_t nx = spec.omega.n, ny = spec.eps.n;
    const std::size_t total = nx * ny;
    result.cells.resize(total);

    jobs = std::clamp(jobs, 1, static_cast<int>(total));
    // Cells are handed out one at a time; each result lands at its own index,
    // so the output does not depend on the worker count.
    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex progressMutex;
    auto work = [&] {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            const int ix = static_cast<int>(idx % nx);
            const int iy = static_cast<int>(idx / nx);
            result.cells[idx] = classifyCell(spec, spec.omega.at(ix), spec.eps.at(iy));
            if (progress) {
                std::lock_guard lock(progressMutex);
                progress(++done, total);
            }
        }
    };
    if (jobs == 1) {
        work();
    } else {
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w) workers.emplace_back(work);
        for (auto& t : workers) t.join();
    }
    result.curves = sampleBoundaries(spec);
    return result;
}

} // namespace ppvl::sweep
