#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ppvl::quadrature {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rule with `n` nodes, computed once and cached (thread-safe).
const GaussRule& gaussLegendre(int n);

/// Composite Gauss-Legendre: `panels` equal panels of an `order`-point rule.
double compositeGauss(const std::function<double(double)>& f, double a, double b,
                      int panels, int order = 16);

struct AdaptiveOptions {
    double absTol = 1e-13;
    double relTol = 1e-13;
    int maxDepth = 40;
};

/// Adaptive Gauss-Kronrod (7/15) with recursive bisection. The interval is
/// first cut into `initialPanels` pieces, useful for oscillatory integrands.
double adaptive(const std::function<double(double)>& f, double a, double b,
                const AdaptiveOptions& opts = {}, int initialPanels = 1);

} // namespace ppvl::quadrature
