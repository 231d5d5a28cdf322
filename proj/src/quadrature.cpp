#include "ppvl/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "ppvl/errors.hpp"

namespace ppvl::quadrature {

namespace {

GaussRule buildRule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

// Kronrod 15-point nodes/weights with the embedded 7-point Gauss weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct KronrodResult {
    double value;
    double error;
};

KronrodResult kronrod15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double gauss = fc * kWg[3];
    double kron = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        kron += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    return {kron * h, std::abs((kron - gauss) * h)};
}

double adaptiveRec(const std::function<double(double)>& f, double a, double b,
                   const KronrodResult& whole, double tol, int depth) {
    if (whole.error <= tol || depth <= 0 || std::abs(b - a) < 1e-14 * (1.0 + std::abs(a))) {
        return whole.value;
    }
    const double m = 0.5 * (a + b);
    const KronrodResult left = kronrod15(f, a, m);
    const KronrodResult right = kronrod15(f, m, b);
    if (whole.error <= tol * 2.0 && left.error + right.error <= tol) {
        return left.value + right.value;
    }
    return adaptiveRec(f, a, m, left, 0.5 * tol, depth - 1) +
           adaptiveRec(f, m, b, right, 0.5 * tol, depth - 1);
}

} // namespace

const GaussRule& gaussLegendre(int n) {
    if (n < 1 || n > 512) throw DomainError("gaussLegendre: order out of range");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, buildRule(n)).first;
    return it->second;
}

double compositeGauss(const std::function<double(double)>& f, double a, double b,
                      int panels, int order) {
    if (panels < 1) throw DomainError("compositeGauss: panels must be >= 1");
    const GaussRule& rule = gaussLegendre(order);
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double c = lo + 0.5 * width;
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            sum += rule.weights[i] * f(c + 0.5 * width * rule.nodes[i]);
        }
        total += 0.5 * width * sum;
    }
    return total;
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                const AdaptiveOptions& opts, int initialPanels) {
    if (initialPanels < 1) initialPanels = 1;
    const double width = (b - a) / initialPanels;
    std::vector<KronrodResult> first(initialPanels);
    double estimate = 0.0;
    for (int p = 0; p < initialPanels; ++p) {
        const double lo = a + p * width;
        const double hi = (p + 1 == initialPanels) ? b : lo + width;
        first[p] = kronrod15(f, lo, hi);
        estimate += std::abs(first[p].value);
    }
    const double tol = std::max(opts.absTol, opts.relTol * estimate);
    double total = 0.0;
    for (int p = 0; p < initialPanels; ++p) {
        const double lo = a + p * width;
        const double hi = (p + 1 == initialPanels) ? b : lo + width;
        total += adaptiveRec(f, lo, hi, first[p], tol / initialPanels, opts.maxDepth);
    }
    return total;
}

} // namespace ppvl::quadrature
