#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ppvl {

enum class BoundaryKind { homoclinic, oscillatory, rotational, averagingExistence };

std::string_view toString(BoundaryKind kind);
BoundaryKind parseBoundaryKind(std::string_view name);

struct BoundaryPoint {
    double x;
    double y;

    bool operator==(const BoundaryPoint&) const = default;
};

/// Sampled analytic boundary. Melnikov curves are threshold(omega) (x = omega);
/// averaging curves are the minimal omega/beta (or omega) versus eps (x = eps).
struct BoundaryCurve {
    BoundaryKind kind = BoundaryKind::homoclinic;
    int r = 0;  ///< rotations per q periods (averaging) or oscillation/rotation count (Melnikov p, r)
    int q = 0;
    std::string xName;
    std::string yName;
    std::vector<BoundaryPoint> points;

    bool operator==(const BoundaryCurve&) const = default;
};

/// CSV with columns <xName>,<yName>,kind,r,q.
void writeBoundaryCsv(std::ostream& out, const BoundaryCurve& curve);

} // namespace ppvl
