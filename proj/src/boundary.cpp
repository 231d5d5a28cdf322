#include "ppvl/boundary.hpp"

#include <iomanip>
#include <ostream>

#include "ppvl/errors.hpp"

namespace ppvl {

std::string_view toString(BoundaryKind kind) {
    switch (kind) {
    case BoundaryKind::homoclinic: return "homoclinic";
    case BoundaryKind::oscillatory: return "oscillatory";
    case BoundaryKind::rotational: return "rotational";
    case BoundaryKind::averagingExistence: return "averaging";
    }
    return "unknown";
}

BoundaryKind parseBoundaryKind(std::string_view name) {
    if (name == "homoclinic") return BoundaryKind::homoclinic;
    if (name == "oscillatory" || name == "osc") return BoundaryKind::oscillatory;
    if (name == "rotational" || name == "rot") return BoundaryKind::rotational;
    if (name == "averaging") return BoundaryKind::averagingExistence;
    throw DomainError("unknown boundary kind: " + std::string(name));
}

void writeBoundaryCsv(std::ostream& out, const BoundaryCurve& curve) {
    out << curve.xName << ',' << curve.yName << ",kind,r,q\n";
    out << std::setprecision(17);
    for (const auto& pt : curve.points) {
        out << pt.x << ',' << pt.y << ',' << toString(curve.kind) << ',' << curve.r << ',' << curve.q << '\n';
    }
}

} // namespace ppvl
