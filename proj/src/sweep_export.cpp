#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ppvl/errors.hpp"
#include "ppvl/sweep.hpp"

namespace ppvl::sweep {

namespace {

using nlohmann::json;

json labelJson(const RegimeLabel& l) {
    json j{{"kind", std::string(toString(l.kind))}, {"r", l.r}, {"q", l.q},
           {"theta", l.theta}, {"v", l.v}, {"transient_periods", l.transientUsed}};
    if (!l.note.empty()) j["note"] = l.note;
    return j;
}

RegimeLabel labelFromJson(const json& j) {
    RegimeLabel l;
    l.kind = parseRegimeKind(j.at("kind").get<std::string>());
    l.r = j.at("r").get<int>();
    l.q = j.at("q").get<int>();
    l.theta = j.at("theta").get<double>();
    l.v = j.at("v").get<double>();
    l.transientUsed = j.value("transient_periods", 0);
    l.note = j.value("note", std::string{});
    return l;
}

json axisJson(const AxisRange& a) { return json{{"min", a.min}, {"max", a.max}, {"n", a.n}}; }

AxisRange axisFromJson(const json& j) {
    return {j.at("min").get<double>(), j.at("max").get<double>(), j.at("n").get<int>()};
}

json specJson(const SweepSpec& s) {
    json ics = json::array();
    for (const auto& ic : s.initialConditions) ics.push_back({ic.theta, ic.v, ic.tau});
    json bounds = json::array();
    for (const auto& b : s.boundaries) bounds.push_back({{"kind", std::string(toString(b.kind))}, {"index", b.index}});
    const auto& c = s.classifier;
    return json{{"omega", axisJson(s.omega)},
                {"eps", axisJson(s.eps)},
                {"beta", s.beta},
                {"harmonics", formatHarmonics(s.excitation)},
                {"classifier",
                 {{"transient_periods", c.transientPeriods},
                  {"sample_periods", c.samplePeriods},
                  {"q_max", c.qMax},
                  {"match_tol", c.matchTol},
                  {"max_transient_periods", c.maxTransientPeriods},
                  {"rel_tol", c.integrator.relTol},
                  {"abs_tol", c.integrator.absTol},
                  {"max_step", c.integrator.maxStep},
                  {"initial_step", c.integrator.initialStep}}},
                {"initial_conditions", ics},
                {"boundaries", bounds}};
}

SweepSpec specFromJson(const json& j) {
    SweepSpec s;
    s.omega = axisFromJson(j.at("omega"));
    s.eps = axisFromJson(j.at("eps"));
    s.beta = j.at("beta").get<double>();
    s.excitation = parseHarmonics(j.at("harmonics").get<std::string>());
    const auto& c = j.at("classifier");
    s.classifier.transientPeriods = c.at("transient_periods").get<int>();
    s.classifier.samplePeriods = c.at("sample_periods").get<int>();
    s.classifier.qMax = c.at("q_max").get<int>();
    s.classifier.matchTol = c.at("match_tol").get<double>();
    s.classifier.maxTransientPeriods = c.at("max_transient_periods").get<int>();
    s.classifier.integrator.relTol = c.at("rel_tol").get<double>();
    s.classifier.integrator.absTol = c.at("abs_tol").get<double>();
    s.classifier.integrator.maxStep = c.at("max_step").get<double>();
    s.classifier.integrator.initialStep = c.at("initial_step").get<double>();
    s.initialConditions.clear();
    for (const auto& ic : j.at("initial_conditions")) {
        s.initialConditions.push_back({ic.at(0).get<double>(), ic.at(1).get<double>(), ic.at(2).get<double>()});
    }
    for (const auto& b : j.at("boundaries")) {
        s.boundaries.push_back({parseBoundaryKind(b.at("kind").get<std::string>()), b.at("index").get<int>()});
    }
    return s;
}

json curveJson(const BoundaryCurve& c) {
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back({p.x, p.y});
    return json{{"kind", std::string(toString(c.kind))}, {"r", c.r}, {"q", c.q},
                {"x_name", c.xName}, {"y_name", c.yName}, {"points", pts}};
}

BoundaryCurve curveFromJson(const json& j) {
    BoundaryCurve c;
    c.kind = parseBoundaryKind(j.at("kind").get<std::string>());
    c.r = j.at("r").get<int>();
    c.q = j.at("q").get<int>();
    c.xName = j.at("x_name").get<std::string>();
    c.yName = j.at("y_name").get<std::string>();
    for (const auto& p : j.at("points")) c.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return c;
}

std::string shortest(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string cellColor(const RegimeLabel& l) {
    switch (l.kind) {
    case RegimeKind::equilibrium: return "#f2f2f2";
    case RegimeKind::oscillation:
        switch (l.q) {
        case 1: return "#9ecae1";
        case 2: return "#3182bd";
        case 4: return "#756bb1";
        case 6: return "#de2d26";
        default: return "#c6dbef";
        }
    case RegimeKind::rotation: {
        const double ratio = static_cast<double>(std::abs(l.r)) / std::max(l.q, 1);
        if (ratio == 1.0) return "#2ca02c";
        if (ratio == 2.0) return "#ff7f0e";
        if (ratio == 3.0) return "#d62728";
        return "#e7ba52";
    }
    case RegimeKind::rotationOscillation: return "#17becf";
    case RegimeKind::chaotic: return "#000000";
    case RegimeKind::undecided: return "#ff00ff";
    }
    return "#ff00ff";
}

std::string legendName(const RegimeLabel& l) {
    std::string name(toString(l.kind));
    if (l.kind == RegimeKind::oscillation) name += " q=" + std::to_string(l.q);
    if (l.kind == RegimeKind::rotation || l.kind == RegimeKind::rotationOscillation) {
        name += " " + std::to_string(std::abs(l.r)) + ":" + std::to_string(l.q);
    }
    return name;
}

std::string curveName(const BoundaryCurve& c) {
    switch (c.kind) {
    case BoundaryKind::homoclinic: return "homoclinic";
    case BoundaryKind::oscillatory: return "oscillatory 1:" + std::to_string(c.q);
    case BoundaryKind::rotational: return "rotational 1:" + std::to_string(c.q);
    case BoundaryKind::averagingExistence: return "existence " + std::to_string(c.r) + ":" + std::to_string(c.q);
    }
    return "curve";
}

const char* curveDash(BoundaryKind k) {
    switch (k) {
    case BoundaryKind::homoclinic: return "";
    case BoundaryKind::oscillatory: return "6,3";
    case BoundaryKind::rotational: return "2,3";
    case BoundaryKind::averagingExistence: return "8,3,2,3";
    }
    return "";
}

} // namespace

void writeCsv(std::ostream& out, const SweepResult& result) {
    out << "omega,eps,kind,r,q\n" << std::setprecision(17);
    for (const auto& c : result.cells) {
        out << c.omega << ',' << c.eps << ',' << toString(c.label.kind) << ',' << c.label.r << ',' << c.label.q << '\n';
    }
}

void writeJson(std::ostream& out, const SweepResult& result) {
    json cells = json::array();
    for (const auto& c : result.cells) {
        json starts = json::array();
        for (const auto& s : c.starts) starts.push_back(labelJson(s));
        json cj = labelJson(c.label);
        cj["omega"] = c.omega;
        cj["eps"] = c.eps;
        cj["starts"] = starts;
        cells.push_back(std::move(cj));
    }
    json curves = json::array();
    for (const auto& c : result.curves) curves.push_back(curveJson(c));
    out << json{{"spec", specJson(result.spec)}, {"cells", cells}, {"curves", curves}}.dump(1) << '\n';
}

SweepResult readJson(std::istream& in) {
    json j;
    try {
        in >> j;
        SweepResult r;
        r.spec = specFromJson(j.at("spec"));
        for (const auto& cj : j.at("cells")) {
            SweepCell c;
            c.omega = cj.at("omega").get<double>();
            c.eps = cj.at("eps").get<double>();
            c.label = labelFromJson(cj);
            for (const auto& s : cj.at("starts")) c.starts.push_back(labelFromJson(s));
            r.cells.push_back(std::move(c));
        }
        for (const auto& cj : j.at("curves")) r.curves.push_back(curveFromJson(cj));
        if (r.cells.size() != static_cast<std::size_t>(r.spec.omega.n) * r.spec.eps.n) {
            throw DomainError("sweep JSON: cell count does not match the grid");
        }
        return r;
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed sweep JSON: ") + e.what());
    }
}

void writeSvg(std::ostream& out, const SweepResult& result) {
    const auto& spec = result.spec;
    const int nx = spec.omega.n, ny = spec.eps.n;
    const double left = 70, top = 20, plotW = 600, plotH = 450, legendW = 230, bottom = 50;
    const double width = left + plotW + legendW, height = top + plotH + bottom;
    const double dOmega = (spec.omega.max - spec.omega.min) / (nx - 1);
    const double dEps = (spec.eps.max - spec.eps.min) / (ny - 1);
    const double x0 = spec.omega.min - 0.5 * dOmega, x1 = spec.omega.max + 0.5 * dOmega;
    const double y0 = spec.eps.min - 0.5 * dEps, y1 = spec.eps.max + 0.5 * dEps;
    auto px = [&](double omega) { return left + (omega - x0) / (x1 - x0) * plotW; };
    auto py = [&](double eps) { return top + plotH - (eps - y0) / (y1 - y0) * plotH; };
    const double cw = plotW / nx, ch = plotH / ny;

    out << std::setprecision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<defs><clipPath id=\"plot\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plotW
        << "\" height=\"" << plotH << "\"/></clipPath></defs>\n";
    out << "<g id=\"cells\">\n";
    std::map<std::string, std::string> legend;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const SweepCell& c = result.at(ix, iy);
            const std::string color = cellColor(c.label);
            legend.emplace(legendName(c.label), color);
            out << "<rect class=\"cell\" x=\"" << left + ix * cw << "\" y=\"" << top + (ny - 1 - iy) * ch
                << "\" width=\"" << cw << "\" height=\"" << ch << "\" fill=\"" << color << "\"><title>omega="
                << c.omega << " eps=" << c.eps << " " << legendName(c.label) << "</title></rect>\n";
        }
    }
    out << "</g>\n<g id=\"curves\" clip-path=\"url(#plot)\" fill=\"none\" stroke=\"#d4a017\" stroke-width=\"2\">\n";
    for (const auto& curve : result.curves) {
        const bool transposed = curve.xName == "eps";
        out << "<polyline class=\"boundary\" stroke-dasharray=\"" << curveDash(curve.kind) << "\" points=\"";
        for (const auto& p : curve.points) {
            const double omega = transposed ? p.y : p.x;
            const double eps = transposed ? p.x : p.y;
            // Keep far-off-scale points from producing huge coordinates.
            const double yy = std::clamp(py(eps), top - plotH, top + 2 * plotH);
            const double xx = std::clamp(px(omega), left - plotW, left + 2 * plotW);
            out << xx << ',' << yy << ' ';
        }
        out << "\"><title>" << curveName(curve) << "</title></polyline>\n";
    }
    out << "</g>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plotW << "\" height=\"" << plotH
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double omega = spec.omega.min + (spec.omega.max - spec.omega.min) * i / 4;
        const double eps = spec.eps.min + (spec.eps.max - spec.eps.min) * i / 4;
        out << "<text x=\"" << px(omega) << "\" y=\"" << top + plotH + 16 << "\" text-anchor=\"middle\">" << omega
            << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << py(eps) + 4 << "\" text-anchor=\"end\">" << eps
            << "</text>\n";
    }
    out << "<text x=\"" << left + plotW / 2 << "\" y=\"" << top + plotH + 38
        << "\" text-anchor=\"middle\">omega</text>\n";
    out << "<text x=\"16\" y=\"" << top + plotH / 2 << "\" transform=\"rotate(-90 16 " << top + plotH / 2
        << ")\" text-anchor=\"middle\">eps (beta=" << spec.beta << ")</text>\n";
    out << "<g id=\"legend\">\n";
    double ly = top + 10;
    const double lx = left + plotW + 20;
    for (const auto& [name, color] : legend) {
        out << "<rect x=\"" << lx << "\" y=\"" << ly - 10 << "\" width=\"12\" height=\"12\" fill=\"" << color
            << "\" stroke=\"#444\"/><text x=\"" << lx + 18 << "\" y=\"" << ly << "\">" << name << "</text>\n";
        ly += 18;
    }
    for (const auto& curve : result.curves) {
        out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 12 << "\" y2=\"" << ly - 4
            << "\" stroke=\"#d4a017\" stroke-width=\"2\" stroke-dasharray=\"" << curveDash(curve.kind)
            << "\"/><text x=\"" << lx + 18 << "\" y=\"" << ly << "\">" << curveName(curve) << "</text>\n";
        ly += 18;
    }
    out << "</g>\n</svg>\n";
}

std::string fileStem(const SweepSpec& spec) {
    return "sweep_" + shortest(spec.beta) + "_" + std::to_string(spec.omega.n) + "x" + std::to_string(spec.eps.n);
}

std::filesystem::path exportMap(const SweepResult& result, Format format, const std::filesystem::path& dir) {
    const char* ext = format == Format::csv ? ".csv" : format == Format::json ? ".json" : ".svg";
    const auto path = dir / (fileStem(result.spec) + ext);
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open output file: " + path.string());
    switch (format) {
    case Format::csv: writeCsv(out, result); break;
    case Format::json: writeJson(out, result); break;
    case Format::svg: writeSvg(out, result); break;
    }
    out.flush();
    if (!out) throw DomainError("failed writing output file: " + path.string());
    return path;
}

} // namespace ppvl::sweep
