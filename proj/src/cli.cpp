#include "ppvl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppvl/averaging.hpp"
#include "ppvl/classify.hpp"
#include "ppvl/config.hpp"
#include "ppvl/elliptic.hpp"
#include "ppvl/errors.hpp"
#include "ppvl/integrator.hpp"
#include "ppvl/melnikov.hpp"
#include "ppvl/quadrature.hpp"
#include "ppvl/sweep.hpp"

namespace ppvl::cli {

namespace {

using nlohmann::json;
using averaging::AveragedRotation;
using averaging::Stability;
constexpr double kPi = std::numbers::pi;

struct PhysicsOpts {
    double eps = 0.0;
    double beta = 0.05;
    double omega = 1.0;
    std::string harmonics;

    Params params() const {
        Params p{eps, beta, omega, harmonics.empty() ? Excitation::cosine() : parseHarmonics(harmonics)};
        validate(p);
        return p;
    }
};

void addPhysics(CLI::App* app, PhysicsOpts& o) {
    app->add_option("--eps", o.eps, "Relative length modulation amplitude");
    app->add_option("--beta", o.beta, "Damping");
    app->add_option("--omega", o.omega, "Natural frequency over excitation frequency");
    app->add_option("--harmonics", o.harmonics, "Excitation as n:cos:sin,... (default 1:1:0)");
}

struct IntegratorOpts {
    std::optional<double> relTol, absTol, maxStep;

    void apply(IntegratorConfig& cfg) const {
        if (relTol) cfg.relTol = *relTol;
        if (absTol) cfg.absTol = *absTol;
        if (maxStep) cfg.maxStep = *maxStep;
        cfg.validate();
    }
};

void addIntegrator(CLI::App* app, IntegratorOpts& o) {
    app->add_option("--rel-tol", o.relTol, "Integrator relative tolerance");
    app->add_option("--abs-tol", o.absTol, "Integrator absolute tolerance");
    app->add_option("--max-step", o.maxStep, "Largest step in tau");
}

struct ClassifierOpts {
    std::optional<int> transient, sample, qMax, maxTransient;
    std::optional<double> matchTol;
    IntegratorOpts integrator;

    ClassifierConfig config() const {
        ClassifierConfig c;
        if (transient) c.transientPeriods = *transient;
        if (sample) c.samplePeriods = *sample;
        if (qMax) c.qMax = *qMax;
        if (maxTransient) c.maxTransientPeriods = *maxTransient;
        if (matchTol) c.matchTol = *matchTol;
        if (c.maxTransientPeriods < c.transientPeriods) c.maxTransientPeriods = c.transientPeriods;
        integrator.apply(c.integrator);
        c.validate();
        return c;
    }
};

void addClassifier(CLI::App* app, ClassifierOpts& o) {
    app->add_option("--transient", o.transient, "Transient periods discarded");
    app->add_option("--sample", o.sample, "Periods sampled for classification");
    app->add_option("--q-max", o.qMax, "Largest period multiple tested");
    app->add_option("--max-transient", o.maxTransient, "Transient budget when the window is retried");
    app->add_option("--match-tol", o.matchTol, "Section match tolerance");
    addIntegrator(app, o.integrator);
}

/// Writes to the named file, or standard output for "-" or empty.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw DomainError("cannot open output file: " + path);
            path_ = path;
        }
    }
    std::ostream& stream() { return path_.empty() ? std::cout : file_; }
    void finish() {
        stream().flush();
        if (!stream()) throw DomainError("failed writing output: " + (path_.empty() ? "stdout" : path_));
    }

private:
    std::ofstream file_;
    std::string path_;
};

json optionalJson(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// ---- simulate ----------------------------------------------------------

struct SimulateOpts {
    PhysicsOpts phys;
    IntegratorOpts integ;
    double theta0 = 0.1, v0 = 0.0, tau0 = 0.0;
    double periods = 100.0;
    bool sectionsOnly = false;
    std::string format = "csv";
    std::string output;
};

void runSimulate(const SimulateOpts& o) {
    const Params p = o.phys.params();
    if (!(o.periods > 0.0)) throw DomainError("--periods must be positive");
    IntegratorConfig cfg = IntegratorConfig::analysis();
    o.integ.apply(cfg);
    const State init{o.theta0, o.v0, o.tau0};
    const Trajectory traj = integrate(init, p, o.tau0 + 2.0 * kPi * o.periods, cfg, !o.sectionsOnly);
    Output out(o.output);
    if (o.format == "csv") {
        writeTrajectoryCsv(out.stream(), traj);
    } else {
        auto rows = [](const std::vector<Sample>& v) {
            json a = json::array();
            for (const auto& s : v) a.push_back({s.tau, s.theta, s.v});
            return a;
        };
        json j{{"eps", p.eps}, {"beta", p.beta}, {"omega", p.omega}, {"harmonics", formatHarmonics(p.excitation)},
               {"initial", {init.theta, init.v, init.tau}}, {"columns", {"tau", "theta", "v"}},
               {"sections", rows(traj.sections)}};
        if (!o.sectionsOnly) j["dense"] = rows(traj.dense);
        out.stream() << j.dump(1) << '\n';
    }
    out.finish();
}

// ---- classify ----------------------------------------------------------

struct ClassifyOpts {
    PhysicsOpts phys;
    ClassifierOpts cls;
    double theta0 = 0.1, v0 = 0.0, tau0 = 0.0;
    std::string output;
};

void runClassify(const ClassifyOpts& o) {
    const Params p = o.phys.params();
    const RegimeLabel label = classify({o.theta0, o.v0, o.tau0}, p, o.cls.config());
    Output out(o.output);
    out.stream() << labelToJson(label) << '\n';
    out.finish();
}

// ---- melnikov ----------------------------------------------------------

struct MelnikovOpts {
    std::string kind = "homoclinic";
    double omegaMin = 0.3, omegaMax = 3.0;
    int n = 200;
    int q = 1;
    double scale = 1.0;
    bool table = false;
    double eps = 0.1, beta = 0.05, omega = 1.0;
    int tauPoints = 64;
    bool quadratureColumn = false;
    std::string format = "csv";
    std::string output;
};

void runMelnikov(const MelnikovOpts& o) {
    const BoundaryKind kind = parseBoundaryKind(o.kind);
    if (kind == BoundaryKind::averagingExistence) throw DomainError("use the averaging subcommand for existence curves");
    Output out(o.output);
    if (o.table) {
        if (o.tauPoints < 2) throw DomainError("--tau-points must be at least 2");
        melnikov::ResonanceSpec res{kind == BoundaryKind::oscillatory ? melnikov::ResonanceKind::oscillatory
                                                                       : melnikov::ResonanceKind::rotational,
                                    1, o.q};
        auto closed = [&](double t) {
            switch (kind) {
            case BoundaryKind::homoclinic: return melnikov::homoclinicMelnikov(o.eps, o.beta, o.omega, t);
            case BoundaryKind::oscillatory: return melnikov::subharmonicOscMelnikov(o.eps, o.beta, o.omega, o.q, t);
            default: return melnikov::subharmonicRotMelnikov(o.eps, o.beta, o.omega, o.q, t);
            }
        };
        auto quad = [&](double t) {
            return kind == BoundaryKind::homoclinic
                       ? melnikov::homoclinicMelnikovQuadrature(o.eps, o.beta, o.omega, t)
                       : melnikov::subharmonicMelnikovQuadrature(o.eps, o.beta, o.omega, res, t);
        };
        json rows = json::array();
        auto& s = out.stream();
        s << std::setprecision(17);
        if (o.format == "csv") s << (o.quadratureColumn ? "tau0,M,M_quadrature\n" : "tau0,M\n");
        for (int i = 0; i < o.tauPoints; ++i) {
            const double t = 2.0 * kPi * i / (o.tauPoints - 1);
            const double m = closed(t);
            if (o.format == "csv") {
                s << t << ',' << m;
                if (o.quadratureColumn) s << ',' << quad(t);
                s << '\n';
            } else {
                json row{{"tau0", t}, {"M", m}};
                if (o.quadratureColumn) row["M_quadrature"] = quad(t);
                rows.push_back(row);
            }
        }
        if (o.format != "csv") {
            s << json{{"kind", o.kind}, {"q", o.q}, {"eps", o.eps}, {"beta", o.beta}, {"omega", o.omega},
                      {"rows", rows}}.dump(1)
              << '\n';
        }
        out.finish();
        return;
    }
    if (o.n < 2 || !(o.omegaMax > o.omegaMin) || !(o.omegaMin > 0.0)) {
        throw DomainError("need 0 < omega-min < omega-max and n >= 2");
    }
    const auto omegas = sweep::AxisRange{o.omegaMin, o.omegaMax, o.n}.values();
    BoundaryCurve curve;
    switch (kind) {
    case BoundaryKind::homoclinic: curve = melnikov::homoclinicBoundary(omegas, o.scale); break;
    case BoundaryKind::oscillatory: curve = melnikov::oscillatoryBoundary(omegas, o.q, o.scale); break;
    default: curve = melnikov::rotationalBoundary(omegas, o.q, o.scale); break;
    }
    if (o.format == "csv") {
        writeBoundaryCsv(out.stream(), curve);
    } else {
        json pts = json::array();
        for (const auto& pt : curve.points) pts.push_back({pt.x, pt.y});
        out.stream() << json{{"kind", std::string(toString(curve.kind))}, {"q", curve.q}, {"x_name", curve.xName},
                             {"y_name", curve.yName}, {"points", pts}}.dump(1)
                     << '\n';
    }
    out.finish();
}

// ---- averaging ---------------------------------------------------------

struct AveragingOpts {
    PhysicsOpts phys;
    int r = 1, q = 1;
    std::string epsGrid;
    std::string output;
};

sweep::AxisRange parseRange(const std::string& text, const char* what) {
    sweep::AxisRange a{};
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> a.min >> c1 >> a.max >> c2 >> a.n) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof()) {
        throw DomainError(std::string(what) + " must be min:max:n, got '" + text + "'");
    }
    if (a.n < 1 || a.max < a.min) throw DomainError(std::string(what) + " has an empty range");
    return a;
}

json branchJson(const char* sign, const std::optional<double>& theta, const std::optional<Stability>& st,
                const std::optional<double>& slope, double residual) {
    return json{{"sign", sign},
                {"theta0", optionalJson(theta)},
                {"stability", st ? json(std::string(averaging::toString(*st))) : json(nullptr)},
                {"slope", optionalJson(slope)},
                {"residual", theta ? json(residual) : json(nullptr)}};
}

void runAveraging(const AveragingOpts& o) {
    Output out(o.output);
    if (!o.epsGrid.empty()) {
        const auto grid = parseRange(o.epsGrid, "--eps-grid");
        auto& s = out.stream();
        s << std::setprecision(17)
          << "eps,r,q,s0,threshold_omega_over_beta,theta_plus,theta_minus,stable_plus,stable_minus\n";
        auto opt = [](const std::optional<double>& x) { return x ? (std::ostringstream() << std::setprecision(17) << *x).str() : std::string(); };
        for (double eps : grid.values()) {
            PhysicsOpts phys = o.phys;
            phys.eps = eps;
            const Params p = phys.params();
            AveragedRotation rot;
            try {
                rot = averaging::solveBranches(p, o.r, o.q);
            } catch (const NumericalError&) {
                continue;  // degenerate A = B = 0 (e.g. eps = 0)
            }
            auto st = [](const std::optional<Stability>& x) {
                return x ? std::string(averaging::toString(*x)) : std::string();
            };
            s << eps << ',' << o.r << ',' << o.q << ',' << rot.s0 << ',' << rot.thresholdOmegaOverBeta << ','
              << opt(rot.thetaPlus) << ',' << opt(rot.thetaMinus) << ',' << st(rot.stablePlus) << ','
              << st(rot.stableMinus) << '\n';
        }
        out.finish();
        return;
    }
    const Params p = o.phys.params();
    const AveragedRotation rot = averaging::solveBranches(p, o.r, o.q);
    json branches = json::array();
    branches.push_back(branchJson("+", rot.thetaPlus, rot.stablePlus, rot.slopePlus,
                                  rot.thetaPlus ? averaging::steadyResidual(rot, *rot.thetaPlus) : 0.0));
    branches.push_back(branchJson("-", rot.thetaMinus, rot.stableMinus, rot.slopeMinus,
                                  rot.thetaMinus ? averaging::steadyResidual(rot, *rot.thetaMinus) : 0.0));
    const json j{{"eps", p.eps},
                 {"beta", p.beta},
                 {"omega", p.omega},
                 {"r", rot.r},
                 {"q", rot.q},
                 {"s0", rot.s0},
                 {"A", rot.a},
                 {"B", rot.b},
                 {"beta_over_omega", rot.betaOverOmega},
                 {"threshold_omega_over_beta", rot.thresholdOmegaOverBeta},
                 {"exists", rot.exists},
                 {"branches", branches}};
    out.stream() << j.dump(1) << '\n';
    out.finish();
}

// ---- sweep -------------------------------------------------------------

struct SweepOpts {
    std::string omegaRange = "0.1:1.2:60";
    std::string epsRange = "0:0.3:60";
    double beta = 0.05;
    std::string harmonics;
    ClassifierOpts cls;
    std::vector<std::string> starts;
    bool homoclinic = false;
    std::vector<int> oscQ, rotQ, averagingR;
    int jobs = 1;
    std::string outputDir = ".";
    std::vector<std::string> formats{"csv", "json", "svg"};
    bool quiet = false;
};

State parseStart(const std::string& text) {
    State s{0.0, 0.0, 0.0};
    std::istringstream in(text);
    char c = 0;
    if (!(in >> s.theta >> c >> s.v) || c != ',') throw DomainError("--start must be theta,v[,tau], got '" + text + "'");
    if (in >> c) {
        if (c != ',' || !(in >> s.tau)) throw DomainError("--start must be theta,v[,tau], got '" + text + "'");
    }
    if (!(in >> std::ws).eof()) throw DomainError("--start must be theta,v[,tau], got '" + text + "'");
    return s;
}

void runSweepCommand(const SweepOpts& o) {
    sweep::SweepSpec spec;
    spec.omega = parseRange(o.omegaRange, "--omega-range");
    spec.eps = parseRange(o.epsRange, "--eps-range");
    spec.beta = o.beta;
    if (!o.harmonics.empty()) spec.excitation = parseHarmonics(o.harmonics);
    spec.classifier = o.cls.config();
    if (!o.starts.empty()) {
        spec.initialConditions.clear();
        for (const auto& s : o.starts) spec.initialConditions.push_back(parseStart(s));
    }
    if (o.homoclinic) spec.boundaries.push_back({BoundaryKind::homoclinic, 0});
    for (int q : o.oscQ) spec.boundaries.push_back({BoundaryKind::oscillatory, q});
    for (int q : o.rotQ) spec.boundaries.push_back({BoundaryKind::rotational, q});
    for (int r : o.averagingR) spec.boundaries.push_back({BoundaryKind::averagingExistence, r});
    spec.validate();
    if (o.jobs < 1) throw DomainError("--jobs must be at least 1");

    std::vector<sweep::Format> formats;
    for (const auto& f : o.formats) {
        if (f == "csv") formats.push_back(sweep::Format::csv);
        else if (f == "json") formats.push_back(sweep::Format::json);
        else if (f == "svg") formats.push_back(sweep::Format::svg);
        else throw DomainError("unknown format: " + f);
    }
    std::error_code ec;
    std::filesystem::create_directories(o.outputDir, ec);
    if (ec) throw DomainError("cannot create output directory " + o.outputDir + ": " + ec.message());

    sweep::Progress progress;
    if (!o.quiet) {
        progress = [](std::size_t done, std::size_t total) {
            if (done == total || done % 100 == 0) std::cerr << "\rcells " << done << "/" << total << std::flush;
            if (done == total) std::cerr << '\n';
        };
    }
    const auto result = sweep::runSweep(spec, o.jobs, progress);
    for (auto f : formats) std::cout << sweep::exportMap(result, f, o.outputDir).string() << '\n';
}

// ---- elliptic-check ----------------------------------------------------

int runEllipticCheck() {
    using namespace elliptic;
    int failures = 0;
    auto check = [&](const std::string& name, double got, double want, double tol) {
        const bool ok = std::abs(got - want) <= tol;
        std::cout << (ok ? "PASS " : "FAIL ") << name << " got=" << std::setprecision(17) << got << " want=" << want
                  << '\n';
        if (!ok) ++failures;
    };
    check("K(0) = pi/2", ellipK(0.0), kPi / 2, 1e-15);
    check("E(0) = pi/2", ellipE(0.0), kPi / 2, 1e-15);
    check("E(1) = 1", ellipE(1.0), 1.0, 1e-15);
    for (double k : {0.1, 0.5, 0.9, 0.999}) {
        const Modulus m = Modulus::fromK(k);
        const double K = ellipK(m), E = ellipE(m), Kp = ellipK(m.complement()), Ep = ellipE(m.complement());
        check("Legendre relation k=" + std::to_string(k), E * Kp + Ep * K - K * Kp, kPi / 2, 1e-13);
        const double kQuad = quadrature::adaptive(
            [k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); }, 0.0, kPi / 2);
        check("K quadrature k=" + std::to_string(k), K, kQuad, 1e-12 * K);
        for (double u : {0.3, 1.1, 2.5}) {
            const auto f = jacobiSnCnDn(u, m);
            check("sn^2+cn^2 k=" + std::to_string(k) + " u=" + std::to_string(u), f.sn * f.sn + f.cn * f.cn, 1.0,
                  1e-14);
            const double phi = jacobiAm(u, m);
            const double uBack = quadrature::adaptive(
                [k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); }, 0.0, phi);
            check("F(am(u)) = u k=" + std::to_string(k) + " u=" + std::to_string(u), uBack, u, 1e-12);
        }
    }
    std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " checks failed") << '\n';
    return failures == 0 ? 0 : 2;
}

// ---- config file -------------------------------------------------------

bool isFlag(const CLI::Option* opt) { return opt->get_expected_min() == 0; }

/// Expands --config into leading arguments so explicit flags win.
std::vector<std::string> expandConfig(CLI::App& app, const std::vector<std::string>& args) {
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw DomainError("--config needs a file name");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;
    const auto it = std::find_if(rest.begin(), rest.end(), [](const std::string& a) { return a.empty() || a[0] != '-'; });
    if (it == rest.end()) throw DomainError("--config requires a subcommand");
    CLI::App* sub = app.get_subcommand_no_throw(*it);
    if (sub == nullptr) throw DomainError("unknown subcommand: " + *it);
    std::vector<std::string> injected;
    for (const auto& [key, value] : readKeyValueFile(path)) {
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr) throw DomainError("unknown key '" + key + "' in " + path);
        if (isFlag(opt)) {
            if (value == "true" || value == "1") injected.push_back("--" + key);
            else if (value != "false" && value != "0") throw DomainError("key '" + key + "' expects true or false");
        } else if (opt->get_expected_max() > 1) {
            injected.push_back("--" + key);
            std::istringstream in(value);
            for (std::string item; in >> item;) injected.push_back(item);
        } else {
            injected.push_back("--" + key);
            injected.push_back(value);
        }
    }
    rest.insert(it + 1, injected.begin(), injected.end());
    return rest;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"Pendulum with periodically varying length: Melnikov and averaging boundaries, simulation, "
                 "regime maps"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--config", "key = value file supplying flags for the subcommand");

    SimulateOpts sim;
    auto* simCmd = app.add_subcommand("simulate", "Integrate one trajectory and export it");
    addPhysics(simCmd, sim.phys);
    addIntegrator(simCmd, sim.integ);
    simCmd->add_option("--theta0", sim.theta0);
    simCmd->add_option("--v0", sim.v0);
    simCmd->add_option("--tau0", sim.tau0);
    simCmd->add_option("--periods", sim.periods, "Excitation periods to integrate");
    simCmd->add_flag("--sections-only", sim.sectionsOnly, "Only output stroboscopic samples");
    simCmd->add_option("--format", sim.format)->check(CLI::IsMember({"csv", "json"}));
    simCmd->add_option("-o,--output", sim.output, "Output file (default stdout)");

    ClassifyOpts cls;
    auto* clsCmd = app.add_subcommand("classify", "Label the long-time regime of one trajectory");
    addPhysics(clsCmd, cls.phys);
    addClassifier(clsCmd, cls.cls);
    clsCmd->add_option("--theta0", cls.theta0);
    clsCmd->add_option("--v0", cls.v0);
    clsCmd->add_option("--tau0", cls.tau0);
    clsCmd->add_option("-o,--output", cls.output);

    MelnikovOpts mel;
    auto* melCmd = app.add_subcommand("melnikov", "Melnikov threshold curves and M(tau0) tables");
    melCmd->add_option("--kind", mel.kind)->check(CLI::IsMember({"homoclinic", "oscillatory", "rotational"}));
    melCmd->add_option("--omega-min", mel.omegaMin);
    melCmd->add_option("--omega-max", mel.omegaMax);
    melCmd->add_option("--n", mel.n, "Number of omega samples");
    melCmd->add_option("--q", mel.q, "Resonance period multiple");
    melCmd->add_option("--scale", mel.scale, "Multiply thresholds (e.g. by beta for an eps axis)");
    melCmd->add_flag("--table", mel.table, "Tabulate M(tau0) at --eps/--beta/--omega");
    melCmd->add_option("--eps", mel.eps);
    melCmd->add_option("--beta", mel.beta);
    melCmd->add_option("--omega", mel.omega);
    melCmd->add_option("--tau-points", mel.tauPoints);
    melCmd->add_flag("--quadrature", mel.quadratureColumn, "Add a column from direct quadrature");
    melCmd->add_option("--format", mel.format)->check(CLI::IsMember({"csv", "json"}));
    melCmd->add_option("-o,--output", mel.output);

    AveragingOpts avg;
    auto* avgCmd = app.add_subcommand("averaging", "Averaged rotation branches, stability and existence");
    addPhysics(avgCmd, avg.phys);
    avgCmd->add_option("--r", avg.r);
    avgCmd->add_option("--q", avg.q);
    avgCmd->add_option("--eps-grid", avg.epsGrid, "min:max:n; output an existence/stability table as CSV");
    avgCmd->add_option("-o,--output", avg.output);

    SweepOpts sw;
    auto* swCmd = app.add_subcommand("sweep", "Regime map over the (omega, eps) plane");
    swCmd->add_option("--omega-range", sw.omegaRange, "min:max:n");
    swCmd->add_option("--eps-range", sw.epsRange, "min:max:n");
    swCmd->add_option("--beta", sw.beta);
    swCmd->add_option("--harmonics", sw.harmonics);
    addClassifier(swCmd, sw.cls);
    swCmd->add_option("--start", sw.starts, "Initial condition theta,v[,tau]; repeatable")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    swCmd->add_flag("--homoclinic", sw.homoclinic, "Overlay the homoclinic boundary");
    swCmd->add_option("--osc-q", sw.oscQ)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    swCmd->add_option("--rot-q", sw.rotQ)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    swCmd->add_option("--averaging-r", sw.averagingR)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    swCmd->add_option("--jobs", sw.jobs, "Worker threads");
    swCmd->add_option("--output-dir", sw.outputDir);
    swCmd->add_option("--format", sw.formats)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    swCmd->add_flag("--quiet", sw.quiet, "No progress on stderr");

    auto* ellCmd = app.add_subcommand("elliptic-check", "Self-test of the special functions");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expandConfig(app, args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*simCmd) runSimulate(sim);
        else if (*clsCmd) runClassify(cls);
        else if (*melCmd) runMelnikov(mel);
        else if (*avgCmd) runAveraging(avg);
        else if (*swCmd) runSweepCommand(sw);
        else if (*ellCmd) return runEllipticCheck();
        return 0;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}

} // namespace ppvl::cli
