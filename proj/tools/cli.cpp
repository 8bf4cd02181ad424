#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "epns/decay.hpp"
#include "epns/diagnostics.hpp"
#include "epns/errors.hpp"
#include "epns/propagator.hpp"
#include "epns/solver.hpp"

namespace epns {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Writes to the file at `path`, or to stdout when the path is empty.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw std::invalid_argument("cannot write " + path);
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

struct EigenArgs {
    double rmin = 1e-3;
    double rmax = 10.0;
    std::size_t samples = 100;
    double t = 1.0;
    std::string out;
};

void run_eigen(const EigenArgs& a) {
    if (!(a.rmin > 0.0) || !(a.rmax > a.rmin)) throw std::invalid_argument("need 0 < rmin < rmax");
    Output out(a.out);
    auto& os = out.stream();
    os << "r,re_lambda1,im_lambda1,lambda3,lambda4,phi11_re,d_abs,phiq_re,psi_perp,psi12,psi33\n";
    for (double r : log_spaced(a.rmin, a.rmax, a.samples)) {
        const auto s = symbols(a.t, r);
        os << num(r) << ',' << num(s.acoustic.lambda1.real()) << ',' << num(s.acoustic.lambda1.imag()) << ','
           << num(s.parabolic.lambda3) << ',' << num(s.parabolic.lambda4) << ',' << num(s.phi11.real()) << ','
           << num(std::abs(s.d)) << ',' << num(s.phiq.real()) << ',' << num(s.psi_perp) << ',' << num(s.psi12)
           << ',' << num(s.psi33) << '\n';
    }
}

struct DecayArgs {
    std::string target = "v";
    int k = 0;
    std::string profile = "gaussian:sigma=1,A=1";
    std::string component = "v";
    std::string alignment = "aligned";
    double tmin = 1e2;
    double tmax = 1e4;
    std::size_t samples = 25;
    std::string out;
};

void run_linear_decay(const DecayArgs& a) {
    InitialProfiles p;
    const auto profile = RadialProfile::parse(a.profile);
    if (a.component == "n") p.density = profile;
    else if (a.component == "u-long") p.longitudinal_u = profile;
    else if (a.component == "u") p.transverse_u = profile;
    else if (a.component == "v") p.transverse_v = profile;
    else throw std::invalid_argument("unknown component '" + a.component + "'");
    const Alignment align = a.alignment == "orthogonal" ? Alignment::Orthogonal : Alignment::Aligned;
    const Target target = parse_target(a.target);

    Output out(a.out);
    auto& os = out.stream();
    os << "t,value\n";
    for (double t : log_spaced(a.tmin, a.tmax, a.samples))
        os << num(t) << ',' << num(linear_l2_norm(t, a.k, p, target, align)) << '\n';
}

struct LowerBoundArgs {
    double alpha0 = 1.0;
    double r0 = 0.5;
    std::string kind = "velocity";
    double tmin = 1e2;
    double tmax = 1e4;
    std::size_t samples = 25;
    std::string out;
};

void run_lower_bound(const LowerBoundArgs& a) {
    if (!(a.alpha0 > 0.0)) throw std::invalid_argument("alpha0 must be positive");
    const LowerBoundKind kind = a.kind == "diff" ? LowerBoundKind::Difference
                                : a.kind == "velocity"
                                    ? LowerBoundKind::Velocity
                                    : throw std::invalid_argument("unknown bound kind '" + a.kind + "'");
    const auto profiles = lower_bound_profiles(a.alpha0, a.r0);
    const auto v0 = [&](const Vec3& xi) {
        const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        return CVec3{(*profiles.transverse_v)(r), 0.0, 0.0};
    };
    const double margin = lower_bound_margin([](const Vec3&) { return CVec3{}; }, v0, a.r0);
    std::cerr << "margin = " << num(margin) << '\n';

    Output out(a.out);
    auto& os = out.stream();
    os << "t,bound,upper\n";
    for (double t : log_spaced(a.tmin, a.tmax, a.samples)) {
        double upper = 0.0;
        if (kind == LowerBoundKind::Velocity)
            upper = linear_l2_norm(t, 0, profiles, Target::VelocityU) + linear_l2_norm(t, 0, profiles, Target::VelocityV);
        else
            upper = linear_l2_norm(t, 0, profiles, Target::Difference);
        os << num(t) << ',' << num(lower_bound_norm(t, a.alpha0, a.r0, kind)) << ',' << num(upper) << '\n';
    }
}

struct SimulateArgs {
    std::size_t n = 32;
    double box = 2.0 * std::numbers::pi;
    double dt = 1e-2;
    double tend = 1.0;
    double eps = 1e-3;
    std::uint64_t seed = 1;
    std::string scheme = "etd2rk";
    std::string initial = "random";
    std::string initial_file;
    double band_low = 1.0;
    double band_high = 2.0;
    double r0 = 0.5;
    double R0 = 2.0;
    std::string out;
    std::size_t snapshot_every = 0;
    std::size_t record_every = 1;
    bool no_dealias = false;
};

void run_simulation(const SimulateArgs& a, Model model) {
    SolverConfig cfg;
    cfg.points = a.n;
    cfg.box = a.box;
    cfg.cutoffs = {a.r0, a.R0};
    cfg.dt = a.dt;
    cfg.t_end = a.tend;
    cfg.scheme = parse_scheme(a.scheme);
    cfg.model = model;
    cfg.dealias = !a.no_dealias;
    cfg.record_every = a.record_every;
    cfg.snapshot_every = a.snapshot_every;
    cfg.out_dir = a.out;
    cfg.validate();

    InitialDataSpec spec;
    spec.kind = parse_initial_kind(a.initial);
    spec.amplitude = a.eps;
    spec.seed = a.seed;
    spec.band_low = a.band_low;
    spec.band_high = a.band_high;
    spec.file = a.initial_file;

    const auto grid = SpectralGrid::make(cfg.points, cfg.box, cfg.cutoffs);
    const auto result = run(cfg, make_initial(grid, spec, model));
    if (a.out.empty()) {
        write_csv_header(std::cout);
        for (const auto& r : result.history.records()) write_csv_row(std::cout, r);
    } else {
        write_csv_header(std::cout);
        write_csv_row(std::cout, result.history.back());
    }
}

struct FitArgs {
    std::string input;
    std::string model = "power";
    std::vector<double> window;
    std::string column;
};

void run_fit(const FitArgs& a) {
    std::ifstream in(a.input);
    if (!in) throw std::invalid_argument("cannot open " + a.input);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV " + a.input);
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 2) throw std::invalid_argument("CSV needs a time column and a value column");
    std::size_t col = 1;
    if (!a.column.empty()) {
        auto it = std::find(header.begin(), header.end(), a.column);
        if (it == header.end()) throw std::invalid_argument("no column '" + a.column + "'");
        col = static_cast<std::size_t>(it - header.begin());
    }
    DecaySeries series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() <= col) throw std::invalid_argument("short CSV row: " + line);
        series.times.push_back(row[0]);
        series.values.push_back(row[col]);
    }
    if (series.times.empty()) throw std::invalid_argument("CSV has no data rows");
    double lo = series.times.front(), hi = series.times.back();
    if (!a.window.empty()) {
        if (a.window.size() != 2 || !(a.window[1] > a.window[0])) throw std::invalid_argument("window needs a,b with a < b");
        lo = a.window[0];
        hi = a.window[1];
    }
    FitModel model;
    if (a.model == "power") model = FitModel::PowerLaw;
    else if (a.model == "exp") model = FitModel::Exponential;
    else throw std::invalid_argument("unknown fit model '" + a.model + "'");

    const auto fit = fit_decay(series, lo, hi, model);
    std::cout << "slope " << num(fit.slope) << '\n'
              << "intercept " << num(fit.intercept) << '\n'
              << "rms_residual " << num(fit.rms_residual) << '\n'
              << "r_squared " << num(fit.r_squared) << '\n'
              << "samples " << fit.samples << '\n';
}

void add_simulation_flags(CLI::App* sub, SimulateArgs& a) {
    sub->add_option("--n", a.n, "Grid points per axis")->capture_default_str();
    sub->add_option("--box", a.box, "Box length L")->capture_default_str();
    sub->add_option("--dt", a.dt, "Time step")->capture_default_str();
    sub->add_option("--tend", a.tend, "Final time")->capture_default_str();
    sub->add_option("--eps", a.eps, "Initial amplitude (max |rho0 - 1|, max |u0|, max |v0|)")->capture_default_str();
    sub->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    sub->add_option("--scheme", a.scheme, "Time integrator")
        ->check(CLI::IsMember({"etd1", "etd2rk"}))
        ->capture_default_str();
    sub->add_option("--initial", a.initial, "Initial data kind")
        ->check(CLI::IsMember({"random", "single-mode", "file"}))
        ->capture_default_str();
    sub->add_option("--initial-file", a.initial_file, "Snapshot with (n, u, v) for --initial file");
    sub->add_option("--band-low", a.band_low, "Lowest shell |m| of random data")->capture_default_str();
    sub->add_option("--band-high", a.band_high, "Highest shell |m| of random data")->capture_default_str();
    sub->add_option("--r0", a.r0, "Low-frequency cutoff radius")->capture_default_str();
    sub->add_option("--R0", a.R0, "High-frequency cutoff radius")->capture_default_str();
    sub->add_option("--out", a.out, "Output directory for diagnostics.csv and snapshots");
    sub->add_option("--snapshot-every", a.snapshot_every, "Snapshot cadence in steps (0 = none)")->capture_default_str();
    sub->add_option("--record-every", a.record_every, "Diagnostics cadence in steps")->capture_default_str();
    sub->add_flag("--no-dealias", a.no_dealias, "Disable the 2/3-rule truncation of products");
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"EP-NS numerical laboratory"};
    app.set_config("--config", "", "INI file, one [section] per subcommand");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    EigenArgs eigen;
    auto* eig = app.add_subcommand("eigen", "Eigenvalues and propagator symbols over a log-spaced r grid");
    eig->add_option("--rmin", eigen.rmin, "Smallest |xi|")->capture_default_str();
    eig->add_option("--rmax", eigen.rmax, "Largest |xi|")->capture_default_str();
    eig->add_option("--samples", eigen.samples, "Number of rows")->capture_default_str();
    eig->add_option("--t", eigen.t, "Time at which symbols are evaluated")->capture_default_str();
    eig->add_option("--out", eigen.out, "CSV path (stdout when omitted)");

    DecayArgs decay;
    auto* dec = app.add_subcommand("linear-decay", "Whole-space linear norm series by radial quadrature");
    dec->add_option("--target", decay.target, "Component whose norm is reported")
        ->check(CLI::IsMember({"n", "u", "v", "diff"}))
        ->capture_default_str();
    dec->add_option("--k", decay.k, "Derivative order")->check(CLI::Range(0, 3))->capture_default_str();
    dec->add_option("--profile", decay.profile, "gaussian:sigma=..,A=.. | bump:A=..,rc=..[,width=..] | tabulated:file=..")
        ->capture_default_str();
    dec->add_option("--component", decay.component, "Initial field carrying the profile")
        ->check(CLI::IsMember({"n", "u-long", "u", "v"}))
        ->capture_default_str();
    dec->add_option("--alignment", decay.alignment, "Transverse alignment of u0 and v0")
        ->check(CLI::IsMember({"aligned", "orthogonal"}))
        ->capture_default_str();
    dec->add_option("--tmin", decay.tmin, "First time")->capture_default_str();
    dec->add_option("--tmax", decay.tmax, "Last time")->capture_default_str();
    dec->add_option("--samples", decay.samples, "Log-spaced samples")->capture_default_str();
    dec->add_option("--out", decay.out, "CSV path (stdout when omitted)");

    LowerBoundArgs lower;
    auto* low = app.add_subcommand("lower-bound", "Leading lower-bound integral against the quadrature norm");
    low->add_option("--alpha0", lower.alpha0, "Amplitude of v0 on |xi| < r0")->capture_default_str();
    low->add_option("--r0", lower.r0, "Radius of the lower-bound ball")->capture_default_str();
    low->add_option("--kind", lower.kind, "velocity: ||u|| + ||v||, diff: ||u - v||")
        ->check(CLI::IsMember({"velocity", "diff"}))
        ->capture_default_str();
    low->add_option("--tmin", lower.tmin, "First time")->capture_default_str();
    low->add_option("--tmax", lower.tmax, "Last time")->capture_default_str();
    low->add_option("--samples", lower.samples, "Log-spaced samples")->capture_default_str();
    low->add_option("--out", lower.out, "CSV path (stdout when omitted)");

    SimulateArgs sim;
    auto* simc = app.add_subcommand("simulate", "Nonlinear EP-NS run on the periodic box");
    add_simulation_flags(simc, sim);
    SimulateArgs damped;
    auto* dampc = app.add_subcommand("damped-ep", "Nonlinear damped Euler-Poisson run on the periodic box");
    add_simulation_flags(dampc, damped);

    FitArgs fit;
    auto* fitc = app.add_subcommand("fit", "Least-squares decay fit of a t,value CSV");
    fitc->add_option("input", fit.input, "CSV file; first column is t")->required();
    fitc->add_option("--model", fit.model, "power: log-log in (1 + t), exp: log-linear in t")
        ->check(CLI::IsMember({"power", "exp"}))
        ->capture_default_str();
    fitc->add_option("--window", fit.window, "Fit window a,b")->delimiter(',')->expected(2);
    fitc->add_option("--column", fit.column, "Value column name (default: second column)");

    for (auto* sub : app.get_subcommands({})) sub->allow_config_extras(CLI::config_extras_mode::error);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*eig) run_eigen(eigen);
        else if (*dec) run_linear_decay(decay);
        else if (*low) run_lower_bound(lower);
        else if (*simc) run_simulation(sim, Model::EPNS);
        else if (*dampc) run_simulation(damped, Model::DampedEP);
        else if (*fitc) run_fit(fit);
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace epns
