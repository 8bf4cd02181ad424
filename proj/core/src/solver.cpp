#include "epns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <stdexcept>

#include "epns/errors.hpp"
#include "epns/snapshot.hpp"
#include "epns/spectral_ops.hpp"

namespace epns {

namespace {

using Samples = std::vector<double>;
using VectorSamples = std::array<Samples, 3>;

// Random Hermitian coefficients on the shell band; zero mode and Nyquist
// planes excluded so the odd-wavevector operators act exactly.
SpectralField random_band_field(const GridPtr& grid, std::mt19937_64& rng, double lo, double hi) {
    const auto& g = *grid;
    const std::size_t nyquist = g.points_per_axis() / 2;
    std::normal_distribution<double> normal;
    SpectralField f(grid, true);
    for (std::size_t m = 0; m < g.size(); ++m) {
        const double a = normal(rng);
        const double b = normal(rng);
        const auto ijk = g.unflatten(m);
        if (m == 0 || ijk[0] == nyquist || ijk[1] == nyquist || ijk[2] == nyquist) continue;
        const double shell = std::sqrt(g.k2(m)) / g.fundamental();
        if (shell < lo || shell > hi) continue;
        f[m] = Complex(a, b);
    }
    f.enforce_hermitian();
    return f;
}

double max_abs(const Samples& s) {
    double m = 0.0;
    for (double x : s) m = std::max(m, std::abs(x));
    return m;
}

double max_magnitude(const VectorSamples& s) {
    double m = 0.0;
    for (std::size_t i = 0; i < s[0].size(); ++i)
        m = std::max(m, std::sqrt(s[0][i] * s[0][i] + s[1][i] * s[1][i] + s[2][i] * s[2][i]));
    return m;
}

SpectralField density_from_sigma(const GridPtr& grid, const Samples& sigma) {
    Samples n(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (!(std::abs(sigma[i]) < 0.5)) throw std::invalid_argument("density perturbation must satisfy |rho0 - 1| < 1/2");
        n[i] = std::log1p(sigma[i]);
    }
    return transform_forward(grid, n);
}

VectorSpectralField scaled_random_vector(const GridPtr& grid, std::mt19937_64& rng, const InitialDataSpec& spec,
                                         bool solenoidal) {
    VectorSpectralField v(random_band_field(grid, rng, spec.band_low, spec.band_high),
                          random_band_field(grid, rng, spec.band_low, spec.band_high),
                          random_band_field(grid, rng, spec.band_low, spec.band_high));
    if (solenoidal) v = leray_project(v);
    const double peak = max_magnitude(transform_inverse(v));
    if (peak == 0.0) throw std::invalid_argument("initial-data band contains no modes");
    v *= spec.amplitude / peak;
    return v;
}

SpectralField transform_dealiased(const GridPtr& grid, const Samples& s, bool dealias_on) {
    auto f = transform_forward(grid, s);
    return dealias_on ? dealias(std::move(f)) : f;
}

VectorSpectralField transform_dealiased(const GridPtr& grid, const VectorSamples& s, bool dealias_on) {
    auto f = transform_forward(grid, s);
    return dealias_on ? dealias(std::move(f)) : f;
}

// (w . grad) a for physical w and the spectral vector field a.
VectorSamples advect(const VectorSamples& w, const VectorSpectralField& a) {
    VectorSamples out;
    for (int c = 0; c < 3; ++c) {
        const auto grad = transform_inverse(gradient(a[c]));
        out[c].assign(w[0].size(), 0.0);
        for (std::size_t i = 0; i < w[0].size(); ++i)
            out[c][i] = w[0][i] * grad[0][i] + w[1][i] * grad[1][i] + w[2][i] * grad[2][i];
    }
    return out;
}

void add_scaled(SystemState& s, double h, const NonlinearTerms& f) {
    s.n.axpy(h, f.f1);
    s.u.axpy(h, f.f2);
    s.v.axpy(h, f.f3);
}

bool all_finite(const SpectralField& f) {
    for (const Complex& c : f.coefficients())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

bool all_finite(const SystemState& s) {
    if (!all_finite(s.n)) return false;
    for (int a = 0; a < 3; ++a)
        if (!all_finite(s.u[a]) || !all_finite(s.v[a])) return false;
    return true;
}

void write_state_snapshot(const std::filesystem::path& dir, std::size_t step, const SystemState& s) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%06zu.epns", step);
    write_snapshot(dir / name, make_snapshot(s.t, {&s.n, &s.u[0], &s.u[1], &s.u[2], &s.v[0], &s.v[1], &s.v[2]}));
}

}  // namespace

Scheme parse_scheme(const std::string& name) {
    if (name == "etd1" || name == "ETD1") return Scheme::ETD1;
    if (name == "etd2rk" || name == "ETD2RK") return Scheme::ETD2RK;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

void SolverConfig::validate() const {
    if (points < 4 || points % 2 != 0) throw std::invalid_argument("points per axis must be even and >= 4");
    if (!(box > 0.0) || !std::isfinite(box)) throw std::invalid_argument("box length must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be >= 0");
    if (record_every == 0) throw std::invalid_argument("record cadence must be >= 1");
    if (!(cutoffs.low > 0.0) || !(cutoffs.high > cutoffs.low)) throw std::invalid_argument("cutoffs need 0 < r0 < R0");
}

void InitialDataSpec::validate() const {
    if (!(amplitude >= 0.0) || !(amplitude < 0.5)) throw std::invalid_argument("amplitude must lie in [0, 1/2)");
    if (!(band_low >= 0.0) || !(band_high >= band_low)) throw std::invalid_argument("band needs 0 <= low <= high");
}

InitialDataSpec::Kind parse_initial_kind(const std::string& name) {
    if (name == "random") return InitialDataSpec::Kind::RandomBandLimited;
    if (name == "single-mode") return InitialDataSpec::Kind::SingleMode;
    if (name == "file") return InitialDataSpec::Kind::File;
    throw std::invalid_argument("unknown initial-data kind '" + name + "'");
}

SystemState make_initial(const GridPtr& grid, const InitialDataSpec& spec, Model model) {
    spec.validate();
    const auto& g = *grid;
    SystemState s = SystemState::zero(grid);

    switch (spec.kind) {
        case InitialDataSpec::Kind::RandomBandLimited: {
            if (spec.amplitude == 0.0) return s;
            std::mt19937_64 rng(spec.seed);
            auto sigma_hat = random_band_field(grid, rng, spec.band_low, spec.band_high);
            auto sigma = transform_inverse(sigma_hat);
            const double peak = max_abs(sigma);
            if (peak == 0.0) throw std::invalid_argument("initial-data band contains no modes");
            for (double& x : sigma) x *= spec.amplitude / peak;
            s.n = density_from_sigma(grid, sigma);
            s.u = scaled_random_vector(grid, rng, spec, false);
            if (model == Model::EPNS) s.v = scaled_random_vector(grid, rng, spec, true);
            break;
        }
        case InitialDataSpec::Kind::SingleMode: {
            const auto& m = spec.mode;
            if (m[0] == 0 && m[1] == 0 && m[2] == 0) throw std::invalid_argument("single mode must be nonzero");
            const Vec3 k{g.fundamental() * m[0], g.fundamental() * m[1], g.fundamental() * m[2]};
            // Unit vector perpendicular to m.
            Vec3 e = std::abs(m[0]) >= std::abs(m[1]) ? Vec3{-k[2], 0.0, k[0]} : Vec3{0.0, k[2], -k[1]};
            if (e[0] == 0.0 && e[1] == 0.0 && e[2] == 0.0) e = {k[1], -k[0], 0.0};
            const double len = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
            for (double& x : e) x /= len;
            const double eps = spec.amplitude;
            auto wave = [&](double x, double y, double z) { return std::cos(k[0] * x + k[1] * y + k[2] * z); };
            s.n = density_from_sigma(grid, sample(g, [&](double x, double y, double z) { return eps * wave(x, y, z); }));
            VectorSamples w;
            for (int a = 0; a < 3; ++a)
                w[a] = sample(g, [&](double x, double y, double z) { return eps * e[a] * wave(x, y, z); });
            (model == Model::EPNS ? s.v : s.u) = transform_forward(grid, w);
            break;
        }
        case InitialDataSpec::Kind::File: {
            const auto snap = read_snapshot(spec.file);
            if (snap.components.size() != 7) throw std::invalid_argument("initial snapshot needs 7 components (n, u, v)");
            s.t = snap.time;
            s.n = snap.field(grid, 0);
            for (int a = 0; a < 3; ++a) {
                s.u[a] = snap.field(grid, 1 + a);
                s.v[a] = snap.field(grid, 4 + a);
            }
            for (double n : transform_inverse(s.n))
                if (!(std::abs(std::expm1(n)) < 0.5))
                    throw std::invalid_argument("initial density must satisfy |rho0 - 1| < 1/2");
            if (model == Model::EPNS) s.v = leray_project(s.v);
            else s.v = VectorSpectralField(grid);
            break;
        }
    }
    return s;
}

NonlinearTerms nonlinear_terms(const SystemState& state, Model model, bool dealias_on) {
    if (!state.shares_grid()) throw std::invalid_argument("state fields must share one grid");
    const auto& grid = state.grid_ptr();
    const std::size_t size = state.grid().size();

    const Samples n = transform_inverse(state.n);
    const VectorSamples u = transform_inverse(state.u);
    const VectorSamples grad_n = transform_inverse(gradient(state.n));

    Samples transport(size), excess(size), em1(size);
    for (std::size_t i = 0; i < size; ++i) {
        transport[i] = -(u[0][i] * grad_n[0][i] + u[1][i] * grad_n[1][i] + u[2][i] * grad_n[2][i]);
        em1[i] = std::expm1(n[i]);
        excess[i] = em1[i] - n[i];
    }

    NonlinearTerms out{transform_dealiased(grid, transport, dealias_on), {}, VectorSpectralField(grid)};
    out.f2 = transform_dealiased(grid, advect(u, state.u), dealias_on);
    out.f2 *= -1.0;
    out.f2 -= poisson_gradient(transform_dealiased(grid, excess, dealias_on));

    if (model == Model::EPNS) {
        const VectorSamples v = transform_inverse(state.v);
        VectorSamples rhs = advect(v, state.v);
        for (int a = 0; a < 3; ++a)
            for (std::size_t i = 0; i < size; ++i) rhs[a][i] = em1[i] * (u[a][i] - v[a][i]) - rhs[a][i];
        out.f3 = leray_project(transform_dealiased(grid, rhs, dealias_on));
    }
    return out;
}

SpectralField recover_pressure(const SystemState& state, bool dealias_on) {
    const auto& grid = state.grid_ptr();
    const auto& g = *grid;
    const Samples n = transform_inverse(state.n);
    const VectorSamples u = transform_inverse(state.u);
    const VectorSamples v = transform_inverse(state.v);
    VectorSamples rhs = advect(v, state.v);
    for (int a = 0; a < 3; ++a)
        for (std::size_t i = 0; i < g.size(); ++i) rhs[a][i] = std::exp(n[i]) * (u[a][i] - v[a][i]) - rhs[a][i];
    const auto r = transform_dealiased(grid, rhs, dealias_on);

    SpectralField p(grid, true);
    for (std::size_t m = 0; m < g.size(); ++m) {
        const double k2 = g.odd_k2(m);
        if (k2 == 0.0) continue;
        const Vec3 xi = g.odd_wavevector(m);
        p[m] = Complex(0.0, -1.0) * (xi[0] * r[0][m] + xi[1] * r[1][m] + xi[2] * r[2][m]) / k2;
    }
    return p;
}

double stability_cap(const SystemState& state) {
    const auto& g = state.grid();
    const double k_max = g.fundamental() * static_cast<double>(g.points_per_axis() / 2);
    const double u = max_magnitude(transform_inverse(state.u));
    const double v = max_magnitude(transform_inverse(state.v));
    return 0.5 / (k_max * u + k_max * v + 1.0);
}

Integrator::Integrator(GridPtr grid, Scheme scheme, Model model, bool dealias_on, bool nonlinear)
    : grid_(std::move(grid)), scheme_(scheme), model_(model), dealias_(dealias_on), nonlinear_(nonlinear) {}

const PropagatorTable& Integrator::table(double dt) {
    auto it = tables_.find(dt);
    if (it == tables_.end()) it = tables_.emplace(dt, std::make_unique<PropagatorTable>(grid_, dt, model_)).first;
    return *it->second;
}

NonlinearTerms Integrator::forcing(const SystemState& state) const {
    if (!nonlinear_) return {SpectralField(grid_), VectorSpectralField(grid_), VectorSpectralField(grid_)};
    return nonlinear_terms(state, model_, dealias_);
}

void Integrator::step(SystemState& state, double dt, std::size_t step_index) {
    if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
    if (state.grid_ptr() != grid_) throw std::invalid_argument("state grid does not match integrator");
    const auto& S = table(dt);
    const auto f0 = forcing(state);

    if (scheme_ == Scheme::ETD1) {
        add_scaled(state, dt, f0);
        S.apply(state.n, state.u, state.v);
    } else {
        SystemState predictor = state;
        add_scaled(predictor, dt, f0);
        S.apply(predictor.n, predictor.u, predictor.v);
        predictor.t = state.t + dt;
        const auto f1 = forcing(predictor);
        // S(eta) + dt/2 S(F0) = S(eta + dt/2 F0) by linearity.
        add_scaled(state, 0.5 * dt, f0);
        S.apply(state.n, state.u, state.v);
        add_scaled(state, 0.5 * dt, f1);
    }

    if (model_ == Model::EPNS) state.v = leray_project(state.v);
    if (state.n.is_real()) state.n.enforce_hermitian();
    if (state.u.is_real()) state.u.enforce_hermitian();
    if (state.v.is_real()) state.v.enforce_hermitian();
    state.t += dt;
    if (!all_finite(state)) throw NumericalFailure("non-finite coefficient", step_index);
}

SystemState step(const SystemState& state, double dt, Scheme scheme, Model model) {
    SystemState out = state;
    Integrator(state.grid_ptr(), scheme, model).step(out, dt);
    return out;
}

RunResult run(const SolverConfig& config, SystemState initial, const RunObserver& observer) {
    config.validate();
    if (!initial.shares_grid()) throw std::invalid_argument("state fields must share one grid");
    const auto grid = initial.grid_ptr();
    if (grid->points_per_axis() != config.points || grid->box_length() != config.box)
        throw std::invalid_argument("initial state grid does not match the configuration");

    std::ofstream csv;
    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        csv.open(config.out_dir / "diagnostics.csv");
        if (!csv) throw std::runtime_error("cannot write " + (config.out_dir / "diagnostics.csv").string());
        write_csv_header(csv);
    }

    RunResult result{std::move(initial), {}, 0};
    SystemState& state = result.final_state;
    bool warned = false;
    auto emit = [&](std::size_t step_index) {
        const auto& rec = result.history.push(record(state));
        if (csv.is_open()) write_csv_row(csv, rec);
        if (!rec.in_small_data_regime() && !warned) {
            std::cerr << "warning: density left [4/5, 5/4] at t = " << rec.t << " (step " << step_index << ")\n";
            warned = true;
        }
        if (observer) observer(state, rec);
    };
    auto snapshot = [&](std::size_t step_index) {
        if (config.snapshot_every != 0 && !config.out_dir.empty() && step_index % config.snapshot_every == 0)
            write_state_snapshot(config.out_dir, step_index, state);
    };

    emit(0);
    snapshot(0);
    const double t_target = state.t + config.t_end;
    const std::size_t steps =
        config.t_end == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(config.t_end / config.dt - 1e-9));
    Integrator integrator(grid, config.scheme, config.model, config.dealias, config.nonlinear);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double h = i == steps ? t_target - state.t : config.dt;
        if (!(h > 0.0)) break;
        if (config.nonlinear && h > stability_cap(state) * (1.0 + 1e-12))
            throw NumericalFailure("time step exceeds the advective stability cap", i);
        integrator.step(state, h, i);
        if (i == steps) state.t = t_target;
        result.steps = i;
        if (i % config.record_every == 0 || i == steps) emit(i);
        snapshot(i);
    }
    return result;
}

}  // namespace epns
