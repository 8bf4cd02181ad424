#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "epns/diagnostics.hpp"
#include "epns/propagator.hpp"
#include "epns/state.hpp"

namespace epns {

enum class Scheme { ETD1, ETD2RK };

Scheme parse_scheme(const std::string& name);

struct SolverConfig {
    std::size_t points = 32;
    double box = 6.283185307179586;
    CutoffRadii cutoffs{};
    double dt = 1e-2;
    double t_end = 1.0;
    Scheme scheme = Scheme::ETD2RK;
    Model model = Model::EPNS;
    bool dealias = true;
    /// With false the nonlinear terms are forced to zero (pure linear flow).
    bool nonlinear = true;
    /// Records every k-th step (the first and last steps are always recorded).
    std::size_t record_every = 1;
    /// Writes a snapshot every k-th step; 0 disables snapshots.
    std::size_t snapshot_every = 0;
    /// Directory for diagnostics.csv and snapshots; empty writes nothing.
    std::filesystem::path out_dir;

    /// Throws std::invalid_argument on nonpositive sizes or dt, negative t_end.
    void validate() const;
};

struct InitialDataSpec {
    enum class Kind { RandomBandLimited, SingleMode, File };

    Kind kind = Kind::RandomBandLimited;
    /// max |sigma| of the density perturbation rho0 - 1 and max |u0|, |v0|.
    double amplitude = 1e-3;
    /// Integer-lattice shell band |m| in [band_low, band_high].
    double band_low = 1.0;
    double band_high = 2.0;
    std::uint64_t seed = 1;
    /// Wavenumber of the single-mode data: sigma = eps cos(m.x), v0 = eps e cos(m.x) with e perpendicular to m.
    std::array<int, 3> mode{1, 0, 0};
    /// Snapshot with 7 components (n, u1..u3, v1..v3).
    std::filesystem::path file;

    /// Throws std::invalid_argument when amplitude is outside [0, 1/2).
    void validate() const;
};

InitialDataSpec::Kind parse_initial_kind(const std::string& name);

/// rho0 = 1 + sigma with sigma mean zero, n0 = log(rho0) pointwise, v0
/// Leray-projected. DampedEP data carries v0 = 0.
SystemState make_initial(const GridPtr& grid, const InitialDataSpec& spec, Model model = Model::EPNS);

struct NonlinearTerms {
    SpectralField f1;
    VectorSpectralField f2;
    VectorSpectralField f3;
};

/// f1 = -u.grad n, f2 = -u.grad u - grad(-Delta)^-1 (e^n - 1 - n),
/// f3 = -P(v.grad v) + P((e^n - 1)(u - v)); f3 = 0 for DampedEP.
NonlinearTerms nonlinear_terms(const SystemState& state, Model model = Model::EPNS, bool dealias = true);

/// Pressure with grad P = (I - P)(-v.grad v + e^n (u - v)), zero mean.
SpectralField recover_pressure(const SystemState& state, bool dealias = true);

/// dt <= 0.5 / (k_max ||u||_inf + k_max ||v||_inf + 1), k_max the largest
/// per-axis wavenumber on the grid.
double stability_cap(const SystemState& state);

/// Exponential time stepper; caches the propagator for each step size used.
class Integrator {
public:
    Integrator(GridPtr grid, Scheme scheme, Model model, bool dealias = true, bool nonlinear = true);

    /// Advances state by dt in place. Throws NumericalFailure naming
    /// step_index when a coefficient becomes NaN or Inf.
    void step(SystemState& state, double dt, std::size_t step_index = 0);

    Scheme scheme() const { return scheme_; }
    Model model() const { return model_; }

private:
    const PropagatorTable& table(double dt);
    NonlinearTerms forcing(const SystemState& state) const;

    GridPtr grid_;
    Scheme scheme_;
    Model model_;
    bool dealias_;
    bool nonlinear_;
    std::map<double, std::unique_ptr<PropagatorTable>> tables_;
};

/// One step of the given scheme (builds a fresh integrator).
SystemState step(const SystemState& state, double dt, Scheme scheme, Model model = Model::EPNS);

/// Called after each recorded step with the current state and its record.
using RunObserver = std::function<void(const SystemState&, const DiagnosticsRecord&)>;

struct RunResult {
    SystemState final_state;
    DiagnosticsHistory history;
    std::size_t steps = 0;
};

/// Integrates from `initial` to t_end, recording diagnostics at the
/// configured cadence and writing CSV/snapshots when out_dir is set.
/// Throws NumericalFailure on NaN/Inf or when dt exceeds the stability cap.
RunResult run(const SolverConfig& config, SystemState initial, const RunObserver& observer = {});

}  // namespace epns
