#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "epns/spectral_grid.hpp"
#include "epns/state.hpp"

namespace epns {

/// Roots of lambda^2 + lambda + r^2 + 1 = 0 (density / longitudinal velocity).
struct AcousticEigenpair {
    Complex lambda1;  // (-1 + i sqrt(3 + 4 r^2)) / 2
    Complex lambda2;  // conj(lambda1)
};

/// Roots of lambda^2 + (2 + r^2) lambda + r^2 = 0 (transverse velocities).
struct ParabolicEigenpair {
    double lambda3;  // the root near -r^2/2 at low frequency
    double lambda4;  // the root near -2 - r^2/2
};

AcousticEigenpair eigenvalues_acoustic(double r);
ParabolicEigenpair eigenvalues_parabolic(double r);

/// Residuals of the low-frequency expansions lambda3 = -r^2/2 + O(r^4) and
/// lambda4 = -2 - r^2/2 + O(r^4).
struct AsymptoticResiduals {
    double lambda3;
    double lambda4;
};
AsymptoticResiduals small_frequency_residuals(double r);

/// R = min{r0^2 / (R0^2 + 2), 1/2}.
double spectral_gap_bound(double r0, double R0);
/// max over radii of max Re(lambda1..4), minus -R. Nonpositive when the gap holds.
double spectral_gap_excess(std::span<const double> radii, double r0, double R0);

/// Scalar content of the Green matrix at (t, r).
///
/// phi11, d, phiq come from the acoustic pair and are real for real r;
/// psi_perp, psi12, psi33 come from the parabolic pair. The two drag
/// combinations are the transverse (u - v) coefficients
///   drag_from_u = psi_perp - psi12 = ((l3+2) e^{l4 t} - (l4+2) e^{l3 t}) / (l3 - l4)
///   drag_from_v = psi12 - psi33    = (l4 e^{l4 t} - l3 e^{l3 t}) / (l3 - l4)
/// evaluated without the cancellation of the plain differences.
struct PropagatorSymbols {
    double r = 0.0;
    double t = 0.0;
    AcousticEigenpair acoustic;
    ParabolicEigenpair parabolic;
    Complex phi11;
    Complex d;
    Complex phiq;
    double psi_perp = 1.0;
    double psi12 = 0.0;
    double psi33 = 1.0;
    double drag_from_u = 1.0;
    double drag_from_v = -1.0;
};

/// Closed-form symbols. Throws std::domain_error for t < 0.
PropagatorSymbols symbols(double t, double r);

/// One Fourier mode of (n, u, v).
struct ModeState {
    Complex n{};
    CVec3 u{};
    CVec3 v{};
};

/// One Fourier mode of the damped Euler-Poisson pair (n, u).
struct DampedModeState {
    Complex n{};
    CVec3 u{};
};

/// Exact linear EP-NS flow of one mode for time t. At xi = 0 the
/// projector xi xi^T/|xi|^2 and the Poisson coupling are taken as 0 and
/// the density is constant.
ModeState apply_propagator_mode(double t, const Vec3& xi, const ModeState& initial);
ModeState apply_propagator_mode(const PropagatorSymbols& s, const Vec3& xi, const ModeState& initial);

/// Exact linear damped Euler-Poisson flow: acoustic block on the
/// longitudinal part, e^{-t} on the transverse part.
DampedModeState damped_ep_propagator_mode(double t, const Vec3& xi, const DampedModeState& initial);

/// 7x7 Green matrix acting on (n, u1, u2, u3, v1, v2, v3).
using GreenMatrix = Eigen::Matrix<Complex, 7, 7>;
GreenMatrix green_matrix(double t, const Vec3& xi);

enum class Model { EPNS, DampedEP };

/// Per-mode coefficients of the propagator for a fixed step, built once per
/// (grid, t, model) and applied to whole states.
class PropagatorTable {
public:
    PropagatorTable(GridPtr grid, double t, Model model);

    double time() const { return t_; }
    Model model() const { return model_; }
    const GridPtr& grid_ptr() const { return grid_; }

    /// Applies the flow in place to (n, u, v); v is untouched for DampedEP.
    void apply(SpectralField& n, VectorSpectralField& u, VectorSpectralField& v) const;

private:
    struct Coefficients {
        double phi11, d, phiq, psi_perp, psi12, psi33, poisson;
    };

    GridPtr grid_;
    double t_;
    Model model_;
    std::vector<Coefficients> coeff_;
};

/// Linear EP-NS solution at time state0.t + t.
SystemState linear_solve(double t, const SystemState& state0);
/// Linear damped Euler-Poisson solution at time state0.t + t.
SystemState damped_ep_linear_solve(double t, const SystemState& state0);

}  // namespace epns
