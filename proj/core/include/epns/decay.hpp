#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epns/quadrature.hpp"
#include "epns/spectral_grid.hpp"

namespace epns {

/// Radially symmetric Fourier amplitude g(r) >= 0 of one initial field.
class RadialProfile {
public:
    enum class Kind { Gaussian, Bump, Tabulated };

    /// A exp(-r^2 / (2 sigma^2)).
    static RadialProfile gaussian(double amplitude, double sigma);
    /// A on [0, radius], raised-cosine ramp down to 0 at radius * (1 + width).
    static RadialProfile bump(double amplitude, double radius, double width = 1.0);
    /// Piecewise-linear through (r_i, g_i), zero beyond the last sample.
    static RadialProfile tabulated(std::vector<double> radii, std::vector<double> values);

    /// Parses "gaussian:sigma=1,A=1", "bump:A=1,rc=0.5[,width=1]" or
    /// "tabulated:file=path.csv" (two columns r, g).
    static RadialProfile parse(std::string_view spec);

    Kind kind() const { return kind_; }
    double operator()(double r) const;
    /// Radius past which g(r)^2 r^8 is below 1e-20 of its scale.
    double support_radius() const;
    /// Radii where the profile changes character.
    std::vector<double> breakpoints() const;

private:
    RadialProfile() = default;

    Kind kind_ = Kind::Gaussian;
    double amplitude_ = 0.0;
    double scale_ = 1.0;
    double width_ = 1.0;
    std::vector<double> radii_;
    std::vector<double> values_;
};

/// Initial amplitudes. The transverse parts of u0 and v0 are carried by
/// unit vectors e(xi) perpendicular to xi; Alignment says whether u0 and v0
/// share that vector or use two orthogonal ones.
struct InitialProfiles {
    std::optional<RadialProfile> density;
    std::optional<RadialProfile> longitudinal_u;
    std::optional<RadialProfile> transverse_u;
    std::optional<RadialProfile> transverse_v;
};

enum class Alignment { Aligned, Orthogonal };
enum class Target { Density, VelocityU, VelocityV, Difference };

Target parse_target(std::string_view name);

/// Whole-space L2 norm of grad^k of the linear solution component `target`
/// at time t, by radial quadrature of the propagator symbols:
///   (integral_0^inf 4 pi r^{2+2k} |S(t, r) g(r)|^2 dr)^{1/2}.
double linear_l2_norm(double t, int k, const InitialProfiles& profiles, Target target,
                      Alignment alignment = Alignment::Aligned, const QuadratureOptions& quad = {},
                      CutoffRadii cutoffs = {});

struct DecaySeries {
    std::vector<double> times;
    std::vector<double> values;
};

/// n log-spaced points on [t_min, t_max].
std::vector<double> log_spaced(double t_min, double t_max, std::size_t n);
std::vector<double> lin_spaced(double t_min, double t_max, std::size_t n);

DecaySeries sample_series(const std::vector<double>& times, const std::function<double(double)>& f);

enum class FitModel { PowerLaw, Exponential };

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    double r_squared = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t samples = 0;
    FitModel model = FitModel::PowerLaw;
};

/// Least squares of log(value) against log(1 + t) (power law) or t
/// (exponential), using samples with t in [t_min, t_max]. Needs at least 8
/// samples and positive values.
DecayFit fit_decay(const DecaySeries& series, double t_min, double t_max, FitModel model);

using FourierVectorFunction = std::function<CVec3(const Vec3&)>;

/// inf over a dense sample of |xi| < r0 of |v0^(xi) + (I - xi xi^T/|xi|^2) u0^(xi)|.
double lower_bound_margin(const FourierVectorFunction& u0, const FourierVectorFunction& v0, double r0,
                          std::size_t radial_samples = 24, std::size_t direction_samples = 256);

enum class LowerBoundKind { Velocity, Difference };

/// Leading lower-bound integral:
///   velocity:   (alpha0^2/4  * integral_{|xi|<r0} exp(-|xi|^2 t) dxi)^{1/2}
///   difference: (alpha0^2/16 * integral_{|xi|<r0} |xi|^4 exp(-|xi|^2 t) dxi)^{1/2}
double lower_bound_norm(double t, double alpha0, double r0, LowerBoundKind kind,
                        const QuadratureOptions& quad = {});

/// v0^ = alpha0 bump on |xi| < r0 with u0 = n0 = 0, the data family used for
/// the two-sided velocity estimates.
InitialProfiles lower_bound_profiles(double alpha0, double r0);

}  // namespace epns
