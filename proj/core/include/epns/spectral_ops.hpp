#pragma once

#include <array>
#include <span>

#include "epns/spectral_field.hpp"

namespace epns {

// Fourier multipliers. All are pure; the zero mode of every singular
// multiplier (Lambda^a with a < 0, (-Delta)^-1, xi xi^T / |xi|^2) is 0.

/// Multiplies by (i xi)^alpha for the multi-index alpha.
SpectralField derivative(const SpectralField& f, std::array<int, 3> multi_index);
VectorSpectralField gradient(const SpectralField& s);
SpectralField divergence(const VectorSpectralField& v);
VectorSpectralField curl(const VectorSpectralField& v);
/// Multiplies by -|xi|^2.
SpectralField laplacian(const SpectralField& f);

/// Lambda^a f: multiplies by |xi|^a, zero mode mapped to 0 when a != 0.
SpectralField lambda_power(const SpectralField& f, double a);
/// (-Delta)^-1 f restricted to nonzero modes.
SpectralField inv_neg_laplacian(const SpectralField& f);
/// grad (-Delta)^-1 f, i.e. multiplier i xi / |xi|^2.
VectorSpectralField poisson_gradient(const SpectralField& f);

/// Leray projector I - xi xi^T / |xi|^2; the zero mode passes unchanged.
VectorSpectralField leray_project(const VectorSpectralField& v);

/// Hodge split u = -Lambda^-1 grad q + Lambda^-1 curl w.
/// `passthrough` holds the modes with vanishing (odd) wavevector, including
/// the mean, which the split cannot represent.
struct HodgeParts {
    SpectralField q;
    VectorSpectralField w;
    VectorSpectralField passthrough;
};
HodgeParts hodge_decompose(const VectorSpectralField& u);
VectorSpectralField hodge_recompose(const SpectralField& q, const VectorSpectralField& w);
VectorSpectralField hodge_recompose(const HodgeParts& parts);

/// Low-frequency part K1 f (multiplier chi1).
SpectralField lowpass(const SpectralField& f);
/// High-frequency part f - K1 f.
SpectralField highpass(const SpectralField& f);
VectorSpectralField lowpass(const VectorSpectralField& v);
VectorSpectralField highpass(const VectorSpectralField& v);

/// Zeroes every mode outside the 2/3-rule ball.
SpectralField dealias(SpectralField f);
VectorSpectralField dealias(VectorSpectralField v);

/// Removes the zero mode.
SpectralField remove_mean(SpectralField f);

// Norms are box integrals over [0, L)^3 evaluated by Plancherel.

/// ||Lambda^a f||_{L2}; the zero mode contributes only when a == 0.
double homogeneous_norm(const SpectralField& f, double a);
double homogeneous_norm(const VectorSpectralField& v, double a);
/// ||grad^k f||_{L2} = (sum |xi|^{2k} |f^|^2)^{1/2} * (L/N)^{3/2}.
double sobolev_norm(const SpectralField& f, int k);
double sobolev_norm(const VectorSpectralField& v, int k);
/// ||Lambda^{-a} f||_{L2} with the zero mode excluded.
double neg_sobolev_norm(const SpectralField& f, double a);
/// (sum_{j <= k} ||grad^j f||^2)^{1/2}.
double hk_norm(const SpectralField& f, int k);
double hk_norm(const VectorSpectralField& v, int k);
double l2_norm(const SpectralField& f);
double l2_norm(const VectorSpectralField& v);

/// Box integral of f * conj(g) (real part), for real fields the L2 inner product.
double inner_product(const SpectralField& f, const SpectralField& g);

/// Box integral of the real samples.
double box_integral(const SpectralGrid& grid, std::span<const double> samples);
/// (box integral of |f|^2)^{1/2} from physical samples.
double physical_l2_norm(const SpectralGrid& grid, std::span<const double> samples);

}  // namespace epns
