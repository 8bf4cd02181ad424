#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace epns {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<Complex, 3>;

/// Radii of the smooth low/high frequency split. chi1 is 1 on |xi| <= low,
/// 0 on |xi| >= high, with a raised-cosine ramp in between.
struct CutoffRadii {
    double low = 0.5;
    double high = 2.0;
};

/// Raised-cosine low-frequency cutoff as a function of |xi|.
double chi_low(double radius, const CutoffRadii& cutoffs);

class SpectralGrid;
using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Periodic cube [0, L)^3 sampled with N points per axis.
///
/// Modes are stored in FFT order: flat index (i * N + j) * N + k with
/// integer wavenumber m = i for i < N/2 and m = i - N otherwise, so the
/// Nyquist index N/2 carries m = -N/2. Wavevectors are xi = 2*pi*m / L.
///
/// The "odd" wavevector has its Nyquist components set to zero. It is used
/// by every odd-order multiplier (i*xi, curl, projections) so that real
/// fields keep exact Hermitian symmetry; even multipliers use the true |xi|.
///
/// A grid is immutable after construction and may be shared across threads.
class SpectralGrid {
public:
    SpectralGrid(std::size_t points_per_axis, double box_length, CutoffRadii cutoffs = {});
    ~SpectralGrid();

    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    static GridPtr make(std::size_t points_per_axis, double box_length, CutoffRadii cutoffs = {});

    std::size_t points_per_axis() const { return n_; }
    std::size_t size() const { return n_ * n_ * n_; }
    double box_length() const { return length_; }
    double volume() const { return length_ * length_ * length_; }
    /// Quadrature weight (L/N)^3 of one physical sample.
    double cell_volume() const { return cell_volume_; }
    /// Smallest nonzero wavenumber magnitude 2*pi/L.
    double fundamental() const { return fundamental_; }
    const CutoffRadii& cutoffs() const { return cutoffs_; }

    int wavenumber(std::size_t axis_index) const;
    std::array<std::size_t, 3> unflatten(std::size_t mode) const;
    std::size_t flatten(std::size_t i, std::size_t j, std::size_t k) const { return (i * n_ + j) * n_ + k; }
    /// Flat index of the mode at -xi.
    std::size_t conjugate(std::size_t mode) const { return conj_[mode]; }

    const Vec3& wavevector(std::size_t mode) const { return kvec_[mode]; }
    const Vec3& odd_wavevector(std::size_t mode) const { return odd_kvec_[mode]; }
    double k2(std::size_t mode) const { return k2_[mode]; }
    double odd_k2(std::size_t mode) const { return odd_k2_[mode]; }
    double chi1(std::size_t mode) const { return chi1_[mode]; }
    bool dealias_mask(std::size_t mode) const { return mask_[mode] != 0; }
    /// Largest |xi| kept by the 2/3-rule mask.
    double dealias_radius() const { return dealias_radius_; }

    /// Physical coordinate of sample index i along any axis.
    double coordinate(std::size_t i) const { return static_cast<double>(i) * length_ / static_cast<double>(n_); }

    /// Unitary forward DFT (1/sqrt(N^3)), sign convention exp(-i xi x).
    void forward(std::span<const Complex> in, std::span<Complex> out) const;
    /// Unitary inverse DFT (1/sqrt(N^3)).
    void inverse(std::span<const Complex> in, std::span<Complex> out) const;

private:
    struct Plans;

    std::size_t n_;
    double length_;
    double cell_volume_;
    double fundamental_;
    double dealias_radius_;
    CutoffRadii cutoffs_;
    std::vector<double> axis_k_;
    std::vector<double> axis_k_odd_;
    std::vector<double> k2_;
    std::vector<double> odd_k2_;
    std::vector<double> chi1_;
    std::vector<unsigned char> mask_;
    std::vector<std::size_t> conj_;
    std::vector<Vec3> kvec_;
    std::vector<Vec3> odd_kvec_;
    std::unique_ptr<Plans> plans_;
};

}  // namespace epns
