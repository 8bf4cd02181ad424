#pragma once

#include <array>
#include <span>
#include <vector>

#include "epns/spectral_grid.hpp"

namespace epns {

/// Fourier coefficients of a scalar field on a SpectralGrid.
///
/// When the real flag is set the coefficients represent a real field and
/// must satisfy c(-xi) = conj(c(xi)) to roundoff.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(GridPtr grid, bool real = true);
    SpectralField(GridPtr grid, std::vector<Complex> coefficients, bool real);

    const SpectralGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    bool is_real() const { return real_; }
    bool empty() const { return !grid_; }
    std::size_t size() const { return coeffs_.size(); }

    std::span<Complex> coefficients() { return coeffs_; }
    std::span<const Complex> coefficients() const { return coeffs_; }
    Complex& operator[](std::size_t mode) { return coeffs_[mode]; }
    const Complex& operator[](std::size_t mode) const { return coeffs_[mode]; }

    Complex zero_mode() const { return coeffs_.empty() ? Complex{} : coeffs_[0]; }

    /// max |c(xi) - conj(c(-xi))| over all modes.
    double hermitian_defect() const;
    /// Replace c(xi) by (c(xi) + conj(c(-xi))) / 2.
    void enforce_hermitian();

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);
    /// Adds s * other.
    SpectralField& axpy(double s, const SpectralField& other);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

private:
    void check_compatible(const SpectralField& other) const;

    GridPtr grid_;
    std::vector<Complex> coeffs_;
    bool real_ = true;
};

/// Three scalar components sharing one grid and one real flag.
class VectorSpectralField {
public:
    VectorSpectralField() = default;
    explicit VectorSpectralField(GridPtr grid, bool real = true);
    VectorSpectralField(SpectralField x, SpectralField y, SpectralField z);

    const SpectralGrid& grid() const { return c_[0].grid(); }
    const GridPtr& grid_ptr() const { return c_[0].grid_ptr(); }
    bool is_real() const { return c_[0].is_real(); }
    bool empty() const { return c_[0].empty(); }

    SpectralField& operator[](std::size_t axis) { return c_[axis]; }
    const SpectralField& operator[](std::size_t axis) const { return c_[axis]; }

    CVec3 at(std::size_t mode) const { return {c_[0][mode], c_[1][mode], c_[2][mode]}; }
    void set(std::size_t mode, const CVec3& value) {
        c_[0][mode] = value[0];
        c_[1][mode] = value[1];
        c_[2][mode] = value[2];
    }

    double hermitian_defect() const;
    void enforce_hermitian();

    VectorSpectralField& operator+=(const VectorSpectralField& other);
    VectorSpectralField& operator-=(const VectorSpectralField& other);
    VectorSpectralField& operator*=(double s);
    VectorSpectralField& axpy(double s, const VectorSpectralField& other);

    friend VectorSpectralField operator+(VectorSpectralField a, const VectorSpectralField& b) { return a += b; }
    friend VectorSpectralField operator-(VectorSpectralField a, const VectorSpectralField& b) { return a -= b; }
    friend VectorSpectralField operator*(double s, VectorSpectralField a) { return a *= s; }

private:
    std::array<SpectralField, 3> c_;
};

/// Forward transform of real physical samples; sets the real flag.
SpectralField transform_forward(const GridPtr& grid, std::span<const double> samples);
/// Forward transform of complex samples; clears the real flag.
SpectralField transform_forward(const GridPtr& grid, std::span<const Complex> samples);
/// Inverse transform returning the real part of the samples.
std::vector<double> transform_inverse(const SpectralField& field);
std::vector<Complex> transform_inverse_complex(const SpectralField& field);

VectorSpectralField transform_forward(const GridPtr& grid, const std::array<std::vector<double>, 3>& samples);
std::array<std::vector<double>, 3> transform_inverse(const VectorSpectralField& field);

/// Samples f(x) at every grid point, x in [0, L)^3.
template <class F>
std::vector<double> sample(const SpectralGrid& grid, F&& f) {
    const std::size_t n = grid.points_per_axis();
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                out[grid.flatten(i, j, k)] = f(grid.coordinate(i), grid.coordinate(j), grid.coordinate(k));
    return out;
}

}  // namespace epns
