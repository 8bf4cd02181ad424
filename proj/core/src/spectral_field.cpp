#include "epns/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epns {

SpectralField::SpectralField(GridPtr grid, bool real) : grid_(std::move(grid)), real_(real) {
    if (!grid_) throw std::invalid_argument("null grid");
    coeffs_.assign(grid_->size(), Complex{});
}

SpectralField::SpectralField(GridPtr grid, std::vector<Complex> coefficients, bool real)
    : grid_(std::move(grid)), coeffs_(std::move(coefficients)), real_(real) {
    if (!grid_) throw std::invalid_argument("null grid");
    if (coeffs_.size() != grid_->size()) throw std::invalid_argument("coefficient count does not match grid");
}

double SpectralField::hermitian_defect() const {
    double worst = 0.0;
    for (std::size_t m = 0; m < coeffs_.size(); ++m)
        worst = std::max(worst, std::abs(coeffs_[m] - std::conj(coeffs_[grid_->conjugate(m)])));
    return worst;
}

void SpectralField::enforce_hermitian() {
    for (std::size_t m = 0; m < coeffs_.size(); ++m) {
        const std::size_t c = grid_->conjugate(m);
        if (c < m) continue;
        const Complex avg = 0.5 * (coeffs_[m] + std::conj(coeffs_[c]));
        coeffs_[m] = avg;
        coeffs_[c] = std::conj(avg);
    }
}

void SpectralField::check_compatible(const SpectralField& other) const {
    if (grid_ != other.grid_) throw std::invalid_argument("fields live on different grids");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    check_compatible(other);
    for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] += other.coeffs_[m];
    real_ = real_ && other.real_;
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    check_compatible(other);
    for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] -= other.coeffs_[m];
    real_ = real_ && other.real_;
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& other) {
    check_compatible(other);
    for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] += s * other.coeffs_[m];
    real_ = real_ && other.real_;
    return *this;
}

VectorSpectralField::VectorSpectralField(GridPtr grid, bool real)
    : c_{SpectralField(grid, real), SpectralField(grid, real), SpectralField(grid, real)} {}

VectorSpectralField::VectorSpectralField(SpectralField x, SpectralField y, SpectralField z)
    : c_{std::move(x), std::move(y), std::move(z)} {
    if (c_[0].grid_ptr() != c_[1].grid_ptr() || c_[0].grid_ptr() != c_[2].grid_ptr())
        throw std::invalid_argument("vector components must share one grid");
    if (c_[0].is_real() != c_[1].is_real() || c_[0].is_real() != c_[2].is_real())
        throw std::invalid_argument("vector components must share one real flag");
}

double VectorSpectralField::hermitian_defect() const {
    return std::max({c_[0].hermitian_defect(), c_[1].hermitian_defect(), c_[2].hermitian_defect()});
}

void VectorSpectralField::enforce_hermitian() {
    for (auto& c : c_) c.enforce_hermitian();
}

VectorSpectralField& VectorSpectralField::operator+=(const VectorSpectralField& other) {
    for (std::size_t a = 0; a < 3; ++a) c_[a] += other.c_[a];
    return *this;
}

VectorSpectralField& VectorSpectralField::operator-=(const VectorSpectralField& other) {
    for (std::size_t a = 0; a < 3; ++a) c_[a] -= other.c_[a];
    return *this;
}

VectorSpectralField& VectorSpectralField::operator*=(double s) {
    for (auto& c : c_) c *= s;
    return *this;
}

VectorSpectralField& VectorSpectralField::axpy(double s, const VectorSpectralField& other) {
    for (std::size_t a = 0; a < 3; ++a) c_[a].axpy(s, other.c_[a]);
    return *this;
}

SpectralField transform_forward(const GridPtr& grid, std::span<const double> samples) {
    if (samples.size() != grid->size()) throw std::invalid_argument("sample count does not match grid");
    std::vector<Complex> buf(samples.begin(), samples.end());
    grid->forward(buf, buf);
    SpectralField out(grid, std::move(buf), true);
    out.enforce_hermitian();
    return out;
}

SpectralField transform_forward(const GridPtr& grid, std::span<const Complex> samples) {
    if (samples.size() != grid->size()) throw std::invalid_argument("sample count does not match grid");
    std::vector<Complex> buf(samples.begin(), samples.end());
    grid->forward(buf, buf);
    return SpectralField(grid, std::move(buf), false);
}

std::vector<Complex> transform_inverse_complex(const SpectralField& field) {
    std::vector<Complex> buf(field.coefficients().begin(), field.coefficients().end());
    field.grid().inverse(buf, buf);
    return buf;
}

std::vector<double> transform_inverse(const SpectralField& field) {
    const auto buf = transform_inverse_complex(field);
    std::vector<double> out(buf.size());
    std::transform(buf.begin(), buf.end(), out.begin(), [](const Complex& c) { return c.real(); });
    return out;
}

VectorSpectralField transform_forward(const GridPtr& grid, const std::array<std::vector<double>, 3>& samples) {
    return {transform_forward(grid, samples[0]), transform_forward(grid, samples[1]),
            transform_forward(grid, samples[2])};
}

std::array<std::vector<double>, 3> transform_inverse(const VectorSpectralField& field) {
    return {transform_inverse(field[0]), transform_inverse(field[1]), transform_inverse(field[2])};
}

}  // namespace epns
