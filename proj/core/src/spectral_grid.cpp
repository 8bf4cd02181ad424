#include "epns/spectral_grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace epns {

namespace {

// The FFTW planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Plans are measured once per size; FFTW keeps the wisdom for later grids.
constexpr unsigned kPlannerFlags = FFTW_MEASURE | FFTW_UNALIGNED;

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

double chi_low(double radius, const CutoffRadii& cutoffs) {
    if (radius <= cutoffs.low) return 1.0;
    if (radius >= cutoffs.high) return 0.0;
    const double s = (radius - cutoffs.low) / (cutoffs.high - cutoffs.low);
    return 0.5 * (1.0 + std::cos(std::numbers::pi * s));
}

struct SpectralGrid::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    ~Plans() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

SpectralGrid::SpectralGrid(std::size_t points_per_axis, double box_length, CutoffRadii cutoffs)
    : n_(points_per_axis), length_(box_length), cutoffs_(cutoffs) {
    if (n_ < 2 || n_ % 2 != 0) throw std::invalid_argument("points per axis must be an even integer >= 2");
    if (!(box_length > 0.0) || !std::isfinite(box_length)) throw std::invalid_argument("box length must be positive");
    if (!(cutoffs.low > 0.0) || !(cutoffs.high > cutoffs.low))
        throw std::invalid_argument("cutoff radii must satisfy 0 < r0 < R0");

    const double h = length_ / static_cast<double>(n_);
    cell_volume_ = h * h * h;
    fundamental_ = 2.0 * std::numbers::pi / length_;
    dealias_radius_ = fundamental_ * static_cast<double>(n_) / 3.0;

    axis_k_.resize(n_);
    axis_k_odd_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        axis_k_[i] = fundamental_ * wavenumber(i);
        axis_k_odd_[i] = (i == n_ / 2) ? 0.0 : axis_k_[i];
    }

    const std::size_t total = size();
    k2_.resize(total);
    odd_k2_.resize(total);
    chi1_.resize(total);
    mask_.resize(total);
    conj_.resize(total);
    kvec_.resize(total);
    odd_kvec_.resize(total);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t k = 0; k < n_; ++k) {
                const std::size_t idx = flatten(i, j, k);
                const double q2 = axis_k_[i] * axis_k_[i] + axis_k_[j] * axis_k_[j] + axis_k_[k] * axis_k_[k];
                k2_[idx] = q2;
                odd_k2_[idx] = axis_k_odd_[i] * axis_k_odd_[i] + axis_k_odd_[j] * axis_k_odd_[j] +
                               axis_k_odd_[k] * axis_k_odd_[k];
                chi1_[idx] = chi_low(std::sqrt(q2), cutoffs_);
                mask_[idx] = std::sqrt(q2) <= dealias_radius_ * (1.0 + 1e-12) ? 1 : 0;
                kvec_[idx] = {axis_k_[i], axis_k_[j], axis_k_[k]};
                odd_kvec_[idx] = {axis_k_odd_[i], axis_k_odd_[j], axis_k_odd_[k]};
                conj_[idx] = flatten(i == 0 ? 0 : n_ - i, j == 0 ? 0 : n_ - j, k == 0 ? 0 : n_ - k);
            }
        }
    }

    plans_ = std::make_unique<Plans>();
    std::vector<Complex> scratch(total);
    const int ni = static_cast<int>(n_);
    std::lock_guard lock(planner_mutex());
    plans_->forward = fftw_plan_dft_3d(ni, ni, ni, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_FORWARD,
                                       kPlannerFlags);
    plans_->backward = fftw_plan_dft_3d(ni, ni, ni, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                        FFTW_BACKWARD, kPlannerFlags);
    if (!plans_->forward || !plans_->backward) throw std::runtime_error("FFTW plan creation failed");
}

SpectralGrid::~SpectralGrid() = default;

GridPtr SpectralGrid::make(std::size_t points_per_axis, double box_length, CutoffRadii cutoffs) {
    return std::make_shared<const SpectralGrid>(points_per_axis, box_length, cutoffs);
}

int SpectralGrid::wavenumber(std::size_t axis_index) const {
    const auto i = static_cast<long>(axis_index);
    const auto n = static_cast<long>(n_);
    return static_cast<int>(i < n / 2 ? i : i - n);
}

std::array<std::size_t, 3> SpectralGrid::unflatten(std::size_t mode) const {
    const std::size_t k = mode % n_;
    const std::size_t j = (mode / n_) % n_;
    const std::size_t i = mode / (n_ * n_);
    return {i, j, k};
}

void SpectralGrid::forward(std::span<const Complex> in, std::span<Complex> out) const {
    if (in.size() != size() || out.size() != size()) throw std::invalid_argument("transform size does not match grid");
    if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
    fftw_execute_dft(plans_->forward, as_fftw(out.data()), as_fftw(out.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(size()));
    for (auto& c : out) c *= scale;
}

void SpectralGrid::inverse(std::span<const Complex> in, std::span<Complex> out) const {
    if (in.size() != size() || out.size() != size()) throw std::invalid_argument("transform size does not match grid");
    if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
    fftw_execute_dft(plans_->backward, as_fftw(out.data()), as_fftw(out.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(size()));
    for (auto& c : out) c *= scale;
}

}  // namespace epns
