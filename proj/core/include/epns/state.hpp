#pragma once

#include "epns/spectral_field.hpp"

namespace epns {

/// (n, u, v) at time t, with n = log(rho). The damped Euler-Poisson model
/// keeps v identically zero.
struct SystemState {
    double t = 0.0;
    SpectralField n;
    VectorSpectralField u;
    VectorSpectralField v;

    static SystemState zero(const GridPtr& grid, double t = 0.0) {
        return {t, SpectralField(grid), VectorSpectralField(grid), VectorSpectralField(grid)};
    }

    const GridPtr& grid_ptr() const { return n.grid_ptr(); }
    const SpectralGrid& grid() const { return n.grid(); }
    bool shares_grid() const { return u.grid_ptr() == n.grid_ptr() && v.grid_ptr() == n.grid_ptr(); }
};

}  // namespace epns
