#pragma once

#include <functional>
#include <span>

namespace epns {

struct QuadratureOptions {
    /// Relative termination tolerance of each adaptive panel.
    double rel_tol = 1e-12;
    unsigned max_depth = 15;
    /// Equal sub-panels per breakpoint interval; doubling it doubles the
    /// base sampling.
    unsigned panels_per_interval = 1;
};

/// Adaptive Gauss-Kronrod (7/15) integral of f over [b0, b_last], split at
/// every breakpoint. Breakpoints must be sorted ascending.
double integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const QuadratureOptions& options = {});

}  // namespace epns
