#include "epns/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace epns {

double integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const QuadratureOptions& options) {
    if (breakpoints.size() < 2) throw std::invalid_argument("integration needs at least two breakpoints");
    const unsigned panels = std::max(1u, options.panels_per_interval);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (b < a) throw std::invalid_argument("breakpoints must be sorted");
        if (b == a) continue;
        const double h = (b - a) / panels;
        for (unsigned p = 0; p < panels; ++p) {
            const double lo = a + p * h;
            const double hi = (p + 1 == panels) ? b : a + (p + 1) * h;
            double error = 0.0;
            total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, options.max_depth,
                                                                                  options.rel_tol, &error);
        }
    }
    return total;
}

}  // namespace epns
