#include "epns/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "epns/parallel.hpp"

namespace epns {

namespace {

constexpr Complex I{0.0, 1.0};
// Below this value of t * |lambda_a - lambda_b| the divided differences are
// evaluated by a Taylor expansion of expm1.
constexpr double kCancellationGuard = 1e-6;

void require_nonnegative_radius(double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("wavenumber magnitude must be nonnegative");
}

Complex dot(const Vec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

AcousticEigenpair eigenvalues_acoustic(double r) {
    require_nonnegative_radius(r);
    const double omega = 0.5 * std::sqrt(3.0 + 4.0 * r * r);
    return {Complex(-0.5, omega), Complex(-0.5, -omega)};
}

ParabolicEigenpair eigenvalues_parabolic(double r) {
    require_nonnegative_radius(r);
    const double r2 = r * r;
    const double s = std::sqrt(4.0 + r2 * r2);
    const double b = 2.0 + r2;
    // lambda3 via the product of roots to avoid cancellation at small r.
    return {-2.0 * r2 / (b + s), -0.5 * (b + s)};
}

AsymptoticResiduals small_frequency_residuals(double r) {
    const auto p = eigenvalues_parabolic(r);
    const double r2 = r * r;
    return {std::abs(p.lambda3 + 0.5 * r2), std::abs(p.lambda4 + 2.0 + 0.5 * r2)};
}

double spectral_gap_bound(double r0, double R0) { return std::min(r0 * r0 / (R0 * R0 + 2.0), 0.5); }

double spectral_gap_excess(std::span<const double> radii, double r0, double R0) {
    double worst = -std::numeric_limits<double>::infinity();
    for (double r : radii) {
        const auto a = eigenvalues_acoustic(r);
        const auto p = eigenvalues_parabolic(r);
        worst = std::max({worst, a.lambda1.real(), a.lambda2.real(), p.lambda3, p.lambda4});
    }
    return worst + spectral_gap_bound(r0, R0);
}

PropagatorSymbols symbols(double t, double r) {
    if (!(t >= 0.0)) throw std::domain_error("propagator is not evaluated backward in time");
    require_nonnegative_radius(r);

    PropagatorSymbols s;
    s.r = r;
    s.t = t;
    s.acoustic = eigenvalues_acoustic(r);
    s.parabolic = eigenvalues_parabolic(r);

    const Complex l1 = s.acoustic.lambda1;
    const Complex l2 = s.acoustic.lambda2;
    const Complex e1 = std::exp(l1 * t);
    const Complex e2 = std::exp(l2 * t);
    const Complex da = l1 - l2;
    if (std::abs(da) * t < kCancellationGuard) {
        const Complex z = da * t;
        s.d = e2 * t * (1.0 + z / 2.0 + z * z / 6.0);
        s.phi11 = e2 - l2 * s.d;
        s.phiq = e1 + l2 * s.d;
    } else {
        s.d = (e1 - e2) / da;
        s.phi11 = (l1 * e2 - l2 * e1) / da;
        s.phiq = (l1 * e1 - l2 * e2) / da;
    }

    const double l3 = s.parabolic.lambda3;
    const double l4 = s.parabolic.lambda4;
    const double e3 = std::exp(l3 * t);
    const double e4 = std::exp(l4 * t);
    const double dp = l3 - l4;
    const double r2 = r * r;
    // lambda4 + 2 = -2 r^2 / (2 - r^2 + sqrt(4 + r^4)), cancellation-free.
    const double l4p2 = -2.0 * r2 / (2.0 - r2 + std::sqrt(4.0 + r2 * r2));
    if (dp * t < kCancellationGuard) {
        const double z = dp * t;
        s.psi12 = e4 * t * (1.0 + z / 2.0 + z * z / 6.0);
        s.psi_perp = e4 - (l4 + 1.0) * s.psi12;
        s.psi33 = e3 + (l4 + 1.0) * s.psi12;
        s.drag_from_u = s.psi_perp - s.psi12;
        s.drag_from_v = s.psi12 - s.psi33;
    } else {
        s.psi12 = (e3 - e4) / dp;
        s.psi_perp = ((l3 + 1.0) * e4 - (l4 + 1.0) * e3) / dp;
        s.psi33 = ((l3 + 1.0) * e3 - (l4 + 1.0) * e4) / dp;
        s.drag_from_u = ((l3 + 2.0) * e4 - l4p2 * e3) / dp;
        s.drag_from_v = (l4 * e4 - l3 * e3) / dp;
    }
    return s;
}

ModeState apply_propagator_mode(const PropagatorSymbols& s, const Vec3& xi, const ModeState& m0) {
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    ModeState out;
    if (r2 == 0.0) {
        out.n = m0.n;
        for (int a = 0; a < 3; ++a) {
            out.u[a] = s.psi_perp * m0.u[a] + s.psi12 * m0.v[a];
            out.v[a] = s.psi12 * m0.u[a] + s.psi33 * m0.v[a];
        }
        return out;
    }
    const double phi11 = s.phi11.real();
    const double d = s.d.real();
    const double phiq = s.phiq.real();
    const Complex xu = dot(xi, m0.u);
    const Complex poisson = -(1.0 + r2) / r2 * d * I * m0.n;
    out.n = phi11 * m0.n - d * I * xu;
    for (int a = 0; a < 3; ++a) {
        const Complex par = xi[a] * xu / r2;
        const Complex perp = m0.u[a] - par;
        out.u[a] = poisson * xi[a] + s.psi_perp * perp + phiq * par + s.psi12 * m0.v[a];
        out.v[a] = s.psi12 * perp + s.psi33 * m0.v[a];
    }
    return out;
}

ModeState apply_propagator_mode(double t, const Vec3& xi, const ModeState& initial) {
    const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    return apply_propagator_mode(symbols(t, r), xi, initial);
}

DampedModeState damped_ep_propagator_mode(double t, const Vec3& xi, const DampedModeState& m0) {
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    const auto s = symbols(t, std::sqrt(r2));
    const double damping = std::exp(-t);
    DampedModeState out;
    if (r2 == 0.0) {
        out.n = m0.n;
        for (int a = 0; a < 3; ++a) out.u[a] = damping * m0.u[a];
        return out;
    }
    const double d = s.d.real();
    const Complex xu = dot(xi, m0.u);
    const Complex poisson = -(1.0 + r2) / r2 * d * I * m0.n;
    out.n = s.phi11.real() * m0.n - d * I * xu;
    for (int a = 0; a < 3; ++a) {
        const Complex par = xi[a] * xu / r2;
        out.u[a] = poisson * xi[a] + s.phiq.real() * par + damping * (m0.u[a] - par);
    }
    return out;
}

GreenMatrix green_matrix(double t, const Vec3& xi) {
    const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    const auto s = symbols(t, r);
    GreenMatrix g;
    for (int col = 0; col < 7; ++col) {
        ModeState e;
        if (col == 0) e.n = 1.0;
        else if (col < 4) e.u[col - 1] = 1.0;
        else e.v[col - 4] = 1.0;
        const auto img = apply_propagator_mode(s, xi, e);
        g(0, col) = img.n;
        for (int a = 0; a < 3; ++a) {
            g(1 + a, col) = img.u[a];
            g(4 + a, col) = img.v[a];
        }
    }
    return g;
}

PropagatorTable::PropagatorTable(GridPtr grid, double t, Model model)
    : grid_(std::move(grid)), t_(t), model_(model) {
    if (!(t >= 0.0)) throw std::domain_error("propagator is not evaluated backward in time");
    const auto& g = *grid_;
    coeff_.resize(g.size());
    // Many modes share |xi|; evaluate each distinct shell once.
    std::unordered_map<double, Coefficients> shells;
    const double damping = std::exp(-t);
    for (std::size_t m = 0; m < g.size(); ++m) {
        const double r2 = g.odd_k2(m);
        auto it = shells.find(r2);
        if (it == shells.end()) {
            const auto s = symbols(t, std::sqrt(r2));
            Coefficients c{s.phi11.real(), s.d.real(), s.phiq.real(), s.psi_perp, s.psi12, s.psi33,
                           r2 == 0.0 ? 0.0 : (1.0 + r2) / r2 * s.d.real()};
            if (model_ == Model::DampedEP) {
                c.psi_perp = damping;
                c.psi12 = 0.0;
                c.psi33 = 1.0;
            }
            it = shells.emplace(r2, c).first;
        }
        coeff_[m] = it->second;
    }
}

void PropagatorTable::apply(SpectralField& n, VectorSpectralField& u, VectorSpectralField& v) const {
    if (n.grid_ptr() != grid_ || u.grid_ptr() != grid_ || v.grid_ptr() != grid_)
        throw std::invalid_argument("state grid does not match propagator table");
    const auto& g = *grid_;
    const bool damped = model_ == Model::DampedEP;
    parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            const Coefficients& c = coeff_[m];
            const Vec3 xi = g.odd_wavevector(m);
            const double r2 = g.odd_k2(m);
            const CVec3 u0 = u.at(m);
            const CVec3 v0 = v.at(m);
            const Complex n0 = n[m];
            if (r2 == 0.0) {
                for (int a = 0; a < 3; ++a) {
                    u[a][m] = c.psi_perp * u0[a] + c.psi12 * v0[a];
                    if (!damped) v[a][m] = c.psi12 * u0[a] + c.psi33 * v0[a];
                }
                continue;
            }
            const Complex xu = dot(xi, u0);
            const Complex poisson = -c.poisson * I * n0;
            n[m] = c.phi11 * n0 - c.d * I * xu;
            for (int a = 0; a < 3; ++a) {
                const Complex par = xi[a] * xu / r2;
                const Complex perp = u0[a] - par;
                u[a][m] = poisson * xi[a] + c.psi_perp * perp + c.phiq * par + c.psi12 * v0[a];
                if (!damped) v[a][m] = c.psi12 * perp + c.psi33 * v0[a];
            }
        }
    });
}

SystemState linear_solve(double t, const SystemState& state0) {
    if (!state0.shares_grid()) throw std::invalid_argument("state fields must share one grid");
    SystemState out = state0;
    PropagatorTable(state0.grid_ptr(), t, Model::EPNS).apply(out.n, out.u, out.v);
    out.t = state0.t + t;
    return out;
}

SystemState damped_ep_linear_solve(double t, const SystemState& state0) {
    if (!state0.shares_grid()) throw std::invalid_argument("state fields must share one grid");
    SystemState out = state0;
    PropagatorTable(state0.grid_ptr(), t, Model::DampedEP).apply(out.n, out.u, out.v);
    out.t = state0.t + t;
    return out;
}

}  // namespace epns
