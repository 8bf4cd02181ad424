#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "epns/propagator.hpp"
#include "epns/spectral_ops.hpp"
#include "oracles/oracles.hpp"

using namespace epns;

namespace {

constexpr Complex I{0.0, 1.0};

Vec3 random_direction(std::mt19937& rng) {
    std::normal_distribution<double> g;
    Vec3 d{g(rng), g(rng), g(rng)};
    const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    for (double& x : d) x /= n;
    return d;
}

ModeState random_mode(std::mt19937& rng) {
    std::normal_distribution<double> g;
    ModeState m;
    m.n = {g(rng), g(rng)};
    for (int a = 0; a < 3; ++a) {
        m.u[a] = {g(rng), g(rng)};
        m.v[a] = {g(rng), g(rng)};
    }
    return m;
}

// Removes the component of v along xi.
ModeState solenoidal(ModeState m, const Vec3& xi) {
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if (r2 == 0.0) return m;
    const Complex p = (xi[0] * m.v[0] + xi[1] * m.v[1] + xi[2] * m.v[2]) / r2;
    for (int a = 0; a < 3; ++a) m.v[a] -= xi[a] * p;
    return m;
}

double distance(const ModeState& a, const ModeState& b) {
    double d = std::abs(a.n - b.n);
    for (int c = 0; c < 3; ++c) d = std::max({d, std::abs(a.u[c] - b.u[c]), std::abs(a.v[c] - b.v[c])});
    return d;
}

}  // namespace

TEST_SUITE("eigenvalues") {
    TEST_CASE("acoustic pair") {
        const auto a0 = eigenvalues_acoustic(0.0);
        CHECK(a0.lambda1.real() == -0.5);
        CHECK(a0.lambda1.imag() == doctest::Approx(0.866025403784).epsilon(1e-12));
        const auto a1 = eigenvalues_acoustic(1.0);
        CHECK(a1.lambda1.imag() == doctest::Approx(std::sqrt(7.0) / 2.0).epsilon(1e-14));
        CHECK(a1.lambda2 == std::conj(a1.lambda1));
        for (double r : {0.0, 1e-3, 0.7, 5.0, 300.0}) {
            const auto a = eigenvalues_acoustic(r);
            CHECK(a.lambda1.real() == -0.5);
            CHECK(a.lambda2.real() == -0.5);
            CHECK(std::abs(a.lambda1 + a.lambda2 + 1.0) < 1e-12);
            CHECK(std::abs(a.lambda1 * a.lambda2 - (r * r + 1.0)) < 1e-12 * (1.0 + r * r));
        }
        CHECK_THROWS_AS(eigenvalues_acoustic(-1.0), std::invalid_argument);
    }

    TEST_CASE("parabolic pair") {
        const auto p0 = eigenvalues_parabolic(0.0);
        CHECK(p0.lambda3 == 0.0);
        CHECK(p0.lambda4 == -2.0);
        const auto p1 = eigenvalues_parabolic(1.0);
        CHECK(p1.lambda3 == doctest::Approx((-3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));
        CHECK(p1.lambda4 == doctest::Approx((-3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-14));
        for (double r : {1e-4, 0.3, 2.0, 50.0}) {
            const auto p = eigenvalues_parabolic(r);
            CHECK(p.lambda4 < p.lambda3);
            CHECK(p.lambda3 < 0.0);
            CHECK(std::abs(p.lambda3 * p.lambda4 - r * r) < 1e-12 * (1.0 + r * r));
            CHECK(std::abs(p.lambda3 + p.lambda4 + 2.0 + r * r) < 1e-12 * (1.0 + r * r));
        }
        CHECK_THROWS_AS(eigenvalues_parabolic(-0.1), std::invalid_argument);
    }

    TEST_CASE("small-frequency asymptotics") {
        const auto res = small_frequency_residuals(1e-2);
        CHECK(res.lambda3 <= 1e-7);
        CHECK(res.lambda3 == doctest::Approx(1e-8 / 8.0).epsilon(1e-3));
        CHECK(res.lambda4 <= 1e-7);
    }

    TEST_CASE("spectral gap over a scan") {
        std::vector<double> radii;
        for (int i = 0; i < 2000; ++i) radii.push_back(0.5 * std::pow(2000.0, i / 1999.0));
        CHECK(spectral_gap_excess(radii, 0.5, 1000.0) <= 1e-12);
        CHECK(spectral_gap_bound(0.5, 10.0) == doctest::Approx(0.25 / 102.0));
        CHECK(spectral_gap_bound(10.0, 1.0) == 0.5);
    }
}

TEST_SUITE("symbols") {
    TEST_CASE("identity at t = 0") {
        for (double r : {0.0, 0.1, 1.0, 30.0}) {
            const auto s = symbols(0.0, r);
            CHECK(std::abs(s.phi11 - 1.0) < 1e-15);
            CHECK(std::abs(s.d) < 1e-15);
            CHECK(std::abs(s.phiq - 1.0) < 1e-15);
            CHECK(s.psi_perp == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(s.psi12 == doctest::Approx(0.0));
            CHECK(s.psi33 == doctest::Approx(1.0).epsilon(1e-15));
        }
    }

    TEST_CASE("zero frequency at t = ln 2") {
        const auto s = symbols(std::log(2.0), 0.0);
        CHECK(s.psi12 == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
        CHECK(s.psi_perp == doctest::Approx(5.0 / 8.0).epsilon(1e-14));
        CHECK(s.psi33 == doctest::Approx(5.0 / 8.0).epsilon(1e-14));
    }

    TEST_CASE("backward time refused") { CHECK_THROWS_AS(symbols(-1e-3, 1.0), std::domain_error); }

    TEST_CASE("acoustic symbols are real") {
        std::mt19937 rng(2);
        std::uniform_real_distribution<double> u(0.0, 10.0);
        for (int i = 0; i < 200; ++i) {
            const auto s = symbols(u(rng), u(rng));
            CHECK(std::abs(s.phi11.imag()) < 1e-12);
            CHECK(std::abs(s.phiq.imag()) < 1e-12);
            CHECK(std::abs(s.d.imag()) < 1e-12);
        }
    }

    TEST_CASE("2x2 blocks match matrix exponentials") {
        std::mt19937 rng(4);
        std::uniform_real_distribution<double> u(1e-3, 10.0);
        for (int i = 0; i < 200; ++i) {
            const double t = u(rng), r = u(rng);
            const auto s = symbols(t, r);
            const auto ac = oracle::acoustic_flow(t, r);
            CHECK(std::abs(ac(0, 0) - s.phi11) < 1e-10);
            CHECK(std::abs(ac(0, 1) - (-I * r * s.d)) < 1e-10);
            CHECK(std::abs(ac(1, 0) - (-I * (r + 1.0 / r) * s.d)) < 1e-10);
            CHECK(std::abs(ac(1, 1) - s.phiq) < 1e-10);
            const auto tr = oracle::transverse_flow(t, r);
            CHECK(std::abs(tr(0, 0) - s.psi_perp) < 1e-10);
            CHECK(std::abs(tr(0, 1) - s.psi12) < 1e-10);
            CHECK(std::abs(tr(1, 1) - s.psi33) < 1e-10);
            CHECK(std::abs((tr(0, 0) - tr(0, 1)) - s.drag_from_u) < 1e-10);
            CHECK(std::abs((tr(0, 1) - tr(1, 1)) - s.drag_from_v) < 1e-10);
        }
    }

    TEST_CASE("tiny times use the cancellation guard consistently") {
        for (double t : {1e-12, 1e-9, 3e-7}) {
            for (double r : {0.0, 0.5, 2.0}) {
                const auto s = symbols(t, r);
                CHECK(s.d.real() == doctest::Approx(t).epsilon(1e-5));
                CHECK(s.psi12 == doctest::Approx(t).epsilon(1e-5));
                CHECK(std::abs(s.phi11 - 1.0) < 1e-5);
                CHECK(std::abs(s.psi33 - 1.0) < 1e-5);
            }
        }
    }

    TEST_CASE("envelope and positivity") {
        std::mt19937 rng(6);
        std::uniform_real_distribution<double> u(1e-3, 20.0);
        for (int i = 0; i < 500; ++i) {
            const double t = u(rng), r = u(rng) / 2.0;
            const auto s = symbols(t, r);
            const auto& a = s.acoustic;
            const double bound = std::exp(-t / 2.0) * (std::abs(a.lambda1) + std::abs(a.lambda2)) /
                                 std::abs(a.lambda1 - a.lambda2);
            CHECK(std::abs(s.phi11) <= bound * (1.0 + 1e-12));
            CHECK(s.psi12 > 0.0);
            CHECK(s.psi_perp > 0.0);
            CHECK(s.psi_perp <= 1.0);
            CHECK(s.psi33 > 0.0);
            CHECK(s.psi33 <= 1.0);
        }
    }
}

TEST_SUITE("mode propagator") {
    TEST_CASE("Green matrix matches the PDE exponential on divergence-free v") {
        std::mt19937 rng(8);
        std::uniform_real_distribution<double> u(1e-2, 10.0);
        for (int i = 0; i < 40; ++i) {
            const double t = u(rng);
            const double r = u(rng);
            auto xi = random_direction(rng);
            for (double& x : xi) x *= r;
            const auto pi = oracle::solenoidal_projector(xi);
            const oracle::Matrix7 diff = (green_matrix(t, xi) - oracle::green(t, xi)) * pi;
            CHECK(diff.cwiseAbs().maxCoeff() < 1e-10);
        }
    }

    TEST_CASE("t = 0 is the identity") {
        std::mt19937 rng(1);
        const auto m = random_mode(rng);
        CHECK(distance(apply_propagator_mode(0.0, {0.3, -1.0, 2.0}, m), m) < 1e-15);
        CHECK(distance(apply_propagator_mode(0.0, {0.0, 0.0, 0.0}, m), m) < 1e-15);
    }

    TEST_CASE("zero frequency conserves u + v") {
        std::mt19937 rng(3);
        const auto m = random_mode(rng);
        for (double t : {0.1, 1.0, 7.0}) {
            const auto out = apply_propagator_mode(t, {0.0, 0.0, 0.0}, m);
            CHECK(out.n == m.n);
            const double e = std::exp(-2.0 * t);
            for (int a = 0; a < 3; ++a) {
                CHECK(std::abs(out.u[a] + out.v[a] - m.u[a] - m.v[a]) < 1e-14);
                CHECK(std::abs(out.u[a] - (0.5 * (1 + e) * m.u[a] + 0.5 * (1 - e) * m.v[a])) < 1e-14);
            }
        }
    }

    TEST_CASE("semigroup on random modes") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(1e-2, 10.0);
        for (int i = 0; i < 100; ++i) {
            const double t = u(rng), s = u(rng);
            auto xi = random_direction(rng);
            const double r = u(rng) / 3.0;
            for (double& x : xi) x *= r;
            const auto m = solenoidal(random_mode(rng), xi);
            const auto direct = apply_propagator_mode(t + s, xi, m);
            const auto composed = apply_propagator_mode(t, xi, apply_propagator_mode(s, xi, m));
            CHECK(distance(direct, composed) < 1e-10);
        }
    }

    TEST_CASE("ODE residual by centered differences in t") {
        std::mt19937 rng(9);
        const Vec3 xi{0.4, -0.9, 0.3};
        const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        const auto m = solenoidal(random_mode(rng), xi);
        const double t = 1.3;
        auto residual = [&](double h) {
            const auto a = apply_propagator_mode(t + h, xi, m);
            const auto b = apply_propagator_mode(t - h, xi, m);
            const auto c = apply_propagator_mode(t, xi, m);
            double worst = 0.0;
            const Complex xu = xi[0] * c.u[0] + xi[1] * c.u[1] + xi[2] * c.u[2];
            worst = std::max(worst, std::abs((a.n - b.n) / (2 * h) + I * xu));
            for (int k = 0; k < 3; ++k) {
                const Complex pu = c.u[k] - xi[k] * xu / r2;
                const Complex dv = (a.v[k] - b.v[k]) / (2 * h);
                worst = std::max(worst, std::abs(dv + c.v[k] - pu + r2 * c.v[k]));
                const Complex du = (a.u[k] - b.u[k]) / (2 * h);
                worst = std::max(worst, std::abs(du + I * xi[k] * c.n + I * xi[k] / r2 * c.n + c.u[k] - c.v[k]));
            }
            return worst;
        };
        const double r1 = residual(1e-3);
        const double r2h = residual(5e-4);
        CHECK(r1 < 1e-5);
        CHECK(r1 / r2h == doctest::Approx(4.0).epsilon(0.05));
    }

    TEST_CASE("transverse data reduces to the 2x2 parabolic system") {
        const Vec3 xi{0.0, 0.0, 1.5};
        ModeState m;
        m.u = {Complex(1.0, 0.5), Complex(-0.3, 0.0), 0.0};
        m.v = {Complex(0.2, 0.0), Complex(0.0, 1.0), 0.0};
        const double t = 2.0;
        const auto out = apply_propagator_mode(t, xi, m);
        const auto psi = oracle::transverse_flow(t, 1.5);
        for (int a = 0; a < 2; ++a) {
            CHECK(std::abs(out.u[a] - (psi(0, 0) * m.u[a] + psi(0, 1) * m.v[a])) < 1e-12);
            CHECK(std::abs(out.v[a] - (psi(1, 0) * m.u[a] + psi(1, 1) * m.v[a])) < 1e-12);
        }
        CHECK(std::abs(out.n) < 1e-15);
    }

    TEST_CASE("damped Euler-Poisson mode") {
        std::mt19937 rng(10);
        const auto m = random_mode(rng);
        DampedModeState d{m.n, m.u};
        const auto id = damped_ep_propagator_mode(0.0, {1.0, 2.0, 0.5}, d);
        CHECK(std::abs(id.n - d.n) < 1e-15);

        // Transverse-only u decays as e^{-t}.
        DampedModeState tr{0.0, {Complex(1.0), Complex(-2.0), Complex(0.0)}};
        const auto out = damped_ep_propagator_mode(3.0, {0.0, 0.0, 2.0}, tr);
        CHECK(std::abs(out.u[0] - std::exp(-3.0)) < 1e-15);
        CHECK(std::abs(out.u[1] + 2.0 * std::exp(-3.0)) < 1e-15);

        const auto zero = damped_ep_propagator_mode(2.0, {0.0, 0.0, 0.0}, d);
        CHECK(zero.n == d.n);
        CHECK(std::abs(zero.u[1] - std::exp(-2.0) * d.u[1]) < 1e-15);

        // Oracle: PDE generator without the v equations.
        std::uniform_real_distribution<double> u(1e-2, 10.0);
        for (int i = 0; i < 30; ++i) {
            const double t = u(rng);
            auto xi = random_direction(rng);
            for (double& x : xi) x *= u(rng) / 2.0;
            auto gen = oracle::generator(xi);
            for (int a = 0; a < 7; ++a)
                for (int b = 4; b < 7; ++b) gen(a, b) = gen(b, a) = 0.0L;
            const auto g = oracle::to_double(oracle::expm(gen * (long double)t));
            const auto o = damped_ep_propagator_mode(t, xi, d);
            Complex n_ref = g(0, 0) * d.n;
            for (int b = 0; b < 3; ++b) n_ref += g(0, 1 + b) * d.u[b];
            CHECK(std::abs(o.n - n_ref) < 1e-10);
            for (int a = 0; a < 3; ++a) {
                Complex u_ref = g(1 + a, 0) * d.n;
                for (int b = 0; b < 3; ++b) u_ref += g(1 + a, 1 + b) * d.u[b];
                CHECK(std::abs(o.u[a] - u_ref) < 1e-10);
            }
        }
    }
}

TEST_SUITE("field propagator") {
    const double kTwoPi = 2.0 * std::numbers::pi;

    TEST_CASE("zero state stays zero") {
        const auto grid = SpectralGrid::make(8, kTwoPi);
        const auto out = linear_solve(1.0, SystemState::zero(grid));
        CHECK(l2_norm(out.n) == 0.0);
        CHECK(l2_norm(out.u) == 0.0);
        CHECK(out.t == 1.0);
    }

    TEST_CASE("single acoustic mode has envelope e^{-t/2}") {
        const auto grid = SpectralGrid::make(8, kTwoPi);
        auto s = SystemState::zero(grid);
        s.n = transform_forward(grid, sample(*grid, [](double x, double, double) { return 0.01 * std::cos(x); }));
        const auto sym_bound = [&](double t) {
            const auto sy = symbols(t, 1.0);
            return std::abs(sy.phi11) * l2_norm(s.n);
        };
        for (double t : {0.5, 2.0, 6.0}) {
            const auto out = linear_solve(t, s);
            CHECK(l2_norm(out.n) == doctest::Approx(sym_bound(t)).epsilon(1e-12));
            CHECK(l2_norm(out.n) <= 2.0 * std::exp(-t / 2.0) * l2_norm(s.n));
            CHECK(out.n.hermitian_defect() < 1e-14);
        }
    }

    TEST_CASE("divergence-free v0 only: u = psi12 v0, v = psi33 v0") {
        const auto grid = SpectralGrid::make(8, kTwoPi);
        auto s = SystemState::zero(grid);
        for (int a = 0; a < 3; ++a)
            s.v[a] = transform_forward(grid, sample(*grid, [a](double x, double y, double z) {
                                           return std::sin(y + a * z) + std::cos(2.0 * x - z);
                                       }));
        s.v = leray_project(s.v);
        const double t = 0.8;
        const auto out = linear_solve(t, s);
        CHECK(l2_norm(divergence(out.v)) < 1e-12);
        for (std::size_t m = 0; m < grid->size(); ++m) {
            const auto sy = symbols(t, std::sqrt(grid->odd_k2(m)));
            for (int a = 0; a < 3; ++a) {
                CHECK(std::abs(out.u[a][m] - sy.psi12 * s.v[a][m]) < 1e-13);
                CHECK(std::abs(out.v[a][m] - sy.psi33 * s.v[a][m]) < 1e-13);
            }
        }
    }

    TEST_CASE("grid mismatch and damped table") {
        const auto g1 = SpectralGrid::make(8, kTwoPi);
        const auto g2 = SpectralGrid::make(8, kTwoPi);
        SystemState s{0.0, SpectralField(g1), VectorSpectralField(g2), VectorSpectralField(g1)};
        CHECK_THROWS_AS(linear_solve(1.0, s), std::invalid_argument);

        auto d = SystemState::zero(g1);
        d.v[0][3] = 1.0;
        d.u[1][3] = 1.0;
        const auto out = damped_ep_linear_solve(1.0, d);
        CHECK(out.v[0][3] == Complex(1.0));
        CHECK_THROWS_AS(PropagatorTable(g1, -1.0, Model::EPNS), std::domain_error);
    }
}
