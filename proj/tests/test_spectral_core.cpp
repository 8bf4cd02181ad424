#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "epns/snapshot.hpp"
#include "epns/spectral_ops.hpp"
#include "oracles/oracles.hpp"

using namespace epns;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> random_samples(const SpectralGrid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> s(g.size());
    for (auto& x : s) x = u(rng);
    return s;
}

// Smooth random field: random coefficients on |m| <= kmax, Nyquist excluded.
SpectralField band_limited(const GridPtr& grid, unsigned seed, double kmax = 3.0, bool mean_zero = true) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal;
    SpectralField f(grid, true);
    const auto n = grid->points_per_axis();
    for (std::size_t m = 0; m < grid->size(); ++m) {
        const double a = normal(rng), b = normal(rng);
        const auto ijk = grid->unflatten(m);
        if (ijk[0] == n / 2 || ijk[1] == n / 2 || ijk[2] == n / 2) continue;
        if (std::sqrt(grid->k2(m)) / grid->fundamental() > kmax) continue;
        f[m] = Complex(a, b);
    }
    if (mean_zero) f[0] = 0.0;
    f.enforce_hermitian();
    return f;
}

VectorSpectralField band_limited_vector(const GridPtr& grid, unsigned seed) {
    return {band_limited(grid, seed), band_limited(grid, seed + 101), band_limited(grid, seed + 202)};
}

double max_abs(const SpectralField& f) {
    double m = 0.0;
    for (const auto& c : f.coefficients()) m = std::max(m, std::abs(c));
    return m;
}

double max_abs(const VectorSpectralField& v) { return std::max({max_abs(v[0]), max_abs(v[1]), max_abs(v[2])}); }

std::size_t mode_index(const SpectralGrid& g, int a, int b, int c) {
    const int n = static_cast<int>(g.points_per_axis());
    auto wrap = [n](int m) { return static_cast<std::size_t>((m + n) % n); };
    return g.flatten(wrap(a), wrap(b), wrap(c));
}

}  // namespace

TEST_SUITE("spectral_grid") {
    TEST_CASE("rejects invalid grids") {
        CHECK_THROWS_AS(SpectralGrid(7, kTwoPi), std::invalid_argument);
        CHECK_THROWS_AS(SpectralGrid(8, -1.0), std::invalid_argument);
        CHECK_THROWS_AS(SpectralGrid(8, kTwoPi, {2.0, 1.0}), std::invalid_argument);
    }

    TEST_CASE("wavenumbers follow FFT order") {
        SpectralGrid g(8, kTwoPi);
        CHECK(g.wavenumber(0) == 0);
        CHECK(g.wavenumber(3) == 3);
        CHECK(g.wavenumber(4) == -4);
        CHECK(g.wavenumber(7) == -1);
        const auto m = mode_index(g, -4, 1, 0);
        CHECK(g.wavevector(m)[0] == doctest::Approx(-4.0));
        CHECK(g.odd_wavevector(m)[0] == 0.0);
        CHECK(g.odd_wavevector(m)[1] == doctest::Approx(1.0));
    }

    TEST_CASE("chi1 plateaus, monotone ramp, symmetry") {
        const CutoffRadii c{0.5, 2.0};
        CHECK(chi_low(0.0, c) == 1.0);
        CHECK(chi_low(0.5, c) == 1.0);
        CHECK(chi_low(2.0, c) == 0.0);
        CHECK(chi_low(5.0, c) == 0.0);
        double prev = 1.0;
        for (double r = 0.5; r <= 2.0; r += 0.01) {
            const double v = chi_low(r, c);
            CHECK(v <= prev + 1e-15);
            CHECK(v >= 0.0);
            prev = v;
        }
        SpectralGrid g(16, 4.0 * kTwoPi);
        for (std::size_t m = 0; m < g.size(); ++m) {
            CHECK(g.chi1(m) == g.chi1(g.conjugate(m)));
            CHECK(g.dealias_mask(m) == g.dealias_mask(g.conjugate(m)));
        }
    }

    TEST_CASE("dealias mask is the 2/3 ball") {
        SpectralGrid g(12, kTwoPi);
        CHECK(g.dealias_radius() == doctest::Approx(4.0));
        CHECK(g.dealias_mask(mode_index(g, 4, 0, 0)));
        CHECK_FALSE(g.dealias_mask(mode_index(g, 5, 0, 0)));
        CHECK_FALSE(g.dealias_mask(mode_index(g, 3, 3, 0)));
    }
}

TEST_SUITE("transforms") {
    TEST_CASE("constant field has only the zero mode") {
        const auto grid = SpectralGrid::make(8, kTwoPi);
        const auto f = transform_forward(grid, std::vector<double>(grid->size(), 1.0));
        CHECK(std::abs(f[0] - Complex(std::sqrt(512.0), 0.0)) < 1e-12);
        for (std::size_t m = 1; m < f.size(); ++m) CHECK(std::abs(f[m]) < 1e-12);
    }

    TEST_CASE("cos(x1) sits on two conjugate modes") {
        const double L = 3.0;
        const auto grid = SpectralGrid::make(8, L);
        const auto f = transform_forward(grid, sample(*grid, [L](double x, double, double) {
                                             return std::cos(2.0 * std::numbers::pi * x / L);
                                         }));
        const auto plus = mode_index(*grid, 1, 0, 0);
        const auto minus = mode_index(*grid, -1, 0, 0);
        CHECK(std::abs(f[plus] - Complex(std::sqrt(512.0) / 2.0, 0.0)) < 1e-12);
        CHECK(std::abs(f[minus] - std::conj(f[plus])) < 1e-12);
        for (std::size_t m = 0; m < f.size(); ++m)
            if (m != plus && m != minus) CHECK(std::abs(f[m]) < 1e-12);
    }

    TEST_CASE("matches a naive DFT") {
        const std::size_t n = 4;
        const auto grid = SpectralGrid::make(n, 1.0);
        const auto s = random_samples(*grid, 3);
        std::vector<Complex> cs(s.begin(), s.end());
        const auto ref = oracle::naive_dft(cs, n);
        const auto f = transform_forward(grid, s);
        for (std::size_t m = 0; m < f.size(); ++m) CHECK(std::abs(f[m] - ref[m]) < 1e-12);
    }

    TEST_CASE("round trip and Parseval on random data") {
        const auto grid = SpectralGrid::make(16, 5.0);
        const auto s = random_samples(*grid, 11);
        const auto f = transform_forward(grid, s);
        CHECK(f.is_real());
        CHECK(f.hermitian_defect() < 1e-12);
        const auto back = transform_inverse(f);
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            err = std::max(err, std::abs(back[i] - s[i]));
            scale = std::max(scale, std::abs(s[i]));
        }
        CHECK(err <= 1e-12 * scale);
        CHECK(l2_norm(f) == doctest::Approx(physical_l2_norm(*grid, s)).epsilon(1e-12));
    }

    TEST_CASE("size mismatch is rejected") {
        const auto grid = SpectralGrid::make(8, kTwoPi);
        CHECK_THROWS_AS(transform_forward(grid, std::vector<double>(10)), std::invalid_argument);
        const auto other = SpectralGrid::make(4, kTwoPi);
        CHECK_THROWS_AS(SpectralField(grid) += SpectralField(other), std::invalid_argument);
    }

    TEST_CASE("complex input clears the real flag") {
        const auto grid = SpectralGrid::make(4, 1.0);
        std::vector<Complex> s(grid->size(), Complex(0.0, 1.0));
        const auto f = transform_forward(grid, std::span<const Complex>(s));
        CHECK_FALSE(f.is_real());
        const auto back = transform_inverse_complex(f);
        CHECK(std::abs(back[5] - Complex(0.0, 1.0)) < 1e-14);
    }
}

TEST_SUITE("multipliers") {
    TEST_CASE("gradient of a constant vanishes") {
        const auto grid = SpectralGrid::make(8, kTwoPi);
        const auto f = transform_forward(grid, std::vector<double>(grid->size(), 3.0));
        CHECK(max_abs(gradient(f)) < 1e-12);
    }

    TEST_CASE("div grad is the Laplacian and curl grad vanishes") {
        const auto grid = SpectralGrid::make(16, kTwoPi);
        const auto s = band_limited(grid, 5, 6.0);
        const auto lap = laplacian(s);
        const auto dg = divergence(gradient(s));
        for (std::size_t m = 0; m < s.size(); ++m) CHECK(std::abs(dg[m] - lap[m]) < 1e-12 * (1.0 + std::abs(lap[m])));
        CHECK(max_abs(curl(gradient(s))) < 1e-12);
        CHECK(gradient(s).is_real());
    }

    TEST_CASE("derivative multi-index and real flag") {
        const auto grid = SpectralGrid::make(16, kTwoPi);
        const auto f = transform_forward(grid, sample(*grid, [](double x, double y, double) {
                                             return std::sin(2.0 * x) * std::cos(y);
                                         }));
        // d/dx d/dy: -2 cos(2x) sin(y)... compare in physical space.
        const auto d = transform_inverse(derivative(f, {1, 1, 0}));
        const auto ref = sample(*grid, [](double x, double y, double) { return -2.0 * std::cos(2.0 * x) * std::sin(y); });
        for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(d[i] - ref[i]) < 1e-12);
        CHECK_THROWS_AS(derivative(f, {-1, 0, 0}), std::invalid_argument);
    }

    TEST_CASE("spectral gradient agrees with finite differences") {
        const std::size_t n = 64;
        const auto grid = SpectralGrid::make(n, kTwoPi);
        const auto f = band_limited(grid, 8, 3.0);
        const auto s = transform_inverse(f);
        const auto grad = transform_inverse(gradient(f));
        double fd_norm2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            const auto fd = oracle::central_difference(s, n, a, kTwoPi / n);
            for (std::size_t i = 0; i < fd.size(); ++i) {
                fd_norm2 += fd[i] * fd[i];
                CHECK(std::abs(fd[i] - grad[a][i]) < 1e-3 * (1.0 + std::abs(grad[a][i])));
            }
        }
        const double fd_norm = std::sqrt(fd_norm2 * grid->cell_volume());
        CHECK(std::abs(fd_norm / sobolev_norm(f, 1) - 1.0) < 0.01);
    }

    TEST_CASE("lambda_power pairs and single-mode scaling") {
        const auto grid = SpectralGrid::make(16, kTwoPi);
        const auto f = band_limited(grid, 4);
        auto same = lambda_power(f, 0.0);
        for (std::size_t m = 0; m < f.size(); ++m) CHECK(same[m] == f[m]);
        const auto back = lambda_power(lambda_power(f, 2.0), -2.0);
        for (std::size_t m = 0; m < f.size(); ++m) CHECK(std::abs(back[m] - f[m]) < 1e-12 * (1.0 + std::abs(f[m])));

        const auto single = transform_forward(grid, sample(*grid, [](double, double y, double z) {
                                                  return std::cos(2.0 * y + 2.0 * z);
                                              }));
        const double k = std::sqrt(8.0);
        CHECK(l2_norm(lambda_power(single, -1.0)) == doctest::Approx(l2_norm(single) / k).epsilon(1e-12));
        CHECK(neg_sobolev_norm(single, 1.0) == doctest::Approx(l2_norm(single) / k).epsilon(1e-12));
    }

    TEST_CASE("negative powers drop the zero mode") {
        const auto grid = SpectralGrid::make(8, kTwoPi);
        const auto f = transform_forward(grid, std::vector<double>(grid->size(), 2.0));
        CHECK(max_abs(lambda_power(f, -1.0)) == 0.0);
        CHECK(max_abs(inv_neg_laplacian(f)) == 0.0);
        CHECK(max_abs(poisson_gradient(f)) == 0.0);
    }

    TEST_CASE("Poisson inversion of 0.1 cos(x1)") {
        const auto grid = SpectralGrid::make(16, kTwoPi);
        const auto rho_minus_1 =
            transform_forward(grid, sample(*grid, [](double x, double, double) { return 0.1 * std::cos(x); }));
        const auto u = transform_inverse(inv_neg_laplacian(rho_minus_1));
        const auto ref = sample(*grid, [](double x, double, double) { return 0.1 * std::cos(x); });
        for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(u[i] - ref[i]) < 1e-14);
        CHECK(max_abs(inv_neg_laplacian(SpectralField(grid))) == 0.0);
    }

    TEST_CASE("-Laplacian inverts inv_neg_laplacian up to the mean") {
        const auto grid = SpectralGrid::make(16, 3.0);
        const auto f = band_limited(grid, 21, 5.0, false);
        const auto back = laplacian(inv_neg_laplacian(f));
        CHECK(std::abs(back[0]) == 0.0);
        for (std::size_t m = 1; m < f.size(); ++m) CHECK(std::abs(-back[m] - f[m]) < 1e-12 * (1.0 + std::abs(f[m])));
    }
}

TEST_SUITE("projections") {
    TEST_CASE("Leray kills gradients, keeps solenoidal fields, is idempotent") {
        const auto grid = SpectralGrid::make(16, kTwoPi);
        const auto phi = band_limited(grid, 2, 6.0);
        CHECK(max_abs(leray_project(gradient(phi))) < 1e-12);

        const auto v = band_limited_vector(grid, 7);
        const auto pv = leray_project(v);
        CHECK(max_abs(divergence(pv)) < 1e-12);
        CHECK(max_abs(leray_project(pv) - pv) < 1e-12);
        const auto c = curl(v);
        CHECK(max_abs(leray_project(c) - c) < 1e-12);
        CHECK(pv.hermitian_defect() < 1e-12);
    }

    TEST_CASE("Leray passes the zero mode") {
        const auto grid = SpectralGrid::make(8, kTwoPi);
        VectorSpectralField v(grid);
        v[0][0] = 2.0;
        CHECK(leray_project(v)[0][0] == Complex(2.0));
    }

    TEST_CASE("Hodge decomposition round trip and special cases") {
        const auto grid = SpectralGrid::make(16, kTwoPi);
        const auto u = band_limited_vector(grid, 9);
        auto with_mean = u;
        with_mean[1][0] = 0.7;
        const auto parts = hodge_decompose(with_mean);
        CHECK(max_abs(hodge_recompose(parts) - with_mean) < 1e-12);

        const auto phi = band_limited(grid, 10);
        CHECK(max_abs(hodge_decompose(gradient(phi)).w) < 1e-12);
        CHECK(max_abs(hodge_decompose(leray_project(u)).q) < 1e-12);
        // q = Lambda^-1 div u
        const auto q_ref = lambda_power(divergence(u), -1.0);
        CHECK(max_abs(parts.q - q_ref) < 1e-12);
    }
}

TEST_SUITE("cutoffs") {
    TEST_CASE("low/high split") {
        const auto grid = SpectralGrid::make(16, 8.0 * kTwoPi);  // fundamental 1/8
        const auto f = band_limited(grid, 12, 40.0);
        const auto lo = lowpass(f);
        const auto hi = highpass(f);
        const auto sum = lo + hi;
        for (std::size_t m = 0; m < f.size(); ++m) {
            CHECK(std::abs(sum[m] - f[m]) <= 1e-15 * std::abs(f[m]));
            const double r = std::sqrt(grid->k2(m));
            if (r >= 2.0) CHECK(lo[m] == Complex(0.0));
            if (r <= 0.5) {
                CHECK(lo[m] == f[m]);
                CHECK(hi[m] == Complex(0.0));
            }
        }
        const auto vlo = lowpass(VectorSpectralField(f, f, f));
        CHECK(max_abs(vlo - VectorSpectralField(lo, lo, lo)) == 0.0);
    }
}

TEST_SUITE("norms") {
    TEST_CASE("single-mode norms") {
        const auto grid = SpectralGrid::make(16, kTwoPi);
        const double A = 0.3;
        const auto f = transform_forward(grid, sample(*grid, [A](double x, double, double) { return A * std::cos(2.0 * x); }));
        const double l2 = A * std::sqrt(std::pow(kTwoPi, 3) / 2.0);
        CHECK(l2_norm(f) == doctest::Approx(l2).epsilon(1e-12));
        CHECK(sobolev_norm(f, 1) == doctest::Approx(2.0 * l2).epsilon(1e-12));
        CHECK(sobolev_norm(f, 3) == doctest::Approx(8.0 * l2).epsilon(1e-12));
        CHECK(neg_sobolev_norm(f, 1.0) == doctest::Approx(l2 / 2.0).epsilon(1e-12));
        CHECK(hk_norm(f, 2) == doctest::Approx(l2 * std::sqrt(1.0 + 4.0 + 16.0)).epsilon(1e-12));
        CHECK_THROWS_AS(neg_sobolev_norm(f, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(sobolev_norm(f, -1), std::invalid_argument);
    }

    TEST_CASE("inner product and box integral") {
        const auto grid = SpectralGrid::make(8, 2.0);
        const auto s = random_samples(*grid, 1);
        const auto f = transform_forward(grid, s);
        CHECK(inner_product(f, f) == doctest::Approx(std::pow(l2_norm(f), 2)).epsilon(1e-12));
        double sum = 0.0;
        for (double x : s) sum += x;
        CHECK(box_integral(*grid, s) == doctest::Approx(sum / 64.0).epsilon(1e-12));
        CHECK(f[0].real() == doctest::Approx(sum / std::sqrt(512.0)).epsilon(1e-12));
    }
}

TEST_SUITE("snapshot") {
    TEST_CASE("round trip through a stream") {
        const auto grid = SpectralGrid::make(8, 2.5);
        const auto f = band_limited(grid, 3);
        const auto g = band_limited(grid, 4);
        const auto snap = make_snapshot(1.25, {&f, &g});
        std::stringstream ss;
        write_snapshot(ss, snap);
        CHECK(ss.str().size() == 33 + 2 * 512 * 16);
        CHECK(ss.str().substr(0, 4) == "EPNS");
        const auto back = read_snapshot(ss);
        CHECK(back.time == 1.25);
        CHECK(back.points_per_axis == 8);
        CHECK(back.box_length == 2.5);
        CHECK(back.real);
        const auto g2 = back.field(grid, 1);
        for (std::size_t m = 0; m < g.size(); ++m) CHECK(g2[m] == g[m]);
    }

    TEST_CASE("rejects corrupt input and mismatched grids") {
        std::stringstream bad("NOPE and more bytes than a header needs.......");
        CHECK_THROWS(read_snapshot(bad));
        const auto grid = SpectralGrid::make(8, 2.5);
        const auto f = band_limited(grid, 3);
        const auto snap = make_snapshot(0.0, {&f});
        CHECK_THROWS(snap.field(SpectralGrid::make(8, 3.0), 0));
        CHECK_THROWS(snap.field(grid, 1));
    }
}
