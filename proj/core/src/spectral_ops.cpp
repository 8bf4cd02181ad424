#include "epns/spectral_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace epns {

namespace {

constexpr Complex I{0.0, 1.0};

template <class F>
SpectralField map_modes(const SpectralField& f, F&& multiplier) {
    SpectralField out(f.grid_ptr(), f.is_real());
    const auto& g = f.grid();
    for (std::size_t m = 0; m < f.size(); ++m) out[m] = multiplier(g, m) * f[m];
    return out;
}

// Components of the odd wavevector times i.
CVec3 i_xi(const SpectralGrid& g, std::size_t m) {
    const Vec3 k = g.odd_wavevector(m);
    return {I * k[0], I * k[1], I * k[2]};
}

}  // namespace

SpectralField derivative(const SpectralField& f, std::array<int, 3> multi_index) {
    for (int p : multi_index)
        if (p < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
    return map_modes(f, [&](const SpectralGrid& g, std::size_t m) {
        const Vec3 k = g.wavevector(m);
        const Vec3 ko = g.odd_wavevector(m);
        Complex factor = 1.0;
        for (int a = 0; a < 3; ++a) {
            const double ka = (multi_index[a] % 2 == 1) ? ko[a] : k[a];
            factor *= std::pow(I * ka, multi_index[a]);
        }
        return factor;
    });
}

VectorSpectralField gradient(const SpectralField& s) {
    VectorSpectralField out(s.grid_ptr(), s.is_real());
    const auto& g = s.grid();
    for (std::size_t m = 0; m < s.size(); ++m) {
        const CVec3 ik = i_xi(g, m);
        for (int a = 0; a < 3; ++a) out[a][m] = ik[a] * s[m];
    }
    return out;
}

SpectralField divergence(const VectorSpectralField& v) {
    SpectralField out(v.grid_ptr(), v.is_real());
    const auto& g = v.grid();
    for (std::size_t m = 0; m < out.size(); ++m) {
        const CVec3 ik = i_xi(g, m);
        out[m] = ik[0] * v[0][m] + ik[1] * v[1][m] + ik[2] * v[2][m];
    }
    return out;
}

VectorSpectralField curl(const VectorSpectralField& v) {
    VectorSpectralField out(v.grid_ptr(), v.is_real());
    const auto& g = v.grid();
    for (std::size_t m = 0; m < out[0].size(); ++m) {
        const CVec3 ik = i_xi(g, m);
        const CVec3 a = v.at(m);
        out.set(m, {ik[1] * a[2] - ik[2] * a[1], ik[2] * a[0] - ik[0] * a[2], ik[0] * a[1] - ik[1] * a[0]});
    }
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    return map_modes(f, [](const SpectralGrid& g, std::size_t m) { return Complex(-g.k2(m)); });
}

SpectralField lambda_power(const SpectralField& f, double a) {
    if (a == 0.0) return f;
    return map_modes(f, [a](const SpectralGrid& g, std::size_t m) {
        const double k2 = g.k2(m);
        return Complex(k2 == 0.0 ? 0.0 : std::pow(k2, 0.5 * a));
    });
}

SpectralField inv_neg_laplacian(const SpectralField& f) {
    return map_modes(f, [](const SpectralGrid& g, std::size_t m) {
        const double k2 = g.k2(m);
        return Complex(k2 == 0.0 ? 0.0 : 1.0 / k2);
    });
}

VectorSpectralField poisson_gradient(const SpectralField& f) {
    VectorSpectralField out(f.grid_ptr(), f.is_real());
    const auto& g = f.grid();
    for (std::size_t m = 0; m < f.size(); ++m) {
        const double k2 = g.k2(m);
        if (k2 == 0.0) continue;
        const CVec3 ik = i_xi(g, m);
        for (int a = 0; a < 3; ++a) out[a][m] = ik[a] / k2 * f[m];
    }
    return out;
}

VectorSpectralField leray_project(const VectorSpectralField& v) {
    VectorSpectralField out = v;
    const auto& g = v.grid();
    for (std::size_t m = 0; m < v[0].size(); ++m) {
        const double k2 = g.odd_k2(m);
        if (k2 == 0.0) continue;
        const Vec3 k = g.odd_wavevector(m);
        const CVec3 a = v.at(m);
        const Complex kdota = (k[0] * a[0] + k[1] * a[1] + k[2] * a[2]) / k2;
        out.set(m, {a[0] - k[0] * kdota, a[1] - k[1] * kdota, a[2] - k[2] * kdota});
    }
    return out;
}

HodgeParts hodge_decompose(const VectorSpectralField& u) {
    HodgeParts parts{SpectralField(u.grid_ptr(), u.is_real()), VectorSpectralField(u.grid_ptr(), u.is_real()),
                     VectorSpectralField(u.grid_ptr(), u.is_real())};
    const auto& g = u.grid();
    for (std::size_t m = 0; m < u[0].size(); ++m) {
        const CVec3 a = u.at(m);
        const double k2 = g.odd_k2(m);
        if (k2 == 0.0) {
            parts.passthrough.set(m, a);
            continue;
        }
        const double kmag = std::sqrt(k2);
        const CVec3 ik = i_xi(g, m);
        parts.q[m] = (ik[0] * a[0] + ik[1] * a[1] + ik[2] * a[2]) / kmag;
        parts.w.set(m, {(ik[1] * a[2] - ik[2] * a[1]) / kmag, (ik[2] * a[0] - ik[0] * a[2]) / kmag,
                        (ik[0] * a[1] - ik[1] * a[0]) / kmag});
    }
    return parts;
}

VectorSpectralField hodge_recompose(const SpectralField& q, const VectorSpectralField& w) {
    VectorSpectralField out(q.grid_ptr(), q.is_real() && w.is_real());
    const auto& g = q.grid();
    for (std::size_t m = 0; m < q.size(); ++m) {
        const double k2 = g.odd_k2(m);
        if (k2 == 0.0) continue;
        const double kmag = std::sqrt(k2);
        const CVec3 ik = i_xi(g, m);
        const CVec3 b = w.at(m);
        const Complex qm = q[m];
        out.set(m, {(-ik[0] * qm + ik[1] * b[2] - ik[2] * b[1]) / kmag,
                    (-ik[1] * qm + ik[2] * b[0] - ik[0] * b[2]) / kmag,
                    (-ik[2] * qm + ik[0] * b[1] - ik[1] * b[0]) / kmag});
    }
    return out;
}

VectorSpectralField hodge_recompose(const HodgeParts& parts) {
    return hodge_recompose(parts.q, parts.w) + parts.passthrough;
}

SpectralField lowpass(const SpectralField& f) {
    return map_modes(f, [](const SpectralGrid& g, std::size_t m) { return Complex(g.chi1(m)); });
}

SpectralField highpass(const SpectralField& f) {
    SpectralField out(f.grid_ptr(), f.is_real());
    const auto& g = f.grid();
    for (std::size_t m = 0; m < f.size(); ++m) out[m] = f[m] - g.chi1(m) * f[m];
    return out;
}

VectorSpectralField lowpass(const VectorSpectralField& v) { return {lowpass(v[0]), lowpass(v[1]), lowpass(v[2])}; }
VectorSpectralField highpass(const VectorSpectralField& v) {
    return {highpass(v[0]), highpass(v[1]), highpass(v[2])};
}

SpectralField dealias(SpectralField f) {
    const auto& g = f.grid();
    for (std::size_t m = 0; m < f.size(); ++m)
        if (!g.dealias_mask(m)) f[m] = 0.0;
    return f;
}

VectorSpectralField dealias(VectorSpectralField v) {
    for (std::size_t a = 0; a < 3; ++a) v[a] = dealias(std::move(v[a]));
    return v;
}

SpectralField remove_mean(SpectralField f) {
    f[0] = 0.0;
    return f;
}

double homogeneous_norm(const SpectralField& f, double a) {
    const auto& g = f.grid();
    double sum = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) {
        const double k2 = g.k2(m);
        const double w = (a == 0.0) ? 1.0 : (k2 == 0.0 ? 0.0 : std::pow(k2, a));
        sum += w * std::norm(f[m]);
    }
    return std::sqrt(sum * g.cell_volume());
}

double homogeneous_norm(const VectorSpectralField& v, double a) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        const double n = homogeneous_norm(v[c], a);
        sum += n * n;
    }
    return std::sqrt(sum);
}

double sobolev_norm(const SpectralField& f, int k) {
    if (k < 0) throw std::invalid_argument("derivative order must be nonnegative");
    if (k == 0) return homogeneous_norm(f, 0.0);
    const auto& g = f.grid();
    double sum = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) {
        double w = 1.0;
        for (int j = 0; j < k; ++j) w *= g.k2(m);
        sum += w * std::norm(f[m]);
    }
    return std::sqrt(sum * g.cell_volume());
}

double sobolev_norm(const VectorSpectralField& v, int k) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        const double n = sobolev_norm(v[c], k);
        sum += n * n;
    }
    return std::sqrt(sum);
}

double neg_sobolev_norm(const SpectralField& f, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("negative Sobolev order must be positive");
    return homogeneous_norm(f, -a);
}

double hk_norm(const SpectralField& f, int k) {
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) {
        const double n = sobolev_norm(f, j);
        sum += n * n;
    }
    return std::sqrt(sum);
}

double hk_norm(const VectorSpectralField& v, int k) {
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) {
        const double n = sobolev_norm(v, j);
        sum += n * n;
    }
    return std::sqrt(sum);
}

double l2_norm(const SpectralField& f) { return sobolev_norm(f, 0); }
double l2_norm(const VectorSpectralField& v) { return sobolev_norm(v, 0); }

double inner_product(const SpectralField& f, const SpectralField& g) {
    if (f.grid_ptr() != g.grid_ptr()) throw std::invalid_argument("fields live on different grids");
    double sum = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) sum += (f[m] * std::conj(g[m])).real();
    return sum * f.grid().cell_volume();
}

double box_integral(const SpectralGrid& grid, std::span<const double> samples) {
    if (samples.size() != grid.size()) throw std::invalid_argument("sample count does not match grid");
    double sum = 0.0;
    for (double s : samples) sum += s;
    return sum * grid.cell_volume();
}

double physical_l2_norm(const SpectralGrid& grid, std::span<const double> samples) {
    if (samples.size() != grid.size()) throw std::invalid_argument("sample count does not match grid");
    double sum = 0.0;
    for (double s : samples) sum += s * s;
    return std::sqrt(sum * grid.cell_volume());
}

}  // namespace epns
