#include "epns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "epns/spectral_ops.hpp"

namespace epns {

namespace {

double hypot_sum(std::initializer_list<double> parts) {
    double s = 0.0;
    for (double p : parts) s += p * p;
    return std::sqrt(s);
}

struct PhysicalState {
    std::vector<double> n;
    std::array<std::vector<double>, 3> u;
    std::array<std::vector<double>, 3> v;
};

PhysicalState to_physical(const SystemState& s) {
    return {transform_inverse(s.n), transform_inverse(s.u), transform_inverse(s.v)};
}

std::string grid_point(const SpectralGrid& g, std::size_t idx) {
    const auto ijk = g.unflatten(idx);
    return "(" + std::to_string(ijk[0]) + ", " + std::to_string(ijk[1]) + ", " + std::to_string(ijk[2]) + ")";
}

double lyapunov_from_physical(const SystemState& state, const PhysicalState& p) {
    const auto& g = state.grid();
    std::vector<double> density_excess(g.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double rho = std::exp(p.n[i]);
        if (!(rho > 0.0) || !std::isfinite(rho))
            throw std::domain_error("nonpositive density at grid point " + grid_point(g, i));
        double u2 = 0.0, v2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            u2 += p.u[a][i] * p.u[a][i];
            v2 += p.v[a][i] * p.v[a][i];
        }
        // rho log rho - rho + 1 with rho = e^n, written to keep precision near rho = 1.
        const double em1 = std::expm1(p.n[i]);
        const double entropy = rho * p.n[i] - em1;
        sum += 0.5 * rho * u2 + entropy + 0.5 * v2;
        density_excess[i] = em1;
    }
    const auto grad_u = poisson_gradient(transform_forward(state.grid_ptr(), density_excess));
    const double field = l2_norm(grad_u);
    return sum * g.cell_volume() + 0.5 * field * field;
}

}  // namespace

double energy_from_components(const DiagnosticsRecord& r) {
    double h3 = 0.0;
    for (int k = 0; k < 4; ++k) h3 += r.n[k] * r.n[k] + r.u[k] * r.u[k] + r.v[k] * r.v[k];
    return std::sqrt(h3) + r.n_hneg1;
}

double lyapunov_physical(const SystemState& state) { return lyapunov_from_physical(state, to_physical(state)); }

double cross_sum(const SystemState& state) {
    const auto& g = state.grid();
    double sum = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m) {
        const double k2 = g.k2(m);
        const Vec3 xi = g.odd_wavevector(m);
        const Complex n = state.n[m];
        double inner = 0.0;
        for (int a = 0; a < 3; ++a) inner += (state.u[a][m] * std::conj(Complex(0.0, xi[a]) * n)).real();
        sum += (1.0 + k2 + k2 * k2) * inner;
    }
    return sum * g.cell_volume();
}

DiagnosticsRecord record(const SystemState& state) {
    if (!state.shares_grid()) throw std::invalid_argument("state fields must share one grid");
    DiagnosticsRecord r;
    r.t = state.t;
    const auto diff = state.u - state.v;
    for (int k = 0; k < 4; ++k) {
        r.n[k] = sobolev_norm(state.n, k);
        r.u[k] = sobolev_norm(state.u, k);
        r.v[k] = sobolev_norm(state.v, k);
    }
    const double diff2 = sobolev_norm(diff, 2);
    const double diff3 = sobolev_norm(diff, 3);
    r.diff = {sobolev_norm(diff, 0), sobolev_norm(diff, 1)};
    r.n_hneg1 = neg_sobolev_norm(state.n, 1.0);
    r.energy = energy_from_components(r);
    r.dissipation = hypot_sum({r.n[0], r.n[1], r.n[2], r.n[3]}) +
                    hypot_sum({r.v[1], r.v[2], r.v[3], sobolev_norm(state.v, 4)}) +
                    hypot_sum({r.diff[0], r.diff[1], diff2, diff3});

    const double s = 1.0 + state.t;
    double m = std::pow(s, 15.0 / 4.0) * r.n[3];
    for (int k = 0; k < 3; ++k) m += std::pow(s, 11.0 / 4.0 + 0.5 * k) * r.n[k];
    for (int k = 0; k < 4; ++k) m += std::pow(s, 3.0 / 4.0 + 0.5 * k) * std::hypot(r.u[k], r.v[k]);
    r.m_weighted = m;
    r.m_running = m;

    const auto p = to_physical(state);
    const auto& g = state.grid();
    double neutral = 0.0;
    r.rho_min = std::numeric_limits<double>::infinity();
    r.rho_max = -std::numeric_limits<double>::infinity();
    for (double n : p.n) {
        neutral += std::expm1(n);
        const double rho = std::exp(n);
        r.rho_min = std::min(r.rho_min, rho);
        r.rho_max = std::max(r.rho_max, rho);
    }
    r.neutrality = neutral * g.cell_volume();
    r.lyapunov = lyapunov_from_physical(state, p);
    r.cross_sum = cross_sum(state);
    r.div_v = l2_norm(divergence(state.v));
    return r;
}

const DiagnosticsRecord& DiagnosticsHistory::push(DiagnosticsRecord r) {
    r.m_running = records_.empty() ? r.m_weighted : std::max(r.m_weighted, records_.back().m_running);
    records_.push_back(r);
    return records_.back();
}

const char* const kDiagnosticsCsvHeader =
    "t,n_L2,n_H1,n_H2,n_H3dot,n_Hneg1,u_L2,u_H1,u_H2,u_H3dot,v_L2,v_H1,v_H2,v_H3dot,diff_L2,diff_H1dot,"
    "E,D,lyapunov,cross_sum,M_running,neutrality,rho_min,rho_max";

void write_csv_header(std::ostream& os) { os << kDiagnosticsCsvHeader << '\n'; }

void write_csv_row(std::ostream& os, const DiagnosticsRecord& r) {
    const double values[] = {r.t,      r.n[0],     r.n[1],      r.n[2],      r.n[3],          r.n_hneg1,
                             r.u[0],   r.u[1],     r.u[2],      r.u[3],      r.v[0],          r.v[1],
                             r.v[2],   r.v[3],     r.diff[0],   r.diff[1],   r.energy,        r.dissipation,
                             r.lyapunov, r.cross_sum, r.m_running, r.neutrality, r.rho_min, r.rho_max};
    char buf[32];
    bool first = true;
    for (double x : values) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        if (!first) os << ',';
        os << buf;
        first = false;
    }
    os << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    write_csv_header(os);
    for (const auto& r : records) write_csv_row(os, r);
}

double InequalityReport::worst_margin() const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& c : checks) worst = std::min(worst, c.margin);
    return worst;
}

InequalityReport check_inequalities(const SpectralField& f) {
    InequalityReport report;
    auto add = [&](std::string name, double lhs, double rhs) {
        const double scale = std::max(std::abs(lhs), std::abs(rhs));
        report.checks.push_back({std::move(name), lhs, rhs, scale > 0.0 ? (rhs - lhs) / scale : 0.0});
    };
    const auto g = remove_mean(f);
    const auto& cut = f.grid().cutoffs();

    for (int l = 0; l <= 2; ++l) {
        for (double a : {0.5, 1.0}) {
            const double theta = 1.0 / (1.0 + l + a);
            add("interpolation l=" + std::to_string(l) + " a=" + std::to_string(a), sobolev_norm(g, l),
                std::pow(sobolev_norm(g, l + 1), 1.0 - theta) * std::pow(neg_sobolev_norm(g, a), theta));
        }
    }
    const auto low = lowpass(g);
    const auto high = highpass(g);
    for (int n = 0; n <= 3; ++n) {
        for (int m = n + 1; m <= 3; ++m) {
            const std::string tag = " n=" + std::to_string(n) + " m=" + std::to_string(m);
            add("bernstein low" + tag, sobolev_norm(low, m), std::pow(cut.high, m - n) * sobolev_norm(low, n));
            add("bernstein high" + tag, sobolev_norm(high, n), std::pow(cut.low, n - m) * sobolev_norm(high, m));
        }
    }
    return report;
}

InequalityReport check_inequalities(const SystemState& state) {
    InequalityReport all;
    auto append = [&](const std::string& field, const SpectralField& f) {
        for (auto& c : check_inequalities(f).checks) {
            c.name = field + ": " + c.name;
            all.checks.push_back(std::move(c));
        }
    };
    append("n", state.n);
    for (int a = 0; a < 3; ++a) {
        append("u" + std::to_string(a + 1), state.u[a]);
        append("v" + std::to_string(a + 1), state.v[a]);
    }
    return all;
}

}  // namespace epns
