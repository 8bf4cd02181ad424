#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "epns/state.hpp"

namespace epns {

struct DiagnosticsRecord {
    double t = 0.0;
    std::array<double, 4> n{};  // ||grad^k n||, k = 0..3
    double n_hneg1 = 0.0;
    std::array<double, 4> u{};
    std::array<double, 4> v{};
    std::array<double, 2> diff{};  // ||grad^k (u - v)||, k = 0, 1
    double energy = 0.0;           // E
    double dissipation = 0.0;      // D
    double lyapunov = 0.0;
    double cross_sum = 0.0;
    double m_weighted = 0.0;  // weighted combination at this time
    double m_running = 0.0;   // running max over the history
    double neutrality = 0.0;  // integral of (e^n - 1)
    double rho_min = 1.0;
    double rho_max = 1.0;
    double div_v = 0.0;  // ||div v||_{L2}

    /// rho within [4/5, 5/4].
    bool in_small_data_regime() const { return rho_min >= 0.8 && rho_max <= 1.25; }
};

/// E = ||(n,u,v)||_{H3} + ||n||_{Hdot^-1} from the stored component norms.
double energy_from_components(const DiagnosticsRecord& r);

/// Computes every norm and functional of the state. m_running equals
/// m_weighted; the history supplies the running maximum.
DiagnosticsRecord record(const SystemState& state);

/// Box integral of 1/2 rho |u|^2 + rho log rho - rho + 1 + 1/2 |v|^2 + 1/2 |grad U|^2
/// with -Delta U = e^n - 1. Throws std::domain_error naming the grid point
/// when rho <= 0.
double lyapunov_physical(const SystemState& state);

/// Sum over k = 0..2 of the box integral of grad^k u . grad^{k+1} n.
double cross_sum(const SystemState& state);

class DiagnosticsHistory {
public:
    /// Appends r with m_running set to the running maximum of m_weighted.
    const DiagnosticsRecord& push(DiagnosticsRecord r);

    const std::vector<DiagnosticsRecord>& records() const { return records_; }
    bool empty() const { return records_.empty(); }
    const DiagnosticsRecord& back() const { return records_.back(); }

private:
    std::vector<DiagnosticsRecord> records_;
};

extern const char* const kDiagnosticsCsvHeader;

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const DiagnosticsRecord& r);
void write_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);

struct InequalityCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    /// (rhs - lhs) / max(|lhs|, |rhs|); 0 when both sides vanish.
    double margin = 0.0;
};

struct InequalityReport {
    std::vector<InequalityCheck> checks;
    double worst_margin() const;
    bool passed(double tolerance = 1e-10) const { return worst_margin() >= -tolerance; }
};

/// Interpolation ||grad^l f|| <= ||grad^{l+1} f||^{1-theta} ||Lambda^-a f||^theta,
/// theta = 1/(1+l+a), for l = 0..2 and a in {1/2, 1}, and the low/high
/// Bernstein bounds for 0 <= n < m <= 3 with the grid's cutoff radii.
/// The mean of f is removed first.
InequalityReport check_inequalities(const SpectralField& f);
/// Checks every field of the state (n and the velocity components).
InequalityReport check_inequalities(const SystemState& state);

}  // namespace epns
