#include "epns/decay.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "epns/propagator.hpp"

namespace epns {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr Complex I{0.0, 1.0};

double parse_number(std::string_view text, std::string_view key) {
    double value = 0.0;
    std::string s(text);
    try {
        std::size_t used = 0;
        value = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw std::invalid_argument("profile parameter '" + std::string(key) + "' is not a number: " + s);
    }
    return value;
}

std::map<std::string, std::string> parse_params(std::string_view text) {
    std::map<std::string, std::string> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw std::invalid_argument("profile parameter needs key=value: " + std::string(item));
        out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

// Breakpoints for a time-t integrand: heat-kernel scales 2^j / sqrt(1 + t).
void add_time_scales(std::vector<double>& points, double t, double r_max) {
    const double s = 1.0 / std::sqrt(1.0 + t);
    for (double r = s / 4.0; r < r_max; r *= 2.0) points.push_back(r);
}

std::vector<double> finalize_breakpoints(std::vector<double> points, double r_max) {
    points.push_back(0.0);
    points.push_back(r_max);
    std::erase_if(points, [r_max](double r) { return !(r >= 0.0) || r > r_max; });
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

double amplitude(const std::optional<RadialProfile>& p, double r) { return p ? (*p)(r) : 0.0; }

}  // namespace

RadialProfile RadialProfile::gaussian(double amplitude, double sigma) {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw std::invalid_argument("profile amplitude must be >= 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gaussian sigma must be positive");
    RadialProfile p;
    p.kind_ = Kind::Gaussian;
    p.amplitude_ = amplitude;
    p.scale_ = sigma;
    return p;
}

RadialProfile RadialProfile::bump(double amplitude, double radius, double width) {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw std::invalid_argument("profile amplitude must be >= 0");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("bump radius must be positive");
    if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("bump width must be positive");
    RadialProfile p;
    p.kind_ = Kind::Bump;
    p.amplitude_ = amplitude;
    p.scale_ = radius;
    p.width_ = width;
    return p;
}

RadialProfile RadialProfile::tabulated(std::vector<double> radii, std::vector<double> values) {
    if (radii.size() != values.size() || radii.size() < 2)
        throw std::invalid_argument("tabulated profile needs >= 2 (r, g) pairs");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!std::isfinite(radii[i]) || !std::isfinite(values[i]) || values[i] < 0.0 || radii[i] < 0.0)
            throw std::invalid_argument("tabulated profile samples must be finite and nonnegative");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw std::invalid_argument("tabulated radii must increase");
    }
    RadialProfile p;
    p.kind_ = Kind::Tabulated;
    p.radii_ = std::move(radii);
    p.values_ = std::move(values);
    return p;
}

RadialProfile RadialProfile::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string kind(spec.substr(0, colon));
    const auto params = parse_params(colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1));
    auto take = [&](const std::string& key, std::optional<double> fallback) {
        auto it = params.find(key);
        if (it == params.end()) {
            if (!fallback) throw std::invalid_argument("profile '" + kind + "' needs parameter " + key);
            return *fallback;
        }
        return parse_number(it->second, key);
    };
    auto check_keys = [&](std::initializer_list<std::string_view> allowed) {
        for (const auto& [key, value] : params)
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                throw std::invalid_argument("unknown profile parameter '" + key + "' for " + kind);
    };
    if (kind == "gaussian") {
        check_keys({"sigma", "A"});
        return gaussian(take("A", 1.0), take("sigma", 1.0));
    }
    if (kind == "bump") {
        check_keys({"A", "rc", "width"});
        return bump(take("A", 1.0), take("rc", std::nullopt), take("width", 1.0));
    }
    if (kind == "tabulated") {
        check_keys({"file"});
        auto it = params.find("file");
        if (it == params.end()) throw std::invalid_argument("tabulated profile needs file=path");
        std::ifstream in(it->second);
        if (!in) throw std::invalid_argument("cannot open profile table " + it->second);
        std::vector<double> r, g;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream row(line);
            double a = 0.0, b = 0.0;
            if (!(row >> a >> b)) continue;  // header or malformed row
            r.push_back(a);
            g.push_back(b);
        }
        return tabulated(std::move(r), std::move(g));
    }
    throw std::invalid_argument("unknown profile kind '" + kind + "'");
}

double RadialProfile::operator()(double r) const {
    switch (kind_) {
        case Kind::Gaussian:
            return amplitude_ * std::exp(-r * r / (2.0 * scale_ * scale_));
        case Kind::Bump: {
            if (r <= scale_) return amplitude_;
            const double outer = scale_ * (1.0 + width_);
            if (r >= outer) return 0.0;
            return amplitude_ * 0.5 * (1.0 + std::cos(std::numbers::pi * (r - scale_) / (outer - scale_)));
        }
        case Kind::Tabulated: {
            if (r <= radii_.front()) return values_.front();
            if (r >= radii_.back()) return r == radii_.back() ? values_.back() : 0.0;
            const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
            const std::size_t hi = static_cast<std::size_t>(it - radii_.begin());
            const double w = (r - radii_[hi - 1]) / (radii_[hi] - radii_[hi - 1]);
            return (1.0 - w) * values_[hi - 1] + w * values_[hi];
        }
    }
    return 0.0;
}

double RadialProfile::support_radius() const {
    switch (kind_) {
        case Kind::Gaussian:
            return 9.0 * scale_;
        case Kind::Bump:
            return scale_ * (1.0 + width_);
        case Kind::Tabulated:
            return radii_.back();
    }
    return 0.0;
}

std::vector<double> RadialProfile::breakpoints() const {
    switch (kind_) {
        case Kind::Gaussian:
            return {scale_, 2.0 * scale_, 4.0 * scale_};
        case Kind::Bump:
            return {scale_, scale_ * (1.0 + width_)};
        case Kind::Tabulated:
            return radii_;
    }
    return {};
}

Target parse_target(std::string_view name) {
    if (name == "n") return Target::Density;
    if (name == "u") return Target::VelocityU;
    if (name == "v") return Target::VelocityV;
    if (name == "diff" || name == "u-v") return Target::Difference;
    throw std::invalid_argument("unknown target '" + std::string(name) + "'");
}

double linear_l2_norm(double t, int k, const InitialProfiles& profiles, Target target, Alignment alignment,
                      const QuadratureOptions& quad, CutoffRadii cutoffs) {
    if (!(t >= 0.0)) throw std::domain_error("linear_l2_norm: negative time");
    if (k < 0) throw std::invalid_argument("linear_l2_norm: derivative order must be nonnegative");

    double r_max = 0.0;
    std::vector<double> points{cutoffs.low, cutoffs.high};
    for (const auto* p : {&profiles.density, &profiles.longitudinal_u, &profiles.transverse_u, &profiles.transverse_v}) {
        if (!*p) continue;
        r_max = std::max(r_max, (*p)->support_radius());
        const auto bp = (*p)->breakpoints();
        points.insert(points.end(), bp.begin(), bp.end());
    }
    if (r_max == 0.0) return 0.0;
    add_time_scales(points, t, r_max);
    points = finalize_breakpoints(std::move(points), r_max);

    const bool aligned = alignment == Alignment::Aligned;
    auto integrand = [&](double r) {
        if (r <= 0.0) return 0.0;
        const auto s = symbols(t, r);
        const double gn = amplitude(profiles.density, r);
        const double gl = amplitude(profiles.longitudinal_u, r);
        const double gu = amplitude(profiles.transverse_u, r);
        const double gv = amplitude(profiles.transverse_v, r);
        const double phi11 = s.phi11.real();
        const double d = s.d.real();
        const double phiq = s.phiq.real();

        // Longitudinal velocity amplitude along xi/|xi|.
        const Complex longitudinal = -I * ((1.0 + r * r) / r) * d * gn + phiq * gl;
        auto transverse = [&](double cu, double cv) {
            return aligned ? (cu * gu + cv * gv) * (cu * gu + cv * gv) : (cu * gu) * (cu * gu) + (cv * gv) * (cv * gv);
        };

        double value = 0.0;
        switch (target) {
            case Target::Density:
                value = std::norm(phi11 * gn - I * r * d * gl);
                break;
            case Target::VelocityU:
                value = std::norm(longitudinal) + transverse(s.psi_perp, s.psi12);
                break;
            case Target::VelocityV:
                value = transverse(s.psi12, s.psi33);
                break;
            case Target::Difference:
                value = std::norm(longitudinal) + transverse(s.drag_from_u, s.drag_from_v);
                break;
        }
        return kFourPi * std::pow(r, 2 + 2 * k) * value;
    };

    const double integral = integrate(integrand, points, quad);
    if (!std::isfinite(integral) || integral < 0.0) throw std::runtime_error("linear_l2_norm: non-integrable profile");
    return std::sqrt(integral);
}

std::vector<double> log_spaced(double t_min, double t_max, std::size_t n) {
    if (!(t_min > 0.0) || !(t_max > t_min) || n < 2) throw std::invalid_argument("log_spaced needs 0 < t_min < t_max, n >= 2");
    std::vector<double> out(n);
    const double a = std::log(t_min);
    const double b = std::log(t_max);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = t_min;
    out.back() = t_max;
    return out;
}

std::vector<double> lin_spaced(double t_min, double t_max, std::size_t n) {
    if (!(t_max > t_min) || n < 2) throw std::invalid_argument("lin_spaced needs t_min < t_max, n >= 2");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

DecaySeries sample_series(const std::vector<double>& times, const std::function<double(double)>& f) {
    DecaySeries s;
    s.times = times;
    s.values.reserve(times.size());
    for (double t : times) s.values.push_back(f(t));
    return s;
}

DecayFit fit_decay(const DecaySeries& series, double t_min, double t_max, FitModel model) {
    if (series.times.size() != series.values.size()) throw std::invalid_argument("series times and values differ in length");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        if (t < t_min || t > t_max) continue;
        const double v = series.values[i];
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("fit_decay: values must be positive and finite");
        xs.push_back(model == FitModel::PowerLaw ? std::log1p(t) : t);
        ys.push_back(std::log(v));
    }
    if (xs.size() < 8) throw std::invalid_argument("fit_decay: fewer than 8 samples in the window");

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_decay: degenerate window");

    DecayFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.rms_residual = std::sqrt(ss_res / n);
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.t_min = t_min;
    fit.t_max = t_max;
    fit.samples = xs.size();
    fit.model = model;
    return fit;
}

double lower_bound_margin(const FourierVectorFunction& u0, const FourierVectorFunction& v0, double r0,
                          std::size_t radial_samples, std::size_t direction_samples) {
    if (!(r0 > 0.0)) throw std::invalid_argument("lower_bound_margin: r0 must be positive");
    auto margin_at = [&](const Vec3& xi) {
        const CVec3 a = u0(xi);
        const CVec3 b = v0(xi);
        const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        Complex proj{};
        if (k2 > 0.0) proj = (xi[0] * a[0] + xi[1] * a[1] + xi[2] * a[2]) / k2;
        double sum = 0.0;
        for (int c = 0; c < 3; ++c) sum += std::norm(b[c] + a[c] - xi[c] * proj);
        return std::sqrt(sum);
    };

    double worst = margin_at({0.0, 0.0, 0.0});
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < radial_samples; ++i) {
        const double r = r0 * (static_cast<double>(i) + 0.5) / static_cast<double>(radial_samples);
        for (std::size_t j = 0; j < direction_samples; ++j) {
            // Fibonacci sphere directions.
            const double z = 1.0 - 2.0 * (static_cast<double>(j) + 0.5) / static_cast<double>(direction_samples);
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * static_cast<double>(j);
            worst = std::min(worst, margin_at({r * rho * std::cos(phi), r * rho * std::sin(phi), r * z}));
        }
    }
    return worst;
}

double lower_bound_norm(double t, double alpha0, double r0, LowerBoundKind kind, const QuadratureOptions& quad) {
    if (!(t >= 0.0)) throw std::domain_error("lower_bound_norm: negative time");
    if (!(r0 > 0.0)) throw std::invalid_argument("lower_bound_norm: r0 must be positive");
    std::vector<double> points;
    add_time_scales(points, t, r0);
    points = finalize_breakpoints(std::move(points), r0);
    const int power = kind == LowerBoundKind::Velocity ? 2 : 6;
    const double weight = kind == LowerBoundKind::Velocity ? 0.25 : 1.0 / 16.0;
    const double integral =
        integrate([&](double r) { return kFourPi * std::pow(r, power) * std::exp(-r * r * t); }, points, quad);
    return std::sqrt(weight * alpha0 * alpha0 * integral);
}

InitialProfiles lower_bound_profiles(double alpha0, double r0) {
    InitialProfiles p;
    p.transverse_v = RadialProfile::bump(alpha0, r0);
    return p;
}

}  // namespace epns
