#include "squeezeline/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace squeezeline {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

std::vector<double> dedup_sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-14; }),
            v.end());
    return v;
}

}  // namespace

CurvatureProfile CurvatureProfile::piecewise_constant(std::vector<Segment> segments) {
    require(!segments.empty(), "profile.segments: at least one segment required");
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) { return a.s_lo < b.s_lo; });
    std::vector<double> brk;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& seg = segments[i];
        require(std::isfinite(seg.value), "profile.segments: value must be finite");
        require(seg.s_lo < seg.s_hi, "profile.segments: segment needs s_start < s_end");
        if (i > 0)
            require(segments[i - 1].s_hi <= seg.s_lo + 1e-14,
                    "profile.segments: segments must not overlap");
        brk.push_back(seg.s_lo);
        brk.push_back(seg.s_hi);
    }
    CurvatureProfile p;
    p.kind_ = Kind::PiecewiseConstant;
    p.segments_ = std::move(segments);
    p.breakpoints_ = dedup_sorted(std::move(brk));
    p.support_lo_ = p.breakpoints_.front();
    p.support_hi_ = p.breakpoints_.back();
    return p;
}

CurvatureProfile CurvatureProfile::bump(double height, double half_width, double center) {
    require(std::isfinite(height), "profile.height: must be finite");
    require(half_width > 0.0 && std::isfinite(half_width),
            "profile.half_width: must be positive");
    CurvatureProfile p;
    p.kind_ = Kind::Bump;
    p.height_ = height;
    p.half_width_ = half_width;
    p.center_ = center;
    p.support_lo_ = center - half_width;
    p.support_hi_ = center + half_width;
    p.breakpoints_ = {p.support_lo_, p.support_hi_};
    return p;
}

CurvatureProfile CurvatureProfile::samples(std::vector<double> s, std::vector<double> gamma) {
    require(s.size() == gamma.size(), "profile.samples: s and gamma must match in length");
    require(s.size() >= 3, "profile.samples: at least three samples required");
    for (std::size_t i = 0; i < s.size(); ++i) {
        require(std::isfinite(s[i]) && std::isfinite(gamma[i]),
                "profile.samples: entries must be finite");
        if (i > 0) require(s[i] > s[i - 1], "profile.samples: s must be strictly increasing");
    }

    CurvatureProfile p;
    p.kind_ = Kind::Samples;
    p.support_lo_ = s.front();
    p.support_hi_ = s.back();
    p.breakpoints_ = {s.front(), s.back()};
    p.knots_ = std::move(s);
    p.values_ = std::move(gamma);

    // clamped cubic spline (zero slope at both support edges): solve the
    // tridiagonal moment system with the Thomas algorithm
    const int n = static_cast<int>(p.knots_.size()) - 1;
    std::vector<double> h(n);
    for (int i = 0; i < n; ++i) h[i] = p.knots_[i + 1] - p.knots_[i];

    std::vector<double> diag(n + 1), upper(n), lower(n), rhs(n + 1);
    diag[0] = 2.0 * h[0];
    upper[0] = h[0];
    rhs[0] = 6.0 * ((p.values_[1] - p.values_[0]) / h[0] - 0.0);
    for (int i = 1; i < n; ++i) {
        lower[i - 1] = h[i - 1];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        upper[i] = h[i];
        rhs[i] = 6.0 * ((p.values_[i + 1] - p.values_[i]) / h[i] -
                        (p.values_[i] - p.values_[i - 1]) / h[i - 1]);
    }
    lower[n - 1] = h[n - 1];
    diag[n] = 2.0 * h[n - 1];
    rhs[n] = 6.0 * (0.0 - (p.values_[n] - p.values_[n - 1]) / h[n - 1]);

    for (int i = 1; i <= n; ++i) {
        const double mult = lower[i - 1] / diag[i - 1];
        diag[i] -= mult * upper[i - 1];
        rhs[i] -= mult * rhs[i - 1];
    }
    p.moments_.assign(n + 1, 0.0);
    p.moments_[n] = rhs[n] / diag[n];
    for (int i = n - 1; i >= 0; --i)
        p.moments_[i] = (rhs[i] - upper[i] * p.moments_[i + 1]) / diag[i];
    return p;
}

int CurvatureProfile::spline_interval(double s) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
    int i = static_cast<int>(it - knots_.begin()) - 1;
    i = std::clamp(i, 0, static_cast<int>(knots_.size()) - 2);
    return i;
}

double CurvatureProfile::value(double s) const {
    if (s < support_lo_ || s > support_hi_) return 0.0;
    switch (kind_) {
        case Kind::PiecewiseConstant:
            for (const auto& seg : segments_)
                if (s >= seg.s_lo && s <= seg.s_hi) return seg.value;
            return 0.0;
        case Kind::Bump: {
            const double t = (s - center_) / half_width_;
            const double q = 1.0 - t * t;
            return height_ * q * q;
        }
        case Kind::Samples: {
            const int i = spline_interval(s);
            const double h = knots_[i + 1] - knots_[i];
            const double a = (knots_[i + 1] - s) / h, b = (s - knots_[i]) / h;
            return a * values_[i] + b * values_[i + 1] +
                   ((a * a * a - a) * moments_[i] + (b * b * b - b) * moments_[i + 1]) *
                       h * h / 6.0;
        }
    }
    return 0.0;
}

double CurvatureProfile::derivative(double s) const {
    if (s < support_lo_ || s > support_hi_) return 0.0;
    switch (kind_) {
        case Kind::PiecewiseConstant:
            return 0.0;
        case Kind::Bump: {
            const double t = (s - center_) / half_width_;
            return -4.0 * height_ * t * (1.0 - t * t) / half_width_;
        }
        case Kind::Samples: {
            const int i = spline_interval(s);
            const double h = knots_[i + 1] - knots_[i];
            const double a = (knots_[i + 1] - s) / h, b = (s - knots_[i]) / h;
            return (values_[i + 1] - values_[i]) / h +
                   ((1.0 - 3.0 * a * a) * moments_[i] + (3.0 * b * b - 1.0) * moments_[i + 1]) *
                       h / 6.0;
        }
    }
    return 0.0;
}

double CurvatureProfile::second_derivative(double s) const {
    if (s < support_lo_ || s > support_hi_) return 0.0;
    switch (kind_) {
        case Kind::PiecewiseConstant:
            return 0.0;
        case Kind::Bump: {
            const double t = (s - center_) / half_width_;
            return height_ * (12.0 * t * t - 4.0) / (half_width_ * half_width_);
        }
        case Kind::Samples: {
            const int i = spline_interval(s);
            const double h = knots_[i + 1] - knots_[i];
            const double a = (knots_[i + 1] - s) / h, b = (s - knots_[i]) / h;
            return a * moments_[i] + b * moments_[i + 1];
        }
    }
    return 0.0;
}

double CurvatureProfile::max_abs() const {
    switch (kind_) {
        case Kind::PiecewiseConstant: {
            double m = 0.0;
            for (const auto& seg : segments_) m = std::max(m, std::abs(seg.value));
            return m;
        }
        case Kind::Bump:
            return std::abs(height_);
        case Kind::Samples: {
            double m = 0.0;
            const int per = 16;
            for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
                for (int q = 0; q <= per; ++q) {
                    const double s = knots_[i] + (knots_[i + 1] - knots_[i]) * q / per;
                    m = std::max(m, std::abs(value(s)));
                }
            return m;
        }
    }
    return 0.0;
}

CurvatureProfile CurvatureProfile::scaled_by(double factor) const {
    require(std::isfinite(factor), "scan factor must be finite");
    CurvatureProfile p = *this;
    switch (kind_) {
        case Kind::PiecewiseConstant:
            for (auto& seg : p.segments_) seg.value *= factor;
            break;
        case Kind::Bump:
            p.height_ *= factor;
            break;
        case Kind::Samples:
            for (auto& y : p.values_) y *= factor;
            for (auto& m : p.moments_) m *= factor;
            break;
    }
    return p;
}

double ScalingFamily::lambda(double eps) const {
    double acc = 1.0, epow = 1.0;
    for (double c : lambda_coeffs) {
        epow *= eps;
        acc += c * epow;
    }
    return acc;
}

void ScalingFamily::validate() const {
    require(alpha > 1.0 && std::isfinite(alpha), "scaling.alpha: must satisfy alpha > 1");
    require(d > 0.0 && std::isfinite(d), "scaling.d: must be positive");
    require(eps_max > 0.0 && std::isfinite(eps_max), "scaling.eps_max: must be positive");
    for (double c : lambda_coeffs)
        require(std::isfinite(c), "scaling.lambda_coeffs: entries must be finite");
    const int probes = 1000;
    for (int i = 1; i <= probes; ++i) {
        const double eps = eps_max * i / probes;
        require(lambda(eps) > 0.0,
                "scaling.lambda_coeffs: lambda(eps) must stay positive on (0, eps_max]");
    }
}

Potential Potential::from_function(std::function<double(double)> vbar,
                                   std::vector<double> breakpoints, QuadratureSpec spec) {
    Potential pot;
    pot.grid_ = PanelGrid::make(std::move(breakpoints), spec.panels_per_segment,
                                spec.nodes_per_panel);
    pot.fn_ = std::move(vbar);
    const int n = pot.grid_.size();
    pot.vbar_.resize(n);
    pot.u_.resize(n);
    pot.v_.resize(n);
    for (int i = 0; i < n; ++i) {
        const double val = pot.fn_(pot.grid_.node(i));
        require(std::isfinite(val), "potential values must be finite on the support");
        pot.vbar_[i] = val;
        pot.v_[i] = std::sqrt(std::abs(val));
        pot.u_[i] = (val > 0.0) ? pot.v_[i] : (val < 0.0 ? -pot.v_[i] : 0.0);
    }
    pot.moment_ = pot.grid_.integrate(pot.vbar_);
    return pot;
}

double Potential::vbar_at(double s) const {
    if (s < grid_.lo() || s > grid_.hi()) return 0.0;
    return fn_(s);
}

double Potential::v_at(double s) const { return std::sqrt(std::abs(vbar_at(s))); }

double Potential::u_at(double s) const {
    const double val = vbar_at(s);
    return (val > 0.0) ? std::sqrt(val) : (val < 0.0 ? -std::sqrt(-val) : 0.0);
}

double bending_angle(const CurvatureProfile& profile, QuadratureSpec spec) {
    const auto grid = PanelGrid::make(profile.smoothness_breakpoints(),
                                      spec.panels_per_segment, spec.nodes_per_panel);
    return grid.integrate_fn([&](double s) { return profile.value(s); });
}

ScaledBendingAngle scaled_bending_angle(const CurvatureProfile& profile,
                                        const ScalingFamily& family, double eps,
                                        QuadratureSpec spec) {
    family.validate();
    if (!(eps > 0.0) || eps > family.eps_max)
        throw std::domain_error("eps out of range (0, eps_max]");
    const double theta = bending_angle(profile, spec);
    ScaledBendingAngle out;
    out.theta_eps = theta * std::sqrt(family.lambda(eps));
    out.first_order = theta * (1.0 + 0.5 * family.lambda1() * eps);
    return out;
}

Potential effective_potential(const CurvatureProfile& profile, QuadratureSpec spec) {
    CurvatureProfile shape = profile;  // keep an owned copy in the evaluator
    Potential pot = Potential::from_function(
        [shape](double s) {
            const double g = shape.value(s);
            return -0.25 * g * g;
        },
        profile.smoothness_breakpoints(), spec);
    if (pot.moment() == 0.0)
        throw std::invalid_argument(
            "degenerate potential: the integral of the effective potential vanishes; "
            "a profile with nonzero curvature is required");
    return pot;
}

double effective_potential_2d(const CurvatureProfile& profile,
                              const ScalingFamily& family, double eps, double s,
                              double u) {
    family.validate();
    if (!(eps > 0.0) || eps > family.eps_max)
        throw std::domain_error("eps out of range (0, eps_max]");
    if (!(std::abs(u) < family.d))
        throw std::domain_error("transverse coordinate outside the open strip (-d, d)");
    const double lam = family.lambda(eps);
    const double sl = std::sqrt(lam);
    const double g = profile.value(s / eps);
    const double gp = profile.derivative(s / eps);
    const double gpp = profile.second_derivative(s / eps);
    const double ea = std::pow(eps, family.alpha - 1.0);
    const double denom = 1.0 + ea * u * sl * g;
    if (denom <= 0.0) throw std::domain_error("width exceeds curvature radius");
    const double d2 = denom * denom;
    return -lam * g * g / (4.0 * d2) + ea * u * sl * gpp / (2.0 * d2 * denom) -
           1.25 * ea * ea * u * u * lam * gp * gp / (d2 * d2);
}

double transverse_threshold(const ScalingFamily& family, int n, double eps) {
    family.validate();
    if (n < 1) throw std::invalid_argument("transverse mode index must be >= 1");
    if (!(eps > 0.0) || eps > family.eps_max)
        throw std::domain_error("eps out of range (0, eps_max]");
    const double base = n * std::numbers::pi / (2.0 * family.d * std::pow(eps, family.alpha));
    return base * base;
}

}  // namespace squeezeline
