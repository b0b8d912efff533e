#pragma once

#include <functional>
#include <string>
#include <vector>

#include "squeezeline/quadrature.hpp"

namespace squeezeline {

/// Signed curvature gamma(s) of a bent guide axis, compactly supported.
///
/// Outside [support_lo, support_hi] the curvature (and both derivatives)
/// vanish identically, so the guide consists of two straight half lines
/// joined by the bent section.
class CurvatureProfile {
public:
    enum class Kind { PiecewiseConstant, Bump, Samples };

    struct Segment {
        double s_lo, s_hi, value;
    };

    /// Step profile: constant curvature on each segment, zero elsewhere.
    static CurvatureProfile piecewise_constant(std::vector<Segment> segments);

    /// Polynomial bump h*(1 - t^2)^2 with t = (s - center)/half_width.
    static CurvatureProfile bump(double height, double half_width, double center = 0.0);

    /// Tabulated samples, interpolated by a cubic spline with zero end slopes.
    static CurvatureProfile samples(std::vector<double> s, std::vector<double> gamma);

    Kind kind() const { return kind_; }
    double support_lo() const { return support_lo_; }
    double support_hi() const { return support_hi_; }

    double value(double s) const;              // gamma(s)
    double derivative(double s) const;         // gamma'(s)
    double second_derivative(double s) const;  // gamma''(s)

    /// Supremum of |gamma| (sampled estimate for tabulated profiles).
    double max_abs() const;

    /// Points where smoothness may fail, including the support edges.
    /// Quadrature panels and ODE checkpoints are aligned with these.
    const std::vector<double>& smoothness_breakpoints() const { return breakpoints_; }

    /// Same shape with curvature multiplied by factor (scan families).
    CurvatureProfile scaled_by(double factor) const;

private:
    CurvatureProfile() = default;

    Kind kind_ = Kind::PiecewiseConstant;
    double support_lo_ = 0.0, support_hi_ = 0.0;
    std::vector<double> breakpoints_;

    std::vector<Segment> segments_;     // PiecewiseConstant
    double height_ = 0.0, half_width_ = 1.0, center_ = 0.0;  // Bump

    // Samples: clamped cubic spline through (knots, values)
    std::vector<double> knots_, values_, moments_;  // moments = spline second derivs
    int spline_interval(double s) const;
};

/// Scaling family of the squeeze: width eps^alpha * d, curvature prefactor
/// sqrt(lambda(eps))/eps with lambda(eps) = 1 + sum_n lambda_n eps^n.
/// The coefficient list is finite; evaluation truncates the series there.
struct ScalingFamily {
    std::vector<double> lambda_coeffs;  // lambda_1, lambda_2, ...
    double alpha = 3.0;                 // width exponent, > 1
    double d = 1.0;                     // half width (length unit)
    double eps_max = 1.0;

    double lambda(double eps) const;
    double lambda1() const { return lambda_coeffs.empty() ? 0.0 : lambda_coeffs[0]; }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct QuadratureSpec {
    int panels_per_segment = 16;
    int nodes_per_panel = 8;
};

/// Effective 1D potential on a composite Gauss-Legendre grid, together with
/// the factorization u = sgn(V)|V|^(1/2), v = |V|^(1/2).
class Potential {
public:
    static Potential from_function(std::function<double(double)> vbar,
                                   std::vector<double> breakpoints,
                                   QuadratureSpec spec = {});

    const PanelGrid& grid() const { return grid_; }
    const std::vector<double>& samples() const { return vbar_; }
    const std::vector<double>& u_samples() const { return u_; }
    const std::vector<double>& v_samples() const { return v_; }
    double moment() const { return moment_; }  // integral of V

    double support_lo() const { return grid_.lo(); }
    double support_hi() const { return grid_.hi(); }

    double vbar_at(double s) const;
    double v_at(double s) const;
    double u_at(double s) const;

private:
    PanelGrid grid_;
    std::vector<double> vbar_, u_, v_;
    double moment_ = 0.0;
    std::function<double(double)> fn_;
};

/// Bending angle theta = integral of gamma.
double bending_angle(const CurvatureProfile& profile, QuadratureSpec spec = {});

struct ScaledBendingAngle {
    double theta_eps;     // theta * sqrt(lambda(eps))
    double first_order;   // theta * (1 + lambda_1 * eps / 2)
};

/// Bending angle of the eps-scaled guide, with the first-order approximation
/// for diagnostics. Requires 0 < eps <= eps_max.
ScaledBendingAngle scaled_bending_angle(const CurvatureProfile& profile,
                                        const ScalingFamily& family, double eps,
                                        QuadratureSpec spec = {});

/// V = -gamma^2/4 sampled on the profile's quadrature grid. Rejects profiles
/// with identically vanishing curvature (the analysis requires a nonzero
/// potential integral).
Potential effective_potential(const CurvatureProfile& profile, QuadratureSpec spec = {});

/// Full 2D effective potential of the squeezed strip at axis coordinate s and
/// transverse coordinate u in the unit strip (|u| < d). Three terms: curvature
/// well, gamma'' tilt, gamma'^2 stretch.
double effective_potential_2d(const CurvatureProfile& profile,
                              const ScalingFamily& family, double eps, double s,
                              double u);

/// Transverse Dirichlet threshold E_n = (n*pi / (2*d*eps^alpha))^2, n >= 1.
double transverse_threshold(const ScalingFamily& family, int n, double eps);

}  // namespace squeezeline
