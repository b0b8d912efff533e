#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

namespace squeezeline {

using Complex = std::complex<double>;

/// Spectral momentum. Resolvent kernels require Im k > 0; real k >= 0 enters
/// only through the on-shell scattering amplitudes, which take a plain double.
struct Momentum {
    Complex k;

    /// Validated factory for resolvent evaluations (Im k > 0, k != 0).
    static Momentum resolvent(Complex k);
    Complex k_squared() const { return k * k; }
};

/// Point interaction on the line with parameters (c1, c2, lambda_hat).
///
/// The parameters enter only through ratios: (c1, c2, lambda_hat) and
/// (t c1, t c2, t^2 lambda_hat) describe the same operator. lambda_hat = +inf
/// is the fully decoupled limit with Dirichlet conditions at the vertex.
class PointInteraction {
public:
    PointInteraction(double c1, double c2, double lambda_hat);
    static PointInteraction dirichlet_decoupled();

    double c1() const { return c1_; }
    double c2() const { return c2_; }
    double lambda_hat() const { return lambda_hat_; }
    bool is_dirichlet() const;
    bool special_branch() const { return !is_dirichlet() && c2_ == -c1_; }

    Eigen::Matrix2cd vertex_unitary() const;

private:
    double c1_, c2_, lambda_hat_;
};

/// The 2x2 vertex unitary generating the boundary conditions
/// (U - I) Psi + i (U + I) Psi' = 0 with Psi = (f(0+), f(0-)),
/// Psi' = (f'(0+), -f'(0-)).
Eigen::Matrix2cd vertex_unitary(double c1, double c2, double lambda_hat);

struct BoundaryResidual {
    double unitary_form;  // norm of (U-I) Psi + i (U+I) Psi'
    double domain_form;   // norm of the explicit two-condition form
};

/// Residuals of the vertex boundary conditions for the given boundary data,
/// in both equivalent forms. Both vanish exactly on the operator domain.
BoundaryResidual check_boundary_conditions(const PointInteraction& pi, Complex f0_plus,
                                           Complex f0_minus, Complex df0_plus,
                                           Complex df0_minus);

struct ScatteringData {
    double k = 0.0;
    Complex t_left, t_right;  // transmission (the two sides coincide)
    Complex r_left, r_right;  // reflection
    Eigen::Matrix2cd s_matrix;

    double flux_defect() const;  // | |T|^2 + |R|^2 - 1 |, left column
};

/// On-shell amplitudes at momentum k >= 0. k = 0 takes the continuous limit
/// of the amplitudes (zero transmission unless lambda_hat = 0, where the
/// scale-invariant k-independent values apply).
ScatteringData scattering(const PointInteraction& pi, double k);

struct BoundState {
    Complex k0;     // i|lambda_hat| / (2 (c1^2 + c2^2))
    double energy;  // k0^2 < 0
    double amplitude, coeff_plus, coeff_minus, kappa;

    /// Normalized eigenfunction: two-sided exponential, real-valued.
    double psi0(double s) const;
};

/// The single negative eigenvalue for lambda_hat < 0; empty otherwise.
std::optional<BoundState> bound_state(const PointInteraction& pi);

/// Free-line resolvent kernel G_k(x) = (i / 2k) e^{i k |x|}, Im k > 0.
Complex free_resolvent_kernel(Momentum k, double x);

/// Derivative kernel G_k'(x) = -(1/2) sgn(x) e^{i k |x|}.
Complex free_resolvent_kernel_derivative(Momentum k, double x);

/// Resolvent kernel of the Dirichlet-decoupled line; vanishes whenever s or
/// s' is 0 and on opposite-side pairs.
Complex resolvent_dirichlet(Momentum k, double s, double sp);

/// Resolvent kernel of the point-interaction operator (Krein formula with the
/// free kernel, its derivative kernel, and rank-one corrections).
Complex resolvent_point(const PointInteraction& pi, Momentum k, double s, double sp);

}  // namespace squeezeline
