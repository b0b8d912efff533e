#include "squeezeline/pointint.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace squeezeline {

namespace {

constexpr Complex kImag{0.0, 1.0};

double sgn(double x) { return (x > 0.0) ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void require_resolvent_momentum(const Momentum& k) {
    if (!(k.k.imag() > 0.0))
        throw std::domain_error("resolvent momentum requires Im k > 0");
    if (k.k == Complex(0.0, 0.0)) throw std::domain_error("momentum k = 0 rejected");
}

}  // namespace

Momentum Momentum::resolvent(Complex k) {
    Momentum m{k};
    require_resolvent_momentum(m);
    return m;
}

PointInteraction::PointInteraction(double c1, double c2, double lambda_hat)
    : c1_(c1), c2_(c2), lambda_hat_(lambda_hat) {
    if (std::isnan(c1) || std::isnan(c2) || std::isnan(lambda_hat))
        throw std::invalid_argument("point interaction parameters must not be NaN");
    if (std::isinf(lambda_hat)) {
        if (lambda_hat < 0.0)
            throw std::invalid_argument("lambda_hat = -inf is not admissible");
        return;  // Dirichlet-decoupled flag; c1, c2 are irrelevant
    }
    if (c1 == 0.0 && c2 == 0.0)
        throw std::invalid_argument("(c1, c2) = (0, 0) does not define a coupling");
}

PointInteraction PointInteraction::dirichlet_decoupled() {
    return PointInteraction(1.0, 0.0, std::numeric_limits<double>::infinity());
}

bool PointInteraction::is_dirichlet() const { return std::isinf(lambda_hat_); }

Eigen::Matrix2cd PointInteraction::vertex_unitary() const {
    if (is_dirichlet()) return -Eigen::Matrix2cd::Identity();
    return squeezeline::vertex_unitary(c1_, c2_, lambda_hat_);
}

Eigen::Matrix2cd vertex_unitary(double c1, double c2, double lambda_hat) {
    if (c1 == 0.0 && c2 == 0.0)
        throw std::invalid_argument("(c1, c2) = (0, 0) does not define a coupling");
    const Complex den = Complex(2.0 * (c1 * c1 + c2 * c2), lambda_hat);
    Eigen::Matrix2cd u;
    u(0, 0) = Complex(-4.0 * c1 * c2, -lambda_hat) / den;
    u(0, 1) = Complex(2.0 * (c1 * c1 - c2 * c2), 0.0) / den;
    u(1, 0) = u(0, 1);
    u(1, 1) = Complex(4.0 * c1 * c2, -lambda_hat) / den;
    return u;
}

BoundaryResidual check_boundary_conditions(const PointInteraction& pi, Complex f0_plus,
                                           Complex f0_minus, Complex df0_plus,
                                           Complex df0_minus) {
    const Eigen::Matrix2cd u = pi.vertex_unitary();
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Vector2cd psi, dpsi;
    psi << f0_plus, f0_minus;
    dpsi << df0_plus, -df0_minus;
    const Eigen::Vector2cd r_unitary = (u - id) * psi + kImag * (u + id) * dpsi;

    Eigen::Vector2cd r_domain;
    if (pi.is_dirichlet()) {
        r_domain << f0_plus, f0_minus;
    } else if (pi.special_branch()) {
        const double c1 = pi.c1();
        r_domain(0) = f0_minus;
        r_domain(1) = df0_plus - pi.lambda_hat() / (4.0 * c1 * c1) * f0_plus;
    } else {
        const double c1 = pi.c1(), c2 = pi.c2();
        r_domain(0) = (c1 + c2) * f0_plus - (c1 - c2) * f0_minus;
        r_domain(1) = (c1 - c2) * df0_plus - (c1 + c2) * df0_minus -
                      pi.lambda_hat() / (c1 + c2) * f0_minus;
    }
    return {r_unitary.norm(), r_domain.norm()};
}

ScatteringData scattering(const PointInteraction& pi, double k) {
    if (!(k >= 0.0)) throw std::domain_error("on-shell momentum requires k >= 0");
    ScatteringData sd;
    sd.k = k;
    if (pi.is_dirichlet()) {
        sd.t_left = sd.t_right = 0.0;
        sd.r_left = sd.r_right = -1.0;
    } else {
        const double c1 = pi.c1(), c2 = pi.c2(), lh = pi.lambda_hat();
        const double cc = c1 * c1 + c2 * c2;
        if (k == 0.0 && lh == 0.0) {
            // scale-invariant interaction: the amplitudes are k-independent
            sd.t_left = sd.t_right = (c1 * c1 - c2 * c2) / cc;
            sd.r_left = 2.0 * c1 * c2 / cc;
            sd.r_right = -2.0 * c1 * c2 / cc;
        } else {
            const Complex den = Complex(2.0 * k * cc, lh);
            sd.t_left = sd.t_right = Complex(2.0 * k * (c1 * c1 - c2 * c2), 0.0) / den;
            sd.r_left = Complex(4.0 * k * c1 * c2, -lh) / den;
            sd.r_right = -Complex(4.0 * k * c1 * c2, lh) / den;
        }
    }
    sd.s_matrix << sd.t_left, sd.r_right, sd.r_left, sd.t_right;
    return sd;
}

double ScatteringData::flux_defect() const {
    return std::abs(std::norm(t_left) + std::norm(r_left) - 1.0);
}

double BoundState::psi0(double s) const {
    return (s >= 0.0) ? amplitude * coeff_plus * std::exp(-kappa * s)
                      : amplitude * coeff_minus * std::exp(kappa * s);
}

std::optional<BoundState> bound_state(const PointInteraction& pi) {
    if (pi.is_dirichlet() || pi.lambda_hat() >= 0.0) return std::nullopt;
    const double c1 = pi.c1(), c2 = pi.c2(), lh = pi.lambda_hat();
    const double cc = c1 * c1 + c2 * c2;
    BoundState b;
    b.kappa = std::abs(lh) / (2.0 * cc);
    b.k0 = Complex(0.0, b.kappa);
    b.energy = -0.25 * lh * lh / (cc * cc);  // k0^2 in closed form
    b.amplitude = std::sqrt(0.5 * std::abs(lh)) / cc;
    b.coeff_plus = c1 - c2;
    b.coeff_minus = c1 + c2;
    return b;
}

Complex free_resolvent_kernel(Momentum k, double x) {
    require_resolvent_momentum(k);
    return kImag / (2.0 * k.k) * std::exp(kImag * k.k * std::abs(x));
}

Complex free_resolvent_kernel_derivative(Momentum k, double x) {
    require_resolvent_momentum(k);
    return -0.5 * sgn(x) * std::exp(kImag * k.k * std::abs(x));
}

Complex resolvent_dirichlet(Momentum k, double s, double sp) {
    const Complex g = free_resolvent_kernel(k, s - sp);
    return g + 2.0 * kImag * k.k * free_resolvent_kernel(k, s) *
                   free_resolvent_kernel(k, sp);
}

Complex resolvent_point(const PointInteraction& pi, Momentum k, double s, double sp) {
    if (pi.is_dirichlet()) return resolvent_dirichlet(k, s, sp);
    require_resolvent_momentum(k);
    const double c1 = pi.c1(), c2 = pi.c2(), lh = pi.lambda_hat();
    const double cc = c1 * c1 + c2 * c2;
    const Complex den = 2.0 * k.k * cc + kImag * lh;
    if (std::abs(den) <= 1e-13 * (2.0 * std::abs(k.k) * cc + std::abs(lh)))
        throw std::domain_error("pole of resolvent: k^2 is the bound-state energy");

    const Complex gs = free_resolvent_kernel(k, s);
    const Complex gsp = free_resolvent_kernel(k, sp);
    const Complex dgs = free_resolvent_kernel_derivative(k, s);
    const Complex dgsp = free_resolvent_kernel_derivative(k, sp);

    Complex r = free_resolvent_kernel(k, s - sp);
    r += 2.0 * kImag * k.k * (2.0 * k.k * c2 * c2 + kImag * lh) / den * gs * gsp;
    r += 4.0 * kImag * c2 * c2 / den * dgs * dgsp;
    r += 4.0 * k.k * c1 * c2 / den * (gs * dgsp + dgs * gsp);
    return r;
}

}  // namespace squeezeline
