#include "squeezeline/scaled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace squeezeline {

namespace {

constexpr Complex kImag{0.0, 1.0};

void check_eps_list(const std::vector<double>& eps_list) {
    if (eps_list.empty()) throw std::invalid_argument("eps list must not be empty");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0))
            throw std::invalid_argument("eps list entries must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("eps list must be strictly decreasing");
    }
}

}  // namespace

ScaledResolvent::ScaledResolvent(const Potential& pot, double lambda_value, double eps,
                                 Momentum k)
    : lambda_(lambda_value), eps_(eps), k_(Momentum::resolvent(k.k)), grid_(pot.grid()) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (!(lambda_value >= 0.0) || !std::isfinite(lambda_value))
        throw std::invalid_argument("lambda(eps) must be finite and nonnegative");

    const int n = grid_.size();
    v_samples_ = pot.v_samples();
    sqrt_w_.resize(n);
    vt_.resize(n);
    svt_.resize(n);
    sgn_.resize(n);
    for (int i = 0; i < n; ++i) {
        sqrt_w_(i) = std::sqrt(grid_.weight(i));
        vt_(i) = sqrt_w_(i) * v_samples_[i];
        svt_(i) = grid_.node(i) * vt_(i);
        sgn_(i) = (pot.samples()[i] > 0.0) ? 1.0 : -1.0;
    }

    // free kernel at momentum eps*k
    const Complex ek = eps * k_.k;
    const auto g_eps = [ek](double s, double sp) {
        return kImag / (2.0 * ek) * std::exp(kImag * ek * std::abs(s - sp));
    };
    const Eigen::MatrixXcd raw = KernelAssembly::matrix<Complex>(
        grid_, g_eps, [&pot](double sp) { return pot.v_at(sp); }, true);

    // weighted form N = W^{1/2} D_v raw W^{-1/2}; exact symmetry is restored by
    // averaging, which stays within the quadrature accuracy of raw
    Eigen::MatrixXcd nmat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            nmat(i, j) = sqrt_w_(i) * v_samples_[i] * raw(i, j) / sqrt_w_(j);
    nmat = 0.5 * (nmat + nmat.transpose()).eval();

    Eigen::MatrixXcd system = lambda_ * nmat;
    for (int i = 0; i < n; ++i) system(i, i) += sgn_(i);
    lu_.compute(system);
    const double rc = lu_.rcond();
    if (!(rc > 1e-14))
        throw std::runtime_error(
            "k^2 lies in the point spectrum of the scaled operator (factorized system "
            "is numerically singular)");
    cond_ = 1.0 / rc;
}

ScaledResolvent ScaledResolvent::build(const Potential& pot, const ScalingFamily& family,
                                       double eps, Momentum k) {
    family.validate();
    if (!(eps > 0.0) || eps > family.eps_max)
        throw std::domain_error("eps out of range (0, eps_max]");
    return ScaledResolvent(pot, family.lambda(eps), eps, k);
}

Eigen::VectorXcd ScaledResolvent::weighted_free_column(double s) const {
    const int n = grid_.size();
    Eigen::VectorXcd g(n);
    for (int i = 0; i < n; ++i)
        g(i) = vt_(i) * kImag / (2.0 * k_.k) *
               std::exp(kImag * k_.k * std::abs(s - eps_ * grid_.node(i)));
    return g;
}

Complex ScaledResolvent::kernel(double s, double sp) const {
    const Complex free = kImag / (2.0 * k_.k) * std::exp(kImag * k_.k * std::abs(s - sp));
    const Eigen::VectorXcd gs = weighted_free_column(s);
    const Eigen::VectorXcd x = lu_.solve(weighted_free_column(sp));
    const Complex correction = (gs.array() * x.array()).sum();  // bilinear, no conjugation
    return free - (lambda_ / eps_) * correction;
}

Eigen::MatrixXcd ScaledResolvent::t_matrix() const {
    const int n = grid_.size();
    // T = W^{-1/2} (Dsgn + lambda N)^{-1} Dsgn W^{1/2} on node values
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) rhs(i, i) = sgn_(i) * sqrt_w_(i);
    Eigen::MatrixXcd t = lu_.solve(rhs);
    for (int i = 0; i < n; ++i) t.row(i) /= sqrt_w_(i);
    return t;
}

ScaledResolvent::Products ScaledResolvent::t_products() const {
    // Dsgn W^{1/2} u = W^{1/2} v, so the products are bilinear forms of the
    // symmetric solve in the weighted vectors
    ScaledResolvent::Products p;
    const Eigen::VectorXcd xv = lu_.solve(vt_);
    const Eigen::VectorXcd xs = lu_.solve(svt_);
    p.f0 = (vt_.array() * xv.array()).sum();
    p.f1 = (svt_.array() * xv.array()).sum();
    p.f2 = (vt_.array() * xs.array()).sum();
    p.f3 = (svt_.array() * xs.array()).sum();
    return p;
}

ExpansionProbe expansion_probe(const Potential& pot, const ScalingFamily& family,
                               Momentum k, const std::vector<double>& eps_list,
                               double residual_tol) {
    check_eps_list(eps_list);
    family.validate();

    ExpansionProbe probe;
    const int n = static_cast<int>(eps_list.size());
    std::vector<Complex> f0(n), f1(n), f2(n), f3(n);
    for (int i = 0; i < n; ++i) {
        const double eps = eps_list[i];
        const ScaledResolvent sr = ScaledResolvent::build(pot, family, eps, k);
        const auto pr = sr.t_products();
        ExpansionProbeRow row;
        row.eps = eps;
        row.f0_over_eps = pr.f0 / eps;
        row.f1 = pr.f1;
        row.f2 = pr.f2;
        row.f3_times_eps = eps * pr.f3;
        row.condition_number = sr.condition_number();
        probe.rows.push_back(row);
        f0[i] = row.f0_over_eps;
        f1[i] = row.f1;
        f2[i] = row.f2;
        f3[i] = row.f3_times_eps;
    }

    if (n >= 2) {
        const auto r0 = richardson_extrapolate(eps_list, f0);
        const auto r1 = richardson_extrapolate(eps_list, f1);
        const auto r2 = richardson_extrapolate(eps_list, f2);
        const auto r3 = richardson_extrapolate(eps_list, f3);
        probe.f0_limit = r0.value;
        probe.f1_limit = r1.value;
        probe.f2_limit = r2.value;
        probe.f3_limit = r3.value;
        probe.f0_residual = r0.residual;
        probe.f1_residual = r1.residual;
        probe.f2_residual = r2.residual;
        probe.f3_residual = r3.residual;
        const double scale = 1.0 + std::max({std::abs(r0.value), std::abs(r1.value),
                                             std::abs(r2.value), std::abs(r3.value)});
        probe.extrapolation_flagged =
            std::max({r0.residual, r1.residual, r2.residual, r3.residual}) >
            residual_tol * scale;
    } else {
        probe.f0_limit = f0[0];
        probe.f1_limit = f1[0];
        probe.f2_limit = f2[0];
        probe.f3_limit = f3[0];
        probe.f0_residual = probe.f1_residual = probe.f2_residual = probe.f3_residual =
            std::numeric_limits<double>::quiet_NaN();
        probe.extrapolation_flagged = true;
    }
    return probe;
}

ProbeTargets probe_targets_no_resonance(Momentum k) {
    ProbeTargets t;
    t.f0_over_eps = -2.0 * kImag * k.k;
    t.f1_f2 = 0.0;
    t.f3_times_eps = 0.0;
    return t;
}

ProbeTargets probe_targets_resonant(const PointInteraction& pi, Momentum k) {
    if (pi.is_dirichlet())
        throw std::invalid_argument("probe targets need finite coupling constants");
    const double c1 = pi.c1(), c2 = pi.c2(), lh = pi.lambda_hat();
    const Complex den = 2.0 * k.k * (c1 * c1 + c2 * c2) + kImag * lh;
    ProbeTargets t;
    t.f0_over_eps = -2.0 * kImag * k.k * (2.0 * k.k * c2 * c2 + kImag * lh) / den;
    t.f1_f2 = 4.0 * k.k * c1 * c2 / den;
    t.f3_times_eps = -4.0 * kImag * c2 * c2 / den;
    return t;
}

std::vector<double> default_probe_points() {
    return {-2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0};
}

ConvergenceRecord convergence_sweep(const Potential& pot, const ScalingFamily& family,
                                    Momentum k, const std::vector<double>& eps_list,
                                    const std::vector<double>& probe_points,
                                    LimitTarget target,
                                    const std::optional<PointInteraction>& pi) {
    check_eps_list(eps_list);
    if (probe_points.empty()) throw std::invalid_argument("probe grid must not be empty");
    if (target == LimitTarget::Point && !pi.has_value())
        throw std::invalid_argument(
            "point-interaction target requires the coupling constants of an "
            "established resonance");

    const auto limit_kernel = [&](double s, double sp) {
        return (target == LimitTarget::Dirichlet) ? resolvent_dirichlet(k, s, sp)
                                                  : resolvent_point(*pi, k, s, sp);
    };

    ConvergenceRecord rec;
    rec.target = target;
    rec.eps_list = eps_list;
    for (const double eps : eps_list) {
        const ScaledResolvent sr = ScaledResolvent::build(pot, family, eps, k);
        double sup = 0.0;
        for (const double s : probe_points)
            for (const double sp : probe_points)
                sup = std::max(sup, std::abs(sr.kernel(s, sp) - limit_kernel(s, sp)));
        rec.errors.push_back(sup);
        rec.condition_numbers.push_back(sr.condition_number());
    }
    rec.fitted_rate = (eps_list.size() >= 3)
                          ? fitted_log_slope(rec.eps_list, rec.errors)
                          : std::numeric_limits<double>::quiet_NaN();
    return rec;
}

}  // namespace squeezeline
