#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "squeezeline/geometry.hpp"
#include "squeezeline/pointint.hpp"

namespace squeezeline {

/// Resolvent of the squeezed operator H_eps = -d^2/ds^2 + lambda(eps)/eps^2 V(./eps),
/// assembled through the factorized identity
///   (H_eps - k^2)^{-1} = G_k - (lambda/eps) A_eps T_eps C_eps,
///   T_eps = [1 + lambda u G_{eps k} v]^{-1},
/// discretized on the potential grid. Internally the solve runs in a
/// symmetrized weighted form, so the assembled kernel is symmetric in (s, s')
/// to machine precision for real potentials.
class ScaledResolvent {
public:
    ScaledResolvent(const Potential& pot, double lambda_value, double eps, Momentum k);

    static ScaledResolvent build(const Potential& pot, const ScalingFamily& family,
                                 double eps, Momentum k);

    double eps() const { return eps_; }
    Momentum momentum() const { return k_; }
    double lambda_value() const { return lambda_; }

    /// Condition estimate (1/rcond) of the factorized linear system.
    double condition_number() const { return cond_; }

    /// Kernel of (H_eps - k^2)^{-1} at (s, s').
    Complex kernel(double s, double sp) const;

    /// Node-space matrix of T_eps = [1 + lambda u G_{eps k} v]^{-1}.
    Eigen::MatrixXcd t_matrix() const;

    struct Products {
        Complex f0;  // (v, T u)
        Complex f1;  // ((.)v, T u)
        Complex f2;  // (v, T (.)u)
        Complex f3;  // ((.)v, T (.)u)
    };
    Products t_products() const;

private:
    double lambda_, eps_;
    Momentum k_;
    PanelGrid grid_;
    std::vector<double> v_samples_;
    Eigen::VectorXd sqrt_w_;                    // sqrt of quadrature weights
    Eigen::VectorXd sgn_;                       // sign pattern of V at the nodes
    Eigen::VectorXcd vt_, svt_;                 // W^{1/2} v and W^{1/2} (s v)
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;  // factor of (Dsgn + lambda*N)
    double cond_ = 0.0;

    Eigen::VectorXcd weighted_free_column(double s) const;
};

struct ExpansionProbeRow {
    double eps;
    Complex f0_over_eps;   // (v, T u) / eps
    Complex f1;            // ((.)v, T u)
    Complex f2;            // (v, T (.)u)
    Complex f3_times_eps;  // eps * ((.)v, T (.)u)
    double condition_number;
};

/// Scalar-product table of T_eps over an eps sweep, with the leading
/// coefficients of each column extrapolated to eps = 0.
struct ExpansionProbe {
    std::vector<ExpansionProbeRow> rows;
    Complex f0_limit, f1_limit, f2_limit, f3_limit;
    double f0_residual, f1_residual, f2_residual, f3_residual;
    bool extrapolation_flagged = false;  // residual above tolerance; values still valid
};

ExpansionProbe expansion_probe(const Potential& pot, const ScalingFamily& family,
                               Momentum k, const std::vector<double>& eps_list,
                               double residual_tol = 1e-3);

/// Limits the probe columns should reach: no resonance gives (-2ik, 0, 0);
/// with a resonance the limits are rational in (c1, c2, lambda_hat, k).
struct ProbeTargets {
    Complex f0_over_eps;
    Complex f1_f2;
    Complex f3_times_eps;
};
ProbeTargets probe_targets_no_resonance(Momentum k);
ProbeTargets probe_targets_resonant(const PointInteraction& pi, Momentum k);

enum class LimitTarget { Dirichlet, Point };

struct ConvergenceRecord {
    std::vector<double> eps_list;
    std::vector<double> errors;             // sup over probe pairs
    std::vector<double> condition_numbers;
    double fitted_rate;  // log-log slope; NaN when fewer than 3 eps values
    LimitTarget target;
};

std::vector<double> default_probe_points();  // {-2,-1,-0.5,-0.25,0.25,0.5,1,2}

/// Sup-norm distance of the scaled resolvent kernel to the limit kernel over
/// the tensor probe grid, for each eps. The Point target needs the coupling
/// constants of an established resonance.
ConvergenceRecord convergence_sweep(const Potential& pot, const ScalingFamily& family,
                                    Momentum k, const std::vector<double>& eps_list,
                                    const std::vector<double>& probe_points,
                                    LimitTarget target,
                                    const std::optional<PointInteraction>& pi = {});

}  // namespace squeezeline
