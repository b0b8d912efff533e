#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace squeezeline {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
GaussLegendreRule gauss_legendre(int n);

/// Composite Gauss-Legendre grid over a union of smooth segments.
///
/// Breakpoints mark where the integrand may lose smoothness (segment edges,
/// jumps of a piecewise profile). Each segment is divided into equal panels,
/// each panel carries the same Gauss-Legendre sub-rule. Node ordering is
/// strictly increasing across the whole grid.
class PanelGrid {
public:
    PanelGrid() = default;

    static PanelGrid make(std::vector<double> breakpoints,
                          int panels_per_segment, int nodes_per_panel);

    int size() const { return static_cast<int>(nodes_.size()); }
    int panel_count() const { return static_cast<int>(panel_lo_.size()); }
    int nodes_per_panel() const { return nodes_per_panel_; }

    double node(int i) const { return nodes_[i]; }
    double weight(int i) const { return weights_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    double lo() const { return breakpoints_.front(); }
    double hi() const { return breakpoints_.back(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    int panel_of_node(int i) const { return i / nodes_per_panel_; }
    int first_node_of_panel(int p) const { return p * nodes_per_panel_; }
    std::pair<double, double> panel_bounds(int p) const {
        return {panel_lo_[p], panel_hi_[p]};
    }

    double integrate(std::span<const double> samples) const;
    std::complex<double> integrate(std::span<const std::complex<double>> samples) const;

    template <class F>
    double integrate_fn(F&& f) const {
        double acc = 0.0;
        for (int i = 0; i < size(); ++i) acc += weights_[i] * f(nodes_[i]);
        return acc;
    }

    /// Values of the Lagrange basis of panel p's nodes at x (barycentric form).
    /// out must hold nodes_per_panel() entries.
    void lagrange_on_panel(int p, double x, double* out) const;

    /// Sample an arbitrary function on the grid nodes.
    template <class F>
    std::vector<double> sample(F&& f) const {
        std::vector<double> s(nodes_.size());
        for (int i = 0; i < size(); ++i) s[i] = f(nodes_[i]);
        return s;
    }

private:
    std::vector<double> breakpoints_;
    std::vector<double> nodes_, weights_;
    std::vector<double> panel_lo_, panel_hi_;
    int nodes_per_panel_ = 0;
    GaussLegendreRule base_;      // rule on [-1,1] for one panel
    GaussLegendreRule split_;     // finer rule used on split sub-intervals
    std::vector<double> bary_;    // barycentric weights of base_.nodes

    friend struct KernelAssembly;
};

/// Collocation matrix A with (A*phi)_i ~ integral of K(s_i, sigma) g(sigma) phi(sigma)
/// over the grid support, phi given by its node values.
///
/// With diagonal_kink set, K is allowed a |s - sigma|-type kink at sigma = s_i:
/// inside the panel containing s_i the integral is split at the kink and the
/// integrand re-expanded through the panel's Lagrange basis, so no quadrature
/// panel straddles the non-smooth point. Off-diagonal panels use the plain
/// Nystrom weights.
struct KernelAssembly {
    template <class Scalar>
    static Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
    matrix(const PanelGrid& grid,
           const std::function<Scalar(double, double)>& kernel,
           const std::function<double(double)>& g,
           bool diagonal_kink) {
        using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
        const int n = grid.size();
        const int m = grid.nodes_per_panel();
        Mat a(n, n);
        for (int i = 0; i < n; ++i) {
            const double si = grid.node(i);
            for (int j = 0; j < n; ++j)
                a(i, j) = kernel(si, grid.node(j)) * g(grid.node(j)) * grid.weight(j);
            if (!diagonal_kink) continue;
            // redo the panel containing s_i with the split sub-rule
            const int p = grid.panel_of_node(i);
            const auto [lo, hi] = grid.panel_bounds(p);
            const int j0 = grid.first_node_of_panel(p);
            for (int j = 0; j < m; ++j) a(i, j0 + j) = Scalar(0);
            std::vector<double> ell(m);
            auto add_sub = [&](double a0, double b0) {
                const double h = 0.5 * (b0 - a0), c = 0.5 * (a0 + b0);
                if (h <= 0.0) return;
                for (std::size_t q = 0; q < grid.split_.nodes.size(); ++q) {
                    const double sigma = c + h * grid.split_.nodes[q];
                    const double w = h * grid.split_.weights[q];
                    const Scalar kg = kernel(si, sigma) * g(sigma);
                    grid.lagrange_on_panel(p, sigma, ell.data());
                    for (int j = 0; j < m; ++j) a(i, j0 + j) += w * kg * ell[j];
                }
            };
            add_sub(lo, si);
            add_sub(si, hi);
        }
        return a;
    }
};

/// Least-squares slope of log|y| vs log x; used for empirical convergence rates.
double fitted_log_slope(std::span<const double> x, std::span<const double> y);

/// Repeated Richardson extrapolation for g(eps) = a0 + a1*eps + a2*eps^2 + ...
/// sampled on a decreasing eps list with ratio 2. Returns the extrapolated a0
/// and a residual estimate (spread of the last elimination stage).
struct RichardsonResult {
    std::complex<double> value;
    double residual;
};
RichardsonResult richardson_extrapolate(std::span<const double> eps,
                                        std::span<const std::complex<double>> g);

}  // namespace squeezeline
