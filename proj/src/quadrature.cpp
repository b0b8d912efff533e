#include "squeezeline/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace squeezeline {

GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

PanelGrid PanelGrid::make(std::vector<double> breakpoints,
                          int panels_per_segment, int nodes_per_panel) {
    if (breakpoints.size() < 2)
        throw std::invalid_argument("PanelGrid: need at least two breakpoints");
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end()) ||
        std::adjacent_find(breakpoints.begin(), breakpoints.end()) != breakpoints.end())
        throw std::invalid_argument("PanelGrid: breakpoints must be strictly increasing");
    if (panels_per_segment < 1 || nodes_per_panel < 2)
        throw std::invalid_argument("PanelGrid: need >= 1 panel and >= 2 nodes per panel");

    PanelGrid g;
    g.breakpoints_ = std::move(breakpoints);
    g.nodes_per_panel_ = nodes_per_panel;
    g.base_ = gauss_legendre(nodes_per_panel);
    g.split_ = gauss_legendre(nodes_per_panel + 4);

    for (std::size_t seg = 0; seg + 1 < g.breakpoints_.size(); ++seg) {
        const double a = g.breakpoints_[seg], b = g.breakpoints_[seg + 1];
        const double dp = (b - a) / panels_per_segment;
        for (int p = 0; p < panels_per_segment; ++p) {
            const double lo = a + p * dp;
            const double hi = (p + 1 == panels_per_segment) ? b : a + (p + 1) * dp;
            g.panel_lo_.push_back(lo);
            g.panel_hi_.push_back(hi);
            const double h = 0.5 * (hi - lo), c = 0.5 * (lo + hi);
            for (int q = 0; q < nodes_per_panel; ++q) {
                g.nodes_.push_back(c + h * g.base_.nodes[q]);
                g.weights_.push_back(h * g.base_.weights[q]);
            }
        }
    }

    // barycentric weights of the reference nodes
    g.bary_.assign(nodes_per_panel, 1.0);
    for (int j = 0; j < nodes_per_panel; ++j)
        for (int l = 0; l < nodes_per_panel; ++l)
            if (l != j) g.bary_[j] /= (g.base_.nodes[j] - g.base_.nodes[l]);
    return g;
}

double PanelGrid::integrate(std::span<const double> samples) const {
    assert(static_cast<int>(samples.size()) == size());
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += weights_[i] * samples[i];
    return acc;
}

std::complex<double> PanelGrid::integrate(
    std::span<const std::complex<double>> samples) const {
    assert(static_cast<int>(samples.size()) == size());
    std::complex<double> acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += weights_[i] * samples[i];
    return acc;
}

void PanelGrid::lagrange_on_panel(int p, double x, double* out) const {
    const double lo = panel_lo_[p], hi = panel_hi_[p];
    const double t = (2.0 * x - (lo + hi)) / (hi - lo);  // map to [-1,1]
    const int m = nodes_per_panel_;
    double denom = 0.0;
    int exact = -1;
    for (int j = 0; j < m; ++j) {
        const double d = t - base_.nodes[j];
        if (d == 0.0) {
            exact = j;
            break;
        }
        out[j] = bary_[j] / d;
        denom += out[j];
    }
    if (exact >= 0) {
        for (int j = 0; j < m; ++j) out[j] = (j == exact) ? 1.0 : 0.0;
        return;
    }
    for (int j = 0; j < m; ++j) out[j] /= denom;
}

double fitted_log_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fitted_log_slope: need >= 2 matching points");
    const int n = static_cast<int>(x.size());
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        lx[i] = std::log(std::abs(x[i]));
        ly[i] = std::log(std::max(std::abs(y[i]), 1e-300));
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (int i = 0; i < n; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

RichardsonResult richardson_extrapolate(std::span<const double> eps,
                                        std::span<const std::complex<double>> g) {
    if (eps.size() != g.size() || eps.size() < 2)
        throw std::invalid_argument("richardson_extrapolate: need >= 2 samples");
    const int n = static_cast<int>(eps.size());
    for (int i = 1; i < n; ++i)
        if (!(eps[i] < eps[i - 1]) || eps[i] <= 0.0)
            throw std::invalid_argument("richardson_extrapolate: eps must be positive decreasing");

    // Neville table for the interpolating polynomial in eps, evaluated at 0
    std::vector<std::complex<double>> t(g.begin(), g.end());
    std::complex<double> prev = t[n - 1];
    for (int k = 1; k < n; ++k) {
        for (int j = n - 1; j >= k; --j)
            t[j] = (eps[j - k] * t[j] - eps[j] * t[j - 1]) / (eps[j - k] - eps[j]);
        if (k == n - 2) prev = t[n - 1];
    }
    RichardsonResult r;
    r.value = t[n - 1];
    r.residual = std::abs(t[n - 1] - prev);
    return r;
}

}  // namespace squeezeline
