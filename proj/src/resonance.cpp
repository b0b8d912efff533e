#include "squeezeline/resonance.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace squeezeline {

namespace {

using State = std::array<double, 2>;  // (psi, psi')

void check_moment(const Potential& pot) {
    if (pot.moment() == 0.0)
        throw std::invalid_argument(
            "potential has vanishing integral; the resonance dichotomy requires a "
            "nonzero mean");
}

// integrate psi'' = V psi across [a, b]; b < a integrates backwards
void integrate_segment(const Potential& pot, State& y, double a, double b, double tol) {
    if (a == b) return;
    namespace ode = boost::numeric::odeint;
    auto sys = [&pot](const State& q, State& dq, double s) {
        dq[0] = q[1];
        dq[1] = pot.vbar_at(s) * q[0];
    };
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<State>());
    ode::integrate_adaptive(stepper, sys, y, a, b, (b - a) / 16.0);
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

std::string format_pair(const char* name, double a, double b) {
    std::ostringstream os;
    os.precision(17);
    os << name << ": direct " << a << " vs birman-schwinger " << b;
    return os.str();
}

}  // namespace

ShootingDetection detect_resonance_shooting(const Potential& pot, double tol,
                                            double ode_tol) {
    check_moment(pot);
    const auto& grid = pot.grid();
    const int n = grid.size();
    const int m = grid.nodes_per_panel();

    ShootingSolution sol;
    sol.ode_tolerance = ode_tol;
    const double tol_ode = sol.ode_tolerance;

    State y{1.0, 0.0};
    sol.psi.resize(n);
    sol.checkpoints_left.push_back({grid.lo(), y[0], y[1]});
    double cur = grid.lo();
    for (int p = 0; p < grid.panel_count(); ++p) {
        const auto [plo, phi] = grid.panel_bounds(p);
        (void)plo;
        for (int j = grid.first_node_of_panel(p); j < grid.first_node_of_panel(p) + m; ++j) {
            integrate_segment(pot, y, cur, grid.node(j), tol_ode);
            cur = grid.node(j);
            sol.psi[j] = y[0];
        }
        integrate_segment(pot, y, cur, phi, tol_ode);
        cur = phi;
        sol.checkpoints_left.push_back({cur, y[0], y[1]});
    }
    sol.left_value = 1.0;
    sol.right_slope = y[1];
    sol.right_value = y[0] - y[1] * grid.hi();
    sol.match_defect = sol.right_slope / (std::abs(sol.right_value) + 1.0);

    State z{1.0, 0.0};
    sol.psi_right.resize(n);
    sol.checkpoints_right.push_back({grid.hi(), z[0], z[1]});
    cur = grid.hi();
    for (int p = grid.panel_count() - 1; p >= 0; --p) {
        const auto [plo, phi] = grid.panel_bounds(p);
        (void)phi;
        for (int j = grid.first_node_of_panel(p) + m - 1; j >= grid.first_node_of_panel(p);
             --j) {
            integrate_segment(pot, z, cur, grid.node(j), tol_ode);
            cur = grid.node(j);
            sol.psi_right[j] = z[0];
        }
        integrate_segment(pot, z, cur, plo, tol_ode);
        cur = plo;
        sol.checkpoints_right.push_back({cur, z[0], z[1]});
    }

    ShootingDetection det;
    det.verdict = (std::abs(sol.right_slope) <= tol * (std::abs(sol.right_value) + 1.0))
                      ? ResonanceCase::CaseII
                      : ResonanceCase::CaseI;
    det.solution = std::move(sol);
    return det;
}

double shooting_defect(const Potential& pot, double ode_tol) {
    check_moment(pot);
    const auto& grid = pot.grid();
    State y{1.0, 0.0};
    double cur = grid.lo();
    for (int p = 0; p < grid.panel_count(); ++p) {
        const double hi = grid.panel_bounds(p).second;
        integrate_segment(pot, y, cur, hi, ode_tol);
        cur = hi;
    }
    const double a = y[0] - y[1] * grid.hi();
    return y[1] / (std::abs(a) + 1.0);
}

BirmanSchwingerKernel::BirmanSchwingerKernel(const Potential& pot, int order)
    : order_(order) {
    if (order < 0) throw std::invalid_argument("kernel order must be >= 0");
    coeff_ = -0.5 / factorial(order + 1);
    u_at_ = [pot](double s) { return pot.u_at(s); };
    v_at_ = [pot](double s) { return pot.v_at(s); };
    const auto& grid = pot.grid();
    const int n = grid.size();
    const int p = order + 1;

    matrix_.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            matrix_(i, j) = coeff_ * pot.u_samples()[i] *
                            std::pow(std::abs(grid.node(i) - grid.node(j)), p) *
                            pot.v_samples()[j] * grid.weight(j);

    // |s-s'|^p has a diagonal kink for even order; split quadrature restores
    // spectral accuracy of the operator application there
    const bool kink = (order % 2 == 0);
    const Eigen::MatrixXd raw = KernelAssembly::matrix<double>(
        grid, [p](double s, double sp) { return std::pow(std::abs(s - sp), p); },
        [&pot](double sp) { return pot.v_at(sp); }, kink);
    action_.resize(n, n);
    for (int i = 0; i < n; ++i) action_.row(i) = coeff_ * pot.u_samples()[i] * raw.row(i);
}

double BirmanSchwingerKernel::kernel(double s, double sp) const {
    return coeff_ * u_at_(s) * std::pow(std::abs(s - sp), order_ + 1) * v_at_(sp);
}

BsDetection detect_resonance_bs(const Potential& pot, double tol) {
    check_moment(pot);
    const auto& grid = pot.grid();
    const int n = grid.size();

    Eigen::VectorXd u(n), v(n), w(n);
    for (int i = 0; i < n; ++i) {
        u(i) = pot.u_samples()[i];
        v(i) = pot.v_samples()[i];
        w(i) = grid.weight(i);
    }
    const double vu = (v.array() * u.array() * w.array()).sum();

    BirmanSchwingerKernel m0(pot, 0);
    Eigen::MatrixXd projector = u * (v.array() * w.array()).matrix().transpose() / vu;
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n) - projector;
    Eigen::MatrixXd a = q * m0.action() * q;

    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigensolve of the Birman-Schwinger operator failed");

    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    int near_minus_one = 0;
    for (int i = 0; i < n; ++i) {
        const std::complex<double> mu = es.eigenvalues()(i);
        if (std::abs(mu.imag()) > 1e-8 * (1.0 + std::abs(mu))) continue;
        const double dist = std::abs(mu + 1.0);
        if (dist <= tol) ++near_minus_one;
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    if (best < 0) throw std::runtime_error("no real eigenvalue found near -1");
    if (near_minus_one > 1)
        throw std::runtime_error(
            "non-simple zero-energy resonance: the threshold eigenvalue is degenerate, "
            "which is outside the supported class");

    BsDetection det;
    det.eigenvalue = es.eigenvalues()(best).real();
    det.gap = best_dist;
    det.verdict = (det.gap <= tol) ? ResonanceCase::CaseII : ResonanceCase::CaseI;
    if (det.verdict == ResonanceCase::CaseII) {
        Eigen::VectorXcd col = es.eigenvectors().col(best);
        int imax = 0;
        col.cwiseAbs().maxCoeff(&imax);
        const std::complex<double> phase = col(imax) / std::abs(col(imax));
        Eigen::VectorXd phi = (col / phase).real();
        const double norm = std::sqrt((phi.array().square() * w.array()).sum());
        phi /= norm;
        if (phi(imax) < 0.0) phi = -phi;
        det.phi0 = std::move(phi);
    }
    return det;
}

Eigen::VectorXd link_phi0_to_psi(const Potential& pot, const std::vector<double>& psi_r,
                                 const Eigen::VectorXd& phi0) {
    const auto& grid = pot.grid();
    const int n = grid.size();
    if (static_cast<int>(psi_r.size()) != n || phi0.size() != n)
        throw std::invalid_argument("psi_r/phi0 must be sampled on the potential grid");
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double up = pot.u_samples()[i] * psi_r[i];
        num += grid.weight(i) * phi0(i) * up;
        den += grid.weight(i) * phi0(i) * phi0(i);
    }
    return phi0 * (-num / den);
}

Constants compute_constants(const Potential& pot, const std::vector<double>& psi_r,
                            const Eigen::VectorXd& phi0, double lambda1,
                            double cross_tol) {
    const auto& grid = pot.grid();
    const int n = grid.size();
    if (static_cast<int>(psi_r.size()) != n || phi0.size() != n)
        throw std::invalid_argument("psi_r/phi0 must be sampled on the potential grid");

    BirmanSchwingerKernel m0(pot, 0);
    Eigen::VectorXd upsi(n);
    for (int i = 0; i < n; ++i) upsi(i) = pot.u_samples()[i] * psi_r[i];

    const Eigen::VectorXd m0_upsi = m0.apply(upsi);
    const Eigen::VectorXd m0_phi = m0.apply(phi0);

    Constants k;
    double c1_dir = 0.0, c1_bs = 0.0, c2_dir = 0.0, c2_bs = 0.0, lh_dir = 0.0, lh_bs = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = grid.weight(i);
        const double s = grid.node(i);
        const double vb = pot.samples()[i];
        const double v = pot.v_samples()[i];
        const double sgn = (vb > 0.0) ? 1.0 : (vb < 0.0 ? -1.0 : 0.0);
        c1_dir += w * v * m0_upsi(i);
        c1_bs += w * v * m0_phi(i);
        c2_dir += w * s * vb * psi_r[i];
        c2_bs += w * s * v * phi0(i);
        lh_dir += w * vb * psi_r[i] * psi_r[i];
        lh_bs += w * sgn * phi0(i) * phi0(i);
    }
    k.c1 = -c1_dir / pot.moment();
    k.c1_bs = c1_bs / pot.moment();
    k.c2 = -0.5 * c2_dir;
    k.c2_bs = 0.5 * c2_bs;
    k.lambda_hat = lambda1 * lh_dir;
    k.lambda_hat_bs = lambda1 * lh_bs;

    const auto mismatch = [cross_tol](double a, double b) {
        return std::abs(a - b) > cross_tol * (1.0 + std::abs(a));
    };
    if (mismatch(k.c1, k.c1_bs) || mismatch(k.c2, k.c2_bs) ||
        mismatch(k.lambda_hat, k.lambda_hat_bs)) {
        std::string msg = "cross-method disagreement in the coupling constants (likely a "
                          "discretization failure); ";
        msg += format_pair("c1", k.c1, k.c1_bs) + "; ";
        msg += format_pair("c2", k.c2, k.c2_bs) + "; ";
        msg += format_pair("lambda_hat", k.lambda_hat, k.lambda_hat_bs);
        throw std::runtime_error(msg);
    }
    return k;
}

ResonanceReport analyze_potential(const Potential& pot, const AnalysisOptions& opt) {
    const auto shoot = detect_resonance_shooting(pot, opt.shooting_tol, opt.ode_tol);
    const auto bs = detect_resonance_bs(pot, opt.bs_tol);
    if (shoot.verdict != bs.verdict) {
        std::ostringstream os;
        os.precision(17);
        os << "resonance detectors disagree: shooting defect " << shoot.solution.match_defect
           << ", spectral gap " << bs.gap;
        throw std::runtime_error(os.str());
    }

    ResonanceReport rep;
    rep.verdict = shoot.verdict;
    rep.defect = shoot.solution.match_defect;
    rep.bs_gap = bs.gap;
    if (rep.verdict == ResonanceCase::CaseII) {
        rep.psi_r = shoot.solution.psi;
        rep.psi_left_tail = shoot.solution.left_value;
        rep.psi_right_tail = shoot.solution.right_value;
        const Eigen::VectorXd phi = link_phi0_to_psi(pot, rep.psi_r, bs.phi0);
        const Constants k = compute_constants(pot, rep.psi_r, phi, opt.lambda1, opt.cross_tol);
        rep.c1 = k.c1;
        rep.c2 = k.c2;
        rep.lambda_hat = k.lambda_hat;
        rep.phi0.assign(phi.data(), phi.data() + phi.size());
        if (rep.c1 == 0.0 && rep.c2 == 0.0)
            throw std::runtime_error("resonance constants both vanish; inconsistent state");
    }
    return rep;
}

ScanResult resonance_scan(const ProfileFamily& family, double param_lo, double param_hi,
                          int samples, const AnalysisOptions& opt, QuadratureSpec spec) {
    if (!(param_hi > param_lo))
        throw std::invalid_argument("scan range must satisfy param_lo < param_hi");
    if (samples < 2) throw std::invalid_argument("scan needs at least two samples");

    const auto defect_at = [&](double p) {
        return shooting_defect(effective_potential(family(p), spec), opt.ode_tol);
    };

    ScanResult out;
    out.trace.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double p = param_lo + (param_hi - param_lo) * i / (samples - 1);
        out.trace.push_back({p, defect_at(p)});
    }

    for (int i = 0; i + 1 < samples; ++i) {
        const double fa = out.trace[i].defect, fb = out.trace[i + 1].defect;
        double root = std::numeric_limits<double>::quiet_NaN();
        if (fa == 0.0) {
            if (i > 0) continue;  // handled as the left end of the previous bracket
            root = out.trace[i].param;
        } else if (fb == 0.0) {
            root = out.trace[i + 1].param;
            ++i;  // skip the follow-up bracket starting at the exact zero
        } else if ((fa < 0.0) != (fb < 0.0)) {
            boost::uintmax_t max_iter = 200;
            const auto bracket = boost::math::tools::toms748_solve(
                defect_at, out.trace[i].param, out.trace[i + 1].param, fa, fb,
                boost::math::tools::eps_tolerance<double>(48), max_iter);
            root = 0.5 * (bracket.first + bracket.second);
        }
        if (std::isnan(root)) continue;
        const Potential pot = effective_potential(family(root), spec);
        out.roots.emplace_back(root, analyze_potential(pot, opt));
    }
    return out;
}

}  // namespace squeezeline
