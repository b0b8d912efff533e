#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "squeezeline/geometry.hpp"

namespace squeezeline {

enum class ResonanceCase { CaseI, CaseII };

/// Zero-energy solutions of -psi'' + V psi = 0 shot from both support edges
/// with flat initial data. Outside the support every solution is affine,
/// psi = a + b*s; the left solution stays bounded iff its right-tail slope b
/// vanishes, which is the resonance criterion.
struct ShootingSolution {
    std::vector<double> psi;        // left solution at the grid nodes
    std::vector<double> psi_right;  // right solution at the grid nodes
    double left_value = 1.0;        // constant tail of the left solution, s <= lo
    double right_value = 0.0;       // intercept a of the right tail a + b*s
    double right_slope = 0.0;       // slope b of the right tail (Wronskian slope)
    double match_defect = 0.0;      // b / (|a| + 1), the scalar whose zero flags a resonance

    struct Checkpoint {
        double s, value, slope;
    };
    std::vector<Checkpoint> checkpoints_left, checkpoints_right;
    double ode_tolerance = 1e-11;
};

struct ShootingDetection {
    ResonanceCase verdict;
    ShootingSolution solution;
};

/// Shooting detector. Case II iff |b_right| <= tol * (|a_right| + 1).
/// Requires a potential with nonzero integral.
ShootingDetection detect_resonance_shooting(const Potential& pot, double tol = 1e-8,
                                            double ode_tol = 1e-11);

/// Slope defect only (cheap variant used inside scans).
double shooting_defect(const Potential& pot, double ode_tol = 1e-11);

/// Birman-Schwinger kernel m_n(s,s') = -u(s) |s-s'|^(n+1) / (2 (n+1)!) v(s')
/// discretized on the potential grid.
class BirmanSchwingerKernel {
public:
    BirmanSchwingerKernel(const Potential& pot, int order);

    int order() const { return order_; }
    double kernel(double s, double sp) const;

    /// Plain Nystrom matrix, entry (i,j) = m_n(s_i, s_j) * w_j.
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    /// Action matrix used for operator application; for even n the kink of
    /// |s-s'|^(n+1) on the diagonal panel is integrated by split quadrature.
    const Eigen::MatrixXd& action() const { return action_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& phi) const { return action_ * phi; }

private:
    int order_;
    double coeff_;
    std::function<double(double)> u_at_, v_at_;
    Eigen::MatrixXd matrix_, action_;
};

struct BsDetection {
    ResonanceCase verdict;
    double eigenvalue = 0.0;  // real eigenvalue of Q m0 Q closest to -1
    double gap = 0.0;         // |eigenvalue + 1|, reported as the defect
    Eigen::VectorXd phi0;     // real unit-norm eigenvector; empty in Case I
};

/// Birman-Schwinger detector: Case II iff Q m0 Q has an eigenvalue within tol
/// of -1. Throws if that eigenvalue is degenerate.
BsDetection detect_resonance_bs(const Potential& pot, double tol = 1e-6);

/// Rescale phi0 so that u * psi_r = -phi0 in the least-squares sense.
Eigen::VectorXd link_phi0_to_psi(const Potential& pot,
                                 const std::vector<double>& psi_r,
                                 const Eigen::VectorXd& phi0);

struct Constants {
    double c1 = 0.0, c2 = 0.0, lambda_hat = 0.0;          // direct quadratures with psi_r
    double c1_bs = 0.0, c2_bs = 0.0, lambda_hat_bs = 0.0;  // phi0-based formulas
};

/// Computes (c1, c2, lambda_hat) twice: by the direct single/double
/// quadratures over V and psi_r, and by the phi0-based scalar products.
/// Requires the two routes to agree within cross_tol; the direct values are
/// the ones reported downstream. phi0 must already satisfy u psi_r = -phi0.
Constants compute_constants(const Potential& pot, const std::vector<double>& psi_r,
                            const Eigen::VectorXd& phi0, double lambda1,
                            double cross_tol = 1e-6);

struct AnalysisOptions {
    double shooting_tol = 1e-8;
    double bs_tol = 1e-6;
    double cross_tol = 1e-6;
    double ode_tol = 1e-11;
    double lambda1 = 0.0;
};

/// Full per-potential resonance analysis: both detectors, verdict, defects,
/// and in Case II the resonance function, its Birman-Schwinger twin and the
/// coupling constants.
struct ResonanceReport {
    ResonanceCase verdict = ResonanceCase::CaseI;
    double defect = 0.0;  // shooting match defect
    double bs_gap = 0.0;  // Birman-Schwinger spectral gap to -1
    // Case II payload
    std::vector<double> psi_r;  // grid samples, left tail normalized to 1
    double psi_left_tail = 1.0;
    double psi_right_tail = 0.0;
    std::vector<double> phi0;  // normalized so that u psi_r = -phi0
    double c1 = 0.0, c2 = 0.0, lambda_hat = 0.0;
};

ResonanceReport analyze_potential(const Potential& pot, const AnalysisOptions& opt = {});

/// One-parameter profile family for scans.
using ProfileFamily = std::function<CurvatureProfile(double)>;

struct ScanPoint {
    double param;
    double defect;
};

struct ScanResult {
    std::vector<std::pair<double, ResonanceReport>> roots;
    std::vector<ScanPoint> trace;  // sampled defect curve (diagnostic)
};

/// Samples the shooting defect over [param_lo, param_hi], brackets its sign
/// changes and refines each root; every root gets a full ResonanceReport.
ScanResult resonance_scan(const ProfileFamily& family, double param_lo,
                          double param_hi, int samples,
                          const AnalysisOptions& opt = {}, QuadratureSpec spec = {});

}  // namespace squeezeline
