#pragma once

#include <Eigen/Dense>

#include "omm/grid.hpp"
#include "omm/params.hpp"

namespace omm::gaussian {

/// Quadrature ordering throughout: (dXm, dYm, dXb, dYb), with X = (O + O^dag)/sqrt(2),
/// Y = i (O^dag - O)/sqrt(2). Vacuum variance is 1/2 on each quadrature.
using DriftMatrix = Eigen::Matrix4d;
using DiffusionMatrix = Eigen::Matrix4d;

/// Drift matrix of the rotating-wave two-tone dynamics,
///   dXm' = -km/2 dXm + (G- - G+) dYb        dYm' = -km/2 dYm - (G+ + G-) dXb
///   dXb' = -kb/2 dXb + (G- - G+) dYm        dYb' = -kb/2 dYb - (G+ + G-) dXm
/// The only nonzero off-diagonal entries sit at (0,3), (1,2), (2,1), (3,0).
DriftMatrix build_drift(const DriveParams& drive, const SystemParams& params);

/// diag[km (Nm + 1/2), km (Nm + 1/2), kb (Nb + 1/2), kb (Nb + 1/2)] with the
/// occupations evaluated at (omega_m, T) and (omega_b, T).
DiffusionMatrix build_diffusion(const SystemParams& params);

/// Stability margin used by stable(): 1e-12 * max|A_ij|.
double stability_margin(const DriftMatrix& A);

/// True iff every eigenvalue of A has real part below -stability_margin(A).
bool stable(const DriftMatrix& A);

/// Largest real part over the spectrum of A (diagnostic for error messages).
double max_real_eigenvalue(const DriftMatrix& A);

/// Steady-state covariance solving A V + V A^T = -D by Kronecker linearization
/// (16-dimensional LU solve), symmetrized. Throws UnstableSystem when stable(A)
/// fails and SolverFailure when the residual exceeds 1e-10 * max|D|.
/// The drive-free case (all couplings zero) short-circuits to the exact thermal
/// covariance diag(Nm + 1/2, Nm + 1/2, Nb + 1/2, Nb + 1/2).
Eigen::Matrix4d solve_lyapunov(const DriftMatrix& A, const DiffusionMatrix& D);

/// Lower-right 2x2 block (the mechanical mode).
Eigen::Matrix2d mechanical_block(const Eigen::Matrix4d& V);

/// Degree of squeezing S = -10 log10(V_min / V_vac), V_vac = 1/2, where V_min is
/// the smaller eigenvalue of the 2x2 block. Negative when nothing is squeezed.
/// Throws UnphysicalState for non-positive-definite input.
double squeezing_db(const Eigen::Matrix2d& V_b);

/// Physicality of a single-mode covariance block: det(2 V_b) >= 1 - tol.
bool physical(const Eigen::Matrix2d& V_b, double tol = 1e-9);

/// W(u) = exp(-u^T V^-1 u / 2) / (2 pi sqrt(det V)) sampled on the grid.
/// Throws UnphysicalState for singular or non-positive-definite V_b.
WignerGrid gaussian_wigner(const Eigen::Matrix2d& V_b, const GridSpec& grid);

struct RatioOptimum {
    double ratio = 0.0;  ///< argmax of S over G+/G-
    double S_db = 0.0;   ///< maximum squeezing
};

/// Maximizes squeezing_db over the drive ratio G+/G- inside (lo, hi) by a
/// 64-point coarse scan followed by golden-section refinement to 1e-4 in the
/// ratio. Unstable ratios are excluded; throws UnstableSystem when no stable
/// point exists in the window. Ties break toward the smaller ratio.
RatioOptimum optimize_ratio(const SystemParams& params, double G_minus,
                            double lo = 0.01, double hi = 0.999);

/// Squeezing at one drive ratio; convenience for sweeps. Returns false in
/// .second when the configuration is unstable (S is then NaN).
std::pair<double, bool> squeezing_at_ratio(const SystemParams& params, double G_minus,
                                           double ratio);

}  // namespace omm::gaussian
