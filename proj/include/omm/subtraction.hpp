#pragma once

#include <Eigen/Dense>

#include "omm/fock.hpp"

namespace omm::subtraction {

using fock::Complex;
using fock::DensityMatrix;
using fock::StateVector;

/// Default cavity truncation and guard bands used by the evolution helpers.
inline constexpr int default_n_trunc_c = 6;
inline constexpr int default_guard_b = 10;
inline constexpr int default_guard_c = 2;

/// Two-mode state on the mechanical (x) cavity product basis, mechanical index
/// major: element (mb, mc) lives at row mb*(n_trunc_c+1) + mc.
struct JointState {
    Eigen::MatrixXcd rho;
    int n_trunc_b = 0;
    int n_trunc_c = 0;
    double theta = 0.0;
    double leakage = 0.0;  ///< trace deficit of the kept block
};

/// Mechanical state conditioned on detecting k photons in the output field.
struct ConditionedState {
    DensityMatrix rho_b;
    int n_detected = 0;
    double probability = 0.0;
    double theta = 0.0;
};

/// Pulse propagator U = exp(i tan(th) C+ b) cos(th)^{-(C+C - b+b)} exp(i tan(th) C b+)
/// as a dense matrix over the (n_trunc_b+1)(n_trunc_c+1) product basis.
/// The three factors are evaluated on a mechanically extended space (the middle
/// of the product climbs to n_b + n_c quanta), so the returned matrix is the
/// exact truncation of the infinite-dimensional operator.
/// Restricted to cavity-vacuum input columns this is the beamsplitter
/// amplitude sqrt(C(n,k)) (i tan th)^k cos(th)^n, exactly unitary column-wise.
Eigen::MatrixXcd propagator_factored(double theta, int n_trunc_b, int n_trunc_c);

/// Result of the pure-state pulse evolution.
struct PureEvolution {
    Eigen::VectorXcd full;       ///< U |0>_c |xi>_b on the joint basis
    Eigen::VectorXcd expansion;  ///< analytic three-term expansion (unnormalized)
    double r_eff = 0.0;          ///< reduced squeezing, tanh(r_eff) = tanh(r) cos^2(th)
    int n_trunc_b = 0;
    int n_trunc_c = 0;
};

/// Evolves a squeezed vacuum through the pulse. Returns both the full
/// propagator action and the analytic expansion
///   |0>|xi'> + i tan(th) |1>(b|xi'>) - tan^2(th)/sqrt(2) |2>(b^2|xi'>)
/// where |xi'> has tanh(r') = tanh(r) cos^2(th) at the input phase.
/// Rejects inputs with support on odd Fock levels.
PureEvolution evolve_pure(const StateVector& xi_state, double theta,
                          int n_trunc_c = default_n_trunc_c);

/// U (rho_in (x) |0><0|_c) U+ on the kept (n_trunc_b, n_trunc_c) block; guard
/// bands extend the working space during evolution and are discarded after.
JointState evolve_mixed(const DensityMatrix& rho_in, double theta,
                        int n_trunc_c = default_n_trunc_c,
                        int guard_b = default_guard_b,
                        int guard_c = default_guard_c);

/// Partial projection <k| rho_bc |k>_c, normalized; probability is the trace
/// of the unnormalized block scaled by eta^k (detector efficiency, default
/// ideal). Throws DimensionMismatch when k exceeds n_trunc_c.
ConditionedState condition_on_photons(const JointState& joint, int k, double eta = 1.0);

/// Analytic route of the photon-number-conditioned state:
///   rho_k ~ tan^{2k}(th)/k! b^k M rho M b+^k,  M = |cos th|^{b+b}.
/// Returns the normalized state and its probability (times eta^k).
ConditionedState subtract_analytic(const DensityMatrix& rho_in, double theta, int k,
                                   double eta = 1.0);

/// evolve_mixed followed by condition_on_photons; single entry point for the CLI.
ConditionedState subtract_phonons(const DensityMatrix& rho_in, double theta, int k,
                                  int n_trunc_c = default_n_trunc_c,
                                  double eta = 1.0,
                                  int guard_b = default_guard_b,
                                  int guard_c = default_guard_c);

/// One (m, n) cavity block of the double-sum pulse expansion restricted to
/// m, n <= 2 (cross-check surface): i^{m-n} tan^{m+n}(th)/sqrt(m! n!)
/// b^m M rho M b+^n with M = |cos th|^{b+b}.
Eigen::MatrixXcd pulse_expansion_block(const DensityMatrix& rho_in, double theta,
                                       int m, int n);

}  // namespace omm::subtraction
