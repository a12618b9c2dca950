#pragma once

#include <complex>

#include <Eigen/Dense>

#include "omm/fock.hpp"
#include "omm/grid.hpp"

namespace omm::analysis {

using fock::Complex;
using fock::DensityMatrix;
using fock::StateVector;

/// Cat-state description: N^{-1/2} (|alpha> + s |-alpha>), s = +1 (even) or -1 (odd).
struct CatParams {
    Complex alpha;
    bool even = true;
};

/// Fock-basis Wigner function via the displaced-parity form
///   W(alpha) = (1/pi) Tr[rho D(alpha) P D(-alpha)],  P = (-1)^{b+b},
/// evaluated through Laguerre-recurrence displacement matrix elements with the
/// factorial prefactors accumulated in log space. Coordinates: alpha = (x+iy)/sqrt(2).
/// `jobs` > 1 parallelizes over grid rows (per-point pure function, identical
/// output regardless of the schedule).
WignerGrid wigner_fock(const DensityMatrix& rho, const GridSpec& grid, int jobs = 1);

/// Parity expectation sum_n (-1)^n rho_nn.
double parity(const DensityMatrix& rho);

/// Negativity volume of a sampled field: integral of |W| minus integral of W.
double negativity_volume(const WignerGrid& w);

/// Coherent state |alpha> on the truncated basis (log-space amplitudes).
StateVector coherent_state(Complex alpha, int n_trunc);

/// Normalized cat state. Throws LeakageExceeded above the 1e-8 budget.
StateVector cat_state(const CatParams& params, int n_trunc);

/// <cat| rho |cat> for the pure cat target. Dimensions must match.
double cat_fidelity(const DensityMatrix& rho, const CatParams& params);

/// <psi| rho |psi> for any pure target.
double pure_state_fidelity(const DensityMatrix& rho, const StateVector& psi);

/// Trace distance ||r1 - r2||_1 / 2 between Hermitian operators.
double trace_distance(const Eigen::MatrixXcd& r1, const Eigen::MatrixXcd& r2);

struct CatOptimum {
    double alpha = 0.0;    ///< optimal |alpha|
    double phase = 0.0;    ///< phase of alpha (0 unless the phase search is enabled)
    double fidelity = 0.0;
};

/// Maximizes cat_fidelity over real alpha in [0, alpha_max] by a 33-point
/// coarse scan plus golden-section refinement; ties break toward smaller
/// alpha. With search_phase the amplitude search repeats over 17 phases in
/// [0, pi] and the best is kept (the conditioned states are axis-aligned, so
/// the coarse phase grid contains the optimum).
CatOptimum best_cat_fidelity(const DensityMatrix& rho, bool even,
                             double alpha_max = 3.0, bool search_phase = false);

}  // namespace omm::analysis
