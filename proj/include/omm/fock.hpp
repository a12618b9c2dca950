#pragma once

#include <complex>

#include <Eigen/Dense>

namespace omm::fock {

using Complex = std::complex<double>;

/// Pure state over the truncated Fock basis |0> .. |n_trunc>.
struct StateVector {
    Eigen::VectorXcd amps;
    int n_trunc = 0;
    double leakage = 0.0;  ///< 1 - norm^2 before any renormalization
};

/// Single-mode density operator over the truncated Fock basis.
struct DensityMatrix {
    Eigen::MatrixXcd rho;
    int n_trunc = 0;
    double leakage = 0.0;  ///< trace deficit before renormalization
};

/// (r, phi, nbar) of a squeezed thermal state. Phase convention is fixed by the
/// covariance bridge below: squeezed_thermal(r, phi, nbar) is the state whose
/// quadrature covariance satisfies, with nu = 2 nbar + 1,
///   2 V11 = nu (cosh 2r - sinh 2r cos phi)
///   2 V22 = nu (cosh 2r + sinh 2r cos phi)
///   2 V12 = -nu sinh 2r sin phi
struct SqueezedThermalParams {
    double r = 0.0;
    double phi = 0.0;
    double n_bar = 0.0;
};

/// Default truncation-leakage budget; constructors throw LeakageExceeded above
/// it unless allow_leakage is set (the leakage is still recorded either way).
inline constexpr double default_leakage_budget = 1e-6;

/// Annihilation operator b|n> = sqrt(n)|n-1> as an (n_trunc+1)^2 matrix.
Eigen::MatrixXcd annihilation(int n_trunc);

/// Squeeze operator S(xi) = exp[(xi b+^2 - xi* b^2)/2], xi = r e^{i phi},
/// as the exact truncation of the infinite-dimensional operator (element-wise
/// recurrence; no generator-truncation artifacts). S(xi)|0> equals the
/// squeezed-vacuum series exactly.
Eigen::MatrixXcd squeeze_operator(double r, double phi, int n_trunc);

/// Squeezed vacuum in the series form: amplitudes
/// (1 - tanh^2 r)^{1/4} (e^{i phi}/2)^n sqrt((2n)!)/n! tanh^n r on |2n>.
StateVector squeezed_vacuum(double r, double phi, int n_trunc);

/// Thermal state with geometric weights P_n = nbar^n/(1+nbar)^{n+1},
/// renormalized over the truncated basis (leakage recorded).
DensityMatrix thermal_state(double n_bar, int n_trunc);

/// Squeezed thermal state in the bridge phase convention (see
/// SqueezedThermalParams): conjugation of the thermal state by the squeeze
/// operator evaluated at phase phi + pi. Unit trace after renormalization.
DensityMatrix squeezed_thermal(const SqueezedThermalParams& params, int n_trunc,
                               double leakage_budget = default_leakage_budget,
                               bool allow_leakage = false);

/// Extracts (r, phi, nbar) from a single-mode covariance block via the
/// vacuum-normalized matrix Vt = 2 V_b:
///   r = arcosh(tr Vt / (2 sqrt(det Vt))) / 2,  nbar = (sqrt(det Vt) - 1)/2,
///   phi = atan2(-2 Vt12, Vt22 - Vt11)  (branch fixed by the bridge convention;
///   returned as 0 when r = 0 leaves it unconstrained).
/// Throws UnphysicalState when nbar would fall below -1e-9.
SqueezedThermalParams cm_to_squeezed_thermal(const Eigen::Matrix2d& V_b);

/// Second moments of a unit-trace, zero-mean density matrix:
/// V11 = <X^2>, V22 = <Y^2>, V12 = <XY+YX>/2 with X = (b + b+)/sqrt(2),
/// Y = i (b+ - b)/sqrt(2). Throws DisplacedState when |<b>| >= 1e-8.
Eigen::Matrix2d cm_from_density(const DensityMatrix& state);

/// DensityMatrix from a pure state (no renormalization).
DensityMatrix to_density(const StateVector& psi);

/// Diagnostics used by type invariants: hermiticity deviation, most negative
/// eigenvalue, trace.
double hermiticity_error(const Eigen::MatrixXcd& m);
double min_eigenvalue(const Eigen::MatrixXcd& hermitian);

}  // namespace omm::fock
