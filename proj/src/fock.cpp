#include "omm/fock.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "omm/constants.hpp"
#include "omm/errors.hpp"

namespace omm::fock {

Eigen::MatrixXcd annihilation(int n_trunc) {
    if (n_trunc < 1) throw DimensionMismatch("annihilation requires n_trunc >= 1");
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n_trunc + 1, n_trunc + 1);
    for (int n = 1; n <= n_trunc; ++n) b(n - 1, n) = std::sqrt(double(n));
    return b;
}

namespace {

// Fills the two-variable Hermite recurrence generated by
//   G(x, y) = seed * exp(a x^2 / 2 + abar y^2 / 2 + b x y),
// i.e. M(m, n) = [a sqrt(m-1) M(m-2, n) + b sqrt(n) M(m-1, n-1)] / sqrt(m)
// and its y-direction mirror. Evaluation is ordered by total index and the
// recurrence direction follows the dominant index, which keeps every
// coefficient below one in modulus for |a|, |abar|, |b| < 1: the scheme is a
// contraction on each wedge, so no parasitic solution can grow (naive
// single-direction sweeps blow up once the off-wedge factor sqrt(m/n)
// exceeds one). References only reach two steps down in m + n, so each
// element equals its infinite-dimensional value regardless of truncation.
Eigen::MatrixXcd hermite_kernel(Complex a, Complex abar, Complex b, Complex seed, int N) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    std::vector<double> sq(N + 2);
    for (int i = 0; i <= N + 1; ++i) sq[i] = std::sqrt(double(i));
    M(0, 0) = seed;
    for (int s = 1; s <= 2 * N; ++s) {
        for (int m = std::max(0, s - N); m <= std::min(N, s); ++m) {
            const int n = s - m;
            if (m >= n) {
                Complex v = 0.0;
                if (m >= 2) v += a * sq[m - 1] * M(m - 2, n);
                if (n >= 1) v += b * sq[n] * M(m - 1, n - 1);
                M(m, n) = v / sq[m];
            } else {
                Complex v = 0.0;
                if (n >= 2) v += abar * sq[n - 1] * M(m, n - 2);
                if (m >= 1) v += b * sq[m] * M(m - 1, n - 1);
                M(m, n) = v / sq[n];
            }
        }
    }
    return M;
}

}  // namespace

Eigen::MatrixXcd squeeze_operator(double r, double phi, int n_trunc) {
    if (r == 0.0) return Eigen::MatrixXcd::Identity(n_trunc + 1, n_trunc + 1);
    // Bargmann kernel of S: <alpha|S|beta> = sqrt(sech r) *
    //   exp(-(|a|^2+|b|^2)/2) exp(lam conj(a)^2/2 + sech conj(a) b - conj(lam) b^2/2)
    // with lam = e^{i phi} tanh r, so the matrix elements follow the Hermite
    // recurrence with (lam, -conj(lam), sech).
    const Complex lam = std::polar(std::tanh(r), phi);
    const double sech = 1.0 / std::cosh(r);
    return hermite_kernel(lam, -std::conj(lam), sech, std::sqrt(sech), n_trunc);
}

StateVector squeezed_vacuum(double r, double phi, int n_trunc) {
    StateVector s;
    s.n_trunc = n_trunc;
    s.amps = Eigen::VectorXcd::Zero(n_trunc + 1);
    const double lam = std::tanh(r);
    if (lam == 0.0) {
        s.amps(0) = 1.0;
        s.leakage = 0.0;
        return s;
    }
    // log-space magnitudes: 1/4 ln(1-lam^2) + k ln(lam/2) + lgamma(2k+1)/2 - lgamma(k+1)
    for (int k = 0; 2 * k <= n_trunc; ++k) {
        const double lnmag = 0.25 * std::log1p(-lam * lam) + k * std::log(lam / 2.0) +
                             0.5 * std::lgamma(2.0 * k + 1.0) - std::lgamma(k + 1.0);
        s.amps(2 * k) = std::polar(std::exp(lnmag), phi * k);
    }
    s.leakage = 1.0 - s.amps.squaredNorm();
    return s;
}

DensityMatrix thermal_state(double n_bar, int n_trunc) {
    if (n_bar < 0.0) throw UnphysicalState("thermal occupation must be nonnegative");
    DensityMatrix d;
    d.n_trunc = n_trunc;
    d.rho = Eigen::MatrixXcd::Zero(n_trunc + 1, n_trunc + 1);
    if (n_bar == 0.0) {
        d.rho(0, 0) = 1.0;
        d.leakage = 0.0;
        return d;
    }
    const double lnq = std::log(n_bar / (1.0 + n_bar));
    double trace = 0.0;
    for (int n = 0; n <= n_trunc; ++n) {
        const double p = std::exp(n * lnq - std::log1p(n_bar));
        d.rho(n, n) = p;
        trace += p;
    }
    d.leakage = 1.0 - trace;
    d.rho /= trace;
    return d;
}

DensityMatrix squeezed_thermal(const SqueezedThermalParams& params, int n_trunc,
                               double leakage_budget, bool allow_leakage) {
    if (params.r < 0.0 || params.n_bar < 0.0)
        throw UnphysicalState("squeezed_thermal requires r >= 0 and n_bar >= 0");
    // The state equals the conjugation of the thermal state by the squeeze
    // operator at phase phi + pi (the bridge branch of the extraction). It is
    // built directly from its Gaussian Bargmann kernel, which the second
    // moments fix completely:
    //   <b+b> = nu sinh^2 r + (nu - 1)/2,  <bb> = -nu sinh r cosh r e^{i phi}
    // with nu = 2 nbar + 1. The kernel coefficients stay strictly inside the
    // unit disc for physical states, so the element recurrence is stable at
    // any truncation (conjugating a dense squeeze operator is not).
    const double nu = 2.0 * params.n_bar + 1.0;
    const double sh = std::sinh(params.r), ch = std::cosh(params.r);
    const double mean_n = nu * sh * sh + (nu - 1.0) / 2.0;
    const Complex m2 = -std::polar(nu * sh * ch, params.phi);
    const double det = 1.0 / ((mean_n + 1.0) * (mean_n + 1.0) - std::norm(m2));
    const Complex a = m2 * det;
    const double b = 1.0 - (mean_n + 1.0) * det;

    DensityMatrix d;
    d.n_trunc = n_trunc;
    d.rho = hermite_kernel(a, std::conj(a), b, std::sqrt(det), n_trunc);
    const double trace = d.rho.trace().real();
    d.leakage = 1.0 - trace;
    if (d.leakage > leakage_budget && !allow_leakage)
        throw LeakageExceeded(d.leakage, leakage_budget);
    d.rho /= trace;
    return d;
}

SqueezedThermalParams cm_to_squeezed_thermal(const Eigen::Matrix2d& V_b) {
    const Eigen::Matrix2d Vt = 2.0 * V_b;
    const double det = Vt.determinant();
    if (det <= 0.0) throw UnphysicalState("covariance block has nonpositive determinant");
    const double sdet = std::sqrt(det);
    const double n_bar = (sdet - 1.0) / 2.0;
    if (n_bar < -1e-9)
        throw UnphysicalState("covariance block violates the uncertainty bound: nbar = " +
                              std::to_string(n_bar));
    SqueezedThermalParams p;
    p.n_bar = n_bar > 0.0 ? n_bar : 0.0;
    const double arg = Vt.trace() / (2.0 * sdet);
    p.r = 0.5 * std::acosh(arg > 1.0 ? arg : 1.0);
    if (std::sinh(2.0 * p.r) < 1e-14)
        p.phi = 0.0;  // unconstrained at r = 0
    else
        p.phi = std::atan2(-2.0 * Vt(0, 1), Vt(1, 1) - Vt(0, 0));
    if (p.phi == 0.0) p.phi = 0.0 * std::abs(p.phi);  // normalize -0.0
    return p;
}

Eigen::Matrix2d cm_from_density(const DensityMatrix& state) {
    const auto& rho = state.rho;
    const int N = state.n_trunc;
    // <b>, <b+b>, <b^2> read off the first three diagonals.
    Complex b1 = 0.0, b2 = 0.0;
    double nbar = 0.0;
    for (int n = 0; n <= N; ++n) nbar += n * rho(n, n).real();
    for (int n = 0; n + 1 <= N; ++n) b1 += std::sqrt(n + 1.0) * rho(n + 1, n);
    for (int n = 0; n + 2 <= N; ++n) b2 += std::sqrt((n + 1.0) * (n + 2.0)) * rho(n + 2, n);
    if (std::abs(b1) >= 1e-8)
        throw DisplacedState("nonzero displacement detected: |<b>| = " +
                             std::to_string(std::abs(b1)));
    Eigen::Matrix2d V;
    V(0, 0) = 0.5 * (1.0 + 2.0 * nbar + 2.0 * b2.real());
    V(1, 1) = 0.5 * (1.0 + 2.0 * nbar - 2.0 * b2.real());
    V(0, 1) = V(1, 0) = b2.imag();
    return V;
}

DensityMatrix to_density(const StateVector& psi) {
    DensityMatrix d;
    d.n_trunc = psi.n_trunc;
    d.rho = psi.amps * psi.amps.adjoint();
    d.leakage = psi.leakage;
    return d;
}

double hermiticity_error(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace omm::fock
