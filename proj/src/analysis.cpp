#include "omm/analysis.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "omm/constants.hpp"
#include "omm/errors.hpp"

namespace omm::analysis {

namespace {

// One grid row of the displaced-parity sum. For each diagonal offset
// k = m - n >= 0 the generalized Laguerre values L_n^{(k)}(u) follow the
// three-term recurrence in n; sqrt(n!/m!) prefactors are kept in log space.
void wigner_row(const Eigen::MatrixXcd& rho, const GridSpec& g, int j,
                const std::vector<double>& lgam, double* out) {
    const int N = int(rho.rows()) - 1;
    const double y = g.y(j);
    for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i);
        const Complex beta = -2.0 * Complex(x, y) / std::sqrt(2.0);
        const double u = std::norm(beta);
        const double lneu = -0.5 * u;
        Complex total = 0.0;
        Complex beta_k = 1.0;
        for (int k = 0; k <= N; ++k) {
            double Lm1 = 0.0, L = 1.0;
            for (int n = 0; n + k <= N; ++n) {
                if (n > 0) {
                    const double Lnew = ((2.0 * n - 1.0 + k - u) * L - (n - 1.0 + k) * Lm1) / n;
                    Lm1 = L;
                    L = Lnew;
                }
                const int m = n + k;
                const double msign = (m % 2 == 0) ? 1.0 : -1.0;
                const double pref = std::exp(0.5 * (lgam[n] - lgam[m]) + lneu);
                if (k == 0) {
                    total += msign * rho(n, n).real() * pref * L;
                } else {
                    const Complex d_mn = beta_k * pref * L;  // <m|D(beta)|n>
                    const double nsign = (n % 2 == 0) ? 1.0 : -1.0;
                    const double ksign = (k % 2 == 0) ? 1.0 : -1.0;
                    total += msign * rho(n, m) * d_mn +
                             nsign * rho(m, n) * std::conj(ksign * d_mn);
                }
            }
            beta_k *= beta;
        }
        out[i] = total.real() / constants::pi;
    }
}

}  // namespace

WignerGrid wigner_fock(const DensityMatrix& rho, const GridSpec& grid, int jobs) {
    WignerGrid w;
    w.spec = grid;
    w.values.resize(static_cast<size_t>(grid.nx) * grid.ny);
    std::vector<double> lgam(rho.n_trunc + 1);
    for (int n = 0; n <= rho.n_trunc; ++n) lgam[n] = std::lgamma(n + 1.0);

    if (jobs <= 1) {
        for (int j = 0; j < grid.ny; ++j)
            wigner_row(rho.rho, grid, j, lgam, &w.values[static_cast<size_t>(j) * grid.nx]);
        return w;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int nthreads = std::min(jobs, grid.ny);
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
            for (int j = next.fetch_add(1); j < grid.ny; j = next.fetch_add(1))
                wigner_row(rho.rho, grid, j, lgam, &w.values[static_cast<size_t>(j) * grid.nx]);
        });
    for (auto& th : pool) th.join();
    return w;
}

double parity(const DensityMatrix& rho) {
    double p = 0.0;
    for (int n = 0; n <= rho.n_trunc; ++n)
        p += ((n % 2 == 0) ? 1.0 : -1.0) * rho.rho(n, n).real();
    return p;
}

double negativity_volume(const WignerGrid& w) {
    double pos = 0.0, tot = 0.0;
    for (double v : w.values) {
        pos += std::abs(v);
        tot += v;
    }
    return (pos - tot) * w.spec.dx() * w.spec.dy();
}

StateVector coherent_state(Complex alpha, int n_trunc) {
    StateVector s;
    s.n_trunc = n_trunc;
    s.amps = Eigen::VectorXcd::Zero(n_trunc + 1);
    const double a = std::abs(alpha);
    if (a == 0.0) {
        s.amps(0) = 1.0;
        return s;
    }
    const double lna = std::log(a);
    const double ph = std::arg(alpha);
    for (int n = 0; n <= n_trunc; ++n) {
        const double lnmag = -0.5 * a * a + n * lna - 0.5 * std::lgamma(n + 1.0);
        s.amps(n) = std::polar(std::exp(lnmag), ph * n);
    }
    s.leakage = 1.0 - s.amps.squaredNorm();
    return s;
}

StateVector cat_state(const CatParams& params, int n_trunc) {
    const double s = params.even ? 1.0 : -1.0;
    if (std::abs(params.alpha) == 0.0) {
        // alpha -> 0 limits: even cat -> |0>, odd cat -> |1>
        StateVector limit;
        limit.n_trunc = n_trunc;
        limit.amps = Eigen::VectorXcd::Zero(n_trunc + 1);
        limit.amps(params.even ? 0 : 1) = 1.0;
        return limit;
    }
    const StateVector plus = coherent_state(params.alpha, n_trunc);
    const StateVector minus = coherent_state(-params.alpha, n_trunc);
    StateVector cat;
    cat.n_trunc = n_trunc;
    cat.amps = plus.amps + s * minus.amps;

    const double a2 = std::norm(params.alpha);
    // expm1 keeps the odd-cat normalization accurate for small alpha.
    const double norm_exact = params.even ? 2.0 * (1.0 + std::exp(-2.0 * a2))
                                          : -2.0 * std::expm1(-2.0 * a2);
    if (!(norm_exact > 0.0))
        throw UnphysicalState("cat normalization vanished");
    cat.leakage = 1.0 - cat.amps.squaredNorm() / norm_exact;
    if (cat.leakage > 1e-8)
        throw LeakageExceeded(cat.leakage, 1e-8);
    cat.amps /= cat.amps.norm();
    return cat;
}

double cat_fidelity(const DensityMatrix& rho, const CatParams& params) {
    const StateVector cat = cat_state(params, rho.n_trunc);
    return pure_state_fidelity(rho, cat);
}

double pure_state_fidelity(const DensityMatrix& rho, const StateVector& psi) {
    if (psi.amps.size() != rho.rho.rows())
        throw DimensionMismatch("fidelity: state and density dimensions differ");
    const Complex f = psi.amps.adjoint() * rho.rho * psi.amps;
    return std::max(0.0, std::min(1.0, f.real()));
}

double trace_distance(const Eigen::MatrixXcd& r1, const Eigen::MatrixXcd& r2) {
    if (r1.rows() != r2.rows() || r1.cols() != r2.cols())
        throw DimensionMismatch("trace_distance: dimensions differ");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r1 - r2, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

CatOptimum best_cat_fidelity(const DensityMatrix& rho, bool even,
                             double alpha_max, bool search_phase) {
    const int coarse = 33;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    CatOptimum best;
    best.fidelity = -1.0;

    const int nphase = search_phase ? 17 : 1;
    for (int ip = 0; ip < nphase; ++ip) {
        const double psi = search_phase ? constants::pi * ip / 16.0 : 0.0;
        auto eval = [&](double a) {
            return cat_fidelity(rho, CatParams{std::polar(a, psi), even});
        };
        double bx = 0.0, bv = -1.0;
        for (int i = 0; i < coarse; ++i) {
            const double x = alpha_max * i / (coarse - 1);
            const double v = eval(x);
            if (v > bv) {
                bv = v;
                bx = x;
            }
        }
        const double step = alpha_max / (coarse - 1);
        double a = std::max(0.0, bx - step), b = std::min(alpha_max, bx + step);
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double f1 = eval(c1), f2 = eval(c2);
        while (b - a > 1e-6) {
            if (f1 >= f2) {
                b = c2;
                c2 = c1;
                f2 = f1;
                c1 = b - gr * (b - a);
                f1 = eval(c1);
            } else {
                a = c1;
                c1 = c2;
                f1 = f2;
                c2 = a + gr * (b - a);
                f2 = eval(c2);
            }
        }
        const double xs = (a + b) / 2.0;
        const double fs = eval(xs);
        if (fs > best.fidelity + 1e-12) {
            best.alpha = xs;
            best.phase = psi;
            best.fidelity = fs;
        }
    }
    return best;
}

}  // namespace omm::analysis
