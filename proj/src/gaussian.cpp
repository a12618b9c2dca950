#include "omm/gaussian.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "omm/constants.hpp"
#include "omm/errors.hpp"

namespace omm::gaussian {

DriftMatrix build_drift(const DriveParams& drive, const SystemParams& params) {
    const double gp = drive.G_plus, gm = drive.G_minus;
    DriftMatrix A = DriftMatrix::Zero();
    A(0, 0) = A(1, 1) = -params.kappa_m / 2.0;
    A(2, 2) = A(3, 3) = -params.kappa_b / 2.0;
    A(0, 3) = gm - gp;
    A(2, 1) = gm - gp;
    A(1, 2) = -(gp + gm);
    A(3, 0) = -(gp + gm);
    return A;
}

DiffusionMatrix build_diffusion(const SystemParams& params) {
    const double Nm = thermal_occupation(params.omega_m, params.T);
    const double Nb = thermal_occupation(params.omega_b, params.T);
    DiffusionMatrix D = DiffusionMatrix::Zero();
    D(0, 0) = D(1, 1) = params.kappa_m * (Nm + 0.5);
    D(2, 2) = D(3, 3) = params.kappa_b * (Nb + 0.5);
    return D;
}

double stability_margin(const DriftMatrix& A) {
    return 1e-12 * A.cwiseAbs().maxCoeff();
}

double max_real_eigenvalue(const DriftMatrix& A) {
    Eigen::EigenSolver<Eigen::Matrix4d> es(A, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff();
}

bool stable(const DriftMatrix& A) {
    return max_real_eigenvalue(A) < -stability_margin(A);
}

Eigen::Matrix4d solve_lyapunov(const DriftMatrix& A, const DiffusionMatrix& D) {
    // Drive-free short circuit: decoupled damped modes relax to the bath state.
    const double coupling = std::abs(A(0, 3)) + std::abs(A(1, 2)) +
                            std::abs(A(2, 1)) + std::abs(A(3, 0));
    if (coupling == 0.0) {
        Eigen::Matrix4d V = Eigen::Matrix4d::Zero();
        V(0, 0) = V(1, 1) = D(0, 0) / (-2.0 * A(0, 0));
        V(2, 2) = V(3, 3) = D(2, 2) / (-2.0 * A(2, 2));
        return V;
    }

    if (!stable(A))
        throw UnstableSystem("drift matrix is not stable: max Re(eig) = " +
                             std::to_string(max_real_eigenvalue(A)));

    // vec(A V + V A^T) = (I (x) A + A (x) I) vec(V), column-major vec.
    Eigen::Matrix<double, 16, 16> K = Eigen::Matrix<double, 16, 16>::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                K(4 * j + i, 4 * j + k) += A(i, k);  // I (x) A
                K(4 * j + i, 4 * k + i) += A(j, k);  // A (x) I
            }
    Eigen::Matrix<double, 16, 1> rhs;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) rhs(4 * j + i) = -D(i, j);

    const Eigen::Matrix<double, 16, 1> x = K.partialPivLu().solve(rhs);
    Eigen::Matrix4d V;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) V(i, j) = x(4 * j + i);
    V = ((V + V.transpose()) / 2.0).eval();

    const double residual = (A * V + V * A.transpose() + D).cwiseAbs().maxCoeff();
    const double tol = 1e-10 * D.cwiseAbs().maxCoeff();
    if (residual > tol)
        throw SolverFailure("Lyapunov residual " + std::to_string(residual) +
                            " exceeds tolerance " + std::to_string(tol));
    return V;
}

Eigen::Matrix2d mechanical_block(const Eigen::Matrix4d& V) {
    return V.block<2, 2>(2, 2);
}

double squeezing_db(const Eigen::Matrix2d& V_b) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(V_b);
    const double vmin = es.eigenvalues()(0);
    if (!(vmin > 0.0))
        throw UnphysicalState("covariance block is not positive definite");
    return -10.0 * std::log10(vmin / 0.5);
}

bool physical(const Eigen::Matrix2d& V_b, double tol) {
    return (2.0 * V_b).determinant() >= 1.0 - tol;
}

WignerGrid gaussian_wigner(const Eigen::Matrix2d& V_b, const GridSpec& grid) {
    const double det = V_b.determinant();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(V_b);
    if (!(es.eigenvalues()(0) > 0.0) || !(det > 0.0))
        throw UnphysicalState("singular covariance block in gaussian_wigner");
    const Eigen::Matrix2d Vi = V_b.inverse();
    const double norm = 1.0 / (constants::two_pi * std::sqrt(det));

    WignerGrid w;
    w.spec = grid;
    w.values.resize(static_cast<size_t>(grid.nx) * grid.ny);
    for (int j = 0; j < grid.ny; ++j) {
        const double y = grid.y(j);
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            const double q = Vi(0, 0) * x * x + 2.0 * Vi(0, 1) * x * y + Vi(1, 1) * y * y;
            w.at(i, j) = norm * std::exp(-0.5 * q);
        }
    }
    return w;
}

std::pair<double, bool> squeezing_at_ratio(const SystemParams& params, double G_minus,
                                           double ratio) {
    DriveParams drive;
    drive.G_minus = G_minus;
    drive.G_plus = ratio * G_minus;
    const DriftMatrix A = build_drift(drive, params);
    if (!stable(A)) return {std::numeric_limits<double>::quiet_NaN(), false};
    const Eigen::Matrix4d V = solve_lyapunov(A, build_diffusion(params));
    return {squeezing_db(mechanical_block(V)), true};
}

RatioOptimum optimize_ratio(const SystemParams& params, double G_minus,
                            double lo, double hi) {
    if (!(G_minus > 0.0)) throw ConfigError("optimize_ratio requires G_minus > 0");
    const int coarse = 64;
    auto eval = [&](double ratio) -> double {
        auto [s, ok] = squeezing_at_ratio(params, G_minus, ratio);
        return ok ? s : -std::numeric_limits<double>::infinity();
    };

    double best_x = lo, best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < coarse; ++i) {
        const double x = lo + (hi - lo) * i / (coarse - 1);
        const double v = eval(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    if (!std::isfinite(best_v))
        throw UnstableSystem("no stable drive ratio in the search window");

    const double step = (hi - lo) / (coarse - 1);
    double a = std::max(lo, best_x - step);
    double b = std::min(hi, best_x + step);

    // Golden-section; >= comparisons move the bracket left on ties.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = eval(c1), f2 = eval(c2);
    while (b - a > 1e-4) {
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
    RatioOptimum opt;
    opt.ratio = (a + b) / 2.0;
    opt.S_db = eval(opt.ratio);
    if (!std::isfinite(opt.S_db))
        throw UnstableSystem("golden-section landed on an unstable ratio");
    return opt;
}

}  // namespace omm::gaussian
