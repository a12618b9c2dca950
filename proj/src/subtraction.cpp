#include "omm/subtraction.hpp"

#include <cmath>

#include "omm/constants.hpp"
#include "omm/errors.hpp"

namespace omm::subtraction {

namespace {

// Factors of the propagator on an explicit (db x dc) product space, mechanical
// index major. exp(i tan C b+) raises the mechanical index while lowering the
// cavity one; exp(i tan C+ b) does the opposite. Both series terminate inside
// the space, so the fills are exact.
Eigen::MatrixXcd fill_raise_mech(double tan_th, int Nb, int Nc) {
    const int db = Nb + 1, dc = Nc + 1, dim = db * dc;
    Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(dim, dim);
    for (int nb = 0; nb < db; ++nb)
        for (int nc = 0; nc < dc; ++nc) {
            const int col = nb * dc + nc;
            Complex amp = 1.0;
            F(col, col) += 1.0;
            const int kmax = std::min(nc, Nb - nb);
            for (int k = 1; k <= kmax; ++k) {
                amp *= Complex(0.0, tan_th) / double(k) *
                       std::sqrt(double(nc - k + 1) * double(nb + k));
                F((nb + k) * dc + (nc - k), col) += amp;
            }
        }
    return F;
}

Eigen::MatrixXcd fill_raise_cavity(double tan_th, int Nb, int Nc) {
    const int db = Nb + 1, dc = Nc + 1, dim = db * dc;
    Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(dim, dim);
    for (int nb = 0; nb < db; ++nb)
        for (int nc = 0; nc < dc; ++nc) {
            const int col = nb * dc + nc;
            Complex amp = 1.0;
            F(col, col) += 1.0;
            const int kmax = std::min(nb, Nc - nc);
            for (int k = 1; k <= kmax; ++k) {
                amp *= Complex(0.0, tan_th) / double(k) *
                       std::sqrt(double(nc + k) * double(nb - k + 1));
                F((nb - k) * dc + (nc + k), col) += amp;
            }
        }
    return F;
}

// Damped-and-k-subtracted kernel tan^{2k}/k! b^k M rho M b+^k with M = |cos|^{b+b}.
// Returns the unnormalized operator and fills p with its trace.
Eigen::MatrixXcd analytic_kernel(const DensityMatrix& rho_in, double theta, int k,
                                 double* p) {
    const int Nb = rho_in.n_trunc;
    const double c = std::abs(std::cos(theta));
    Eigen::VectorXd damp(Nb + 1);
    for (int n = 0; n <= Nb; ++n) damp(n) = std::pow(c, n);
    Eigen::MatrixXcd out = damp.asDiagonal() * rho_in.rho * damp.asDiagonal();
    const Eigen::MatrixXcd b = fock::annihilation(std::max(Nb, 1));
    const double t2 = std::tan(theta) * std::tan(theta);
    double coeff = 1.0;
    for (int j = 1; j <= k; ++j) {
        out = (b * out * b.adjoint()).eval();
        coeff *= t2 / double(j);
    }
    out *= coeff;
    *p = out.trace().real();
    return out;
}

}  // namespace

Eigen::MatrixXcd propagator_factored(double theta, int n_trunc_b, int n_trunc_c) {
    if (theta < 0.0 || theta >= constants::pi / 2.0)
        throw ConfigError("theta must lie in [0, pi/2)");
    const int Nb = n_trunc_b, Nc = n_trunc_c;
    const int db = Nb + 1, dc = Nc + 1;
    if (theta == 0.0) return Eigen::MatrixXcd::Identity(db * dc, db * dc);

    // Extended mechanical space: after exp(i tan C b+) the intermediate kets
    // hold up to n_b + n_c mechanical quanta, so extending by Nc makes the
    // projected product the exact truncation of the infinite-space operator.
    const int Ne = Nb + Nc;
    const double t = std::tan(theta);
    const double lncos = std::log(std::cos(theta));

    const Eigen::MatrixXcd Fm = fill_raise_mech(t, Ne, Nc);
    const Eigen::MatrixXcd Fp = fill_raise_cavity(t, Ne, Nc);

    // Middle factor cos(th)^{-(C+C - b+b)} with exact per-entry exponents.
    Eigen::VectorXd mid((Ne + 1) * dc);
    for (int nb = 0; nb <= Ne; ++nb)
        for (int nc = 0; nc <= Nc; ++nc)
            mid(nb * dc + nc) = std::exp((nb - nc) * lncos);

    const Eigen::MatrixXcd U = Fp * (mid.asDiagonal() * Fm);
    // Mechanical-major layout keeps the extension rows/cols at the tail.
    return U.topLeftCorner(db * dc, db * dc);
}

PureEvolution evolve_pure(const StateVector& xi_state, double theta, int n_trunc_c) {
    const int Nb = xi_state.n_trunc;
    for (int n = 1; n <= Nb; n += 2)
        if (std::abs(xi_state.amps(n)) > 1e-10)
            throw UnphysicalState("evolve_pure expects a squeezed vacuum (even Fock support)");
    if (std::abs(xi_state.amps(0)) < 1e-12)
        throw UnphysicalState("evolve_pure: vanishing vacuum amplitude");

    // Recover (r, phi) from the amplitude ratio a2/a0 = e^{i phi} tanh(r)/sqrt(2).
    double tanh_r = 0.0, phi = 0.0;
    if (Nb >= 2) {
        const Complex ratio = std::sqrt(2.0) * xi_state.amps(2) / xi_state.amps(0);
        tanh_r = std::abs(ratio);
        phi = tanh_r > 0.0 ? std::arg(ratio) : 0.0;
    }
    if (tanh_r >= 1.0)
        throw UnphysicalState("evolve_pure: amplitude ratio exceeds a physical squeezed vacuum");

    const int Nbg = Nb + default_guard_b;
    const int Ncg = n_trunc_c + default_guard_c;
    const int dcg = Ncg + 1;

    const Eigen::MatrixXcd U = propagator_factored(theta, Nbg, Ncg);
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero((Nbg + 1) * dcg);
    for (int n = 0; n <= Nb; ++n) in(n * dcg) = xi_state.amps(n);

    PureEvolution ev;
    ev.n_trunc_b = Nbg;
    ev.n_trunc_c = Ncg;
    ev.full = U * in;

    const double c2 = std::cos(theta) * std::cos(theta);
    ev.r_eff = std::atanh(tanh_r * c2);
    const StateVector xi_p = fock::squeezed_vacuum(ev.r_eff, phi, Nbg);
    const Eigen::MatrixXcd b = fock::annihilation(Nbg);
    const double t = std::tan(theta);
    const Eigen::VectorXcd b1 = b * xi_p.amps;
    const Eigen::VectorXcd b2 = b * b1;

    ev.expansion = Eigen::VectorXcd::Zero((Nbg + 1) * dcg);
    for (int n = 0; n <= Nbg; ++n) {
        ev.expansion(n * dcg + 0) = xi_p.amps(n);
        if (Ncg >= 1) ev.expansion(n * dcg + 1) = Complex(0.0, t) * b1(n);
        if (Ncg >= 2) ev.expansion(n * dcg + 2) = -(t * t / std::sqrt(2.0)) * b2(n);
    }
    return ev;
}

JointState evolve_mixed(const DensityMatrix& rho_in, double theta, int n_trunc_c,
                        int guard_b, int guard_c) {
    const int Nb = rho_in.n_trunc;
    const int Nbg = Nb + guard_b, Ncg = n_trunc_c + guard_c;
    const int dcg = Ncg + 1;

    const Eigen::MatrixXcd U = propagator_factored(theta, Nbg, Ncg);

    // rho (x) |0><0|_c keeps only cavity-vacuum columns of U: joint = B rho B+.
    Eigen::MatrixXcd B((Nbg + 1) * dcg, Nb + 1);
    for (int nb = 0; nb <= Nb; ++nb) B.col(nb) = U.col(nb * dcg);
    const Eigen::MatrixXcd joint_g = B * rho_in.rho * B.adjoint();

    JointState js;
    js.n_trunc_b = Nb;
    js.n_trunc_c = n_trunc_c;
    js.theta = theta;
    const int db = Nb + 1, dc = n_trunc_c + 1;
    js.rho.resize(db * dc, db * dc);
    for (int mb = 0; mb < db; ++mb)
        for (int nb = 0; nb < db; ++nb)
            js.rho.block(mb * dc, nb * dc, dc, dc) =
                joint_g.block(mb * dcg, nb * dcg, dc, dc);
    js.leakage = 1.0 - js.rho.trace().real() + rho_in.leakage;
    return js;
}

ConditionedState condition_on_photons(const JointState& joint, int k, double eta) {
    if (k < 0 || k > joint.n_trunc_c)
        throw DimensionMismatch("photon count k = " + std::to_string(k) +
                                " outside cavity truncation " +
                                std::to_string(joint.n_trunc_c));
    const int db = joint.n_trunc_b + 1, dc = joint.n_trunc_c + 1;
    ConditionedState cs;
    cs.n_detected = k;
    cs.theta = joint.theta;
    cs.rho_b.n_trunc = joint.n_trunc_b;
    cs.rho_b.rho.resize(db, db);
    for (int mb = 0; mb < db; ++mb)
        for (int nb = 0; nb < db; ++nb)
            cs.rho_b.rho(mb, nb) = joint.rho(mb * dc + k, nb * dc + k);
    const double p = cs.rho_b.rho.trace().real();
    if (p <= 0.0)
        throw UnphysicalState("conditioning probability vanished for k = " +
                              std::to_string(k));
    cs.rho_b.rho /= p;
    cs.rho_b.leakage = joint.leakage;
    cs.probability = p * std::pow(eta, k);
    return cs;
}

ConditionedState subtract_analytic(const DensityMatrix& rho_in, double theta, int k,
                                   double eta) {
    double p = 0.0;
    Eigen::MatrixXcd out = analytic_kernel(rho_in, theta, k, &p);
    if (p <= 0.0)
        throw UnphysicalState("conditioning probability vanished for k = " +
                              std::to_string(k));
    ConditionedState cs;
    cs.n_detected = k;
    cs.theta = theta;
    cs.rho_b.n_trunc = rho_in.n_trunc;
    cs.rho_b.rho = out / p;
    cs.rho_b.leakage = rho_in.leakage;
    cs.probability = p * std::pow(eta, k);
    return cs;
}

ConditionedState subtract_phonons(const DensityMatrix& rho_in, double theta, int k,
                                  int n_trunc_c, double eta, int guard_b, int guard_c) {
    if (k > n_trunc_c)
        throw DimensionMismatch("photon count k = " + std::to_string(k) +
                                " outside cavity truncation " + std::to_string(n_trunc_c));
    const JointState js = evolve_mixed(rho_in, theta, n_trunc_c, guard_b, guard_c);
    return condition_on_photons(js, k, eta);
}

Eigen::MatrixXcd pulse_expansion_block(const DensityMatrix& rho_in, double theta,
                                       int m, int n) {
    if (m < 0 || n < 0 || m > 2 || n > 2)
        throw DimensionMismatch("pulse_expansion_block covers m, n <= 2");
    const int Nb = rho_in.n_trunc;
    const double c = std::abs(std::cos(theta));
    const double t = std::tan(theta);
    Eigen::VectorXd damp(Nb + 1);
    for (int q = 0; q <= Nb; ++q) damp(q) = std::pow(c, q);
    Eigen::MatrixXcd out = damp.asDiagonal() * rho_in.rho * damp.asDiagonal();
    const Eigen::MatrixXcd b = fock::annihilation(std::max(Nb, 1));
    for (int j = 0; j < m; ++j) out = (b * out).eval();
    for (int j = 0; j < n; ++j) out = (out * b.adjoint()).eval();
    double fact = 1.0;
    for (int j = 2; j <= m; ++j) fact *= j;
    for (int j = 2; j <= n; ++j) fact *= j;
    const Complex phase = std::pow(Complex(0.0, 1.0), m - n);
    return phase * std::pow(t, m + n) / std::sqrt(fact) * out;
}

}  // namespace omm::subtraction
