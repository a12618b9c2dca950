#include "omm/params.hpp"

#include <cmath>

#include "omm/constants.hpp"
#include "omm/errors.hpp"

namespace omm {

double thermal_occupation(double omega, double T) {
    if (T <= 0.0) return 0.0;
    const double x = constants::hbar * omega / (constants::k_B * T);
    // expm1 overflows to +inf for large x, so the quotient cleanly underflows to 0.
    return 1.0 / std::expm1(x);
}

std::pair<std::complex<double>, std::complex<double>>
classical_amplitudes(double Omega_plus, double Omega_minus, double omega_b, double kappa_m) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> m_plus = Omega_plus / (omega_b + i * kappa_m / 2.0);
    const std::complex<double> m_minus = Omega_minus / (-omega_b + i * kappa_m / 2.0);
    return {m_plus, m_minus};
}

PulseDerived pulse_interaction(const SystemParams& params, const PulseParams& pulse) {
    if (pulse.P0 < 0.0) throw ConfigError("pulse power P0 must be nonnegative");
    if (pulse.t < 0.0) throw ConfigError("pulse duration t must be nonnegative");
    if (pulse.lambda_0 <= 0.0) throw ConfigError("wavelength lambda_0 must be positive");

    const double omega_0 = params.omega_c ? (*params.omega_c - params.omega_b)
                                          : constants::two_pi * constants::c0 / pulse.lambda_0;
    PulseDerived d;
    d.E = std::sqrt(params.kappa_c * pulse.P0 / (constants::hbar * omega_0));
    d.G_c = params.g0 * d.E / params.omega_b;
    d.G = 2.0 * d.G_c * d.G_c / params.kappa_c;
    d.theta = std::acos(std::exp(-d.G * pulse.t));
    return d;
}

DriveParams drive_from_rabi(const SystemParams& params, double Omega_plus, double Omega_minus) {
    auto [m_plus, m_minus] = classical_amplitudes(Omega_plus, Omega_minus,
                                                  params.omega_b, params.kappa_m);
    DriveParams d;
    d.G_plus = params.G0 * std::abs(m_plus);
    d.G_minus = params.G0 * std::abs(m_minus);
    d.Omega_plus = Omega_plus;
    d.Omega_minus = Omega_minus;
    return d;
}

std::vector<std::string> validity_warnings(const SystemParams& params,
                                           const DriveParams* drive,
                                           const double* tan_theta) {
    std::vector<std::string> w;
    const double kmax = std::max(params.kappa_m, params.kappa_c);
    if (params.omega_b < 10.0 * kmax)
        w.push_back("sideband resolution marginal: omega_b < 10 max(kappa_m, kappa_c)");
    if (drive) {
        const double gmax = std::max(drive->G_plus, drive->G_minus);
        if (std::max({params.kappa_b, params.kappa_m, gmax}) > 0.1 * params.omega_b)
            w.push_back("rotating-wave approximation marginal: kappa or G exceeds omega_b/10");
    }
    if (tan_theta && (*tan_theta) * (*tan_theta) > 0.05)
        w.push_back("weak-pulse regime marginal: tan^2(theta) > 0.05; second-order truncation degrades");
    return w;
}

std::vector<std::string> validate(const SystemParams& p) {
    std::vector<std::string> e;
    auto pos = [&e](double v, const char* name) {
        if (!(v > 0.0)) e.push_back(std::string(name) + " must be strictly positive");
    };
    pos(p.omega_m, "omega_m");
    pos(p.omega_b, "omega_b");
    pos(p.kappa_m, "kappa_m");
    pos(p.kappa_b, "kappa_b");
    pos(p.kappa_c, "kappa_c");
    pos(p.G0, "G0");
    pos(p.g0, "g0");
    if (p.omega_c && !(*p.omega_c > 0.0)) e.push_back("omega_c must be strictly positive");
    if (p.T < 0.0) e.push_back("T must be nonnegative");
    return e;
}

std::vector<std::string> validate(const DriveParams& d) {
    std::vector<std::string> e;
    if (d.G_plus < 0.0) e.push_back("G_plus must be nonnegative");
    if (d.G_minus < 0.0) e.push_back("G_minus must be nonnegative");
    return e;
}

std::vector<std::string> validate(const PulseParams& p) {
    std::vector<std::string> e;
    if (p.lambda_0 <= 0.0) e.push_back("lambda_0 must be strictly positive");
    if (p.P0 < 0.0) e.push_back("P0 must be nonnegative");
    if (p.t < 0.0) e.push_back("t must be nonnegative");
    if (p.theta && (*p.theta < 0.0 || *p.theta >= constants::pi / 2.0))
        e.push_back("theta must lie in [0, pi/2)");
    if (p.tan_theta && *p.tan_theta < 0.0) e.push_back("tan_theta must be nonnegative");
    return e;
}

}  // namespace omm
