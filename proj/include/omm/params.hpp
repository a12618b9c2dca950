#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace omm {

/// Physical constants of the three-mode system. All frequencies and rates are
/// angular (rad/s); config files carry Hz values under *_over_2pi keys and the
/// io layer converts on ingestion.
struct SystemParams {
    double omega_m = 0.0;   ///< magnon frequency
    double omega_b = 0.0;   ///< mechanical frequency
    std::optional<double> omega_c;  ///< optical cavity frequency; derivable from lambda_0
    double kappa_m = 0.0;   ///< magnon energy decay rate
    double kappa_b = 0.0;   ///< mechanical energy decay rate
    double kappa_c = 0.0;   ///< cavity energy decay rate
    double G0 = 0.0;        ///< bare magnomechanical coupling
    double g0 = 0.0;        ///< bare optomechanical coupling
    double T = 0.0;         ///< bath temperature (K)
};

/// Two-tone drive configuration. G- (anti-Stokes) must exceed G+ (Stokes) for a
/// stable squeezing configuration; that condition is re-checked dynamically at
/// the point of use rather than rejected here.
struct DriveParams {
    double G_plus = 0.0;
    double G_minus = 0.0;
    std::optional<double> Omega_plus;
    std::optional<double> Omega_minus;
};

/// Red-detuned pulse description. theta may be supplied directly (bypassing the
/// power chain) or derived via pulse_interaction.
struct PulseParams {
    double lambda_0 = 1550e-9;  ///< drive wavelength (m)
    double P0 = 0.0;            ///< pulse power (W)
    double t = 0.0;             ///< pulse duration (s)
    std::optional<double> theta;      ///< interaction angle (rad), explicit override
    std::optional<double> tan_theta;  ///< alternative explicit override
};

/// Quantities derived from the pulse power chain.
struct PulseDerived {
    double E = 0.0;      ///< cavity-drive coupling strength
    double G_c = 0.0;    ///< effective linearized optomechanical coupling
    double G = 0.0;      ///< adiabatic interaction rate, 2 G_c^2 / kappa_c
    double theta = 0.0;  ///< mixing angle, cos(theta) = exp(-G t)
};

/// Mean thermal occupation N = 1/(exp(hbar w / kB T) - 1); exactly 0 at T = 0.
double thermal_occupation(double omega, double T);

/// Classical drive amplitudes m_pm = Omega_pm / (pm omega_b + i kappa_m / 2).
std::pair<std::complex<double>, std::complex<double>>
classical_amplitudes(double Omega_plus, double Omega_minus, double omega_b, double kappa_m);

/// Evaluates the pulse power chain E -> G_c -> G -> theta. Rejects negative
/// P0 or t. When params.omega_c is set the drive frequency is omega_c - omega_b;
/// otherwise it is 2 pi c / lambda_0.
PulseDerived pulse_interaction(const SystemParams& params, const PulseParams& pulse);

/// Derives G_pm = G0 * |m_pm| from Rabi frequencies (drive phases absorbed so
/// the couplings are real and nonnegative).
DriveParams drive_from_rabi(const SystemParams& params, double Omega_plus, double Omega_minus);

/// Regime checks that warn rather than reject.
/// - sideband resolution: omega_b >= 10 max(kappa_m, kappa_c)
/// - RWA validity:        kappa_b, kappa_m, G_pm << omega_b
/// - weak pulse:          tan^2(theta) <= 0.05
std::vector<std::string> validity_warnings(const SystemParams& params,
                                           const DriveParams* drive,
                                           const double* tan_theta);

/// Hard validation of field ranges (positivity etc). Returns error strings;
/// empty means valid.
std::vector<std::string> validate(const SystemParams& params);
std::vector<std::string> validate(const DriveParams& drive);
std::vector<std::string> validate(const PulseParams& pulse);

}  // namespace omm
