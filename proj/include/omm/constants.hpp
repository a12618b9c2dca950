#pragma once

namespace omm::constants {

// CODATA-2018 / SI-exact values, compiled in and reported in run manifests.
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double k_B  = 1.380649e-23;      // J/K (exact)
inline constexpr double c0   = 299792458.0;       // m/s (exact)
inline constexpr double pi   = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr const char* version = "CODATA-2018";

}  // namespace omm::constants
