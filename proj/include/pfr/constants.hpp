#pragma once

// CODATA 2018 exact / recommended values, SI units.

namespace pfr::si {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double planck = 6.62607015e-34;      // J s
inline constexpr double boltzmann = 1.380649e-23;     // J / K
inline constexpr double elementary_charge = 1.602176634e-19;  // C

inline constexpr double mhz_to_angular = 2.0 * pi * 1e6;
inline constexpr double ghz_to_angular = 2.0 * pi * 1e9;
inline constexpr double millikelvin = 1e-3;

}  // namespace pfr::si
