#pragma once

// Physical constants, CODATA-2018 / SI-2019. All golden-value tests in this
// project depend on these exact numbers; do not "refresh" them casually.
namespace thzo::constants {

// Exact SI defining constants (2019 redefinition).
inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double planck = 6.62607015e-34;             // J*s
inline constexpr double boltzmann = 1.380649e-23;            // J/K

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = planck / (2.0 * pi);          // J*s

// 1 debye = 1e-21/c C*m.
inline constexpr double debye = 1.0e-21 / speed_of_light;    // C*m

// Unit conversions used at the interface (Table-style units).
inline constexpr double speed_of_light_cm = speed_of_light * 100.0;  // cm/s
inline constexpr double mv_per_cm = 1.0e8;                   // V/m per MV/cm
inline constexpr double thz = 1.0e12;                        // Hz per THz
inline constexpr double picosecond = 1.0e-12;                // s per ps

}  // namespace thzo::constants
