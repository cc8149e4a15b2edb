#pragma once

// All internal computations are in SI. Field-unit inputs (psi, mD, cP)
// are converted at the configuration boundary with the constants below.
namespace fracsim::units {

inline constexpr double psi = 6894.757;             // Pa
inline constexpr double millidarcy = 9.869233e-16;  // m^2
inline constexpr double centipoise = 1.0e-3;        // Pa.s
inline constexpr double gravity = 9.80665;          // m/s^2

}  // namespace fracsim::units
