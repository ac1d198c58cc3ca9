#pragma once

#include <cmath>
#include <complex>

namespace mwt {

using Complex = std::complex<double>;

namespace consts {

inline constexpr double eps0 = 8.8541878128e-12;  // F/m
inline constexpr double mu0 = 1.25663706212e-6;   // H/m
inline constexpr double pi = 3.14159265358979323846;

/// Speed of light derived from eps0 and mu0 (not hardcoded separately,
/// so that c0*c0*eps0*mu0 == 1 holds to machine precision).
inline const double c0 = 1.0 / std::sqrt(eps0 * mu0);

}  // namespace consts

inline double angular_frequency(double freq_hz) { return 2.0 * consts::pi * freq_hz; }

}  // namespace mwt
