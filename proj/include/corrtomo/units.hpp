#pragma once
#include <cmath>

// Physical constants (SI) and unit conversions used throughout.
// All internal frequencies are angular (rad/s); user-facing configuration
// uses linear frequencies in THz and delays in fs.
namespace corrtomo::units {

inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double c0 = 2.99792458e8;         // m/s
inline constexpr double eps0 = 8.8541878128e-12;   // F/m
inline constexpr double kB = 1.380649e-23;         // J/K
inline constexpr double pi = 3.141592653589793238462643383279502884;

// linear THz -> angular rad/s
inline double thz_to_angular(double nu_thz) { return 2.0 * pi * nu_thz * 1e12; }
inline double angular_to_thz(double omega) { return omega / (2.0 * pi) * 1e-12; }
inline double fs_to_s(double t_fs) { return t_fs * 1e-15; }
inline double s_to_fs(double t_s) { return t_s * 1e15; }
inline double um_to_m(double x_um) { return x_um * 1e-6; }

} // namespace corrtomo::units
