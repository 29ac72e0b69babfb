#pragma once

// SI values used throughout. Earth values are the defaults of EarthModel and
// the link geometry; all of them can be overridden through the run config.
namespace satqkd::constants {

inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double gravitational_constant = 6.67430e-11; // m^3 kg^-1 s^-2

inline constexpr double earth_gm = 3.986004418e14;              // m^3/s^2
inline constexpr double earth_radius = 6.371e6;                 // m
inline constexpr double earth_angular_velocity = 7.292e-5;      // rad/s
inline constexpr double earth_angular_momentum = 7.07e33;       // kg m^2/s
inline constexpr double geostationary_height = 35786.0e3;       // m

inline constexpr double default_peak_frequency = 5.0e14; // Hz
inline constexpr double default_bandwidth = 1.0e6;       // Hz

// Tolerance on symplectic eigenvalues >= 1 and on spectral radicands.
inline constexpr double physical_tolerance = 1e-9;
// Below this distance from 1 the (x-1) log(x-1) term of g is taken at its limit.
inline constexpr double entropy_limit_window = 1e-12;

}  // namespace satqkd::constants
