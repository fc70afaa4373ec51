#pragma once

#include <numbers>

namespace cpilab {

inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s, exact
inline constexpr double kPi = std::numbers::pi;

inline constexpr double kNano = 1e-9;
inline constexpr double kMicro = 1e-6;
inline constexpr double kMilli = 1e-3;
inline constexpr double kPico = 1e-12;
inline constexpr double kFemto = 1e-15;

/// Vacuum wavelength (m) <-> angular frequency (rad/s).
constexpr double omega_from_wavelength(double lambda) { return 2.0 * kPi * kSpeedOfLight / lambda; }
constexpr double wavelength_from_omega(double omega) { return 2.0 * kPi * kSpeedOfLight / omega; }

/// FWHM in wavelength about lambda_c converted to angular-frequency FWHM.
constexpr double bandwidth_omega(double lambda_c, double dlambda)
{
    return 2.0 * kPi * kSpeedOfLight * dlambda / (lambda_c * lambda_c);
}

/// Path delay x (mirror displacement, m) <-> round-trip delay (s).
constexpr double delay_from_path(double x) { return 2.0 * x / kSpeedOfLight; }
constexpr double path_from_delay(double tau) { return 0.5 * kSpeedOfLight * tau; }

} // namespace cpilab
