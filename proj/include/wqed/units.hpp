#pragma once

#include <complex>
#include <numbers>

namespace wqed {

using complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unit system: speed of light v = 1 and bare qubit gap = 1, so the qubit
// wavelength is 2*pi.
inline constexpr double kSpeedOfLight = 1.0;
inline constexpr double kLambda0 = kTwoPi;

inline constexpr complex kI{0.0, 1.0};

}  // namespace wqed
