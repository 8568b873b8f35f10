#pragma once

#include <complex>
#include <numbers>

namespace cmv {

using cplx = std::complex<double>;

inline constexpr double kGoldenFrequency = 0.6180339887498948482;  // (sqrt5 - 1) / 2
inline constexpr double kGoldenRatio = 1.6180339887498948482;      // (1 + sqrt5) / 2
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace cmv
