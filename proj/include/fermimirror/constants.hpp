#pragma once

namespace fermimirror {

inline constexpr double kHbar = 1.054571817e-34;  // J s
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace fermimirror
