#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace delayosc {

/// Working scalar for segment construction and ill-conditioned evaluation.
/// The exact step-recursion coefficients carry (omega2^2 / 2 omega1)^k
/// growth against O(1) segment values, so late intervals cancel far below
/// double precision; 50 digits keeps the whole supported parameter range
/// honest. Fixed precision, converted back to double at the API boundary.
using Wide = boost::multiprecision::cpp_bin_float_50;

inline double to_double(const Wide& x) { return static_cast<double>(x); }

}  // namespace delayosc
