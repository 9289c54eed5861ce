#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace svgeom {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace svgeom
