#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace kirby {

// Exact arbitrary-precision integers and rationals. All homology and
// polynomial arithmetic is exact; no floating point anywhere in the library.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline int sgn(const Int& x) { return x.sign(); }
inline int sgn(const Rat& x) { return x.sign(); }

} // namespace kirby
