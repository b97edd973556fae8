#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace specbill {

using Rational = boost::multiprecision::cpp_rational;

// Exact-rational mirror of the circulant operations for rational c; used to
// pin test expectations for small r without floating-point slack.
std::vector<Rational> exact_inverse_row(int r, const Rational& c);
Rational exact_row_sum(int r, const Rational& c);
Rational exact_cube_sum(int r, const Rational& c);

}  // namespace specbill
