#ifndef EQTREE_RATIONAL_HPP
#define EQTREE_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace eqtree {

// Exact arithmetic mode. Level averages and pooled costs are rationals with
// small denominators, so cpp_rational never degrades.
using Rational = boost::multiprecision::cpp_rational;

// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double x);

std::vector<Rational> rational_values(const std::vector<double>& values);

std::string rational_to_string(const Rational& r);

}  // namespace eqtree

#endif
