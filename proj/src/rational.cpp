#include "eqtree/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace eqtree {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5,1)
  // 53 doublings make the mantissa integral.
  long long m = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(m);
  boost::multiprecision::cpp_int pow2 = boost::multiprecision::cpp_int(1)
                                        << std::abs(exp);
  if (exp >= 0)
    r *= Rational(pow2);
  else
    r /= Rational(pow2);
  return r;
}

std::vector<Rational> rational_values(const std::vector<double>& values) {
  std::vector<Rational> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(rational_from_double(v));
  return out;
}

std::string rational_to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

}  // namespace eqtree
