#include "wqed/special_functions.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Power series; cancellation costs roughly exp(|z| + Re z) |z| in relative
// accuracy, which is why it is only used near the origin and close to the
// negative real axis where E1 itself is large.
complex e1_series(complex z) {
  complex term = 1.0;
  complex sum = 0.0;
  for (int n = 1; n < 500; ++n) {
    term *= -z / static_cast<double>(n);
    const complex add = term / static_cast<double>(n);
    sum += add;
    if (std::abs(add) <= kEps * std::abs(sum)) break;
  }
  return -std::numbers::egamma - std::log(z) - sum;
}

// Modified Lentz evaluation of e^z E1(z) = 1/(z+1- 1/(z+3- 4/(z+5- ...))).
complex scaled_e1_fraction(complex z) {
  constexpr double tiny = 1e-300;
  complex f = z + 1.0;
  if (std::abs(f) < tiny) f = tiny;
  complex c = f;
  complex d = 0.0;
  for (int n = 1; n < 20000; ++n) {
    const double a = -static_cast<double>(n) * n;
    const complex b = z + static_cast<double>(2 * n + 1);
    d = b + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 4.0 * kEps) return 1.0 / f;
  }
  throw NumericalError("expint_e1: continued fraction did not converge");
}

bool use_series(complex z) {
  const double r = std::abs(z);
  if (r <= 2.0) return true;
  if (z.real() >= 0.0) return false;
  // Near the negative axis the fraction converges slowly; the series loses
  // about exp(Im^2 / 2|Re|) there, which is bounded by this test.
  return z.imag() * z.imag() < 12.0 * -z.real() && r < 700.0;
}

}  // namespace

complex expint_e1(complex z) {
  if (z == complex(0.0, 0.0)) throw InvalidArgument("expint_e1: logarithmic pole at z = 0");
  if (use_series(z)) return e1_series(z);
  return std::exp(-z) * scaled_e1_fraction(z);
}

complex scaled_expint_e1(complex z) {
  if (z == complex(0.0, 0.0)) throw InvalidArgument("expint_e1: logarithmic pole at z = 0");
  if (use_series(z)) return std::exp(z) * e1_series(z);
  return scaled_e1_fraction(z);
}

double expint_ei(double x) {
  if (x == 0.0) throw InvalidArgument("expint_ei: logarithmic pole at x = 0");
  return boost::math::expint(x);
}

}  // namespace wqed
