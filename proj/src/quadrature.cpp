#include "wqed/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

Estimate rule(const std::function<double(double)>& f, double a, double b) {
  Estimate e;
  e.value = Rule::integrate(f, a, b, 0, 0.0, &e.error, &e.l1);
  if (!std::isfinite(e.value)) throw NumericalError("integrate: non-finite integrand");
  return e;
}

// Bisects until the Kronrod error estimate falls below an absolute budget
// proportional to the interval width. Boost's own adaptive driver measures
// the error relative to |value|, which never terminates on oscillatory
// panels whose value cancels to nearly zero.
double refine(const std::function<double(double)>& f, double a, double b, const Estimate& e,
              double density, unsigned depth) {
  if (depth == 0 || e.error <= density * (b - a)) return e.value;
  const double mid = 0.5 * (a + b);
  const Estimate left = rule(f, a, mid);
  const Estimate right = rule(f, mid, b);
  return refine(f, a, mid, left, density, depth - 1) +
         refine(f, mid, b, right, density, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options) {
  if (b <= a) return 0.0;
  std::size_t panels = 1;
  if (options.panel_width > 0.0) {
    panels = static_cast<std::size_t>(std::ceil((b - a) / options.panel_width));
    panels = std::max<std::size_t>(panels, 1);
  }
  const double width = (b - a) / static_cast<double>(panels);
  std::vector<Estimate> first(panels);
  double l1 = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = a + width * static_cast<double>(i);
    const double hi = i + 1 == panels ? b : lo + width;
    first[i] = rule(f, lo, hi);
    l1 += first[i].l1;
  }
  const double density = options.relative_tolerance * l1 / (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = a + width * static_cast<double>(i);
    const double hi = i + 1 == panels ? b : lo + width;
    sum += refine(f, lo, hi, first[i], density, options.max_depth);
  }
  return sum;
}

double principal_value(const std::function<double(double)>& f, double x0, double a, double b,
                       const QuadratureOptions& options) {
  if (!(x0 > a && x0 < b)) {
    throw InvalidArgument("principal_value: pole " + std::to_string(x0) +
                          " not inside the interval");
  }
  const double h = std::min(x0 - a, b - x0);
  auto folded = [&](double u) { return f(x0 + u) + f(x0 - u); };
  double sum = integrate(folded, 0.0, h, options);
  sum += integrate(f, a, x0 - h, options);
  sum += integrate(f, x0 + h, b, options);
  return sum;
}

}  // namespace wqed
