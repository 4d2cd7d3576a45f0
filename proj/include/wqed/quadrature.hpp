#pragma once

#include <functional>

namespace wqed {

struct QuadratureOptions {
  double relative_tolerance = 1e-13;
  /// Upper bound on the width of the panels that are integrated independently;
  /// keeps oscillatory integrands to a few periods per panel.
  double panel_width = 0.0;
  unsigned max_depth = 18;
};

/// Adaptive Gauss-Kronrod over [a, b], split into panels of at most
/// options.panel_width when that is positive.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options = {});

/// Cauchy principal value of \int_a^b f(x) dx where f has a simple pole at
/// x0 in (a, b). The interval is folded symmetrically around x0 so that the
/// integrand f(x0 + u) + f(x0 - u) stays bounded; no window is excised.
double principal_value(const std::function<double(double)>& f, double x0, double a, double b,
                       const QuadratureOptions& options = {});

}  // namespace wqed
