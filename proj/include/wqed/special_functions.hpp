#pragma once

#include "wqed/units.hpp"

namespace wqed {

/// Exponential integral E1(z) on the principal branch (cut along the negative
/// real axis; the sign of a zero imaginary part selects the side of the cut).
complex expint_e1(complex z);

/// e^z E1(z). Stays finite where E1 underflows or e^z overflows.
complex scaled_expint_e1(complex z);

/// Ei(x) for real x != 0, Cauchy principal value for x > 0.
double expint_ei(double x);

}  // namespace wqed
