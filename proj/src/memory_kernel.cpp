#include "wqed/memory_kernel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

void check_time(const KernelSpec& spec, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("kernel: time must be non-negative");
  if (spec.evaluation == KernelEvaluation::mode_sum && t >= spec.horizon) {
    std::ostringstream os;
    os << "kernel: t = " << t << " beyond the mode-sum validity horizon " << spec.horizon;
    throw NumericalError(os.str());
  }
}

complex closed(const PhotonicModel& m, double t, double d) {
  const complex s(1.0 / m.cutoff, t + d);
  return m.coupling * m.coupling / (4.0 * kPi) / (s * s);
}

// sum over modes of |g_k|^2 w(k) exp(-i w_k t - eps t); `weight` selects
// which propagation directions contribute.
template <class Weight>
complex mode_sum(const KernelSpec& spec, double t, Weight&& weight) {
  const ModeSet& modes = *spec.modes;
  complex sum = 0.0;
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const double g2 = std::norm(modes.couplings[j]);
    if (g2 == 0.0) continue;
    sum += g2 * weight(modes.momenta[j]) * std::polar(1.0, -modes.frequencies[j] * t);
  }
  return sum * std::exp(-spec.regularizer * t);
}

}  // namespace

KernelSpec KernelSpec::closed_form(const PhotonicModel& model) {
  model.validate();
  if (model.kind != ModelKind::ExponentialContinuum)
    throw InvalidArgument("kernel: closed form exists only for the exponential continuum");
  KernelSpec spec;
  spec.model = model;
  spec.evaluation = KernelEvaluation::closed_form;
  spec.horizon = std::numeric_limits<double>::infinity();
  return spec;
}

KernelSpec KernelSpec::mode_sum(const PhotonicModel& model, double regularizer) {
  if (!(regularizer >= 0.0)) throw InvalidArgument("kernel: regularizer must be >= 0");
  KernelSpec spec;
  spec.model = model;
  spec.evaluation = KernelEvaluation::mode_sum;
  spec.regularizer = regularizer;
  spec.horizon = model.revival_time();
  spec.modes = std::make_shared<const ModeSet>(build_modes(model, QubitArray::single(1.0)));
  return spec;
}

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::single: return "single";
    case Channel::plus: return "plus";
    case Channel::minus: return "minus";
  }
  return "unknown";
}

complex kernel(const KernelSpec& spec, double t, double d) {
  check_time(spec, t);
  if (spec.evaluation == KernelEvaluation::closed_form) return closed(spec.model, t, d);
  return mode_sum(spec, t, [d](double k) -> complex {
    if (k > 0.0) return std::polar(1.0, -k * d);
    return k == 0.0 ? 0.5 : 0.0;
  });
}

complex kernel_pair(const KernelSpec& spec, double t, double d) {
  check_time(spec, t);
  if (spec.evaluation == KernelEvaluation::closed_form)
    return closed(spec.model, t, d) + closed(spec.model, t, -d);
  // Both propagation directions: the plain sum over the whole grid.
  return mode_sum(spec, t, [d](double k) { return std::polar(1.0, -k * d); });
}

complex kernel_pm(const KernelSpec& spec, double t, double d, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("kernel_pm: sign must be +1 or -1");
  return kernel_pair(spec, t, 0.0) + static_cast<double>(sign) * kernel_pair(spec, t, d);
}

complex channel_kernel(const KernelSpec& spec, Channel channel, double t, double d) {
  switch (channel) {
    case Channel::single: return kernel_pair(spec, t, 0.0);
    case Channel::plus: return kernel_pm(spec, t, d, 1);
    case Channel::minus: return kernel_pm(spec, t, d, -1);
  }
  return 0.0;
}

complex kernel_antiderivative(const KernelSpec& spec, double u, double d) {
  if (spec.evaluation != KernelEvaluation::closed_form)
    throw InvalidArgument("kernel_antiderivative: requires the closed-form kernel");
  if (!(u >= 0.0)) throw InvalidArgument("kernel_antiderivative: u must be non-negative");
  const PhotonicModel& m = spec.model;
  const double a = 1.0 / m.cutoff;
  const complex start(a, d);
  const complex end(a, u + d);
  return m.coupling * m.coupling / (4.0 * kPi) * (-kI) * (1.0 / start - 1.0 / end);
}

complex tight_binding_self_energy(double probe, double center, double hopping,
                                  double coupling) {
  if (!(probe > 0.0) || !(center > 0.0) || !(hopping > 0.0))
    throw InvalidArgument("tight_binding_self_energy: parameters must be positive");
  const double x = probe - center;
  const double gap = hopping * hopping - x * x;
  if (std::abs(gap) <= 1e-14 * hopping * hopping)
    throw InvalidArgument("tight_binding_self_energy: probe at the band edge");
  const double g2 = coupling * coupling;
  if (gap > 0.0) return g2 / std::sqrt(gap);
  return complex(0.0, std::copysign(g2 / std::sqrt(-gap), x));
}

}  // namespace wqed
