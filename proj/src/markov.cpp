#include "wqed/markov.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wqed/errors.hpp"
#include "wqed/quadrature.hpp"
#include "wqed/special_functions.hpp"

namespace wqed {

namespace {

constexpr int kMaxIterations = 100;
constexpr double kFixedPointTolerance = 1e-12;
// Beyond k* + 50 wc the exponential continuum weight is below e^-50.
constexpr double kTailCutoffs = 50.0;

void require_probe(double probe) {
  if (!(probe > 0.0)) throw InvalidArgument("markov_integral: probe frequency must be positive");
}

void require_in_band(const PhotonicModel& model, double value, std::string_view what) {
  if (!model.band().contains(value)) {
    std::ostringstream os;
    os << what << " = " << value << " lies outside the band of " << to_string(model.kind);
    throw NumericalError(os.str());
  }
}

complex continuum_integral(const PhotonicModel& m, double probe, double d) {
  require_probe(probe);
  if (m.coupling == 0.0) return 0.0;
  QuadratureOptions options;
  options.relative_tolerance = 1e-12;
  options.max_depth = 12;
  if (d != 0.0) options.panel_width = 4.0 * kPi / std::abs(d);
  const bool unbounded = m.kind == ModelKind::ExponentialContinuum;

  double pv = 0.0;
  double rate = 0.0;
  if (m.band().contains(probe)) {
    const double ks = m.momentum_at(probe);
    // probe - w(k) written as w(ks) - w(k) so the pole sits exactly at ks.
    auto integrand = [&](double k) {
      return m.coupling_weight(k) * std::cos(k * d) / m.dispersion_difference(k, ks);
    };
    const double upper = unbounded ? 2.0 * ks + kTailCutoffs * m.cutoff : m.momentum_cutoff();
    pv = principal_value(integrand, ks, 0.0, upper, options);
    rate = spectral_density(m, probe) * std::cos(ks * d);
  } else {
    auto integrand = [&](double k) {
      return m.coupling_weight(k) * std::cos(k * d) / (probe - m.dispersion(k));
    };
    const double upper = unbounded ? kTailCutoffs * m.cutoff : m.momentum_cutoff();
    pv = integrate(integrand, 0.0, upper, options);
  }
  return {m.spectral_prefactor * pv / kTwoPi, -0.5 * rate};
}

// Iterates E = gap + Re[M(E; 0) + sign M(E; d)] to its fixed point.
double channel_fixed_point(const PhotonicModel& model, double gap, double d, int sign,
                           int* iterations) {
  double current = gap;
  for (int it = 1; it <= kMaxIterations; ++it) {
    double shift = markov_integral(model, current, 0.0).real();
    if (sign != 0) shift += sign * markov_integral(model, current, d).real();
    const double next = gap + shift;
    require_in_band(model, next, "renormalized gap");
    if (std::abs(next - current) < kFixedPointTolerance) {
      if (iterations) *iterations = it;
      return next;
    }
    current = next;
  }
  std::ostringstream os;
  os << "Lamb-shift fixed point did not converge within " << kMaxIterations
     << " iterations (gap " << gap << ", d " << d << ")";
  throw NumericalError(os.str());
}

complex channel_value(const PhotonicModel& model, double probe, double d, int sign) {
  complex value = markov_integral(model, probe, 0.0);
  if (sign != 0) value += static_cast<double>(sign) * markov_integral(model, probe, d);
  return value;
}

}  // namespace

std::string_view to_string(LambScheme scheme) {
  switch (scheme) {
    case LambScheme::none: return "none";
    case LambScheme::simplified: return "simplified";
    case LambScheme::self_consistent: return "self_consistent";
    case LambScheme::closed_form: return "closed_form";
    case LambScheme::resonant_dipole: return "resonant_dipole";
    case LambScheme::fitted: return "fitted";
  }
  return "unknown";
}

LambScheme lamb_scheme_from_string(std::string_view name) {
  for (auto s : {LambScheme::none, LambScheme::simplified, LambScheme::self_consistent,
                 LambScheme::closed_form, LambScheme::resonant_dipole, LambScheme::fitted}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown Lamb-shift scheme '" + std::string(name) + "'");
}

MarkovParameters MarkovParameters::from_channels(double gap, double separation,
                                                 double delta_plus, double delta_minus,
                                                 double gamma_plus, double gamma_minus,
                                                 LambScheme scheme) {
  MarkovParameters p;
  p.gap = gap;
  p.separation = separation;
  p.delta_plus = delta_plus;
  p.delta_minus = delta_minus;
  p.gamma_plus = gamma_plus;
  p.gamma_minus = gamma_minus;
  p.delta_prime = 0.5 * (delta_plus + delta_minus);
  p.lamb_shift = p.delta_prime - gap;
  p.gamma = 0.5 * (gamma_plus + gamma_minus);
  p.g12 = 0.5 * (delta_plus - delta_minus);
  p.gamma12 = 0.5 * (gamma_plus - gamma_minus);
  p.scheme = scheme;
  return p;
}

double default_regularizer(const PhotonicModel& m, double probe) {
  const double v = m.band().contains(probe) ? group_velocity(m, probe) : m.max_group_velocity();
  return 5.0 * v * kTwoPi / m.length;
}

complex markov_integral(const PhotonicModel& model, double probe, double d) {
  return continuum_integral(model, probe, d);
}

complex markov_integral(const KernelSpec& spec, double probe, double d) {
  if (spec.evaluation == KernelEvaluation::closed_form)
    return continuum_integral(spec.model, probe, d);
  require_probe(probe);
  const double eps =
      spec.regularizer > 0.0 ? spec.regularizer : default_regularizer(spec.model, probe);
  const ModeSet& modes = *spec.modes;
  complex sum = 0.0;
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const double g2 = std::norm(modes.couplings[j]);
    if (g2 == 0.0) continue;
    // The +-k partners cancel the sine part of exp(-i k d).
    sum += g2 * std::cos(modes.momenta[j] * d) / complex(probe - modes.frequencies[j], eps);
  }
  return sum;
}

complex channel_markov_integral(const PhotonicModel& model, Channel channel, double probe,
                                double d) {
  switch (channel) {
    case Channel::single: return channel_value(model, probe, 0.0, 0);
    case Channel::plus: return channel_value(model, probe, d, 1);
    case Channel::minus: return channel_value(model, probe, d, -1);
  }
  return 0.0;
}

SingleQubitMarkov lamb_shift_self_consistent(const PhotonicModel& model, double gap) {
  require_in_band(model, gap, "gap");
  SingleQubitMarkov r;
  r.gap = gap;
  r.delta_prime = channel_fixed_point(model, gap, 0.0, 0, &r.iterations);
  r.lamb_shift = r.delta_prime - gap;
  r.gamma = spectral_density(model, r.delta_prime);
  return r;
}

SingleQubitMarkov lamb_shift_simplified(const PhotonicModel& model, double gap) {
  require_in_band(model, gap, "gap");
  SingleQubitMarkov r;
  r.gap = gap;
  r.iterations = 1;
  r.delta_prime = gap + markov_integral(model, gap, 0.0).real();
  require_in_band(model, r.delta_prime, "renormalized gap");
  r.lamb_shift = r.delta_prime - gap;
  r.gamma = spectral_density(model, r.delta_prime);
  return r;
}

SingleQubitMarkov lamb_shift_none(const PhotonicModel& model, double gap) {
  require_in_band(model, gap, "gap");
  SingleQubitMarkov r;
  r.gap = gap;
  r.delta_prime = gap;
  r.gamma = spectral_density(model, gap);
  return r;
}

ShiftAndRate single_qubit_closed_form(double coupling, double probe, double cutoff) {
  if (!(probe > 0.0) || !(cutoff > 0.0))
    throw InvalidArgument("single_qubit_closed_form: probe and cutoff must be positive");
  const double g2 = coupling * coupling;
  const double a = probe / cutoff;
  const double damping = std::exp(-a);
  ShiftAndRate r;
  r.gamma = g2 * probe * damping;
  r.lamb_shift = g2 / kTwoPi * (-cutoff + probe * damping * expint_ei(a));
  return r;
}

MarkovParameters two_qubit_params(const PhotonicModel& model, double gap, double separation,
                                  LambScheme scheme) {
  if (!(separation >= 0.0)) throw InvalidArgument("two_qubit_params: separation must be >= 0");
  require_in_band(model, gap, "gap");
  const double d = separation;
  switch (scheme) {
    case LambScheme::none: {
      const complex plus = channel_value(model, gap, d, 1);
      const complex minus = channel_value(model, gap, d, -1);
      return MarkovParameters::from_channels(gap, d, gap + plus.real(), gap + minus.real(),
                                             -2.0 * plus.imag(), -2.0 * minus.imag(), scheme);
    }
    case LambScheme::simplified: {
      const double dp = gap + channel_value(model, gap, d, 1).real();
      const double dm = gap + channel_value(model, gap, d, -1).real();
      require_in_band(model, dp, "renormalized gap");
      require_in_band(model, dm, "renormalized gap");
      return MarkovParameters::from_channels(gap, d, dp, dm,
                                             -2.0 * channel_value(model, dp, d, 1).imag(),
                                             -2.0 * channel_value(model, dm, d, -1).imag(),
                                             scheme);
    }
    case LambScheme::self_consistent: {
      const double dp = channel_fixed_point(model, gap, d, 1, nullptr);
      const double dm = channel_fixed_point(model, gap, d, -1, nullptr);
      return MarkovParameters::from_channels(gap, d, dp, dm,
                                             -2.0 * channel_value(model, dp, d, 1).imag(),
                                             -2.0 * channel_value(model, dm, d, -1).imag(),
                                             scheme);
    }
    case LambScheme::closed_form:
      if (model.kind != ModelKind::ExponentialContinuum)
        throw InvalidArgument("closed_form scheme requires the exponential continuum");
      return two_qubit_closed_form(model.coupling, gap, model.cutoff, d);
    case LambScheme::resonant_dipole: {
      const double rate = spectral_density(model, gap);
      const DipoleCoupling c = resonant_dipole_params(rate, model.momentum_at(gap), d);
      return MarkovParameters::from_channels(gap, d, gap + c.g12, gap - c.g12, rate + c.gamma12,
                                             rate - c.gamma12, scheme);
    }
    case LambScheme::fitted: break;
  }
  throw InvalidArgument("two_qubit_params: fitted parameters come from trace analysis");
}

MarkovParameters two_qubit_closed_form(double coupling, double gap, double cutoff,
                                       double separation) {
  if (!(separation >= 0.0))
    throw InvalidArgument("two_qubit_closed_form: separation must be >= 0");
  const ShiftAndRate single = single_qubit_closed_form(coupling, gap, cutoff);
  const double g2 = coupling * coupling;
  const double a = gap / cutoff;
  const double x = separation * gap;
  const double dw = separation * cutoff;
  const complex e1 = expint_e1(complex(-a, x));
  const double f = (std::polar(1.0, x) * e1).real();
  const double g12 =
      -g2 / kTwoPi * cutoff / (1.0 + dw * dw) + 0.5 * single.gamma * (std::sin(x) - f / kPi);
  const double gamma12 = single.gamma * std::cos(x);
  const double delta_prime = gap + single.lamb_shift;
  return MarkovParameters::from_channels(gap, separation, delta_prime + g12, delta_prime - g12,
                                         single.gamma + gamma12, single.gamma - gamma12,
                                         LambScheme::closed_form);
}

DipoleCoupling resonant_dipole_params(double rate, double momentum, double separation) {
  if (!(momentum >= 0.0) || !(separation >= 0.0))
    throw InvalidArgument("resonant_dipole_params: momentum and separation must be >= 0");
  const double phase = momentum * separation;
  return {0.5 * rate * std::sin(phase), rate * std::cos(phase)};
}

}  // namespace wqed
