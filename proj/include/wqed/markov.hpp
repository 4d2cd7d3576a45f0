#pragma once

#include <string_view>

#include "wqed/memory_kernel.hpp"
#include "wqed/photonic_models.hpp"

namespace wqed {

enum class LambScheme { none, simplified, self_consistent, closed_form, resonant_dipole, fitted };

std::string_view to_string(LambScheme scheme);
LambScheme lamb_scheme_from_string(std::string_view name);

/// Effective two-level constants of one emitter.
struct SingleQubitMarkov {
  double gap = 0.0;
  double delta_prime = 0.0;
  double lamb_shift = 0.0;
  double gamma = 0.0;
  int iterations = 0;
};

/// Markov constants of a pair of identical emitters. Channel values refer to
/// c_+- = (c1 +- c2)/sqrt(2); the pair values always satisfy
///   delta_prime = (D+ + D-)/2, gamma = (g+ + g-)/2,
///   g12 = (D+ - D-)/2,         gamma12 = (g+ - g-)/2.
struct MarkovParameters {
  double gap = 0.0;
  double separation = 0.0;
  double delta_prime = 0.0;
  double lamb_shift = 0.0;
  double gamma = 0.0;
  double g12 = 0.0;
  double gamma12 = 0.0;
  double delta_plus = 0.0;
  double delta_minus = 0.0;
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  LambScheme scheme = LambScheme::none;

  static MarkovParameters from_channels(double gap, double separation, double delta_plus,
                                        double delta_minus, double gamma_plus,
                                        double gamma_minus, LambScheme scheme);
};

/// M(probe; d) = -i \int_0^inf [K(t; d) + K(t; -d)] exp(i probe t) dt.
///
/// At d = 0 this is delta - i gamma/2 for a lone emitter probed at `probe`;
/// at finite d it is g12 - i gamma12/2. Continuum media evaluate
///   (1/2pi) PV \int J(w) cos(k(w) d) / (probe - w) dw - (i/2) J(probe) cos(k(probe) d)
/// by quadrature in momentum, where the integrand has no band-edge
/// singularities.
complex markov_integral(const PhotonicModel& model, double probe, double d = 0.0);

/// Same constant from a kernel specification. Closed-form kernels use the
/// continuum quadrature; mode sums integrate the exp(-eps t)-damped kernel,
/// which gives sum_k |g_k|^2 exp(-i k d) / (probe + i eps - w_k).
/// A zero regularizer selects eps = 5 x the mode spacing at the probe.
complex markov_integral(const KernelSpec& spec, double probe, double d = 0.0);

/// 5 x the mode spacing v_g 2 pi / L at the probe (max group velocity outside the band).
double default_regularizer(const PhotonicModel& model, double probe);

/// M(probe; 0) +- M(probe; d) for the plus/minus channels, M(probe; 0) for
/// a lone emitter.
complex channel_markov_integral(const PhotonicModel& model, Channel channel, double probe,
                                double d);

/// Fixed point of D' = D + Re M(D'; 0), then gamma = J(D').
SingleQubitMarkov lamb_shift_self_consistent(const PhotonicModel& model, double gap);

/// One-shot: D' = D + Re M(D; 0), gamma = J(D').
SingleQubitMarkov lamb_shift_simplified(const PhotonicModel& model, double gap);

/// Shift evaluated at the bare gap, rate gamma = J(D) at the bare gap.
SingleQubitMarkov lamb_shift_none(const PhotonicModel& model, double gap);

struct ShiftAndRate {
  double lamb_shift = 0.0;
  double gamma = 0.0;
};

/// Exponential continuum at probe frequency w:
///   gamma = g^2 w exp(-w/wc),  delta = (g^2/2pi) [-wc + w exp(-w/wc) Ei(w/wc)].
ShiftAndRate single_qubit_closed_form(double coupling, double probe, double cutoff);

MarkovParameters two_qubit_params(const PhotonicModel& model, double gap, double separation,
                                  LambScheme scheme);

/// Lowest order in g for the exponential continuum, all constants evaluated
/// at the bare gap:
///   g12 = -(g^2/2pi) wc / (1 + d^2 wc^2)
///         + (g^2 D e^-a / 2) [sin(dD) - (1/pi) Re{e^{idD} E1(idD - a)}],  a = D/wc
///   gamma12 = gamma cos(dD).
MarkovParameters two_qubit_closed_form(double coupling, double gap, double cutoff,
                                       double separation);

struct DipoleCoupling {
  double g12 = 0.0;
  double gamma12 = 0.0;
};

DipoleCoupling resonant_dipole_params(double rate, double momentum, double separation);

}  // namespace wqed
