#pragma once

#include <memory>

#include "wqed/photonic_models.hpp"

namespace wqed {

enum class KernelEvaluation { closed_form, mode_sum };

/// How K(t; d) is evaluated for a given medium.
///
/// K(t; d) carries the photons propagating one way, so that the exchange
/// kernel between qubits at separation d is K(t; d) + K(t; -d). For linear
/// dispersion this is (1/4pi) \int J(w) exp(-i w (t + d)) dw.
struct KernelSpec {
  PhotonicModel model;
  KernelEvaluation evaluation = KernelEvaluation::closed_form;
  /// Damping exp(-eps t) applied to mode sums.
  double regularizer = 0.0;
  /// Mode sums are only trusted for t below this (photon round trip).
  double horizon = 0.0;
  /// Mode table for a single emitter at x = 0; present for mode_sum only.
  std::shared_ptr<const ModeSet> modes;

  /// Exponential continuum only.
  static KernelSpec closed_form(const PhotonicModel& model);
  static KernelSpec mode_sum(const PhotonicModel& model, double regularizer = 0.0);
};

enum class Channel { single, plus, minus };

std::string_view to_string(Channel channel);

complex kernel(const KernelSpec& spec, double t, double d);

/// K(t; d) + K(t; -d).
complex kernel_pair(const KernelSpec& spec, double t, double d);

/// K_+-(t) = 2 K(t; 0) +- [K(t; d) + K(t; -d)]; sign must be +1 or -1.
complex kernel_pm(const KernelSpec& spec, double t, double d, int sign);

/// Kernel driving the amplitude of a channel: 2K(t; 0) for a lone qubit and
/// K_+- for the symmetric/antisymmetric pair combinations.
complex channel_kernel(const KernelSpec& spec, Channel channel, double t, double d);

/// \int_0^u K(s; d) ds for the exponential continuum:
/// (g^2 / 4 pi i) [(1/wc + i d)^-1 - (1/wc + i (u + d))^-1].
complex kernel_antiderivative(const KernelSpec& spec, double u, double d);

/// \int_0^inf K_TB(t) exp(i probe t) dt for the coupled-cavity toy model with
/// band center, hopping J and coupling g. Real, g^2 / sqrt(J^2 - x^2), inside
/// the band (x = probe - center); purely imaginary outside.
complex tight_binding_self_energy(double probe, double center, double hopping,
                                  double coupling);

}  // namespace wqed
