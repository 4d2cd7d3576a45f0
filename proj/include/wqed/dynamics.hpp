#pragma once

#include <cstddef>
#include <vector>

#include "wqed/memory_kernel.hpp"
#include "wqed/photonic_models.hpp"

namespace wqed {

/// Single-excitation amplitudes: sum |c_s|^2 + sum |psi_k|^2 = 1.
struct ExcitationState {
  std::vector<complex> qubits;
  std::vector<complex> photons;
  double time = 0.0;

  double norm() const;
};

/// Qubit `index` (zero-based) excited, field empty.
ExcitationState initial_qubit_excited(std::size_t index, std::size_t qubit_count,
                                      std::size_t mode_count);

/// Lab-frame qubit amplitudes sampled on a uniform grid.
///
/// Mode-resolved runs store one column per qubit. Integro-differential runs
/// store a single column holding the amplitude of `channel` (the lone qubit,
/// or c_+ / c_- of a pair).
struct TimeTrace {
  std::vector<double> times;
  std::size_t columns = 0;
  Channel channel = Channel::single;
  std::vector<complex> amplitudes;  // [sample][column]
  /// |norm - 1| at each sample; empty when the solver does not track photons.
  std::vector<double> norm_error;
  /// Lab-frame photon amplitudes at the final time, when requested.
  std::vector<complex> final_photons;

  std::size_t size() const { return times.size(); }
  complex amplitude(std::size_t sample, std::size_t column) const {
    return amplitudes[sample * columns + column];
  }
  /// Amplitude series of a channel: the stored column for channel traces,
  /// (c1 +- c2)/sqrt(2) for two-qubit mode traces, qubit `qubit` for single.
  std::vector<complex> series(Channel which, std::size_t qubit = 0) const;
  double max_norm_error() const;
};

struct ModeEvolutionOptions {
  double relative_tolerance = 1e-9;
  double absolute_tolerance = 1e-12;
  double max_step = 0.5;
  double norm_tolerance = 1e-6;
  bool keep_photons = false;
};

/// Integrates i dc_s/dt = D_s c_s + sum_k g_sk psi_k, i dpsi_k/dt = w_k psi_k
/// + sum_s g*_sk c_s with an embedded Dormand-Prince 5(4) pair in the frame
/// rotating with D_s and w_k. Samples every dt_out from initial.time.
TimeTrace evolve_modes(const ModeSet& modes, const QubitArray& qubits,
                       const ExcitationState& initial, double t_end, double dt_out,
                       const ModeEvolutionOptions& options = {});

struct IdeOptions {
  /// Zero selects min(0.02 / D, 0.2 / wc).
  double dt = 0.0;
  /// Sampling interval, rounded to a whole number of steps; zero keeps every
  /// step. The run extends to the first sample at or after t_end.
  double output_interval = 0.0;
};

/// Solves c(T) = c(0) - \int_0^T G(T - t) c(t) dt in the frame rotating at
/// `gap`, with G(u) = \int_0^u K_ch(s) e^{i gap s} ds evaluated in closed form
/// and the trapezoidal rule on a uniform grid. c(0) = 1.
TimeTrace evolve_ide(const KernelSpec& spec, double gap, Channel channel, double separation,
                     double t_end, const IdeOptions& options = {});

/// G(u) above for one channel, exposed for testing.
complex ide_weight(const KernelSpec& spec, double gap, Channel channel, double separation,
                   double u);

}  // namespace wqed
