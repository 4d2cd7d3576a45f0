#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wqed/units.hpp"

namespace wqed {

enum class ModelKind {
  GaplessChain,
  PhotonicCrystal,
  ExponentialContinuum,
  ConstantSpectrum,
  TightBinding,
};

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

/// Frequency support of a medium. `hi` is +infinity for the exponential
/// continuum.
struct Band {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double omega) const { return omega > lo && omega < hi; }
};

/// Microscopic description of a 1D photonic medium with periodic boundaries.
///
/// Dispersions (lattice spacing dx = L/N for the chain, dx = 1 otherwise):
///   GaplessChain          w = wc sqrt(2 - 2 cos(k dx)),     wc = 1/dx
///   PhotonicCrystal       w = w0 - J cos(k)
///   ExponentialContinuum  w = |k|, couplings damped by exp(-w/(2 wc))
///   ConstantSpectrum      w = lo + v|k| across [w0 - J, w0 + J]
///   TightBinding          w = w0 - J cos(k), couplings g/sqrt(N)
///
/// The continuum models still carry a length and mode count so they can be
/// discretized into a ModeSet when a mode-resolved computation needs one.
struct PhotonicModel {
  ModelKind kind = ModelKind::GaplessChain;
  double length = 0.0;
  int mode_count = 0;
  double cutoff = 0.0;
  double center = 0.0;
  double bandwidth = 0.0;
  double coupling = 0.0;
  /// Multiplier between the mode-sum spectral function and the analytic
  /// J(w) used by the Markov solvers. Unity for every model: the analytic
  /// densities below are derived from the same couplings that enter the
  /// mode sums, and the single-qubit self-calibration test checks it.
  double spectral_prefactor = 1.0;

  static PhotonicModel gapless_chain(double length, int modes, double coupling);
  static PhotonicModel photonic_crystal(int modes, double center, double bandwidth,
                                        double coupling);
  static PhotonicModel exponential_continuum(double cutoff, double coupling,
                                             double length = 2000.0,
                                             int modes = 200000);
  static PhotonicModel constant_spectrum(double center, double half_width, double coupling,
                                         double length = 200.0, int modes = 4000);
  static PhotonicModel tight_binding(int modes, double center, double hopping,
                                     double coupling);

  /// Throws InvalidArgument naming the offending field.
  void validate() const;

  bool is_lattice() const;
  double lattice_spacing() const;
  Band band() const;

  double dispersion(double k) const;
  /// w(k_ref) - w(k) for k, k_ref >= 0, free of cancellation as k -> k_ref.
  double dispersion_difference(double k, double k_ref) const;
  /// Non-negative momentum on the branch with frequency omega. Throws outside
  /// the band.
  double momentum_at(double omega) const;
  /// Largest |k| on the mode grid, pi N / L.
  double momentum_cutoff() const;
  /// 2 L |g_k|^2: coupling weight per unit momentum, independent of L.
  /// Integrating it against dk over k >= 0 reproduces integration of J(w)
  /// against dw.
  double coupling_weight(double k) const;

  double max_group_velocity() const;
  /// Photon round-trip time around the ring; mode-sum kernels and mode-resolved
  /// dynamics are only meaningful before it.
  double revival_time() const;
};

/// Two-level emitters coupled to the medium.
struct QubitArray {
  std::vector<double> gaps;
  std::vector<double> positions;

  static QubitArray single(double gap, double position = 0.0);
  static QubitArray pair(double gap, double separation, double first_position = 0.0);

  std::size_t size() const { return gaps.size(); }
  /// Positions must lie in [0, L) for lattice models; gaps positive.
  void validate(const PhotonicModel& model) const;
};

/// Discretized mode table: N+1 momenta on the grid (2 pi / L) {0, +-1, ..., +-N/2}
/// and the complex couplings g_{s,j}.
struct ModeSet {
  std::vector<double> momenta;
  std::vector<double> frequencies;
  std::vector<complex> couplings;  // row-major [qubit][mode]
  std::size_t qubit_count = 0;
  double length = 0.0;

  std::size_t size() const { return momenta.size(); }
  complex coupling(std::size_t qubit, std::size_t mode) const {
    return couplings[qubit * momenta.size() + mode];
  }
  std::span<const complex> row(std::size_t qubit) const {
    return {couplings.data() + qubit * momenta.size(), momenta.size()};
  }
};

ModeSet build_modes(const PhotonicModel& model, const QubitArray& qubits);

/// g_k for a qubit at `position`: sqrt(coupling_weight(k) / 2L) exp(+-i k x).
complex mode_coupling(const PhotonicModel& model, double k, double position);

/// Continuum spectral function J(w); zero outside the model's support.
double spectral_density(const PhotonicModel& model, double omega);

/// dw/dk at the given frequency. Throws at or beyond a band edge, where the
/// density of states diverges.
double group_velocity(const PhotonicModel& model, double omega);

}  // namespace wqed
