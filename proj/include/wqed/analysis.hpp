#pragma once

#include <cstddef>
#include <vector>

#include "wqed/dynamics.hpp"
#include "wqed/markov.hpp"

namespace wqed {

struct FitWindow {
  double start = 0.0;
  double end = 0.0;
};

/// c(t) ~ A exp(-i frequency t - rate t / 2) over the window.
struct FitResult {
  double rate = 0.0;
  double frequency = 0.0;
  double amplitude = 0.0;  // |c| extrapolated to t = 0
  double phase = 0.0;      // arg c extrapolated to t = 0
  FitWindow window;
  std::size_t samples = 0;
  /// RMS residuals of the ln|c|^2 and unwrapped-phase fits.
  double log_residual = 0.0;
  double phase_residual = 0.0;
};

/// Linear least squares on ln|c|^2 (rate) and on the unwrapped phase
/// (frequency = -slope). Samples must be dense enough that the phase advances
/// by less than pi between them.
FitResult fit_decay(const std::vector<double>& times, const std::vector<complex>& amplitudes,
                    const FitWindow& window);
FitResult fit_decay(const TimeTrace& trace, Channel channel, const FitWindow& window,
                    std::size_t qubit = 0);

/// [t_flight + 5/gap, min(t_max, first t with |c|^2 < 1e-6, last sample)].
FitWindow default_window(const std::vector<double>& times, const std::vector<complex>& amplitudes,
                         double gap, double t_flight, double t_max);

/// Earliest sample where | |c+|^2 - |c-|^2 | exceeds `threshold`; +inf when
/// the channels never split. Requires a two-qubit mode trace.
double detect_light_cone(const TimeTrace& trace, double threshold = 1e-4);
std::vector<double> detect_light_cone(const std::vector<TimeTrace>& family,
                                      double threshold = 1e-4);

/// Fits c+ and c- and recombines them into a
/// MarkovParameters tagged `fitted`. The window must lie past the light cone.
MarkovParameters extract_two_qubit(const TimeTrace& trace, const FitWindow& window, double gap,
                                   double separation);
/// Same from a pair of single-channel (integro-differential) traces.
MarkovParameters extract_two_qubit(const TimeTrace& plus, const TimeTrace& minus,
                                   const FitWindow& window, double gap, double separation);

struct GapEstimate {
  double gap = 0.0;
  double wavenumber = 0.0;
  double spread = 0.0;  // standard deviation of the gap over individual zero spacings
  std::vector<double> zeros;
};

/// Renormalized gap from the zeros of g12(d) or gamma12(d): consecutive zeros
/// are pi / k' apart and the gap is the medium frequency at k'. Without a
/// model the dispersion is taken as v k with v = 1.
GapEstimate extract_gap_from_period(const std::vector<double>& separations,
                                    const std::vector<double>& values,
                                    const PhotonicModel* model = nullptr);

}  // namespace wqed
