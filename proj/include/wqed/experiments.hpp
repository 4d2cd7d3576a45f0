#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wqed/analysis.hpp"
#include "wqed/config.hpp"
#include "wqed/dynamics.hpp"
#include "wqed/markov.hpp"
#include "wqed/scattering.hpp"

namespace wqed {

std::string_view library_version();

enum class ExperimentKind {
  single_qubit_cutoff_sweep,
  two_qubit_distance_sweep,
  ide_reference,
  discrete_waveguide,
  photonic_crystal,
  scattering_spectrum,
  lightcone_map,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);

/// Where reference traces come from: the memory-kernel integro-differential
/// equation (exponential continuum) or mode-resolved evolution (any finite model).
enum class Reference { ide, modes };

struct SweepSpec {
  std::string variable;
  std::vector<double> values;
};

struct NumericsSpec {
  Reference reference = Reference::ide;
  /// IDE step; zero picks the solver default.
  double dt = 0.0;
  double output_interval = 0.25;
  /// Length of each run past the photon flight time d/v.
  double duration = 300.0;
  /// Fits start this many 1/gap after the flight time.
  double window_offset = 5.0;
  ModeEvolutionOptions modes;
  double lightcone_threshold = 1e-4;
  SelfEnergyMethod method = SelfEnergyMethod::continuum;
  double regularizer = 0.0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::ide_reference;
  PhotonicModel model;
  QubitArray qubits;
  SweepSpec sweep;
  /// Outer sweep: mode counts (discrete_waveguide) or bandwidths (photonic_crystal).
  std::vector<double> outer;
  NumericsSpec numerics;
  std::filesystem::path output = "out";
  /// Source text echoed into the manifest.
  std::string source;
  std::string echo;

  static ExperimentConfig from(const Config& config);
  static ExperimentConfig load(const std::filesystem::path& path);
};

/// One lone-emitter point: reference trace (optional), fit and the Markov
/// predictions.
struct SinglePoint {
  double parameter = 0.0;
  PhotonicModel model;
  double gap = 0.0;
  bool has_reference = false;
  TimeTrace trace;
  FitResult fit;
  SingleQubitMarkov self_consistent, simplified, none;
  /// Closed-form shift and rate at the self-consistent gap; exponential continuum only.
  ShiftAndRate closed_form{};
};

SinglePoint simulate_single(const PhotonicModel& model, double gap, const NumericsSpec& numerics,
                            bool with_reference);

/// One two-emitter point. IDE references hold the two channel traces, mode
/// references a single two-column trace in `pair`.
struct PairPoint {
  double separation = 0.0;
  Reference reference = Reference::ide;
  TimeTrace plus, minus, pair;
  FitResult fit_plus, fit_minus;
  MarkovParameters fitted, none, simplified, self_consistent;
};

/// Mode-resolved pair run, qubit 0 excited, up to the ring horizon.
TimeTrace simulate_pair_modes(const PhotonicModel& model, double gap, double separation,
                              double first_position, const NumericsSpec& numerics);
/// Last usable time of a mode-resolved pair run: before the self-revival and
/// before the wrap-around signal reaches the first emitter.
double pair_horizon(const PhotonicModel& model, double gap, double separation,
                    const NumericsSpec& numerics);

PairPoint simulate_pair(const PhotonicModel& model, double gap, double separation,
                        double first_position, const NumericsSpec& numerics);

struct RunOptions {
  int threads = 1;
  std::uint64_t seed = 0;  // reserved; nothing is random
  /// Overrides the configured output directory when non-empty.
  std::filesystem::path output;
};

struct RunReport {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
  std::size_t points = 0;
  double wall_seconds = 0.0;
};

/// Runs the configured experiment and writes manifest.txt, per-point traces
/// and the summary tables under the output directory.
RunReport run(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace wqed
