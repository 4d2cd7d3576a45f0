#include "wqed/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "wqed/csv.hpp"
#include "wqed/errors.hpp"
#include "wqed/harness.hpp"

#ifndef WQED_VERSION
#define WQED_VERSION "unknown"
#endif

namespace wqed {

std::string_view library_version() { return WQED_VERSION; }

namespace {

constexpr ExperimentKind kKinds[] = {
    ExperimentKind::single_qubit_cutoff_sweep, ExperimentKind::two_qubit_distance_sweep,
    ExperimentKind::ide_reference,             ExperimentKind::discrete_waveguide,
    ExperimentKind::photonic_crystal,          ExperimentKind::scattering_spectrum,
    ExperimentKind::lightcone_map,
};

bool is_pair_kind(ExperimentKind k) {
  return k == ExperimentKind::two_qubit_distance_sweep || k == ExperimentKind::discrete_waveguide ||
         k == ExperimentKind::photonic_crystal || k == ExperimentKind::lightcone_map;
}

// Re-raises a "section.field: why" validation message against the config line.
[[noreturn]] void remap(const Config& cfg, const InvalidArgument& e) {
  const std::string what = e.what();
  const auto dot = what.find('.');
  const auto colon = what.find(": ");
  if (dot != std::string::npos && colon != std::string::npos && dot < colon) {
    const std::string section = what.substr(0, dot);
    if (section == "model" || section == "qubits")
      cfg.fail(section, what.substr(dot + 1, colon - dot - 1), what.substr(colon + 2));
  }
  throw ConfigError(cfg.source() + ": " + what);
}

template <class F>
void checked(const Config& cfg, F&& body) {
  try {
    body();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    remap(cfg, e);
  }
}

PhotonicModel read_model(const Config& cfg) {
  PhotonicModel m;
  checked(cfg, [&] { m.kind = model_kind_from_string(cfg.text("model", "kind")); });
  m.coupling = cfg.number("model", "coupling");
  m.center = cfg.number("model", "center", 0.0);
  m.bandwidth = cfg.number("model", "bandwidth", 0.0);
  m.spectral_prefactor = cfg.number("model", "spectral_prefactor", 1.0);
  switch (m.kind) {
    case ModelKind::GaplessChain:
      m.length = cfg.number("model", "length");
      m.mode_count = cfg.integer("model", "mode_count", 0);
      m.cutoff = cfg.number("model", "cutoff", m.length > 0.0 ? m.mode_count / m.length : 0.0);
      break;
    case ModelKind::PhotonicCrystal:
    case ModelKind::TightBinding:
      m.mode_count = cfg.integer("model", "mode_count");
      m.length = cfg.number("model", "length", m.mode_count);
      break;
    case ModelKind::ExponentialContinuum:
      m.cutoff = cfg.number("model", "cutoff", 0.0);
      m.length = cfg.number("model", "length", 2000.0);
      m.mode_count = cfg.integer("model", "mode_count", 200000);
      break;
    case ModelKind::ConstantSpectrum:
      m.length = cfg.number("model", "length", 200.0);
      m.mode_count = cfg.integer("model", "mode_count", 4000);
      break;
  }
  return m;
}

std::vector<double> read_sweep_values(const Config& cfg) {
  if (cfg.has("sweep", "values")) {
    auto v = cfg.numbers("sweep", "values");
    if (v.size() < 2) cfg.fail("sweep", "values", "a sweep needs at least 2 samples");
    return v;
  }
  const double start = cfg.number("sweep", "start");
  const double stop = cfg.number("sweep", "stop");
  const int samples = cfg.integer("sweep", "samples");
  if (samples < 2) cfg.fail("sweep", "samples", "a sweep needs at least 2 samples");
  const std::string spacing = cfg.text("sweep", "spacing", "linear");
  std::vector<double> v(samples);
  if (spacing == "linear") {
    for (int i = 0; i < samples; ++i) v[i] = start + (stop - start) * i / (samples - 1);
  } else if (spacing == "log") {
    if (!(start > 0.0 && stop > 0.0)) cfg.fail("sweep", "start", "log spacing needs positive bounds");
    for (int i = 0; i < samples; ++i)
      v[i] = start * std::pow(stop / start, static_cast<double>(i) / (samples - 1));
    v.front() = start;
    v.back() = stop;
  } else {
    cfg.fail("sweep", "spacing", "expected linear or log");
  }
  return v;
}

void apply(PhotonicModel& m, QubitArray& q, const std::string& variable, double value) {
  if (variable == "cutoff") {
    m.cutoff = value;
  } else if (variable == "coupling") {
    m.coupling = value;
  } else if (variable == "bandwidth") {
    m.bandwidth = value;
  } else if (variable == "gap") {
    for (auto& g : q.gaps) g = value;
  } else if (variable == "mode_count") {
    m.mode_count = static_cast<int>(std::lround(value));
    if (m.kind == ModelKind::GaplessChain) {
      m.cutoff = m.mode_count / m.length;
    } else if (m.is_lattice()) {
      m.length = m.mode_count;
    }
  }
}

struct KindRules {
  std::vector<std::string> variables;  // allowed sweep variables; empty means no sweep
  bool sweep_required = true;
  std::size_t qubits_min = 1, qubits_max = 1;
};

KindRules rules_for(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::single_qubit_cutoff_sweep: return {{"cutoff"}, true, 1, 1};
    case ExperimentKind::ide_reference: return {{"cutoff", "coupling", "gap"}, false, 1, 1};
    case ExperimentKind::scattering_spectrum: return {{"energy"}, true, 1, 4};
    default: return {{"separation"}, true, 2, 2};
  }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::single_qubit_cutoff_sweep: return "single_qubit_cutoff_sweep";
    case ExperimentKind::two_qubit_distance_sweep: return "two_qubit_distance_sweep";
    case ExperimentKind::ide_reference: return "ide_reference";
    case ExperimentKind::discrete_waveguide: return "discrete_waveguide";
    case ExperimentKind::photonic_crystal: return "photonic_crystal";
    case ExperimentKind::scattering_spectrum: return "scattering_spectrum";
    case ExperimentKind::lightcone_map: return "lightcone_map";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (auto k : kKinds)
    if (to_string(k) == name) return k;
  throw InvalidArgument("experiment.kind: unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig ExperimentConfig::from(const Config& cfg) {
  cfg.restrict_keys("experiment", {"kind"});
  cfg.restrict_keys("model", {"kind", "length", "mode_count", "cutoff", "center", "bandwidth",
                              "coupling", "spectral_prefactor"});
  cfg.restrict_keys("qubits", {"gaps", "positions"});
  cfg.restrict_keys("sweep", {"variable", "start", "stop", "samples", "spacing", "values",
                              "mode_counts", "bandwidths"});
  cfg.restrict_keys("numerics", {"reference", "dt", "output_interval", "duration",
                                 "window_offset", "rtol", "atol", "max_step", "norm_tolerance",
                                 "lightcone_threshold", "method", "regularizer"});
  cfg.restrict_keys("output", {"directory"});

  ExperimentConfig c;
  c.source = cfg.source();
  c.echo = cfg.raw();
  try {
    c.kind = experiment_kind_from_string(cfg.text("experiment", "kind"));
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument&) {
    cfg.fail("experiment", "kind", "unknown experiment '" + cfg.text("experiment", "kind") + "'");
  }
  const KindRules rules = rules_for(c.kind);

  c.model = read_model(cfg);

  c.qubits.gaps = cfg.numbers("qubits", "gaps");
  if (cfg.has("qubits", "positions")) {
    c.qubits.positions = cfg.numbers("qubits", "positions");
  } else {
    c.qubits.positions.assign(c.qubits.gaps.size(), 0.0);
  }
  if (c.qubits.gaps.size() < rules.qubits_min || c.qubits.gaps.size() > rules.qubits_max) {
    std::ostringstream os;
    os << to_string(c.kind) << " takes " << rules.qubits_min;
    if (rules.qubits_max != rules.qubits_min) os << " to " << rules.qubits_max;
    os << " qubit(s)";
    cfg.fail("qubits", "gaps", os.str());
  }
  if (is_pair_kind(c.kind) && c.qubits.gaps[0] != c.qubits.gaps[1])
    cfg.fail("qubits", "gaps", "distance sweeps need identical emitters");

  if (cfg.has("sweep", "variable") || rules.sweep_required) {
    c.sweep.variable = cfg.text("sweep", "variable");
    if (std::find(rules.variables.begin(), rules.variables.end(), c.sweep.variable) ==
        rules.variables.end()) {
      std::string allowed;
      for (const auto& v : rules.variables) allowed += (allowed.empty() ? "" : ", ") + v;
      cfg.fail("sweep", "variable", std::string(to_string(c.kind)) + " sweeps " + allowed);
    }
    c.sweep.values = read_sweep_values(cfg);
  }
  if (c.sweep.variable == "separation") {
    for (double d : c.sweep.values)
      if (d < 0.0) cfg.fail("sweep", "start", "separations must be non-negative");
  }

  if (c.kind == ExperimentKind::discrete_waveguide) {
    if (c.model.kind != ModelKind::GaplessChain)
      cfg.fail("model", "kind", "discrete_waveguide uses gapless_chain");
    c.outer = cfg.has("sweep", "mode_counts") ? cfg.numbers("sweep", "mode_counts")
                                              : std::vector<double>{double(c.model.mode_count)};
  } else if (c.kind == ExperimentKind::photonic_crystal) {
    if (c.model.kind != ModelKind::PhotonicCrystal)
      cfg.fail("model", "kind", "photonic_crystal uses photonic_crystal");
    c.outer = cfg.has("sweep", "bandwidths") ? cfg.numbers("sweep", "bandwidths")
                                             : std::vector<double>{c.model.bandwidth};
  } else if (cfg.has("sweep", "mode_counts") || cfg.has("sweep", "bandwidths")) {
    cfg.fail("sweep", cfg.has("sweep", "mode_counts") ? "mode_counts" : "bandwidths",
             "only used by discrete_waveguide and photonic_crystal");
  }

  // Every model the run will build must validate; errors name the field.
  auto validate_with = [&](const char* outer_key, double outer_value) {
    PhotonicModel m = c.model;
    QubitArray q = c.qubits;
    if (c.kind == ExperimentKind::discrete_waveguide) apply(m, q, "mode_count", outer_value);
    if (c.kind == ExperimentKind::photonic_crystal) apply(m, q, "bandwidth", outer_value);
    const bool swept_model = !c.sweep.variable.empty() && c.sweep.variable != "separation" &&
                             c.sweep.variable != "energy";
    try {
      if (c.kind == ExperimentKind::discrete_waveguide && outer_value != std::round(outer_value))
        throw InvalidArgument("model.mode_count: must be an integer");
      if (!swept_model) m.validate();
    } catch (const InvalidArgument& e) {
      if (outer_key) {
        std::ostringstream os;
        os << "value " << outer_value << ": " << e.what();
        cfg.fail("sweep", outer_key, os.str());
      }
      remap(cfg, e);
    }
    if (c.sweep.variable == "separation") {
      for (double d : c.sweep.values) {
        q.positions[1] = q.positions[0] + d;
        checked(cfg, [&] { q.validate(m); });
      }
    } else if (c.sweep.variable.empty() || c.sweep.variable == "energy") {
      checked(cfg, [&] { q.validate(m); });
    } else {
      for (double v : c.sweep.values) {
        PhotonicModel mv = m;
        QubitArray qv = q;
        apply(mv, qv, c.sweep.variable, v);
        try {
          mv.validate();
          qv.validate(mv);
        } catch (const InvalidArgument& e) {
          std::ostringstream os;
          os << c.sweep.variable << " = " << v << ": " << e.what();
          cfg.fail("sweep", cfg.has("sweep", "values") ? "values" : "start", os.str());
        }
      }
    }
  };
  if (c.kind == ExperimentKind::discrete_waveguide) {
    for (double n : c.outer) validate_with("mode_counts", n);
  } else if (c.kind == ExperimentKind::photonic_crystal) {
    for (double j : c.outer) validate_with("bandwidths", j);
  } else {
    validate_with(nullptr, 0.0);
  }

  NumericsSpec& n = c.numerics;
  const std::string reference =
      cfg.text("numerics", "reference",
               c.model.kind == ModelKind::ExponentialContinuum ? "ide" : "modes");
  if (reference == "ide") {
    n.reference = Reference::ide;
    if (c.model.kind != ModelKind::ExponentialContinuum)
      cfg.fail("numerics", "reference", "the ide reference needs an exponential_continuum model");
  } else if (reference == "modes") {
    n.reference = Reference::modes;
  } else {
    cfg.fail("numerics", "reference", "expected ide or modes");
  }
  if (c.kind == ExperimentKind::lightcone_map) n.reference = Reference::modes;
  if ((c.kind == ExperimentKind::discrete_waveguide || c.kind == ExperimentKind::photonic_crystal) &&
      n.reference != Reference::modes)
    cfg.fail("numerics", "reference", "lattice experiments use the modes reference");
  n.dt = cfg.number("numerics", "dt", 0.0);
  n.output_interval = cfg.number("numerics", "output_interval", 0.25);
  n.duration = cfg.number("numerics", "duration", 300.0);
  n.window_offset = cfg.number("numerics", "window_offset", 5.0);
  n.modes.relative_tolerance = cfg.number("numerics", "rtol", n.modes.relative_tolerance);
  n.modes.absolute_tolerance = cfg.number("numerics", "atol", n.modes.absolute_tolerance);
  n.modes.max_step = cfg.number("numerics", "max_step", n.modes.max_step);
  n.modes.norm_tolerance = cfg.number("numerics", "norm_tolerance", n.modes.norm_tolerance);
  n.lightcone_threshold = cfg.number("numerics", "lightcone_threshold", 1e-4);
  n.regularizer = cfg.number("numerics", "regularizer", 0.0);
  const std::string method = cfg.text("numerics", "method", "continuum");
  if (method == "continuum") {
    n.method = SelfEnergyMethod::continuum;
  } else if (method == "mode_sum") {
    n.method = SelfEnergyMethod::mode_sum;
  } else {
    cfg.fail("numerics", "method", "expected continuum or mode_sum");
  }
  auto positive = [&](const char* key, double v) {
    if (!(v > 0.0)) cfg.fail("numerics", key, "must be positive");
  };
  if (n.dt < 0.0) cfg.fail("numerics", "dt", "must be non-negative (0 picks the default)");
  positive("output_interval", n.output_interval);
  positive("duration", n.duration);
  positive("rtol", n.modes.relative_tolerance);
  positive("atol", n.modes.absolute_tolerance);
  positive("max_step", n.modes.max_step);
  positive("norm_tolerance", n.modes.norm_tolerance);
  positive("lightcone_threshold", n.lightcone_threshold);
  if (n.window_offset < 0.0) cfg.fail("numerics", "window_offset", "must be non-negative");
  if (n.regularizer < 0.0) cfg.fail("numerics", "regularizer", "must be non-negative");

  c.output = cfg.text("output", "directory", "out");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return from(Config::load(path));
}

namespace {

FitWindow window_for(const TimeTrace& trace, std::initializer_list<Channel> channels,
                     double gap, double flight, double offset) {
  FitWindow w{std::max(trace.times.front(), flight + offset / gap), trace.times.back()};
  for (Channel ch : channels) {
    const auto amps = trace.series(ch);
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (trace.times[i] > w.start && std::norm(amps[i]) < 1e-6) {
        w.end = std::min(w.end, trace.times[i]);
        break;
      }
    }
  }
  if (!(w.end > w.start)) {
    std::ostringstream os;
    os << "fit window [" << w.start << ", " << w.end << "] is empty; lengthen numerics.duration";
    throw InvalidArgument(os.str());
  }
  return w;
}

IdeOptions ide_options(const NumericsSpec& n) {
  IdeOptions o;
  o.dt = n.dt;
  o.output_interval = n.output_interval;
  return o;
}

}  // namespace

SinglePoint simulate_single(const PhotonicModel& model, double gap, const NumericsSpec& numerics,
                            bool with_reference) {
  SinglePoint p;
  p.model = model;
  p.gap = gap;
  p.self_consistent = lamb_shift_self_consistent(model, gap);
  p.simplified = lamb_shift_simplified(model, gap);
  p.none = lamb_shift_none(model, gap);
  if (model.kind == ModelKind::ExponentialContinuum)
    p.closed_form = single_qubit_closed_form(model.coupling, p.self_consistent.delta_prime,
                                             model.cutoff);
  if (!with_reference) return p;
  p.has_reference = true;
  if (numerics.reference == Reference::ide) {
    p.trace = evolve_ide(KernelSpec::closed_form(model), gap, Channel::single, 0.0,
                         numerics.duration, ide_options(numerics));
  } else {
    const QubitArray q = QubitArray::single(gap, 0.0);
    const ModeSet modes = build_modes(model, q);
    const double t_end = std::min(numerics.duration, 0.9 * model.revival_time());
    p.trace = evolve_modes(modes, q, initial_qubit_excited(0, 1, modes.size()), t_end,
                           numerics.output_interval, numerics.modes);
  }
  p.fit = fit_decay(p.trace, Channel::single,
                    window_for(p.trace, {Channel::single}, gap, 0.0, numerics.window_offset));
  return p;
}

double pair_horizon(const PhotonicModel& model, double gap, double separation,
                    const NumericsSpec& numerics) {
  const double v = model.max_group_velocity();
  const double wrap = (model.length - separation) / v - 5.0 / gap;
  return std::min({separation / v + numerics.duration, 0.9 * model.revival_time(), wrap});
}

TimeTrace simulate_pair_modes(const PhotonicModel& model, double gap, double separation,
                              double first_position, const NumericsSpec& numerics) {
  const QubitArray q = QubitArray::pair(gap, separation, first_position);
  const ModeSet modes = build_modes(model, q);
  const double t_end = pair_horizon(model, gap, separation, numerics);
  if (!(t_end > 0.0)) throw InvalidArgument("separation leaves no time before the ring wraps around");
  return evolve_modes(modes, q, initial_qubit_excited(0, 2, modes.size()), t_end,
                      numerics.output_interval, numerics.modes);
}

PairPoint simulate_pair(const PhotonicModel& model, double gap, double separation,
                        double first_position, const NumericsSpec& numerics) {
  PairPoint p;
  p.separation = separation;
  p.reference = numerics.reference;
  p.none = two_qubit_params(model, gap, separation, LambScheme::none);
  p.simplified = two_qubit_params(model, gap, separation, LambScheme::simplified);
  p.self_consistent = two_qubit_params(model, gap, separation, LambScheme::self_consistent);
  if (numerics.reference == Reference::ide) {
    const KernelSpec spec = KernelSpec::closed_form(model);
    const double t_end = separation + numerics.duration;
    p.plus = evolve_ide(spec, gap, Channel::plus, separation, t_end, ide_options(numerics));
    p.minus = evolve_ide(spec, gap, Channel::minus, separation, t_end, ide_options(numerics));
    const FitWindow wp = window_for(p.plus, {Channel::plus}, gap, separation, numerics.window_offset);
    const FitWindow wm = window_for(p.minus, {Channel::minus}, gap, separation, numerics.window_offset);
    const FitWindow w{std::max(wp.start, wm.start), std::min(wp.end, wm.end)};
    p.fit_plus = fit_decay(p.plus, Channel::plus, w);
    p.fit_minus = fit_decay(p.minus, Channel::minus, w);
  } else {
    p.pair = simulate_pair_modes(model, gap, separation, first_position, numerics);
    const double flight = separation / model.max_group_velocity();
    const FitWindow w = window_for(p.pair, {Channel::plus, Channel::minus}, gap, flight,
                                   numerics.window_offset);
    p.fit_plus = fit_decay(p.pair, Channel::plus, w);
    p.fit_minus = fit_decay(p.pair, Channel::minus, w);
  }
  p.fitted = MarkovParameters::from_channels(gap, separation, p.fit_plus.frequency,
                                             p.fit_minus.frequency, p.fit_plus.rate,
                                             p.fit_minus.rate, LambScheme::fitted);
  return p;
}

namespace {

std::string index_name(std::size_t i) {
  std::string s = std::to_string(i);
  return std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

std::string number_tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

class Bundle {
 public:
  Bundle(const ExperimentConfig& config, const RunOptions& options)
      : config_(config), options_(options), start_(std::chrono::steady_clock::now()) {
    report_.directory = options.output.empty() ? config.output : options.output;
    std::error_code ec;
    std::filesystem::create_directories(report_.directory, ec);
    if (ec) throw InvalidArgument("output.directory: cannot create " + report_.directory.string());
    write_manifest("running");
  }

  std::filesystem::path path(const std::string& name) {
    const auto p = report_.directory / name;
    report_.files.push_back(p);
    return p;
  }

  void point_done() { ++report_.points; }

  RunReport finish() {
    write_manifest("complete");
    return report_;
  }

  void fail(const std::string& why) { write_manifest("failed: " + why); }

 private:
  void write_manifest(const std::string& status) {
    report_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ofstream out(report_.directory / "manifest.txt");
    out << "experiment: " << to_string(config_.kind) << '\n'
        << "library_version: " << library_version() << '\n'
        << "config: " << config_.source << '\n'
        << "threads: " << options_.threads << '\n'
        << "seed: " << options_.seed << '\n'
        << "status: " << status << '\n'
        << "points: " << report_.points << '\n'
        << "wall_seconds: " << format_double(report_.wall_seconds) << '\n'
        << "files:\n";
    for (const auto& f : report_.files) out << "  " << f.filename().string() << '\n';
    out << "--- config ---\n" << config_.echo;
  }

  const ExperimentConfig& config_;
  RunOptions options_;
  std::chrono::steady_clock::time_point start_;
  RunReport report_;
};

void write_single_trace(const std::filesystem::path& file, const TimeTrace& trace) {
  CsvWriter out(file, {"t", "re_c1", "im_c1", "abs2_c1"});
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const complex c = trace.amplitude(i, 0);
    out.row({trace.times[i], c.real(), c.imag(), std::norm(c)});
  }
}

// Qubit amplitudes for qubit 1 initially excited: c1,2 = (c+ +- c-)/sqrt(2).
// IDE channel traces start from c+- = 1, the physical channels from 1/sqrt(2).
void write_pair_trace(const std::filesystem::path& file, const PairPoint& p) {
  CsvWriter out(file, {"t", "re_c1", "im_c1", "re_c2", "im_c2", "abs2_plus", "abs2_minus"});
  if (p.reference == Reference::ide) {
    for (std::size_t i = 0; i < p.plus.size(); ++i) {
      const complex a = p.plus.amplitude(i, 0) / std::sqrt(2.0);
      const complex b = p.minus.amplitude(i, 0) / std::sqrt(2.0);
      const complex c1 = (a + b) / std::sqrt(2.0);
      const complex c2 = (a - b) / std::sqrt(2.0);
      out.row({p.plus.times[i], c1.real(), c1.imag(), c2.real(), c2.imag(), std::norm(a),
               std::norm(b)});
    }
    return;
  }
  const auto plus = p.pair.series(Channel::plus);
  const auto minus = p.pair.series(Channel::minus);
  for (std::size_t i = 0; i < p.pair.size(); ++i) {
    const complex c1 = p.pair.amplitude(i, 0);
    const complex c2 = p.pair.amplitude(i, 1);
    out.row({p.pair.times[i], c1.real(), c1.imag(), c2.real(), c2.imag(), std::norm(plus[i]),
             std::norm(minus[i])});
  }
}

// Shared two-qubit tables; `prefix` carries the outer sweep value when there is one.
struct PairTables {
  PairTables(Bundle& b, const std::vector<std::string>& prefix)
      : summary(b.path("summary.csv"), with(prefix, {"d", "gamma_fit", "gamma12_fit", "g12_fit",
                                                     "gamma_pred", "gamma12_pred", "g12_pred"})),
        fits(b.path("fits.csv"),
             with(prefix, {"d", "gamma", "gamma12", "g12", "delta_prime", "gamma_plus",
                           "gamma_minus", "delta_plus", "delta_minus", "window_start",
                           "window_end", "log_residual_plus", "log_residual_minus",
                           "phase_residual_plus", "phase_residual_minus"})),
        schemes(b.path("schemes.csv"),
                with(prefix, {"d", "scheme", "gamma", "gamma12", "g12", "delta_prime",
                              "error_gamma", "error_gamma12", "error_g12"})) {}

  static std::vector<std::string> with(const std::vector<std::string>& prefix,
                                       std::vector<std::string> cols) {
    cols.insert(cols.begin(), prefix.begin(), prefix.end());
    return cols;
  }

  void add(const std::vector<CsvCell>& prefix, const PairPoint& p) {
    auto row = [&](std::vector<CsvCell> cells) {
      cells.insert(cells.begin(), prefix.begin(), prefix.end());
      return cells;
    };
    const MarkovParameters& f = p.fitted;
    const MarkovParameters& sc = p.self_consistent;
    summary.row(row({p.separation, f.gamma, f.gamma12, f.g12, sc.gamma, sc.gamma12, sc.g12}));
    fits.row(row({p.separation, f.gamma, f.gamma12, f.g12, f.delta_prime, f.gamma_plus,
                  f.gamma_minus, f.delta_plus, f.delta_minus, p.fit_plus.window.start,
                  p.fit_plus.window.end, p.fit_plus.log_residual, p.fit_minus.log_residual,
                  p.fit_plus.phase_residual, p.fit_minus.phase_residual}));
    for (const MarkovParameters* s : {&p.none, &p.simplified, &p.self_consistent}) {
      schemes.row(row({p.separation, std::string(to_string(s->scheme)), s->gamma, s->gamma12,
                       s->g12, s->delta_prime, s->gamma - f.gamma, s->gamma12 - f.gamma12,
                       s->g12 - f.g12}));
    }
  }

  CsvWriter summary, fits, schemes;
};

void run_cutoff_sweep(const ExperimentConfig& c, const RunOptions& o, Bundle& b, bool reference) {
  const bool has_sweep = !c.sweep.values.empty();
  const std::vector<double> values = has_sweep ? c.sweep.values : std::vector<double>{0.0};
  const std::string variable = has_sweep ? c.sweep.variable : "point";
  CsvWriter summary(b.path("summary.csv"),
                    {variable, "delta_prime", "lamb_shift_sc", "gamma_sc", "lamb_shift_closed_form",
                     "gamma_closed_form", "lamb_shift_simplified", "gamma_simplified",
                     "lamb_shift_none", "gamma_none", "iterations", "lamb_shift_fit", "gamma_fit"});
  run_ordered<SinglePoint>(
      values.size(), o.threads,
      [&](std::size_t i) {
        PhotonicModel m = c.model;
        QubitArray q = c.qubits;
        if (has_sweep) apply(m, q, c.sweep.variable, values[i]);
        SinglePoint p = simulate_single(m, q.gaps[0], c.numerics, reference);
        p.parameter = values[i];
        return p;
      },
      [&](std::size_t i, SinglePoint& p) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (p.has_reference) write_single_trace(b.path("point_" + index_name(i) + ".csv"), p.trace);
        const auto& sc = p.self_consistent;
        const bool exp = p.model.kind == ModelKind::ExponentialContinuum;
        summary.row({p.parameter, sc.delta_prime, sc.lamb_shift, sc.gamma,
                     exp ? p.closed_form.lamb_shift : nan, exp ? p.closed_form.gamma : nan,
                     p.simplified.lamb_shift, p.simplified.gamma, p.none.lamb_shift,
                     p.none.gamma, static_cast<long long>(sc.iterations),
                     p.has_reference ? p.fit.frequency - p.gap : nan,
                     p.has_reference ? p.fit.rate : nan});
        b.point_done();
      },
      [&](std::size_t i) { return variable + " = " + number_tag(values[i]) + " (point " + std::to_string(i) + ")"; });
}

void run_distance_sweep(const ExperimentConfig& c, const RunOptions& o, Bundle& b) {
  const auto& ds = c.sweep.values;
  PairTables tables(b, {});
  run_ordered<PairPoint>(
      ds.size(), o.threads,
      [&](std::size_t i) {
        return simulate_pair(c.model, c.qubits.gaps[0], ds[i], c.qubits.positions[0], c.numerics);
      },
      [&](std::size_t i, PairPoint& p) {
        write_pair_trace(b.path("point_" + index_name(i) + ".csv"), p);
        tables.add({}, p);
        b.point_done();
      },
      [&](std::size_t i) { return "d = " + number_tag(ds[i]) + " (point " + std::to_string(i) + ")"; });
}

// Discrete waveguide and photonic crystal: a distance sweep per outer value,
// followed by period analysis of each resulting curve.
void run_family(const ExperimentConfig& c, const RunOptions& o, Bundle& b) {
  const bool chain = c.kind == ExperimentKind::discrete_waveguide;
  const std::string outer_name = chain ? "mode_count" : "bandwidth";
  const auto& ds = c.sweep.values;
  const std::size_t per = ds.size();
  const double gap = c.qubits.gaps[0];
  auto model_for = [&](std::size_t j) {
    PhotonicModel m = c.model;
    QubitArray q = c.qubits;
    apply(m, q, outer_name, c.outer[j]);
    return m;
  };
  auto outer_cell = [&](std::size_t j) -> CsvCell {
    if (chain) return static_cast<long long>(std::llround(c.outer[j]));
    return c.outer[j];
  };

  PairTables tables(b, {outer_name});
  CsvWriter periods(b.path("periods.csv"),
                    {outer_name, "cutoff", "gap_from_g12", "spread_g12", "gap_from_gamma12",
                     "spread_gamma12", "spacing_g12", "spacing_gamma12", "delta_prime_fit_mean",
                     "delta_prime_sc", "gamma_mean", "gamma_sc", "spectral_density_at_gap",
                     "gamma_times_bandwidth"});
  std::vector<MarkovParameters> curve;
  run_ordered<PairPoint>(
      c.outer.size() * per, o.threads,
      [&](std::size_t i) {
        return simulate_pair(model_for(i / per), gap, ds[i % per], c.qubits.positions[0], c.numerics);
      },
      [&](std::size_t i, PairPoint& p) {
        const std::size_t j = i / per;
        std::string tag = chain ? "N" + number_tag(c.outer[j]) : "J" + number_tag(c.outer[j]);
        write_pair_trace(b.path("point_" + tag + "_" + index_name(i % per) + ".csv"), p);
        tables.add({outer_cell(j)}, p);
        curve.push_back(p.fitted);
        b.point_done();
        if (curve.size() < per) return;

        const PhotonicModel m = model_for(j);
        std::vector<double> g12, gamma12;
        double gamma_mean = 0.0, dp_mean = 0.0;
        for (const auto& f : curve) {
          g12.push_back(f.g12);
          gamma12.push_back(f.gamma12);
          gamma_mean += f.gamma / per;
          dp_mean += f.delta_prime / per;
        }
        GapEstimate from_g12, from_gamma12;
        try {
          from_g12 = extract_gap_from_period(ds, g12, &m);
          from_gamma12 = extract_gap_from_period(ds, gamma12, &m);
        } catch (const InvalidArgument& e) {
          throw InvalidArgument(outer_name + " = " + number_tag(c.outer[j]) +
                                ": period analysis of the separation sweep: " + e.what());
        }
        const SingleQubitMarkov sc = lamb_shift_self_consistent(m, gap);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        periods.row({outer_cell(j), chain ? m.cutoff : nan, from_g12.gap,
                     from_g12.spread, from_gamma12.gap, from_gamma12.spread,
                     kPi / from_g12.wavenumber, kPi / from_gamma12.wavenumber, dp_mean,
                     sc.delta_prime, gamma_mean, sc.gamma, spectral_density(m, from_gamma12.gap),
                     chain ? nan : gamma_mean * m.bandwidth});
        curve.clear();
      },
      [&](std::size_t i) {
        return outer_name + " = " + number_tag(c.outer[i / per]) + ", d = " +
               number_tag(ds[i % per]) + " (point " + std::to_string(i) + ")";
      });
}

struct SpectrumPoint {
  double energy = 0.0;
  ScatteringResult result;
};

void run_spectrum(const ExperimentConfig& c, const RunOptions& o, Bundle& b) {
  ScatteringOptions so;
  so.method = c.numerics.method;
  so.regularizer = c.numerics.regularizer;
  const Scatterer scatterer(c.model, c.qubits, so);
  const std::size_t S = c.qubits.size();
  std::vector<std::string> cols{"E"};
  for (std::size_t s = 1; s <= S; ++s) {
    cols.push_back("re_c" + std::to_string(s));
    cols.push_back("im_c" + std::to_string(s));
    cols.push_back("abs2_c" + std::to_string(s));
  }
  cols.push_back("abs2_total");
  CsvWriter spectrum(b.path("spectrum.csv"), cols);
  const auto& es = c.sweep.values;
  double peak_energy = 0.0, peak = -1.0;
  run_ordered<SpectrumPoint>(
      es.size(), o.threads,
      [&](std::size_t i) {
        return SpectrumPoint{es[i], scatterer.amplitudes(c.model.momentum_at(es[i]))};
      },
      [&](std::size_t, SpectrumPoint& p) {
        std::vector<CsvCell> row{p.energy};
        double total = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
          const complex a = p.result.qubits(s);
          row.insert(row.end(), {a.real(), a.imag(), std::norm(a)});
          total += std::norm(a);
        }
        row.push_back(total);
        spectrum.row(row);
        if (total > peak) {
          peak = total;
          peak_energy = p.energy;
        }
        b.point_done();
      },
      [&](std::size_t i) { return "E = " + number_tag(es[i]) + " (point " + std::to_string(i) + ")"; });

  CsvWriter res(b.path("resonances.csv"), {"re_E", "im_E"});
  auto roots = scatterer.resonances();
  std::sort(roots.begin(), roots.end(), [](complex a, complex b) { return a.real() < b.real(); });
  for (complex r : roots) res.row({r.real(), r.imag()});

  CsvWriter summary(b.path("summary.csv"),
                    {"peak_energy", "peak_abs2", "bare_gap", "delta_prime_sc", "gamma_sc"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SingleQubitMarkov sc{};
  const bool lone = S == 1 && c.model.coupling > 0.0;
  if (lone) sc = lamb_shift_self_consistent(c.model, c.qubits.gaps[0]);
  summary.row({peak_energy, peak, c.qubits.gaps[0], lone ? sc.delta_prime : nan,
               lone ? sc.gamma : nan});
}

void run_lightcone(const ExperimentConfig& c, const RunOptions& o, Bundle& b) {
  const auto& ds = c.sweep.values;
  const double v = c.model.max_group_velocity();
  CsvWriter cone(b.path("lightcone.csv"),
                 {"d", "t_detect", "d_over_v", "threshold", "max_split_before_flight"});
  run_ordered<PairPoint>(
      ds.size(), o.threads,
      [&](std::size_t i) {
        PairPoint p;
        p.separation = ds[i];
        p.reference = Reference::modes;
        p.pair = simulate_pair_modes(c.model, c.qubits.gaps[0], ds[i], c.qubits.positions[0],
                                     c.numerics);
        return p;
      },
      [&](std::size_t i, PairPoint& p) {
        write_pair_trace(b.path("point_" + index_name(i) + ".csv"), p);
        const auto plus = p.pair.series(Channel::plus);
        const auto minus = p.pair.series(Channel::minus);
        double split = 0.0;
        for (std::size_t k = 0; k < p.pair.size() && p.pair.times[k] < ds[i] / v; ++k)
          split = std::max(split, std::abs(std::norm(plus[k]) - std::norm(minus[k])));
        cone.row({ds[i], detect_light_cone(p.pair, c.numerics.lightcone_threshold), ds[i] / v,
                  c.numerics.lightcone_threshold, split});
        b.point_done();
      },
      [&](std::size_t i) { return "d = " + number_tag(ds[i]) + " (point " + std::to_string(i) + ")"; });
}

}  // namespace

RunReport run(const ExperimentConfig& config, const RunOptions& options) {
  Bundle bundle(config, options);
  try {
    switch (config.kind) {
      case ExperimentKind::single_qubit_cutoff_sweep:
        run_cutoff_sweep(config, options, bundle, false);
        break;
      case ExperimentKind::ide_reference: run_cutoff_sweep(config, options, bundle, true); break;
      case ExperimentKind::two_qubit_distance_sweep: run_distance_sweep(config, options, bundle); break;
      case ExperimentKind::discrete_waveguide:
      case ExperimentKind::photonic_crystal: run_family(config, options, bundle); break;
      case ExperimentKind::scattering_spectrum: run_spectrum(config, options, bundle); break;
      case ExperimentKind::lightcone_map: run_lightcone(config, options, bundle); break;
    }
  } catch (const std::exception& e) {
    bundle.fail(e.what());
    throw;
  }
  return bundle.finish();
}

}  // namespace wqed
