#include "wqed/photonic_models.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

[[noreturn]] void reject(std::string_view field, std::string_view why) {
  std::ostringstream os;
  os << "model." << field << ": " << why;
  throw InvalidArgument(os.str());
}

bool banded(ModelKind kind) {
  return kind == ModelKind::PhotonicCrystal || kind == ModelKind::TightBinding;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::GaplessChain: return "gapless_chain";
    case ModelKind::PhotonicCrystal: return "photonic_crystal";
    case ModelKind::ExponentialContinuum: return "exponential_continuum";
    case ModelKind::ConstantSpectrum: return "constant_spectrum";
    case ModelKind::TightBinding: return "tight_binding";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (auto kind : {ModelKind::GaplessChain, ModelKind::PhotonicCrystal,
                    ModelKind::ExponentialContinuum, ModelKind::ConstantSpectrum,
                    ModelKind::TightBinding}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("model.kind: unknown model '" + std::string(name) + "'");
}

PhotonicModel PhotonicModel::gapless_chain(double length, int modes, double coupling) {
  PhotonicModel m;
  m.kind = ModelKind::GaplessChain;
  m.length = length;
  m.mode_count = modes;
  m.cutoff = length > 0.0 ? modes / length : 0.0;
  m.coupling = coupling;
  m.validate();
  return m;
}

PhotonicModel PhotonicModel::photonic_crystal(int modes, double center, double bandwidth,
                                              double coupling) {
  PhotonicModel m;
  m.kind = ModelKind::PhotonicCrystal;
  m.length = modes;
  m.mode_count = modes;
  m.center = center;
  m.bandwidth = bandwidth;
  m.coupling = coupling;
  m.validate();
  return m;
}

PhotonicModel PhotonicModel::exponential_continuum(double cutoff, double coupling,
                                                   double length, int modes) {
  PhotonicModel m;
  m.kind = ModelKind::ExponentialContinuum;
  m.length = length;
  m.mode_count = modes;
  m.cutoff = cutoff;
  m.coupling = coupling;
  m.validate();
  return m;
}

PhotonicModel PhotonicModel::constant_spectrum(double center, double half_width,
                                               double coupling, double length, int modes) {
  PhotonicModel m;
  m.kind = ModelKind::ConstantSpectrum;
  m.length = length;
  m.mode_count = modes;
  m.center = center;
  m.bandwidth = half_width;
  m.coupling = coupling;
  m.validate();
  return m;
}

PhotonicModel PhotonicModel::tight_binding(int modes, double center, double hopping,
                                           double coupling) {
  PhotonicModel m;
  m.kind = ModelKind::TightBinding;
  m.length = modes;
  m.mode_count = modes;
  m.center = center;
  m.bandwidth = hopping;
  m.coupling = coupling;
  m.validate();
  return m;
}

void PhotonicModel::validate() const {
  if (mode_count <= 0) reject("mode_count", "must be positive");
  if (mode_count % 2 != 0) reject("mode_count", "must be even");
  if (!(length > 0.0)) reject("length", "must be positive");
  if (!(coupling >= 0.0)) reject("coupling", "must be non-negative");
  switch (kind) {
    case ModelKind::GaplessChain:
      if (std::abs(cutoff * length - mode_count) > 1e-9 * mode_count)
        reject("cutoff", "must equal N/L for the gapless chain");
      break;
    case ModelKind::ExponentialContinuum:
      if (!(cutoff > 0.0)) reject("cutoff", "must be positive");
      break;
    case ModelKind::ConstantSpectrum:
      if (!(bandwidth > 0.0))
        reject("bandwidth", "constant spectrum needs explicit band limits");
      if (!(center - bandwidth >= 0.0)) reject("center", "band must lie at w >= 0");
      break;
    case ModelKind::PhotonicCrystal:
    case ModelKind::TightBinding:
      if (!(bandwidth > 0.0)) reject("bandwidth", "must be positive");
      if (!(center - bandwidth >= 0.0)) reject("center", "band must lie at w >= 0");
      if (length != mode_count) reject("length", "lattice models use L = N sites");
      break;
  }
}

bool PhotonicModel::is_lattice() const {
  return kind == ModelKind::GaplessChain || banded(kind);
}

double PhotonicModel::lattice_spacing() const { return length / mode_count; }

Band PhotonicModel::band() const {
  switch (kind) {
    case ModelKind::GaplessChain: return {0.0, 2.0 * cutoff};
    case ModelKind::ExponentialContinuum:
      return {0.0, std::numeric_limits<double>::infinity()};
    case ModelKind::ConstantSpectrum:
    case ModelKind::PhotonicCrystal:
    case ModelKind::TightBinding: return {center - bandwidth, center + bandwidth};
  }
  return {};
}

double PhotonicModel::momentum_cutoff() const { return kPi * mode_count / length; }

double PhotonicModel::dispersion(double k) const {
  switch (kind) {
    case ModelKind::GaplessChain:
      return 2.0 * cutoff * std::abs(std::sin(0.5 * k * lattice_spacing()));
    case ModelKind::ExponentialContinuum: return std::abs(k);
    case ModelKind::ConstantSpectrum:
      return center - bandwidth + 2.0 * bandwidth * std::abs(k) / momentum_cutoff();
    case ModelKind::PhotonicCrystal:
    case ModelKind::TightBinding: return center - bandwidth * std::cos(k);
  }
  return 0.0;
}

double PhotonicModel::dispersion_difference(double k, double k_ref) const {
  switch (kind) {
    case ModelKind::GaplessChain: {
      const double q = 0.25 * lattice_spacing();
      return 4.0 * cutoff * std::cos((k_ref + k) * q) * std::sin((k_ref - k) * q);
    }
    case ModelKind::ExponentialContinuum: return k_ref - k;
    case ModelKind::ConstantSpectrum: return max_group_velocity() * (k_ref - k);
    case ModelKind::PhotonicCrystal:
    case ModelKind::TightBinding:
      return 2.0 * bandwidth * std::sin(0.5 * (k_ref + k)) * std::sin(0.5 * (k_ref - k));
  }
  return 0.0;
}

double PhotonicModel::momentum_at(double omega) const {
  const Band b = band();
  if (omega < b.lo || omega > b.hi) {
    std::ostringstream os;
    os << "frequency " << omega << " outside the band of " << to_string(kind);
    throw InvalidArgument(os.str());
  }
  switch (kind) {
    case ModelKind::GaplessChain:
      return 2.0 / lattice_spacing() * std::asin(omega / (2.0 * cutoff));
    case ModelKind::ExponentialContinuum: return omega;
    case ModelKind::ConstantSpectrum:
      return (omega - b.lo) * momentum_cutoff() / (2.0 * bandwidth);
    case ModelKind::PhotonicCrystal:
    case ModelKind::TightBinding: return std::acos((center - omega) / bandwidth);
  }
  return 0.0;
}

double PhotonicModel::coupling_weight(double k) const {
  const double g2 = coupling * coupling;
  switch (kind) {
    case ModelKind::GaplessChain:
    case ModelKind::PhotonicCrystal: return g2 * dispersion(k);
    case ModelKind::ExponentialContinuum: {
      const double w = std::abs(k);
      return g2 * w * std::exp(-w / cutoff);
    }
    case ModelKind::ConstantSpectrum: return g2 * max_group_velocity();
    case ModelKind::TightBinding: return 2.0 * g2;
  }
  return 0.0;
}

double PhotonicModel::max_group_velocity() const {
  switch (kind) {
    case ModelKind::GaplessChain:
    case ModelKind::ExponentialContinuum: return kSpeedOfLight;
    case ModelKind::ConstantSpectrum: return 2.0 * bandwidth / momentum_cutoff();
    case ModelKind::PhotonicCrystal:
    case ModelKind::TightBinding: return bandwidth;
  }
  return kSpeedOfLight;
}

double PhotonicModel::revival_time() const { return length / max_group_velocity(); }

QubitArray QubitArray::single(double gap, double position) {
  return QubitArray{{gap}, {position}};
}

QubitArray QubitArray::pair(double gap, double separation, double first_position) {
  return QubitArray{{gap, gap}, {first_position, first_position + separation}};
}

void QubitArray::validate(const PhotonicModel& model) const {
  if (gaps.empty()) throw InvalidArgument("qubits.gaps: at least one qubit required");
  if (gaps.size() != positions.size())
    throw InvalidArgument("qubits.positions: one position per gap required");
  for (double gap : gaps) {
    if (!(gap > 0.0)) throw InvalidArgument("qubits.gaps: gaps must be positive");
  }
  if (model.is_lattice()) {
    for (double x : positions) {
      if (x < 0.0 || x >= model.length)
        throw InvalidArgument("qubits.positions: positions must lie in [0, L)");
    }
  }
}

complex mode_coupling(const PhotonicModel& model, double k, double position) {
  // The coupled-cavity toy model writes its couplings with exp(-i k x).
  const double phase_sign = model.kind == ModelKind::TightBinding ? -1.0 : 1.0;
  const double magnitude = std::sqrt(model.coupling_weight(k) / (2.0 * model.length));
  return std::polar(magnitude, phase_sign * k * position);
}

ModeSet build_modes(const PhotonicModel& model, const QubitArray& qubits) {
  model.validate();
  qubits.validate(model);
  const int half = model.mode_count / 2;
  const std::size_t count = static_cast<std::size_t>(model.mode_count) + 1;

  ModeSet modes;
  modes.qubit_count = qubits.size();
  modes.length = model.length;
  modes.momenta.resize(count);
  modes.frequencies.resize(count);
  modes.couplings.resize(count * qubits.size());
  for (int j = -half; j <= half; ++j) {
    const std::size_t idx = static_cast<std::size_t>(j + half);
    const double k = kTwoPi * j / model.length;
    modes.momenta[idx] = k;
    modes.frequencies[idx] = model.dispersion(k);
    for (std::size_t s = 0; s < qubits.size(); ++s)
      modes.couplings[s * count + idx] = mode_coupling(model, k, qubits.positions[s]);
  }
  return modes;
}

double spectral_density(const PhotonicModel& model, double omega) {
  if (!model.band().contains(omega)) return 0.0;
  const double k = model.momentum_at(omega);
  return model.spectral_prefactor * model.coupling_weight(k) / group_velocity(model, omega);
}

double group_velocity(const PhotonicModel& model, double omega) {
  const Band b = model.band();
  auto edge = [&] {
    std::ostringstream os;
    os << "group velocity requested at or beyond the band edge (w = " << omega
       << "), where the density of states diverges";
    throw InvalidArgument(os.str());
  };
  switch (model.kind) {
    case ModelKind::GaplessChain: {
      if (omega < 0.0 || omega >= b.hi) edge();
      const double x = omega / b.hi;
      return model.cutoff * model.lattice_spacing() * std::sqrt(1.0 - x * x);
    }
    case ModelKind::ExponentialContinuum:
      if (omega < 0.0) edge();
      return kSpeedOfLight;
    case ModelKind::ConstantSpectrum:
      if (omega < b.lo || omega > b.hi) edge();
      return model.max_group_velocity();
    case ModelKind::PhotonicCrystal:
    case ModelKind::TightBinding: {
      if (!b.contains(omega)) edge();
      const double x = omega - model.center;
      return std::sqrt(model.bandwidth * model.bandwidth - x * x);
    }
  }
  return 0.0;
}

}  // namespace wqed
