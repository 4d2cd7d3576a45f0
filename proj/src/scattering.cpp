#include "wqed/scattering.hpp"

#include <cmath>
#include <sstream>

#include "wqed/errors.hpp"
#include "wqed/markov.hpp"
#include "wqed/special_functions.hpp"

namespace wqed {

Eigen::MatrixXcd self_energy_matrix(const ModeSet& modes, complex energy, double regularizer) {
  if (regularizer < 0.0) throw InvalidArgument("self_energy_matrix: regularizer must be >= 0");
  const std::size_t S = modes.qubit_count;
  const std::size_t M = modes.size();
  const complex e_plus = energy + complex(0.0, regularizer);
  Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(S, S);
  for (std::size_t k = 0; k < M; ++k) {
    const complex denom = e_plus - modes.frequencies[k];
    if (denom == complex(0.0)) {
      std::ostringstream os;
      os << "self_energy_matrix: E = " << energy.real() << " sits on mode " << k
         << " with no regularizer";
      throw InvalidArgument(os.str());
    }
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t r = 0; r < S; ++r)
        sigma(s, r) += modes.coupling(s, k) * std::conj(modes.coupling(r, k)) / denom;
  }
  return sigma;
}

namespace {

// -i \int_0^inf [K(t; d) + K(t; -d)] e^{iEt} dt for K = C / (a + i(t + d))^2,
// continued off the real axis. Each direction contributes
//   -C [1/w0 + E e^{-E w0} (E1(-E w0) + 2 pi i n)],   w0 = a + i d,
// with n = 1 when the time path crosses the E1 cut (d < 0) and shifted by
// +-1 when complex E moves -E w0 across the cut from the real-axis side.
complex exponential_self_energy(const PhotonicModel& m, complex energy, double separation) {
  const double c = m.coupling * m.coupling / (4.0 * kPi);
  const double a = 1.0 / m.cutoff;
  complex sum = 0.0;
  for (double sigma : {1.0, -1.0}) {
    const double d = sigma * separation + 0.0;
    const complex w0(a, d);
    const complex z = -energy * w0;
    const complex z_real = -energy.real() * w0;
    double n = d < 0.0 ? 1.0 : 0.0;
    if (z.real() < 0.0) {
      const bool below_on_axis = std::signbit(z_real.imag());
      const bool below_now = std::signbit(z.imag());
      if (below_on_axis && !below_now) n += 1.0;
      if (!below_on_axis && below_now) n -= 1.0;
    }
    const complex tail = scaled_expint_e1(z) + complex(0.0, kTwoPi * n) * std::exp(z);
    sum += 1.0 / w0 + energy * tail;
  }
  return -c * sum;
}

// (g^2 / 2 pi) [Log(E - lo) - Log(E - hi)] on the sheet reached from above the band.
complex constant_self_energy(const PhotonicModel& m, complex energy) {
  const Band b = m.band();
  const complex above = energy.imag() == 0.0 ? complex(energy.real(), 0.0) : energy;
  complex value = std::log(above - b.lo) - std::log(above - b.hi);
  if (energy.imag() < 0.0 && energy.real() > b.lo && energy.real() < b.hi)
    value -= complex(0.0, kTwoPi);
  return m.coupling * m.coupling / kTwoPi * value;
}

// -i g^2 / sqrt(J^2 - (E - w0)^2), with (E - w0 + i0) on the real axis.
complex tight_binding_sigma(const PhotonicModel& m, complex energy) {
  const complex x = energy - m.center;
  const complex root = std::sqrt(m.bandwidth * m.bandwidth - x * x);
  if (root == complex(0.0)) throw InvalidArgument("self energy: probe on a band edge");
  return -kI * m.coupling * m.coupling / root;
}

}  // namespace

complex continuum_self_energy(const PhotonicModel& model, complex energy, double separation) {
  if (model.coupling == 0.0) return 0.0;
  switch (model.kind) {
    case ModelKind::ExponentialContinuum:
      return exponential_self_energy(model, energy, separation);
    case ModelKind::ConstantSpectrum:
      if (separation == 0.0) return constant_self_energy(model, energy);
      break;
    case ModelKind::TightBinding:
      if (separation == 0.0) return tight_binding_sigma(model, energy);
      break;
    default: break;
  }
  if (energy.imag() != 0.0) {
    std::ostringstream os;
    os << "continuum self energy: no closed form for " << to_string(model.kind)
       << " at d = " << separation << "; complex energies need the mode-sum method";
    throw InvalidArgument(os.str());
  }
  return markov_integral(model, energy.real(), separation);
}

Eigen::MatrixXcd continuum_self_energy(const PhotonicModel& model, const QubitArray& qubits,
                                       complex energy) {
  const std::size_t S = qubits.size();
  Eigen::MatrixXcd sigma(S, S);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t r = s; r < S; ++r) {
      const double d = std::abs(qubits.positions[r] - qubits.positions[s]);
      sigma(s, r) = continuum_self_energy(model, energy, d);
      sigma(r, s) = sigma(s, r);
    }
  }
  return sigma;
}

Scatterer::Scatterer(const PhotonicModel& model, const QubitArray& qubits,
                     const ScatteringOptions& options)
    : model_(model), qubits_(qubits), options_(options) {
  model_.validate();
  qubits_.validate(model_);
  if (qubits_.size() == 0 || qubits_.size() > 4)
    throw InvalidArgument("scattering: between 1 and 4 qubits supported");
  if (options_.method == SelfEnergyMethod::mode_sum)
    modes_ = std::make_shared<const ModeSet>(build_modes(model_, qubits_));
}

double Scatterer::regularizer_at(double energy) const {
  if (options_.method == SelfEnergyMethod::continuum) return 0.0;
  return options_.regularizer > 0.0 ? options_.regularizer : default_regularizer(model_, energy);
}

Eigen::MatrixXcd Scatterer::self_energy(complex energy) const {
  if (options_.method == SelfEnergyMethod::mode_sum)
    return self_energy_matrix(*modes_, energy, regularizer_at(energy.real()));
  return continuum_self_energy(model_, qubits_, energy);
}

EffectiveHamiltonian Scatterer::hamiltonian(complex energy) const {
  EffectiveHamiltonian h;
  h.energy = energy;
  h.regularizer = regularizer_at(energy.real());
  h.matrix = self_energy(energy);
  for (std::size_t s = 0; s < qubits_.size(); ++s) h.matrix(s, s) += qubits_.gaps[s];
  return h;
}

ScatteringResult Scatterer::amplitudes(double k0) const {
  const double energy = model_.dispersion(k0);
  if (!model_.band().contains(energy)) {
    std::ostringstream os;
    os << "scattering_amplitudes: E = w(k0) = " << energy << " outside the band";
    throw InvalidArgument(os.str());
  }
  const std::size_t S = qubits_.size();
  const EffectiveHamiltonian h = hamiltonian(energy);
  const complex e_plus(energy, h.regularizer);
  Eigen::VectorXcd source(S);
  for (std::size_t s = 0; s < S; ++s)
    source(s) = std::conj(mode_coupling(model_, k0, qubits_.positions[s]));

  ScatteringResult out;
  out.energy = energy;
  out.momentum = k0;
  const Eigen::MatrixXcd a = e_plus * Eigen::MatrixXcd::Identity(S, S) - h.matrix;
  const auto lu = a.fullPivLu();
  if (!lu.isInvertible()) throw NumericalError("scattering_amplitudes: E+ - H is singular");
  out.qubits = lu.solve(source);
  out.born.resize(S);
  for (std::size_t s = 0; s < S; ++s) out.born(s) = source(s) / (e_plus - qubits_.gaps[s]);
  if (modes_) {
    out.photons.resize(modes_->size());
    for (std::size_t k = 0; k < modes_->size(); ++k) {
      complex acc = 0.0;
      for (std::size_t s = 0; s < S; ++s) acc += std::conj(modes_->coupling(s, k)) * out.qubits(s);
      out.photons[k] = acc / (e_plus - modes_->frequencies[k]);
    }
  }
  return out;
}

std::vector<complex> Scatterer::resonances() const {
  const std::size_t S = qubits_.size();
  if (model_.coupling == 0.0) {
    std::vector<complex> bare(qubits_.gaps.begin(), qubits_.gaps.end());
    return bare;
  }
  double reference = 0.0;
  for (double g : qubits_.gaps) reference += g / static_cast<double>(S);
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> seeds(hamiltonian(reference).matrix);
  if (seeds.info() != Eigen::Success) throw NumericalError("resonances: seed eigenproblem failed");

  auto det = [&](complex e) {
    const Eigen::MatrixXcd a = e * Eigen::MatrixXcd::Identity(S, S) - hamiltonian(e).matrix;
    return a.determinant();
  };
  std::vector<complex> roots;
  // Roots already found are divided out so the remaining seeds cannot return to them.
  auto deflated = [&](complex e) {
    complex f = det(e);
    for (auto r : roots) f /= (e - r);
    return f;
  };
  for (Eigen::Index i = 0; i < seeds.eigenvalues().size(); ++i) {
    complex e = seeds.eigenvalues()(i);
    bool converged = false;
    for (int it = 0; it < options_.max_newton_iterations; ++it) {
      const double h = 1e-6 * std::max(1.0, std::abs(e));
      const complex f = deflated(e);
      if (f == complex(0.0)) {
        converged = true;
        break;
      }
      const complex df = (deflated(e + h) - deflated(e - h)) / (2.0 * h);
      if (df == complex(0.0)) break;
      const complex step = f / df;
      e -= step;
      if (std::abs(step) <= options_.newton_tolerance * std::max(1.0, std::abs(e))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "resonances: Newton did not converge from seed " << seeds.eigenvalues()(i) << " in "
         << options_.max_newton_iterations << " iterations";
      throw NumericalError(os.str());
    }
    roots.push_back(e);
  }
  return roots;
}

EffectiveHamiltonian effective_hamiltonian(const PhotonicModel& model, const QubitArray& qubits,
                                           complex energy, const ScatteringOptions& options) {
  return Scatterer(model, qubits, options).hamiltonian(energy);
}

ScatteringResult scattering_amplitudes(const PhotonicModel& model, const QubitArray& qubits,
                                       double k0, const ScatteringOptions& options) {
  return Scatterer(model, qubits, options).amplitudes(k0);
}

std::vector<complex> resonances(const PhotonicModel& model, const QubitArray& qubits,
                                const ScatteringOptions& options) {
  return Scatterer(model, qubits, options).resonances();
}

}  // namespace wqed
