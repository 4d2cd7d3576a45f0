#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "wqed/photonic_models.hpp"

namespace wqed {

enum class SelfEnergyMethod {
  /// Closed forms (exponential continuum, constant spectrum, tight binding at
  /// d = 0) continued to complex energies; principal-value quadrature on the
  /// real axis for everything else.
  continuum,
  /// sum_k g_sk g*_rk / (E + i eps - w_k) over the discrete mode table.
  mode_sum,
};

struct ScatteringOptions {
  SelfEnergyMethod method = SelfEnergyMethod::continuum;
  /// eps for mode sums; zero selects 5 x the mode spacing at the probe.
  double regularizer = 0.0;
  int max_newton_iterations = 50;
  double newton_tolerance = 1e-13;
};

/// H(E) = diag(D_s) + Sigma(E).
struct EffectiveHamiltonian {
  Eigen::MatrixXcd matrix;
  complex energy;
  double regularizer = 0.0;
};

struct ScatteringResult {
  double energy = 0.0;
  double momentum = 0.0;
  Eigen::VectorXcd qubits;  // c = (E+ - H(E))^-1 g*_k0
  Eigen::VectorXcd born;    // c_s = g*_s,k0 / (E+ - D_s)
  /// psi_k = sum_s g*_sk c_s / (E+ - w_k); mode-sum method only.
  std::vector<complex> photons;
};

/// Sigma_sr(E) = sum_k g_sk g*_rk / (E + i eps - w_k). Rejects E on a mode at eps = 0.
Eigen::MatrixXcd self_energy_matrix(const ModeSet& modes, complex energy, double regularizer);

/// Continuum Sigma(E; d) = M(E; d) continued from the upper rim of the real
/// axis. Diagonal entries use d = 0; the sign convention is Sigma_12 = g12 - i gamma12/2.
complex continuum_self_energy(const PhotonicModel& model, complex energy, double separation);
Eigen::MatrixXcd continuum_self_energy(const PhotonicModel& model, const QubitArray& qubits,
                                       complex energy);

/// Energy-resolved effective Hamiltonian of a fixed medium and qubit array.
class Scatterer {
 public:
  Scatterer(const PhotonicModel& model, const QubitArray& qubits,
            const ScatteringOptions& options = {});

  double regularizer_at(double energy) const;
  Eigen::MatrixXcd self_energy(complex energy) const;
  EffectiveHamiltonian hamiltonian(complex energy) const;
  /// Incoming photon of momentum k0 at E = w(k0).
  ScatteringResult amplitudes(double k0) const;
  /// Roots of det(E - H(E)) by Newton iteration from the eigenvalues of H(D).
  std::vector<complex> resonances() const;

  const PhotonicModel& model() const { return model_; }
  const QubitArray& qubits() const { return qubits_; }

 private:
  PhotonicModel model_;
  QubitArray qubits_;
  ScatteringOptions options_;
  std::shared_ptr<const ModeSet> modes_;
};

EffectiveHamiltonian effective_hamiltonian(const PhotonicModel& model, const QubitArray& qubits,
                                           complex energy, const ScatteringOptions& options = {});
ScatteringResult scattering_amplitudes(const PhotonicModel& model, const QubitArray& qubits,
                                       double k0, const ScatteringOptions& options = {});
std::vector<complex> resonances(const PhotonicModel& model, const QubitArray& qubits,
                                const ScatteringOptions& options = {});

}  // namespace wqed
