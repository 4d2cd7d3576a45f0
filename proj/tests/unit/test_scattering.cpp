#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "wqed/errors.hpp"
#include "wqed/markov.hpp"
#include "wqed/scattering.hpp"

using namespace wqed;

namespace {

const PhotonicModel kExp = PhotonicModel::exponential_continuum(10.0, 0.04);

// (1/2pi) \int_0^inf J(w) cos(w d) / (E - w) dw for Im E != 0, by a fixed
// 61-point Kronrod rule on fine panels.
complex first_sheet(complex e, double d) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto f = [&](double w) {
    return spectral_density(kExp, w) * std::cos(w * d) / (e - w) / kTwoPi;
  };
  complex sum = 0.0;
  double lo = 0.0;
  while (lo < 500.0) {
    const double hi = lo + (lo < 4.0 ? 0.02 : 1.0);
    sum += complex(Rule::integrate([&](double w) { return f(w).real(); }, lo, hi, 0, 0.0),
                   Rule::integrate([&](double w) { return f(w).imag(); }, lo, hi, 0, 0.0));
    lo = hi;
  }
  return sum;
}

}  // namespace

TEST_CASE("zero coupling") {
  const auto model = PhotonicModel::exponential_continuum(10.0, 0.0, 200.0, 400);
  const auto qubits = QubitArray::pair(1.0, 2.0);
  for (auto method : {SelfEnergyMethod::continuum, SelfEnergyMethod::mode_sum}) {
    ScatteringOptions opts;
    opts.method = method;
    const Scatterer sc(model, qubits, opts);
    CHECK(sc.self_energy(1.0).isZero(0.0));
    const auto h = sc.hamiltonian(1.0);
    CHECK(h.matrix(0, 0) == complex(1.0));
    CHECK(h.matrix(1, 1) == complex(1.0));
    CHECK(h.matrix(0, 1) == complex(0.0));
    CHECK(sc.amplitudes(1.2).qubits.isZero(0.0));
    for (auto e : sc.resonances()) CHECK(e == complex(1.0));
  }
}

TEST_CASE("single qubit: closed-form self energy equals the Markov constants") {
  const auto sc = lamb_shift_self_consistent(kExp, 1.0);
  const complex sigma = continuum_self_energy(kExp, sc.delta_prime, 0.0);
  CHECK(sigma.real() == doctest::Approx(sc.lamb_shift).epsilon(1e-10));
  CHECK(sigma.imag() == doctest::Approx(-0.5 * sc.gamma).epsilon(1e-10));
  for (double d : {0.5 * kLambda0, kLambda0, 2.0 * kLambda0, 0.3}) {
    const complex m = markov_integral(kExp, 1.0, d);
    const complex s = continuum_self_energy(kExp, 1.0, d);
    CAPTURE(d);
    CHECK(std::abs(s - m) < 1e-8 * std::abs(m));
  }
}

TEST_CASE("closed-form continuation below the real axis") {
  // Second sheet: Sigma_II(E) = Sigma_I(E) - i J(E) cos(E d), with J
  // continued analytically.
  for (double d : {0.0, 0.7, 3.0}) {
    for (complex e : {complex(1.0, -0.05), complex(2.5, -0.2), complex(0.4, -0.01)}) {
      const double g2 = kExp.coupling * kExp.coupling;
      const complex j = g2 * e * std::exp(-e / kExp.cutoff);
      const complex oracle = first_sheet(e, d) - kI * j * std::cos(e * d);
      const complex value = continuum_self_energy(kExp, e, d);
      CAPTURE(d);
      CAPTURE(e);
      CHECK(std::abs(value - oracle) < 1e-9 * std::abs(oracle));
    }
    // Upper half plane stays on the physical sheet.
    const complex up(1.0, 0.05);
    CHECK(std::abs(continuum_self_energy(kExp, up, d) - first_sheet(up, d)) <
          1e-9 * std::abs(first_sheet(up, d)));
  }
}

TEST_CASE("toy models") {
  const auto flat = PhotonicModel::constant_spectrum(1.0, 0.5, 0.04);
  const complex s = continuum_self_energy(flat, 1.0, 0.0);
  CHECK(s.real() == doctest::Approx(0.0).epsilon(1e-16));
  CHECK(s.imag() == doctest::Approx(-0.5 * 0.0016).epsilon(1e-14));
  CHECK(std::abs(continuum_self_energy(flat, 1.2, 0.0) - markov_integral(flat, 1.2)) < 1e-12);
  const auto roots = resonances(flat, QubitArray::single(1.0));
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(roots[0].imag() < 0.0);

  const auto tb = PhotonicModel::tight_binding(400, 1.0, 0.5, 0.04);
  for (double e : {0.7, 1.0, 1.3, 0.2, 1.8}) {
    const complex expected = -kI * tight_binding_self_energy(e, 1.0, 0.5, 0.04);
    CAPTURE(e);
    CHECK(std::abs(continuum_self_energy(tb, e, 0.0) - expected) < 1e-15);
  }
  CHECK_THROWS_AS(continuum_self_energy(PhotonicModel::photonic_crystal(800, 1.0, 0.5, 0.04),
                                        complex(1.0, -0.01), 0.0),
                  InvalidArgument);
}

TEST_CASE("mode sum: two routes to the same discrete constant") {
  const auto chain = PhotonicModel::gapless_chain(20.0 * kLambda0, 800, 0.04);
  const auto qubits = QubitArray::pair(1.0, kLambda0);
  ScatteringOptions opts;
  opts.method = SelfEnergyMethod::mode_sum;
  const Scatterer sc(chain, qubits, opts);
  const auto spec = KernelSpec::mode_sum(chain);
  const Eigen::MatrixXcd sigma = sc.self_energy(1.0);
  CHECK(std::abs(sigma(0, 0) - markov_integral(spec, 1.0, 0.0)) < 1e-12);
  CHECK(std::abs(sigma(0, 1) - markov_integral(spec, 1.0, kLambda0)) < 1e-12);
  CHECK(std::abs(sigma(0, 1) - sigma(1, 0)) < 1e-15);
  // And the continuum limit within the finite-eps smearing.
  const Eigen::MatrixXcd cont = continuum_self_energy(chain, qubits, 1.0);
  CHECK(std::abs(sigma(0, 0) - cont(0, 0)) < 0.05 * std::abs(cont(0, 0)));

  const auto modes = build_modes(chain, QubitArray::single(1.0));
  CHECK_THROWS_AS(self_energy_matrix(modes, modes.frequencies[3], 0.0), InvalidArgument);
}

TEST_CASE("two qubits: effective Hamiltonian against the Markov parameters") {
  const auto qubits = QubitArray::pair(1.0, kLambda0);
  const auto p = two_qubit_params(kExp, 1.0, kLambda0, LambScheme::self_consistent);
  const auto h = effective_hamiltonian(kExp, qubits, p.delta_prime);
  CHECK(h.matrix(0, 1) == h.matrix(1, 0));
  // Sigma_12 = g12 - i gamma12 / 2.
  CHECK(h.matrix(0, 1).real() == doctest::Approx(p.g12).epsilon(0.02));
  CHECK(-2.0 * h.matrix(0, 1).imag() == doctest::Approx(p.gamma12).epsilon(0.02));
  const auto closed = two_qubit_closed_form(0.04, 1.0, 10.0, 15.0);
  const complex s12 = continuum_self_energy(kExp, 1.0, 15.0);
  CHECK(s12.real() == doctest::Approx(closed.g12).epsilon(1e-9));
  CHECK(-2.0 * s12.imag() == doctest::Approx(closed.gamma12).epsilon(1e-9));
}

TEST_CASE("scattering spectrum peaks at the renormalized gap") {
  const auto sq = lamb_shift_self_consistent(kExp, 1.0);
  const Scatterer sc(kExp, QubitArray::single(1.0));
  double best_e = 0.0;
  double best = 0.0;
  for (double e = 0.99; e <= 1.005; e += 1e-5) {
    const double p = std::norm(sc.amplitudes(e).qubits(0));
    if (p > best) {
      best = p;
      best_e = e;
    }
  }
  CHECK(std::abs(best_e - sq.delta_prime) < 0.1 * sq.gamma);
  CHECK(std::abs(best_e - 1.0) > sq.gamma);
  // Half maximum at +- gamma / 2.
  const double half = std::norm(sc.amplitudes(sq.delta_prime + 0.5 * sq.gamma).qubits(0));
  CHECK(half / std::norm(sc.amplitudes(sq.delta_prime).qubits(0)) ==
        doctest::Approx(0.5).epsilon(0.02));

  // Born is accurate far from resonance and badly wrong on it.
  const auto off = sc.amplitudes(1.5);
  CHECK(std::abs(off.born(0) - off.qubits(0)) < 0.01 * std::abs(off.qubits(0)));
  const auto on = sc.amplitudes(sq.delta_prime);
  CHECK(std::abs(on.born(0) - on.qubits(0)) > 0.5 * std::abs(on.qubits(0)));
}

TEST_CASE("resonances") {
  const auto sq = lamb_shift_self_consistent(kExp, 1.0);
  const auto roots = resonances(kExp, QubitArray::single(1.0));
  REQUIRE(roots.size() == 1);
  const complex e = roots[0];
  CHECK(e.real() == doctest::Approx(0.99708).epsilon(1e-5));
  CHECK(std::abs(e.real() - sq.delta_prime) < 1e-5);
  CHECK(-2.0 * e.imag() == doctest::Approx(sq.gamma).epsilon(0.01));
  CHECK(std::abs(e - 1.0 - continuum_self_energy(kExp, e, 0.0)) < 1e-13);

  // k'd = pi: one channel strongly subradiant, widths gamma +- gamma12.
  const double d = kPi / sq.delta_prime;
  const auto p = two_qubit_params(kExp, 1.0, d, LambScheme::self_consistent);
  auto pair = resonances(kExp, QubitArray::pair(1.0, d));
  REQUIRE(pair.size() == 2);
  std::vector<double> widths = {-2.0 * pair[0].imag(), -2.0 * pair[1].imag()};
  std::sort(widths.begin(), widths.end());
  std::vector<double> rates = {p.gamma_plus, p.gamma_minus};
  std::sort(rates.begin(), rates.end());
  CHECK(widths[0] < 0.05 * sq.gamma);
  CHECK(std::abs(widths[0] - rates[0]) < 0.02 * sq.gamma);
  CHECK(widths[1] == doctest::Approx(rates[1]).epsilon(0.02));

  // Continuity under a 1% change of g.
  const auto nudged = resonances(PhotonicModel::exponential_continuum(10.0, 0.0404),
                                 QubitArray::pair(1.0, d));
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(nudged[i] - pair[i]) < 0.1 * sq.gamma);
}

TEST_CASE("resolvent identities on a small mode set") {
  const auto model = PhotonicModel::gapless_chain(8.0, 8, 0.3);
  const auto qubits = QubitArray::pair(1.0, 2.0);
  const auto modes = build_modes(model, qubits);
  const std::size_t S = 2;
  const std::size_t M = modes.size();
  const std::size_t n = S + M;
  Eigen::MatrixXcd h0 = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t s = 0; s < S; ++s) h0(s, s) = qubits.gaps[s];
  for (std::size_t k = 0; k < M; ++k) h0(S + k, S + k) = modes.frequencies[k];
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t k = 0; k < M; ++k) {
      v(s, S + k) = modes.coupling(s, k);
      v(S + k, s) = std::conj(modes.coupling(s, k));
    }
  }
  const complex z(1.1, 0.07);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd g0 = (z * id - h0).inverse();
  const Eigen::MatrixXcd g = (z * id - h0 - v).inverse();
  CHECK(((id + g * v) * (id - g0 * v) - id).cwiseAbs().maxCoeff() < 1e-10);
  // The qubit block of G is (z - H(z))^-1 with H built from the mode-sum self energy.
  Eigen::MatrixXcd heff = self_energy_matrix(modes, z, 0.0);
  for (std::size_t s = 0; s < S; ++s) heff(s, s) += qubits.gaps[s];
  const Eigen::MatrixXcd block = (z * Eigen::MatrixXcd::Identity(S, S) - heff).inverse();
  CHECK((g.topLeftCorner(S, S) - block).cwiseAbs().maxCoeff() < 1e-10);
}
