#include <doctest.h>

#include <cmath>

#include "wqed/errors.hpp"
#include "wqed/markov.hpp"

using namespace wqed;

namespace {

const PhotonicModel kExp = PhotonicModel::exponential_continuum(10.0, 0.04);

// mpmath, 30 digits: delta from the Ei closed form, and its fixed point.
constexpr double kDeltaAtOne = -0.00292039943331115;
constexpr double kGammaAtOne = 0.0014477398688575353;
constexpr double kFixedGap = 0.99707984095185701;
constexpr double kFixedGamma = 0.0014439338282649855;

void check_recombination(const MarkovParameters& p) {
  CHECK(p.delta_prime == 0.5 * (p.delta_plus + p.delta_minus));
  CHECK(p.gamma == 0.5 * (p.gamma_plus + p.gamma_minus));
  CHECK(p.g12 == 0.5 * (p.delta_plus - p.delta_minus));
  CHECK(p.gamma12 == 0.5 * (p.gamma_plus - p.gamma_minus));
  CHECK(p.gamma_plus >= 0.0);
  CHECK(p.gamma_minus >= 0.0);
}

}  // namespace

TEST_CASE("single-qubit closed form") {
  const auto r = single_qubit_closed_form(0.04, 1.0, 10.0);
  CHECK(r.gamma == doctest::Approx(kGammaAtOne).epsilon(1e-14));
  CHECK(r.lamb_shift == doctest::Approx(kDeltaAtOne).epsilon(1e-13));
  const auto zero = single_qubit_closed_form(0.0, 1.0, 10.0);
  CHECK(zero.gamma == 0.0);
  CHECK(zero.lamb_shift == 0.0);
  // Linear divergence with the cutoff.
  const double slope = (single_qubit_closed_form(0.04, 1.0, 200.0).lamb_shift -
                        single_qubit_closed_form(0.04, 1.0, 100.0).lamb_shift) /
                       100.0;
  CHECK(slope == doctest::Approx(-0.0016 / kTwoPi).epsilon(0.02));
}

TEST_CASE("markov integral of the exponential continuum") {
  const complex m = markov_integral(kExp, 1.0, 0.0);
  CHECK(m.real() == doctest::Approx(kDeltaAtOne).epsilon(1e-11));
  CHECK(m.imag() == doctest::Approx(-0.5 * kGammaAtOne).epsilon(1e-13));
  CHECK(markov_integral(KernelSpec::closed_form(kExp), 1.0, 0.0) == m);
  CHECK(markov_integral(PhotonicModel::exponential_continuum(10.0, 0.0), 1.0, 2.0) ==
        complex(0.0));
  for (double wc : {1.0, 3.0, 30.0, 100.0}) {
    for (double probe : {0.3, 1.0, 2.5}) {
      const auto model = PhotonicModel::exponential_continuum(wc, 0.04);
      const auto closed = single_qubit_closed_form(0.04, probe, wc);
      CAPTURE(wc);
      CAPTURE(probe);
      CHECK(markov_integral(model, probe, 0.0).real() ==
            doctest::Approx(closed.lamb_shift).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(markov_integral(kExp, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("markov integral for banded media against mpmath") {
  const auto pc = PhotonicModel::photonic_crystal(800, 1.0, 0.5, 0.04);
  const complex inside = markov_integral(pc, 1.1, 0.0);
  CHECK(inside.real() == doctest::Approx(-0.0008).epsilon(1e-10));
  CHECK(inside.imag() == doctest::Approx(-0.5 * 0.0035925849560819945).epsilon(1e-13));
  CHECK(markov_integral(pc, 1.1, 3.0).real() == doctest::Approx(-0.0014784).epsilon(1e-10));
  const complex outside = markov_integral(pc, 1.7, 0.0);
  CHECK(outside.real() == doctest::Approx(0.0019760883751542685).epsilon(1e-10));
  CHECK(outside.imag() == 0.0);

  const auto chain = PhotonicModel::gapless_chain(40.0 * kPi, 800, 0.04);
  const complex c = markov_integral(chain, 1.0, 0.0);
  CHECK(c.real() == doctest::Approx(-0.0059194885870244958).epsilon(1e-10));
  CHECK(-2.0 * c.imag() == doctest::Approx(0.0016049577504502994).epsilon(1e-13));
}

TEST_CASE("toy models: no individual Lamb shift") {
  const auto flat = PhotonicModel::constant_spectrum(1.0, 0.5, 0.04);
  const complex m = markov_integral(flat, 1.0, 0.0);
  CHECK(std::abs(m.real()) < 1e-10);
  CHECK(m.imag() == doctest::Approx(-0.0008).epsilon(1e-14));
  CHECK(lamb_shift_self_consistent(flat, 1.0).delta_prime == doctest::Approx(1.0).epsilon(1e-12));

  const auto tb = PhotonicModel::tight_binding(800, 1.0, 0.5, 0.04);
  for (double probe : {0.7, 1.0, 1.35}) {
    const complex self = tight_binding_self_energy(probe, 1.0, 0.5, 0.04);
    const complex m_tb = markov_integral(tb, probe, 0.0);
    // i M = \int_0^inf K e^{i D t} dt.
    CHECK(std::abs(kI * m_tb - self) < 1e-12 * std::abs(self));
    CHECK(std::abs(m_tb.real()) < 1e-12);
  }
  for (double probe : {0.3, 1.8}) {
    const complex self = tight_binding_self_energy(probe, 1.0, 0.5, 0.04);
    CHECK(std::abs(kI * markov_integral(tb, probe, 0.0) - self) < 1e-10 * std::abs(self));
  }
  const auto s = lamb_shift_simplified(tb, 1.2);
  CHECK(std::abs(s.delta_prime - 1.2) < 1e-12);
}

TEST_CASE("self-consistent Lamb shift") {
  const auto r = lamb_shift_self_consistent(kExp, 1.0);
  CHECK(r.delta_prime == doctest::Approx(kFixedGap).epsilon(1e-11));
  CHECK(r.gamma == doctest::Approx(kFixedGamma).epsilon(1e-10));
  CHECK(r.iterations < 100);
  const auto closed = single_qubit_closed_form(0.04, r.delta_prime, 10.0);
  CHECK(r.lamb_shift == doctest::Approx(closed.lamb_shift).epsilon(1e-9));

  const auto simple = lamb_shift_simplified(kExp, 1.0);
  const double diff = std::abs(simple.delta_prime - r.delta_prime);
  CHECK(diff > 1e-7);
  CHECK(diff < 1e-4);

  const auto free = lamb_shift_self_consistent(PhotonicModel::exponential_continuum(10.0, 0.0), 1.0);
  CHECK(free.delta_prime == 1.0);
  CHECK(free.gamma == 0.0);
  CHECK_THROWS_AS(lamb_shift_self_consistent(PhotonicModel::photonic_crystal(800, 1.0, 0.5, 0.04),
                                             1.6),
                  NumericalError);
}

TEST_CASE("two-qubit parameters") {
  for (auto scheme : {LambScheme::none, LambScheme::simplified, LambScheme::self_consistent}) {
    const auto at_zero = two_qubit_params(kExp, 1.0, 0.0, scheme);
    check_recombination(at_zero);
    CHECK(at_zero.gamma_minus == 0.0);
    CHECK(at_zero.gamma == doctest::Approx(0.5 * at_zero.gamma_plus));
    CHECK(at_zero.gamma12 == doctest::Approx(at_zero.gamma).epsilon(1e-14));
    for (double d : {0.4, kLambda0, 2.5 * kLambda0}) check_recombination(two_qubit_params(kExp, 1.0, d, scheme));

    const auto free = two_qubit_params(PhotonicModel::exponential_continuum(10.0, 0.0), 1.0, 3.0, scheme);
    CHECK(free.delta_prime == 1.0);
    CHECK(free.gamma == 0.0);
    CHECK(free.g12 == 0.0);
    CHECK(free.gamma12 == 0.0);
  }
  CHECK_THROWS_AS(two_qubit_params(kExp, 1.0, -1.0, LambScheme::none), InvalidArgument);
  CHECK_THROWS_AS(two_qubit_params(kExp, 1.0, 1.0, LambScheme::fitted), InvalidArgument);
}

TEST_CASE("two-qubit closed form") {
  // mpmath evaluations of the closed form, cross-checked there by PV quadrature.
  const auto near = two_qubit_closed_form(0.04, 1.0, 10.0, 0.3);
  CHECK(near.g12 == doctest::Approx(-0.0002572918222633595).epsilon(1e-10));
  const auto far = two_qubit_closed_form(0.04, 1.0, 10.0, 15.0);
  CHECK(far.g12 == doctest::Approx(0.0004696172857167042).epsilon(1e-10));
  check_recombination(far);

  // All constants at the bare gap: identical to the none scheme.
  for (double d : {0.0, 0.1, 1.0, kLambda0, 3.7 * kLambda0}) {
    const auto closed = two_qubit_closed_form(0.04, 1.0, 10.0, d);
    const auto none = two_qubit_params(kExp, 1.0, d, LambScheme::none);
    CAPTURE(d);
    CHECK(closed.g12 == doctest::Approx(none.g12).epsilon(1e-9));
    CHECK(closed.gamma12 == doctest::Approx(none.gamma12).epsilon(1e-9));
    CHECK(closed.delta_prime == doctest::Approx(none.delta_prime).epsilon(1e-12));
  }
  // d -> 0: g12 approaches the individual shift, of order -g^2 wc / 2pi.
  const auto contact = two_qubit_closed_form(0.04, 1.0, 10.0, 0.0);
  CHECK(contact.g12 == doctest::Approx(kDeltaAtOne).epsilon(1e-12));
  const auto silent = two_qubit_closed_form(0.0, 1.0, 10.0, 2.0);
  CHECK(silent.g12 == 0.0);
  CHECK(silent.gamma == 0.0);
}

TEST_CASE("resonant dipole approximation") {
  const auto half = resonant_dipole_params(2.0, 1.0, kPi);
  CHECK(half.gamma12 == doctest::Approx(-2.0));
  CHECK(std::abs(half.g12) < 1e-15);
  const auto contact = resonant_dipole_params(2.0, 1.0, 0.0);
  CHECK(contact.gamma12 == 2.0);
  CHECK(contact.g12 == 0.0);
  const auto quarter = resonant_dipole_params(2.0, 1.0, 0.5 * kPi);
  CHECK(std::abs(quarter.gamma12) < 1e-15);
  CHECK(quarter.g12 == doctest::Approx(1.0));

  // Far field: the bare-gap constants reduce to the dipole formulas.
  for (double d = 2.0 * kLambda0; d <= 4.0 * kLambda0; d += 0.37) {
    const auto none = two_qubit_params(kExp, 1.0, d, LambScheme::none);
    const auto dip = resonant_dipole_params(none.gamma, 1.0, d);
    CHECK(std::abs(none.gamma12 - dip.gamma12) < 1e-12);
    CHECK(std::abs(none.g12 - dip.g12) < 0.05 * 0.5 * none.gamma);
  }
}
