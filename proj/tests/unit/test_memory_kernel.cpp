#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "wqed/errors.hpp"
#include "wqed/memory_kernel.hpp"

using namespace wqed;

namespace {

const PhotonicModel kExp = PhotonicModel::exponential_continuum(10.0, 0.04);

// Composite Simpson on a uniform grid: deliberately a different route from
// the closed form and from the library's adaptive quadrature.
template <class F>
complex simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  complex sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("closed-form kernel at the origin") {
  const auto spec = KernelSpec::closed_form(kExp);
  const complex k0 = kernel(spec, 0.0, 0.0);
  CHECK(k0.real() == doctest::Approx(0.0016 / (4.0 * kPi) * 100.0).epsilon(1e-14));
  CHECK(k0.imag() == doctest::Approx(0.0).epsilon(1e-18));
  CHECK(k0.real() == doctest::Approx(1.2732e-2).epsilon(1e-4));
  // (1/4 pi) \int J(w) dw by Simpson.
  const complex integral = simpson(
      [](double w) { return complex(spectral_density(kExp, w) / (4.0 * kPi), 0.0); }, 0.0, 600.0,
      600000);
  CHECK(std::abs(k0 - integral) < 1e-10 * std::abs(k0));
  // Same integral at finite (t, d).
  const double t = 0.7;
  const double d = 1.3;
  const complex shifted = simpson(
      [&](double w) {
        return spectral_density(kExp, w) / (4.0 * kPi) * std::polar(1.0, -w * (t + d));
      },
      0.0, 600.0, 600000);
  CHECK(std::abs(kernel(spec, t, d) - shifted) < 1e-10 * std::abs(shifted));
}

TEST_CASE("kernel asymptotics and trivial cases") {
  const auto spec = KernelSpec::closed_form(kExp);
  const double T = 1000.0;
  const double ratio = std::abs(kernel(spec, 2.0 * T, 0.0)) / std::abs(kernel(spec, T, 0.0));
  CHECK(ratio == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(std::abs(kernel(spec, T, 0.0)) ==
        doctest::Approx(0.0016 / (4.0 * kPi) / (T * T)).epsilon(1e-6));

  const auto silent = KernelSpec::closed_form(PhotonicModel::exponential_continuum(10.0, 0.0));
  CHECK(kernel(silent, 3.0, 1.0) == complex(0.0));
  CHECK(kernel_pair(silent, 3.0, 1.0) == complex(0.0));
  CHECK(kernel_antiderivative(silent, 3.0, 1.0) == complex(0.0));
  CHECK_THROWS_AS(kernel(spec, -1.0, 0.0), InvalidArgument);
}

TEST_CASE("pair and channel combinations") {
  const auto spec = KernelSpec::closed_form(kExp);
  for (double t : {0.0, 0.5, 3.0, 40.0}) {
    CHECK(kernel_pair(spec, t, 0.0) == 2.0 * kernel(spec, t, 0.0));
    for (double d : {0.3, kLambda0, 17.0}) {
      CHECK(kernel_pair(spec, t, d) == kernel_pair(spec, t, -d));
    }
    CHECK(kernel_pm(spec, t, 0.0, -1) == complex(0.0));
    CHECK(std::abs(kernel_pm(spec, t, 0.0, 1) - 4.0 * kernel(spec, t, 0.0)) <
          1e-16 * std::abs(kernel(spec, t, 0.0)));
  }
  CHECK_THROWS_AS(kernel_pm(spec, 1.0, 1.0, 2), InvalidArgument);
  // Retardation: the cross kernel peaks when the photon arrives at t = d.
  const double d = 4.0 * kLambda0;
  CHECK(std::abs(kernel_pair(spec, 0.5 * d, d)) < 1e-3 * std::abs(kernel_pair(spec, d, d)));
}

TEST_CASE("K_plus at one wavelength: closed form versus a mode sum") {
  const auto spec = KernelSpec::closed_form(kExp);
  const auto sum_spec =
      KernelSpec::mode_sum(PhotonicModel::exponential_continuum(10.0, 0.04, 200.0, 20000));
  const complex closed = kernel_pm(spec, 0.0, kLambda0, 1);
  const complex summed = kernel_pm(sum_spec, 0.0, kLambda0, 1);
  CHECK(std::abs(closed - summed) < 5e-3 * std::abs(closed));
}

TEST_CASE("mode sum agrees with the closed form before the revival") {
  const auto spec = KernelSpec::closed_form(kExp);
  const auto sum_spec = KernelSpec::mode_sum(kExp);
  double worst = 0.0;
  for (double t = 0.0; t <= 50.0; t += 2.5) {
    for (double d = 0.0; d <= 4.0 * kLambda0 + 1e-9; d += kLambda0 / 2.0) {
      const complex a = kernel(spec, t, d);
      const complex b = kernel(sum_spec, t, d);
      worst = std::max(worst, std::abs(a - b) / std::abs(a));
      const complex pa = kernel_pair(spec, t, d);
      const complex pb = kernel_pair(sum_spec, t, d);
      worst = std::max(worst, std::abs(pa - pb) / std::abs(pa));
    }
  }
  CHECK(worst < 5e-3);
  CHECK_THROWS_AS(kernel(sum_spec, sum_spec.horizon + 1.0, 0.0), NumericalError);
}

TEST_CASE("kernel antiderivative") {
  const auto spec = KernelSpec::closed_form(kExp);
  CHECK(kernel_antiderivative(spec, 0.0, 0.7) == complex(0.0));
  const complex limit = 0.0016 / (4.0 * kPi) * (-kI) * 10.0;
  CHECK(std::abs(kernel_antiderivative(spec, 1e9, 0.0) - limit) < 1e-8 * std::abs(limit));
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (double d : {-3.0, 0.0, 2.0}) {
    for (double u : {0.05, 1.0, 9.0}) {
      auto re = [&](double s) { return kernel(spec, s, d).real(); };
      auto im = [&](double s) { return kernel(spec, s, d).imag(); };
      const complex quad(Rule::integrate(re, 0.0, u, 20, 1e-13),
                         Rule::integrate(im, 0.0, u, 20, 1e-13));
      CAPTURE(d);
      CAPTURE(u);
      CHECK(std::abs(kernel_antiderivative(spec, u, d) - quad) < 1e-10 * std::abs(quad));
    }
  }
  CHECK_THROWS_AS(kernel_antiderivative(KernelSpec::mode_sum(
                                            PhotonicModel::gapless_chain(100.0, 200, 0.04)),
                                        1.0, 0.0),
                  InvalidArgument);
}

TEST_CASE("decay-rate positivity of the running Laplace transform") {
  // Re \int_0^T K(t; 0) exp(i D t) dt >= 0 for every T >= t_min. The lattice
  // chain has a strong band-edge oscillation in K and dips below zero for
  // 0.39 < T < 2.11 before settling, so it is checked from one qubit period on.
  struct Case {
    KernelSpec spec;
    double gap;
    double t_min;
    double t_max;
  };
  const std::vector<Case> cases = {
      {KernelSpec::closed_form(kExp), 1.0, 0.0, 200.0},
      {KernelSpec::mode_sum(PhotonicModel::gapless_chain(40.0 * kPi, 800, 0.04)), 1.0, kTwoPi,
       120.0},
      {KernelSpec::mode_sum(PhotonicModel::photonic_crystal(800, 1.0, 0.5, 0.04)), 1.0, 0.0,
       200.0},
  };
  for (const auto& c : cases) {
    const double dt = 0.01;
    complex running = 0.0;
    complex previous = kernel(c.spec, 0.0, 0.0);
    double lowest = 0.0;
    for (double t = dt; t < c.t_max; t += dt) {
      const complex current = kernel(c.spec, t, 0.0) * std::polar(1.0, c.gap * t);
      running += 0.5 * dt * (previous + current);
      previous = current;
      if (t >= c.t_min) lowest = std::min(lowest, running.real());
    }
    CAPTURE(to_string(c.spec.model.kind));
    CHECK(lowest >= 0.0);
  }
}

TEST_CASE("tight-binding self-energy") {
  const double g = 0.04;
  for (double hop : {0.3, 0.5, 1.0}) {
    const complex centre = tight_binding_self_energy(1.0, 1.0, hop, g);
    CHECK(centre.real() == doctest::Approx(g * g / hop).epsilon(1e-15));
    CHECK(centre.imag() == 0.0);
    const complex outside = tight_binding_self_energy(1.0 + 2.0 * hop, 1.0, hop, g);
    CHECK(outside.real() == 0.0);
    CHECK(outside.imag() == doctest::Approx(g * g / (std::sqrt(3.0) * hop)).epsilon(1e-14));
  }
  CHECK(std::abs(tight_binding_self_energy(1.0, 1.0, 1e12, g)) < 1e-14);
  CHECK_THROWS_AS(tight_binding_self_energy(1.5, 1.0, 0.5, g), InvalidArgument);
}
