#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "wqed/dynamics.hpp"
#include "wqed/errors.hpp"
#include "wqed/markov.hpp"

using namespace wqed;

namespace {

// Least-squares slope of ln|c|^2 over [t0, t1].
double decay_slope(const std::vector<double>& t, const std::vector<complex>& c, double t0,
                   double t1) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    const double y = std::log(std::norm(c[i]));
    sx += t[i];
    sy += y;
    sxx += t[i] * t[i];
    sxy += t[i] * y;
    ++n;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("initial states") {
  const auto s = initial_qubit_excited(0, 2, 5);
  CHECK(s.qubits == std::vector<complex>{1.0, 0.0});
  CHECK(s.photons.size() == 5);
  CHECK(s.norm() == 1.0);
  CHECK_THROWS_AS(initial_qubit_excited(2, 2, 5), InvalidArgument);
}

TEST_CASE("free evolution without coupling") {
  const auto model = PhotonicModel::gapless_chain(100.0, 200, 0.0);
  const auto qubits = QubitArray::pair(1.3, 2.0);
  const auto modes = build_modes(model, qubits);
  ModeEvolutionOptions opts;
  opts.keep_photons = true;
  const auto trace = evolve_modes(modes, qubits, initial_qubit_excited(0, 2, modes.size()), 40.0,
                                  0.25, opts);
  REQUIRE(trace.size() == 161);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double t = trace.times[i];
    CHECK(std::abs(trace.amplitude(i, 0) - std::polar(1.0, -1.3 * t)) < 1e-8);
    CHECK(trace.amplitude(i, 1) == complex(0.0));
  }
  for (auto p : trace.final_photons) CHECK(p == complex(0.0));

  const auto ide = evolve_ide(KernelSpec::closed_form(PhotonicModel::exponential_continuum(10.0, 0.0)),
                              1.0, Channel::single, 0.0, 10.0);
  for (std::size_t i = 0; i < ide.size(); ++i)
    CHECK(std::abs(ide.amplitudes[i] - std::polar(1.0, -ide.times[i])) < 1e-13);
}

TEST_CASE("mode evolution conserves the excitation number") {
  const auto model = PhotonicModel::gapless_chain(20.0 * kLambda0, 800, 0.04);
  const auto qubits = QubitArray::pair(1.0, kLambda0);
  const auto modes = build_modes(model, qubits);
  const auto trace =
      evolve_modes(modes, qubits, initial_qubit_excited(0, 2, modes.size()), 100.0, 0.5);
  CHECK(trace.max_norm_error() < 1e-6);
  const auto plus = trace.series(Channel::plus);
  const auto minus = trace.series(Channel::minus);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    CHECK(std::norm(plus[i]) <= 1.0);
    CHECK(std::norm(minus[i]) <= 1.0);
    // The partner qubit stays essentially unexcited before the photon arrives.
    if (trace.times[i] < kLambda0 - 1.0) CHECK(std::norm(trace.amplitude(i, 1)) < 1e-8);
  }
  // After the flight the channels decay at different rates (d = lambda0: c+ is superradiant).
  CHECK(std::norm(plus.back()) < std::norm(minus.back()) - 0.05);

  CHECK_THROWS_AS(evolve_modes(modes, qubits, initial_qubit_excited(0, 2, modes.size()),
                               1.01 * model.length, 1.0),
                  InvalidArgument);
  auto bad = initial_qubit_excited(0, 2, modes.size());
  bad.qubits[1] = 1.0;
  CHECK_THROWS_AS(evolve_modes(modes, qubits, bad, 10.0, 1.0), InvalidArgument);
}

TEST_CASE("IDE weight matches quadrature of the channel kernel") {
  const auto spec = KernelSpec::closed_form(PhotonicModel::exponential_continuum(10.0, 0.04));
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double gap = 1.0;
  for (Channel ch : {Channel::single, Channel::plus, Channel::minus}) {
    for (double d : {0.0, 0.4, kLambda0}) {
      for (double u : {0.03, 1.0, 5.0, 9.0}) {
        auto f = [&](double s) { return channel_kernel(spec, ch, s, d) * std::polar(1.0, gap * s); };
        auto re = [&](double s) { return f(s).real(); };
        auto im = [&](double s) { return f(s).imag(); };
        const complex quad(Rule::integrate(re, 0.0, u, 12, 1e-13),
                           Rule::integrate(im, 0.0, u, 12, 1e-13));
        const complex w = ide_weight(spec, gap, ch, d, u);
        CAPTURE(to_string(ch));
        CAPTURE(d);
        CAPTURE(u);
        CHECK(std::abs(w - quad) < 1e-10 * std::abs(ide_weight(spec, gap, Channel::single, d, u)));
      }
    }
  }
  CHECK(ide_weight(spec, gap, Channel::plus, 0.0, 0.0) == complex(0.0));
}

TEST_CASE("IDE step halving is second order") {
  const auto spec = KernelSpec::closed_form(PhotonicModel::exponential_continuum(10.0, 0.04));
  std::vector<double> finals;
  for (double dt : {0.04, 0.02, 0.01}) {
    IdeOptions o;
    o.dt = dt;
    const auto tr = evolve_ide(spec, 1.0, Channel::plus, kLambda0, 40.0, o);
    finals.push_back(std::abs(tr.amplitudes.back()));
  }
  const double order = std::log2(std::abs(finals[0] - finals[1]) / std::abs(finals[1] - finals[2]));
  CAPTURE(order);
  CHECK(order >= 1.9);
  CHECK(order <= 2.2);
}

TEST_CASE("IDE argument checks") {
  const auto spec = KernelSpec::closed_form(PhotonicModel::exponential_continuum(10.0, 0.04));
  IdeOptions coarse;
  coarse.dt = 0.2;
  CHECK_THROWS_AS(evolve_ide(spec, 1.0, Channel::single, 0.0, 10.0, coarse), InvalidArgument);
  CHECK_THROWS_AS(evolve_ide(spec, 1.0, Channel::single, -1.0, 10.0), InvalidArgument);
  const auto discrete = KernelSpec::mode_sum(PhotonicModel::gapless_chain(100.0, 200, 0.04));
  CHECK_THROWS_AS(evolve_ide(discrete, 1.0, Channel::single, 0.0, 10.0), InvalidArgument);
}

TEST_CASE("plus channel at zero separation decays twice as fast") {
  const auto spec = KernelSpec::closed_form(PhotonicModel::exponential_continuum(10.0, 0.04));
  IdeOptions o;
  o.output_interval = 0.5;
  const auto single = evolve_ide(spec, 1.0, Channel::single, 0.0, 400.0, o);
  const auto plus = evolve_ide(spec, 1.0, Channel::plus, 0.0, 400.0, o);
  const auto minus = evolve_ide(spec, 1.0, Channel::minus, 0.0, 400.0, o);
  const double g1 = decay_slope(single.times, single.amplitudes, 50.0, 400.0);
  const double g2 = decay_slope(plus.times, plus.amplitudes, 50.0, 400.0);
  CHECK(g2 / g1 == doctest::Approx(2.0).epsilon(0.02));
  for (auto c : minus.amplitudes) CHECK(std::abs(std::abs(c) - 1.0) < 1e-14);
}

TEST_CASE("cross-solver agreement: IDE versus resolved modes") {
  const double cutoff = 10.0;
  const double g = 0.04;
  const auto spec = KernelSpec::closed_form(PhotonicModel::exponential_continuum(cutoff, g));
  IdeOptions o;
  o.output_interval = 1.0;
  const auto ide = evolve_ide(spec, 1.0, Channel::single, 0.0, 150.0, o);

  const auto model = PhotonicModel::exponential_continuum(cutoff, g, 200.0, 4000);
  const auto qubits = QubitArray::single(1.0);
  const auto modes = build_modes(model, qubits);
  const auto exact =
      evolve_modes(modes, qubits, initial_qubit_excited(0, 1, modes.size()), 150.0, 1.0);
  REQUIRE(exact.size() == ide.size());
  const double rate_ide = decay_slope(ide.times, ide.amplitudes, 20.0, 150.0);
  const double rate_modes = decay_slope(exact.times, exact.amplitudes, 20.0, 150.0);
  CHECK(rate_modes == doctest::Approx(rate_ide).epsilon(0.03));
  const auto sc = lamb_shift_self_consistent(PhotonicModel::exponential_continuum(cutoff, g), 1.0);
  CHECK(rate_ide == doctest::Approx(sc.gamma).epsilon(0.01));
}
