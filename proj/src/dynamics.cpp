#include "wqed/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "wqed/errors.hpp"
#include "wqed/special_functions.hpp"

namespace wqed {

double ExcitationState::norm() const {
  double sum = 0.0;
  for (auto c : qubits) sum += std::norm(c);
  for (auto p : photons) sum += std::norm(p);
  return sum;
}

ExcitationState initial_qubit_excited(std::size_t index, std::size_t qubit_count,
                                      std::size_t mode_count) {
  if (index >= qubit_count) {
    std::ostringstream os;
    os << "initial_qubit_excited: qubit " << index << " out of range for " << qubit_count
       << " qubits";
    throw InvalidArgument(os.str());
  }
  ExcitationState state;
  state.qubits.assign(qubit_count, 0.0);
  state.photons.assign(mode_count, 0.0);
  state.qubits[index] = 1.0;
  return state;
}

std::vector<complex> TimeTrace::series(Channel which, std::size_t qubit) const {
  std::vector<complex> out(size());
  if (channel != Channel::single) {
    if (which != channel) throw InvalidArgument("TimeTrace: trace holds a different channel");
    for (std::size_t i = 0; i < size(); ++i) out[i] = amplitude(i, 0);
    return out;
  }
  if (which == Channel::single) {
    if (qubit >= columns) throw InvalidArgument("TimeTrace: qubit index out of range");
    for (std::size_t i = 0; i < size(); ++i) out[i] = amplitude(i, qubit);
    return out;
  }
  if (columns != 2) throw InvalidArgument("TimeTrace: c_+- defined only for two qubits");
  const double sign = which == Channel::plus ? 1.0 : -1.0;
  for (std::size_t i = 0; i < size(); ++i)
    out[i] = (amplitude(i, 0) + sign * amplitude(i, 1)) / std::sqrt(2.0);
  return out;
}

double TimeTrace::max_norm_error() const {
  double worst = 0.0;
  for (double e : norm_error) worst = std::max(worst, e);
  return worst;
}

// ---------------------------------------------------------------------------
// Mode-resolved dynamics

namespace {

// Dormand-Prince 5(4).
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kE = {71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                      -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

// Steps are drawn from h_max 2^(-j/4) so the per-mode stage phases
// exp(-i w_k c_i h) can be cached and reused.
constexpr int kLevelsPerOctave = 4;
constexpr int kMaxLevel = 160;
constexpr int kResyncInterval = 256;
constexpr std::size_t kCachedLevels = 8;

class ModeIntegrator {
 public:
  ModeIntegrator(const ModeSet& modes, const QubitArray& qubits,
                 const ModeEvolutionOptions& options)
      : modes_(modes), gaps_(qubits.gaps), options_(options), S_(qubits.size()),
        M_(modes.size()) {
    phase_.resize(M_);
    stage_phase_.resize(M_);
    weighted_.resize(S_);
  }

  double step_size(int level) const {
    return options_.max_step * std::exp2(-static_cast<double>(level) / kLevelsPerOctave);
  }

  void reset_phase(double t) {
    for (std::size_t k = 0; k < M_; ++k) phase_[k] = std::polar(1.0, -modes_.frequencies[k] * t);
  }

  // Stage phase factors exp(-i w_k c_i h) for i = 1..6 at a given level.
  const std::vector<complex>& factors(int level) {
    auto it = cache_.find(level);
    if (it != cache_.end()) return it->second;
    const double h = step_size(level);
    std::vector<complex> table(6 * M_);
    for (int i = 1; i < 7; ++i)
      for (std::size_t k = 0; k < M_; ++k)
        table[(i - 1) * M_ + k] = std::polar(1.0, -modes_.frequencies[k] * kC[i] * h);
    if (cache_.size() >= kCachedLevels) cache_.clear();
    return cache_.emplace(level, std::move(table)).first->second;
  }

  // Rotating-frame derivative at t + tau where the mode phases at t + tau
  // are phase_k * factor_k (factor == nullptr means tau = 0).
  void derivative(double time, const complex* factor, const std::vector<complex>& y,
                  std::vector<complex>& dy) {
    const complex* psi = y.data() + S_;
    complex* dpsi = dy.data() + S_;
    for (std::size_t k = 0; k < M_; ++k)
      stage_phase_[k] = factor ? phase_[k] * factor[k] : phase_[k];
    for (std::size_t s = 0; s < S_; ++s) {
      const complex q = std::polar(1.0, gaps_[s] * time);
      weighted_[s] = std::conj(q) * y[s];
      const complex* g = modes_.couplings.data() + s * M_;
      double re = 0.0;
      double im = 0.0;
      for (std::size_t k = 0; k < M_; ++k) {
        const complex v = g[k] * stage_phase_[k] * psi[k];
        re += v.real();
        im += v.imag();
      }
      dy[s] = -kI * q * complex(re, im);
    }
    for (std::size_t k = 0; k < M_; ++k) {
      complex acc = 0.0;
      for (std::size_t s = 0; s < S_; ++s)
        acc += std::conj(modes_.couplings[s * M_ + k]) * weighted_[s];
      dpsi[k] = -kI * std::conj(stage_phase_[k]) * acc;
    }
  }

  const std::vector<complex>& phase() const { return phase_; }
  void advance_phase(const complex* full_step) {
    for (std::size_t k = 0; k < M_; ++k) phase_[k] *= full_step[k];
  }

 private:
  const ModeSet& modes_;
  std::vector<double> gaps_;
  ModeEvolutionOptions options_;
  std::size_t S_;
  std::size_t M_;
  std::vector<complex> phase_;
  std::vector<complex> stage_phase_;
  std::vector<complex> weighted_;
  std::map<int, std::vector<complex>> cache_;
};

double max_mode_velocity(const ModeSet& modes) {
  double v = 0.0;
  for (std::size_t j = 0; j + 1 < modes.size(); ++j) {
    const double dk = modes.momenta[j + 1] - modes.momenta[j];
    v = std::max(v, std::abs(modes.frequencies[j + 1] - modes.frequencies[j]) / dk);
  }
  return v;
}

}  // namespace

TimeTrace evolve_modes(const ModeSet& modes, const QubitArray& qubits,
                       const ExcitationState& initial, double t_end, double dt_out,
                       const ModeEvolutionOptions& options) {
  const std::size_t S = qubits.size();
  const std::size_t M = modes.size();
  if (modes.qubit_count != S) throw InvalidArgument("evolve_modes: mode table built for other qubits");
  if (initial.qubits.size() != S || initial.photons.size() != M)
    throw InvalidArgument("evolve_modes: initial state does not match the mode set");
  if (std::abs(initial.norm() - 1.0) > 1e-12)
    throw InvalidArgument("evolve_modes: initial state is not normalized");
  if (!(dt_out > 0.0)) throw InvalidArgument("evolve_modes: dt_out must be positive");
  if (!(t_end > initial.time)) throw InvalidArgument("evolve_modes: t_end must exceed start");
  const double horizon = modes.length / max_mode_velocity(modes);
  if (t_end - initial.time >= horizon) {
    std::ostringstream os;
    os << "evolve_modes: t_end = " << t_end << " reaches the revival time L/v = " << horizon;
    throw InvalidArgument(os.str());
  }

  ModeIntegrator integrator(modes, qubits, options);
  const double t0 = initial.time;
  integrator.reset_phase(t0);

  // Rotating-frame state y = (c~_s, psi~_k).
  std::vector<complex> y(S + M);
  for (std::size_t s = 0; s < S; ++s) y[s] = std::polar(1.0, qubits.gaps[s] * t0) * initial.qubits[s];
  for (std::size_t k = 0; k < M; ++k)
    y[S + k] = std::polar(1.0, modes.frequencies[k] * t0) * initial.photons[k];

  TimeTrace trace;
  trace.columns = S;
  const std::size_t samples = static_cast<std::size_t>(std::floor((t_end - t0) / dt_out + 1e-9)) + 1;
  trace.times.reserve(samples);
  trace.amplitudes.reserve(samples * S);
  trace.norm_error.reserve(samples);

  auto record = [&](double t, const std::vector<complex>& state, double norm) {
    trace.times.push_back(t);
    for (std::size_t s = 0; s < S; ++s)
      trace.amplitudes.push_back(std::polar(1.0, -qubits.gaps[s] * t) * state[s]);
    trace.norm_error.push_back(std::abs(norm - 1.0));
  };
  auto norm_of = [](const std::vector<complex>& v) {
    double sum = 0.0;
    for (auto z : v) sum += std::norm(z);
    return sum;
  };
  record(t0, y, norm_of(y));
  std::size_t next_sample = 1;

  std::array<std::vector<complex>, 7> k;
  for (auto& v : k) v.resize(S + M);
  std::vector<complex> stage(S + M);
  std::vector<complex> y_new(S + M);
  std::vector<complex> dense(S);

  double t = t0;
  int level = 2 * kLevelsPerOctave;
  integrator.derivative(t, nullptr, y, k[0]);
  int accepted = 0;
  const double rtol = options.relative_tolerance;
  const double atol = options.absolute_tolerance;

  while (next_sample < samples) {
    const double h = integrator.step_size(level);
    const std::vector<complex>& table = integrator.factors(level);
    for (int i = 1; i < 7; ++i) {
      for (std::size_t n = 0; n < S + M; ++n) {
        complex acc = 0.0;
        for (int j = 0; j < i; ++j) acc += kA[i][j] * k[j][n];
        stage[n] = y[n] + h * acc;
      }
      const complex* factor = table.data() + (i - 1) * M;
      integrator.derivative(t + kC[i] * h, factor, stage, k[i]);
      if (i == 6) y_new = stage;
    }
    // Error measured in the state norm: weakly coupled far-detuned modes carry
    // amplitudes far below the tolerance and must not dictate the step.
    double err2 = 0.0;
    for (std::size_t n = 0; n < S + M; ++n) {
      complex e = 0.0;
      for (int j = 0; j < 7; ++j) e += kE[j] * k[j][n];
      err2 += std::norm(e);
    }
    const double err = h * std::sqrt(err2) / (atol + rtol * std::sqrt(norm_of(y)));
    if (!std::isfinite(err)) throw NumericalError("evolve_modes: non-finite error estimate");
    if (err > 1.0) {
      const double shrink = std::max(0.2, 0.9 * std::pow(err, -0.2));
      const int drop = std::max(1, static_cast<int>(std::ceil(-kLevelsPerOctave * std::log2(shrink))));
      level += drop;
      if (level > kMaxLevel) throw NumericalError("evolve_modes: step size underflow");
      continue;
    }

    const double norm = norm_of(y_new);
    if (std::abs(norm - 1.0) > options.norm_tolerance) {
      std::ostringstream os;
      os << "evolve_modes: excitation number drifted by " << std::abs(norm - 1.0)
         << " at t = " << t + h << " (step " << h << ")";
      throw NumericalError(os.str());
    }
    // Emit samples inside (t, t + h] by cubic Hermite interpolation.
    const double t_next = t + h;
    while (next_sample < samples) {
      const double ts = t0 + static_cast<double>(next_sample) * dt_out;
      if (ts > t_next + 1e-12 * h) break;
      const double th = std::clamp((ts - t) / h, 0.0, 1.0);
      const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
      const double h10 = th * (1 - th) * (1 - th);
      const double h01 = th * th * (3 - 2 * th);
      const double h11 = th * th * (th - 1);
      for (std::size_t s = 0; s < S; ++s)
        dense[s] = h00 * y[s] + h10 * h * k[0][s] + h01 * y_new[s] + h11 * h * k[6][s];
      record(ts, dense, norm);
      ++next_sample;
    }

    y.swap(y_new);
    k[0].swap(k[6]);
    t = t_next;
    integrator.advance_phase(table.data() + 5 * M);
    if (++accepted % kResyncInterval == 0) {
      integrator.reset_phase(t);
      integrator.derivative(t, nullptr, y, k[0]);
    }
    const double grow = err > 0.0 ? std::min(5.0, 0.9 * std::pow(err, -0.2)) : 5.0;
    if (grow > 1.0) {
      const int rise = static_cast<int>(std::floor(kLevelsPerOctave * std::log2(grow)));
      level = std::max(0, level - rise);
    }
  }

  if (options.keep_photons) {
    trace.final_photons.resize(M);
    for (std::size_t n = 0; n < M; ++n)
      trace.final_photons[n] = std::polar(1.0, -modes.frequencies[n] * t) * y[S + n];
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Integro-differential equation

namespace {

// \int_0^u e^{i D s} / (a + i(s + d))^2 ds, by parts and with
// \int e^{Dw}/w dw = E1(-D w0) - E1(-D w1) along w = a + i(s + d).
complex damped_inverse_square(double gap, double a, double d, double u) {
  d += 0.0;  // -0 would start the path on the upper side of the E1 cut
  const complex w0(a, d);
  const complex w1(a, u + d);
  const complex boundary = kI * std::polar(1.0, gap * u) / w1 - kI / w0;
  if (gap == 0.0) return boundary;
  // The path crosses the real w axis at s = -d, where -D w crosses the E1 cut
  // from above to below.
  const double winding = (d < 0.0 && u + d >= 0.0) ? 1.0 : 0.0;
  const complex z0 = -gap * w0;
  const complex z1 = -gap * w1;
  // e^{-D w0} E1(-D w0) - e^{-D w0} E1(-D w1), the second written through the
  // scaled E1 so the large-|w1| tail stays finite.
  const complex head = scaled_expint_e1(z0);
  const complex tail = std::exp(z0 - z1) * scaled_expint_e1(z1);
  const complex loop = std::exp(z0) * complex(0.0, kTwoPi * winding);
  const complex p = -kI * (head - tail + loop);
  return boundary + gap * p;
}

double default_dt(const KernelSpec& spec, double gap) {
  return std::min(0.02 / gap, 0.2 / spec.model.cutoff);
}

}  // namespace

complex ide_weight(const KernelSpec& spec, double gap, Channel channel, double separation,
                   double u) {
  if (spec.evaluation != KernelEvaluation::closed_form)
    throw InvalidArgument("evolve_ide: requires the closed-form exponential kernel");
  const PhotonicModel& m = spec.model;
  const double scale = m.coupling * m.coupling / (4.0 * kPi);
  if (scale == 0.0 || u == 0.0) return 0.0;
  const double a = 1.0 / m.cutoff;
  const complex local = 2.0 * damped_inverse_square(gap, a, 0.0, u);
  if (channel == Channel::single) return scale * local;
  const complex cross =
      damped_inverse_square(gap, a, separation, u) + damped_inverse_square(gap, a, -separation, u);
  const double sign = channel == Channel::plus ? 1.0 : -1.0;
  return scale * (local + sign * cross);
}

TimeTrace evolve_ide(const KernelSpec& spec, double gap, Channel channel, double separation,
                     double t_end, const IdeOptions& options) {
  if (spec.evaluation != KernelEvaluation::closed_form)
    throw InvalidArgument("evolve_ide: requires the closed-form exponential kernel");
  if (!(gap > 0.0)) throw InvalidArgument("evolve_ide: gap must be positive");
  if (!(separation >= 0.0)) throw InvalidArgument("evolve_ide: separation must be >= 0");
  if (!(t_end > 0.0)) throw InvalidArgument("evolve_ide: t_end must be positive");
  const double dt = options.dt > 0.0 ? options.dt : default_dt(spec, gap);
  if (dt * spec.model.cutoff > 1.0 || dt * gap > 0.5) {
    std::ostringstream os;
    os << "evolve_ide: dt = " << dt << " does not resolve the kernel core 1/wc or the gap";
    throw InvalidArgument(os.str());
  }
  const std::size_t stride =
      options.output_interval > 0.0
          ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(options.output_interval / dt)))
          : 1;
  // Whole number of output intervals, covering t_end.
  std::size_t n = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  n = (n + stride - 1) / stride * stride;
  if (n < 2 || n > 20'000'000) throw InvalidArgument("evolve_ide: unreasonable number of steps");
  if (dt * static_cast<double>(n) > spec.horizon)
    throw NumericalError("evolve_ide: kernel validity horizon exceeded");

  std::vector<double> gr(n + 1);
  std::vector<double> gi(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const complex g = ide_weight(spec, gap, channel, separation, dt * static_cast<double>(j));
    gr[j] = g.real();
    gi[j] = g.imag();
  }
  // c_m stored at slot n - m, so the history sum runs over contiguous memory.
  std::vector<double> cr(n + 1, 0.0);
  std::vector<double> ci(n + 1, 0.0);
  const complex c0 = 1.0;
  cr[n] = c0.real();
  ci[n] = c0.imag();
  const complex denominator = 1.0 + 0.5 * dt * complex(gr[0], gi[0]);

  TimeTrace trace;
  trace.columns = 1;
  trace.channel = channel;
  trace.times.reserve(n / stride + 1);
  trace.amplitudes.reserve(n / stride + 1);
  trace.times.push_back(0.0);
  trace.amplitudes.push_back(c0);

  for (std::size_t step = 1; step <= n; ++step) {
    // sum_{j=1}^{step-1} G_j c_{step-j}; c_{step-j} sits at slot n - step + j.
    const std::size_t len = step - 1;
    const double* g_re = gr.data() + 1;
    const double* g_im = gi.data() + 1;
    const double* x_re = cr.data() + (n - step) + 1;
    const double* x_im = ci.data() + (n - step) + 1;
    double r0 = 0, r1 = 0, r2 = 0, r3 = 0, i0 = 0, i1 = 0, i2 = 0, i3 = 0;
    std::size_t j = 0;
    for (; j + 4 <= len; j += 4) {
      r0 += g_re[j] * x_re[j] - g_im[j] * x_im[j];
      i0 += g_re[j] * x_im[j] + g_im[j] * x_re[j];
      r1 += g_re[j + 1] * x_re[j + 1] - g_im[j + 1] * x_im[j + 1];
      i1 += g_re[j + 1] * x_im[j + 1] + g_im[j + 1] * x_re[j + 1];
      r2 += g_re[j + 2] * x_re[j + 2] - g_im[j + 2] * x_im[j + 2];
      i2 += g_re[j + 2] * x_im[j + 2] + g_im[j + 2] * x_re[j + 2];
      r3 += g_re[j + 3] * x_re[j + 3] - g_im[j + 3] * x_im[j + 3];
      i3 += g_re[j + 3] * x_im[j + 3] + g_im[j + 3] * x_re[j + 3];
    }
    for (; j < len; ++j) {
      r0 += g_re[j] * x_re[j] - g_im[j] * x_im[j];
      i0 += g_re[j] * x_im[j] + g_im[j] * x_re[j];
    }
    const complex history((r0 + r1) + (r2 + r3), (i0 + i1) + (i2 + i3));
    const complex g_n(gr[step], gi[step]);
    const complex c = (c0 - dt * (0.5 * g_n * c0 + history)) / denominator;
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw NumericalError("evolve_ide: amplitude became non-finite");
    cr[n - step] = c.real();
    ci[n - step] = c.imag();
    if (step % stride == 0) {
      const double t = dt * static_cast<double>(step);
      trace.times.push_back(t);
      trace.amplitudes.push_back(std::polar(1.0, -gap * t) * c);
    }
  }
  return trace;
}

}  // namespace wqed
