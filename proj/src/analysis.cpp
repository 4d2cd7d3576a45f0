#include "wqed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line line;
  line.slope = sxy / sxx;
  line.intercept = my - line.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (line.intercept + line.slope * x[i]);
    ss += r * r;
  }
  line.rms = std::sqrt(ss / n);
  return line;
}

}  // namespace

FitResult fit_decay(const std::vector<double>& times, const std::vector<complex>& amplitudes,
                    const FitWindow& window) {
  if (times.size() != amplitudes.size()) throw InvalidArgument("fit_decay: size mismatch");
  if (times.empty()) throw InvalidArgument("fit_decay: empty trace");
  if (!(window.end > window.start)) throw InvalidArgument("fit_decay: empty window");
  const double slack = 1e-9 * std::max(1.0, std::abs(times.back()));
  if (window.start < times.front() - slack || window.end > times.back() + slack) {
    std::ostringstream os;
    os << "fit_decay: window [" << window.start << ", " << window.end << "] outside trace ["
       << times.front() << ", " << times.back() << "]";
    throw InvalidArgument(os.str());
  }
  std::vector<double> t;
  std::vector<double> log_pop;
  std::vector<double> phase;
  double previous = 0.0;
  double unwrapped = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < window.start - slack || times[i] > window.end + slack) continue;
    const double pop = std::norm(amplitudes[i]);
    if (!(pop >= 1e-12)) {
      std::ostringstream os;
      os << "fit_decay: |c|^2 = " << pop << " below 1e-12 at t = " << times[i];
      throw NumericalError(os.str());
    }
    const double arg = std::arg(amplitudes[i]);
    if (t.empty()) {
      unwrapped = arg;
    } else {
      unwrapped += std::remainder(arg - previous, kTwoPi);
    }
    previous = arg;
    t.push_back(times[i]);
    log_pop.push_back(std::log(pop));
    phase.push_back(unwrapped);
  }
  if (t.size() < 3) throw InvalidArgument("fit_decay: fewer than 3 samples in window");

  const Line decay = least_squares(t, log_pop);
  const Line rotation = least_squares(t, phase);
  FitResult fit;
  fit.rate = -decay.slope;
  fit.frequency = -rotation.slope;
  fit.amplitude = std::exp(0.5 * decay.intercept);
  fit.phase = std::remainder(rotation.intercept, kTwoPi);
  fit.window = {t.front(), t.back()};
  fit.samples = t.size();
  fit.log_residual = decay.rms;
  fit.phase_residual = rotation.rms;
  const double span = t.back() - t.front();
  if (span * std::abs(fit.frequency) < 5.0 * kTwoPi) {
    std::ostringstream os;
    os << "fit_decay: window of " << span << " covers fewer than 5 periods of the frequency "
       << fit.frequency;
    throw InvalidArgument(os.str());
  }
  return fit;
}

FitResult fit_decay(const TimeTrace& trace, Channel channel, const FitWindow& window,
                    std::size_t qubit) {
  return fit_decay(trace.times, trace.series(channel, qubit), window);
}

FitWindow default_window(const std::vector<double>& times, const std::vector<complex>& amplitudes,
                         double gap, double t_flight, double t_max) {
  if (times.empty()) throw InvalidArgument("default_window: empty trace");
  FitWindow w;
  w.start = std::max(times.front(), t_flight + 5.0 / gap);
  w.end = std::min(t_max, times.back());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] > w.start && std::norm(amplitudes[i]) < 1e-6) {
      w.end = std::min(w.end, times[i]);
      break;
    }
  }
  if (!(w.end > w.start)) {
    std::ostringstream os;
    os << "default_window: no samples between t_flight + 5/gap = " << w.start << " and "
       << w.end;
    throw InvalidArgument(os.str());
  }
  return w;
}

double detect_light_cone(const TimeTrace& trace, double threshold) {
  if (trace.columns != 2 || trace.channel != Channel::single)
    throw InvalidArgument("detect_light_cone: needs a two-qubit mode trace");
  const auto plus = trace.series(Channel::plus);
  const auto minus = trace.series(Channel::minus);
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (std::abs(std::norm(plus[i]) - std::norm(minus[i])) > threshold) return trace.times[i];
  return std::numeric_limits<double>::infinity();
}

std::vector<double> detect_light_cone(const std::vector<TimeTrace>& family, double threshold) {
  std::vector<double> out;
  out.reserve(family.size());
  for (const auto& trace : family) {
    if (trace.times != family.front().times)
      throw InvalidArgument("detect_light_cone: traces do not share a time grid");
    out.push_back(detect_light_cone(trace, threshold));
  }
  return out;
}

namespace {

MarkovParameters recombine(const FitResult& plus, const FitResult& minus, double gap,
                           double separation) {
  return MarkovParameters::from_channels(gap, separation, plus.frequency, minus.frequency,
                                         plus.rate, minus.rate, LambScheme::fitted);
}

}  // namespace

MarkovParameters extract_two_qubit(const TimeTrace& trace, const FitWindow& window, double gap,
                                   double separation) {
  const double flight = detect_light_cone(trace);
  if (window.start < flight) {
    std::ostringstream os;
    os << "extract_two_qubit: window starts at " << window.start
       << " before the channels split (t = " << flight << ")";
    throw InvalidArgument(os.str());
  }
  return recombine(fit_decay(trace, Channel::plus, window), fit_decay(trace, Channel::minus, window),
                   gap, separation);
}

MarkovParameters extract_two_qubit(const TimeTrace& plus, const TimeTrace& minus,
                                   const FitWindow& window, double gap, double separation) {
  if (plus.channel != Channel::plus || minus.channel != Channel::minus)
    throw InvalidArgument("extract_two_qubit: expected a plus and a minus channel trace");
  return recombine(fit_decay(plus, Channel::plus, window), fit_decay(minus, Channel::minus, window),
                   gap, separation);
}

GapEstimate extract_gap_from_period(const std::vector<double>& separations,
                                    const std::vector<double>& values,
                                    const PhotonicModel* model) {
  if (separations.size() != values.size() || separations.size() < 2)
    throw InvalidArgument("extract_gap_from_period: need matching (d, value) samples");
  GapEstimate est;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double a = values[i];
    const double b = values[i + 1];
    if (a == 0.0) {
      if (est.zeros.empty() || est.zeros.back() != separations[i]) est.zeros.push_back(separations[i]);
    } else if (a * b < 0.0) {
      est.zeros.push_back(separations[i] + (separations[i + 1] - separations[i]) * a / (a - b));
    }
  }
  if (est.zeros.size() < 3) {
    std::ostringstream os;
    os << "extract_gap_from_period: found " << est.zeros.size() << " zeros, need at least 3";
    throw InvalidArgument(os.str());
  }
  const double sample_step =
      (separations.back() - separations.front()) / static_cast<double>(separations.size() - 1);
  const double spacing =
      (est.zeros.back() - est.zeros.front()) / static_cast<double>(est.zeros.size() - 1);
  if (spacing < 8.0 * sample_step)
    throw InvalidArgument("extract_gap_from_period: fewer than 16 samples per period");

  auto gap_at = [&](double k) { return model ? model->dispersion(k) : k; };
  est.wavenumber = kPi / spacing;
  est.gap = gap_at(est.wavenumber);
  double mean = 0.0;
  std::vector<double> each;
  for (std::size_t i = 0; i + 1 < est.zeros.size(); ++i) {
    each.push_back(gap_at(kPi / (est.zeros[i + 1] - est.zeros[i])));
    mean += each.back();
  }
  mean /= static_cast<double>(each.size());
  double var = 0.0;
  for (double g : each) var += (g - mean) * (g - mean);
  est.spread = each.size() > 1 ? std::sqrt(var / static_cast<double>(each.size() - 1)) : 0.0;
  return est;
}

}  // namespace wqed
