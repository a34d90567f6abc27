#include "synecg/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "synecg/errors.hpp"

namespace synecg {

std::vector<std::uint8_t> make_labels(std::span<const std::size_t> r_indices, std::size_t length) {
  std::vector<std::uint8_t> labels(length, 0);
  for (std::size_t i = 0; i < r_indices.size(); ++i) {
    const std::size_t r = r_indices[i];
    if (r >= length) {
      throw ConfigError("labels: r index " + std::to_string(r) + " outside [0, " +
                        std::to_string(length) + ")");
    }
    if (i > 0 && r <= r_indices[i - 1]) {
      throw ConfigError("labels: r indices must be strictly increasing");
    }
    const std::size_t lo = r >= kLabelHalfWidth ? r - kLabelHalfWidth : 0;
    const std::size_t hi = std::min(length - 1, r + kLabelHalfWidth);
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(lo),
              labels.begin() + static_cast<std::ptrdiff_t>(hi) + 1, std::uint8_t{1});
  }
  return labels;
}

std::complex<double> Biquad::response(double f, double sampling_rate) const {
  const std::complex<double> z1 = std::polar(1.0, -2.0 * std::numbers::pi * f / sampling_rate);
  const std::complex<double> z2 = z1 * z1;
  return (b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2);
}

Biquad design_bandpass(double f_low, double f_high, double sampling_rate) {
  if (!(f_low > 0.0 && f_low < f_high && 2.0 * f_high < sampling_rate)) {
    throw ConfigError("bandpass: need 0 < f_low < f_high < fs/2");
  }
  const double k = 2.0 * sampling_rate;
  const double w1 = k * std::tan(std::numbers::pi * f_low / sampling_rate);
  const double w2 = k * std::tan(std::numbers::pi * f_high / sampling_rate);
  const double bw = w2 - w1;
  const double w0sq = w1 * w2;

  // H(s) = bw s / (s^2 + bw s + w0^2), s = k (1 - z^-1) / (1 + z^-1)
  const double a0 = k * k + bw * k + w0sq;
  Biquad q;
  q.b0 = bw * k / a0;
  q.b1 = 0.0;
  q.b2 = -bw * k / a0;
  q.a1 = (2.0 * w0sq - 2.0 * k * k) / a0;
  q.a2 = (k * k - bw * k + w0sq) / a0;
  return q;
}

std::vector<double> filter(const Biquad& q, std::span<const double> x) {
  std::vector<double> y(x.size());
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double out = q.b0 * x[i] + s1;
    s1 = q.b1 * x[i] - q.a1 * out + s2;
    s2 = q.b2 * x[i] - q.a2 * out;
    y[i] = out;
  }
  return y;
}

std::vector<double> bandpass(std::span<const double> signal, double sampling_rate, FilterMode mode) {
  if (!(sampling_rate > 2.0 * kBandHighHz)) {
    throw ConfigError("bandpass: sampling rate must exceed 100 Hz");
  }
  const Biquad q = design_bandpass(kBandLowHz, kBandHighHz, sampling_rate);
  std::vector<double> y = filter(q, signal);
  if (mode == FilterMode::zero_phase) {
    std::reverse(y.begin(), y.end());
    y = filter(q, y);
    std::reverse(y.begin(), y.end());
  }
  return y;
}

Normalized normalize(std::span<const double> signal) {
  Normalized out;
  out.samples.assign(signal.size(), 0.0);
  if (signal.empty()) {
    out.degenerate = true;
    return out;
  }
  const auto [lo_it, hi_it] = std::minmax_element(signal.begin(), signal.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) {
    out.degenerate = true;
    return out;
  }
  const double span = hi - lo;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    out.samples[i] = 2.0 * (signal[i] - lo) / span - 1.0;
  }
  return out;
}

}  // namespace synecg
