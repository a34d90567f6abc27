#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace synecg {

inline constexpr std::size_t kLabelHalfWidth = 2;  // five ones per r-wave

/// Ones at i-2 .. i+2 around every r index, clipped at the boundaries.
/// Throws ConfigError for indices out of range or not strictly increasing.
std::vector<std::uint8_t> make_labels(std::span<const std::size_t> r_indices, std::size_t length);

/// Normalized biquad, a0 = 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  /// H(e^{j 2 pi f / fs}).
  std::complex<double> response(double f, double sampling_rate) const;
};

inline constexpr double kBandLowHz = 0.5;
inline constexpr double kBandHighHz = 50.0;

/// Second-order Butterworth band-pass (one biquad): the first-order low-pass
/// prototype transformed to a band-pass with prewarped corners, then mapped
/// by the bilinear transform. Gain is exactly -3 dB at both corners.
Biquad design_bandpass(double f_low, double f_high, double sampling_rate);

/// Direct form II transposed, zero initial state.
std::vector<double> filter(const Biquad& q, std::span<const double> x);

enum class FilterMode { forward, zero_phase };

/// 0.5-50 Hz band-pass. Forward (causal) by default; zero_phase runs the
/// filter forward then backward. Throws ConfigError for fs <= 100 Hz.
std::vector<double> bandpass(std::span<const double> signal, double sampling_rate,
                             FilterMode mode = FilterMode::forward);

struct Normalized {
  std::vector<double> samples;
  bool degenerate = false;  // constant input, samples are all zero
};

/// Affine min -> -1, max -> +1.
Normalized normalize(std::span<const double> signal);

}  // namespace synecg
