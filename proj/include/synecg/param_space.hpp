#pragma once

#include <array>
#include <string_view>

#include <json.hpp>

#include "synecg/seeding.hpp"

namespace synecg {

/// Uniform sampling interval. Endpoints keep the order they were written in
/// (q and s amplitudes are listed as [-0.05, -0.2]); sampling is uniform
/// between them whatever the order.
struct Range {
  double low = 0.0;
  double high = 0.0;

  constexpr bool is_constant() const { return low == high; }
  constexpr double midpoint() const { return 0.5 * (low + high); }
  constexpr bool contains(double v, double eps = 1e-12) const {
    const double lo = low < high ? low : high;
    const double hi = low < high ? high : low;
    return v >= lo - eps && v <= hi + eps;
  }
  friend constexpr bool operator==(const Range&, const Range&) = default;
};

constexpr Range constant(double v) { return Range{v, v}; }

enum class Wave { p, q, r, s, t };

inline constexpr std::array<Wave, 5> kWaves = {Wave::p, Wave::q, Wave::r, Wave::s, Wave::t};

std::string_view wave_name(Wave w);

struct WaveRange {
  Range amplitude;  // r-normalized
  Range width;      // phase units (radians)
  Range delay;      // seconds relative to the r apex
  Range asymmetry;  // exponent multiplier on the trailing (phi >= 0) side
  friend bool operator==(const WaveRange&, const WaveRange&) = default;
};

struct WaveRanges {
  WaveRange p, q, r, s, t;

  const WaveRange& operator[](Wave w) const;
  WaveRange& operator[](Wave w);
  friend bool operator==(const WaveRanges&, const WaveRanges&) = default;
};

struct RrRanges {
  Range mu;               // seconds
  double f_b = 0.28;      // Hz
  double beta = 0.1;      // seconds
  double gamma_sd = 0.0;  // seconds
  friend bool operator==(const RrRanges&, const RrRanges&) = default;
};

/// Noise rows have a lower limit pinned at zero.
struct NoiseRanges {
  Range sigma;  // white-noise standard deviation
  Range alpha;  // power-law exponent
  Range rho;    // power-law constant, multiplied by alpha^2 after sampling
  friend bool operator==(const NoiseRanges&, const NoiseRanges&) = default;
};

struct ScaleCoefficients {
  double rr = 1.0;
  double wave = 1.0;
  double fiducial = 1.0;
  double noise = 1.0;
  bool scale_r = false;  // r-wave amplitude/width are exempt unless set

  static constexpr ScaleCoefficients uniform(double c) { return {c, c, c, c, false}; }
  friend bool operator==(const ScaleCoefficients&, const ScaleCoefficients&) = default;
};

struct ParameterSpace {
  WaveRanges waves;
  RrRanges rr;
  NoiseRanges noise;
  ScaleCoefficients scale;
  double sampling_rate = 250.0;
  friend bool operator==(const ParameterSpace&, const ParameterSpace&) = default;
};

struct WaveDraw {
  double amplitude = 0.0;
  double width = 0.1;
  double delay = 0.0;
  double m_pos = 1.0;
  double m_neg = 1.0;
};

struct ParameterDraw {
  WaveDraw p, q, r, s, t;
  double mu = 1.0;
  double f_b = 0.28;
  double beta = 0.1;
  double gamma_sd = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double rho = 0.0;  // already multiplied by alpha^2
  double sampling_rate = 250.0;
  Seed seed = 0;

  const WaveDraw& operator[](Wave w) const;
  WaveDraw& operator[](Wave w);
};

inline constexpr double kMinWidth = 0.005;
inline constexpr double kMinAsymmetry = 1.0;

/// Weighted range scaling. For C >= 1 both limits move outward by
/// d = |l_low - l_high| (C - 1) l_low / (l_low + l_high), where l_low is the
/// limit closer to zero; limits of two negative values are scaled on their
/// magnitudes and the sign restored. For C < 1 the range shrinks linearly onto
/// its midpoint. A zero lower limit stays at zero and the upper limit becomes
/// C * upper. Constant ranges are returned unchanged.
///
/// Throws ConfigError for C < 0 or a sign-mixed range with l_low + l_high = 0.
Range scale_range(Range range, double c);

/// Stock parameter ranges at C = 1.
ParameterSpace default_space();

/// Throws ConfigError on the first violated invariant.
void validate(const ParameterSpace& space);

/// Ranges after applying the per-group coefficients; the returned space has
/// unit coefficients.
ParameterSpace effective_space(const ParameterSpace& space);

/// Uniform, independent draw of every ranged parameter; pure in (space, seed).
ParameterDraw sample_draw(const ParameterSpace& space, Seed seed);

/// Draw built from a fixed point of every range: 0 = low, 1 = high, 0.5 = midpoint.
ParameterDraw fixed_draw(const ParameterSpace& space, double position);

nlohmann::json to_json(const ParameterSpace& space);
/// Missing keys fall back to default_space(). Throws ConfigError.
ParameterSpace space_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ParameterDraw& draw);
ParameterDraw draw_from_json(const nlohmann::json& j);

}  // namespace synecg
