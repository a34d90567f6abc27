#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "synecg/param_space.hpp"
#include "synecg/rr_model.hpp"

namespace synecg {

/// Gaussian-derivative gradient of one wave at phase `phi`:
///   -2 pi m a phi / b^2 * exp(-m phi^2 / (2 b^2))
/// with m = m_neg for phi < 0 and m = m_pos for phi >= 0.
double wave_gradient(double phi, double a, double b, double m_pos, double m_neg);

std::vector<double> wave_gradient(std::span<const double> phase, double a, double b,
                                  double m_pos, double m_neg);

/// Sample of the cycle at which the r phase is exactly zero.
constexpr std::size_t apex_index(std::size_t cycle_samples) { return cycle_samples / 2; }

/// Phase of a wave delayed by `offset` samples relative to the r apex, at
/// sample k of a cycle of `cycle_samples` samples. Linear with increment
/// 2 pi / cycle_samples; the wave is active only where the result lies in
/// [-pi, pi).
double wave_phase(std::ptrdiff_t k, std::size_t cycle_samples, std::ptrdiff_t offset);

/// r-wave phase over one cycle, starting at -pi when the count is even.
std::vector<double> cycle_phase(std::size_t cycle_samples);

/// t-wave delay after heart-rate coupling: d_t * sqrt(mean_rr / 1 s).
double coupled_t_delay(double d_t, double mean_rr);

struct CleanEcg {
  std::vector<double> samples;
  std::vector<std::size_t> r_indices;
  RrSeries rr;
  ParameterDraw draw;
  double t_delay = 0.0;             // effective t delay in seconds
  std::size_t truncated_waves = 0;  // (cycle, wave) pairs whose apex left the cycle
};

/// Sums the five wave gradients per cycle and integrates them cumulatively
/// (fourth-order cell rule, reset at every cycle start) so an isolated wave
/// peaks at its amplitude. r_indices mark each cycle's r apex.
///
/// Throws ConfigError when the RR series does not span n_samples.
CleanEcg synthesize_clean(const ParameterDraw& draw, const RrSeries& rr, std::size_t n_samples);

/// Per-cycle sample counts round(rr_i * fs), at least 1.
std::vector<std::size_t> cycle_lengths(const RrSeries& rr, double sampling_rate);

}  // namespace synecg
