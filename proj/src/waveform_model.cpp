#include "synecg/waveform_model.hpp"

#include <cmath>
#include <numbers>

#include "synecg/errors.hpp"

namespace synecg {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double wave_gradient(double phi, double a, double b, double m_pos, double m_neg) {
  const double m = phi < 0.0 ? m_neg : m_pos;
  const double b2 = b * b;
  return -kTwoPi * m * a * phi / b2 * std::exp(-m * phi * phi / (2.0 * b2));
}

std::vector<double> wave_gradient(std::span<const double> phase, double a, double b, double m_pos,
                                  double m_neg) {
  std::vector<double> out(phase.size());
  for (std::size_t i = 0; i < phase.size(); ++i) {
    out[i] = wave_gradient(phase[i], a, b, m_pos, m_neg);
  }
  return out;
}

double wave_phase(std::ptrdiff_t k, std::size_t cycle_samples, std::ptrdiff_t offset) {
  const auto n = static_cast<std::ptrdiff_t>(cycle_samples);
  const auto apex = static_cast<std::ptrdiff_t>(apex_index(cycle_samples));
  return kTwoPi * static_cast<double>(k - apex - offset) / static_cast<double>(n);
}

std::vector<double> cycle_phase(std::size_t cycle_samples) {
  std::vector<double> phase(cycle_samples);
  for (std::size_t k = 0; k < cycle_samples; ++k) {
    phase[k] = wave_phase(static_cast<std::ptrdiff_t>(k), cycle_samples, 0);
  }
  return phase;
}

double coupled_t_delay(double d_t, double mean_rr) { return d_t * std::sqrt(mean_rr / 1.0); }

std::vector<std::size_t> cycle_lengths(const RrSeries& rr, double sampling_rate) {
  std::vector<std::size_t> n(rr.size());
  for (std::size_t i = 0; i < rr.size(); ++i) {
    const long v = std::lround(rr.intervals[i] * sampling_rate);
    n[i] = static_cast<std::size_t>(v < 1 ? 1 : v);
  }
  return n;
}

CleanEcg synthesize_clean(const ParameterDraw& draw, const RrSeries& rr, std::size_t n_samples) {
  const double fs = draw.sampling_rate;
  if (!(fs > 0.0)) throw ConfigError("waveform: sampling rate must be > 0");
  const std::vector<std::size_t> lengths = cycle_lengths(rr, fs);
  std::size_t covered = 0;
  for (std::size_t n : lengths) covered += n;
  if (n_samples == 0 || covered < n_samples) {
    throw ConfigError("waveform: RR series spans " + std::to_string(covered) +
                      " samples, need " + std::to_string(n_samples));
  }

  CleanEcg out;
  out.draw = draw;
  out.rr = rr;
  out.t_delay = coupled_t_delay(draw.t.delay, rr.mean());
  out.samples.assign(n_samples, 0.0);

  struct Active {
    WaveDraw wave;
    std::ptrdiff_t offset;
  };
  std::vector<Active> waves;
  for (Wave w : kWaves) {
    const WaveDraw& wd = draw[w];
    if (wd.amplitude == 0.0) continue;
    const double delay = (w == Wave::t) ? out.t_delay : wd.delay;
    waves.push_back({wd, static_cast<std::ptrdiff_t>(std::lround(delay * fs))});
  }

  // Increments G_k for k in [-2, n], stored at k + 2.
  std::vector<double> g;
  std::size_t start = 0;
  for (std::size_t cycle = 0; cycle < lengths.size() && start < n_samples; ++cycle) {
    const std::size_t n = lengths[cycle];
    const auto ni = static_cast<std::ptrdiff_t>(n);
    const auto apex = static_cast<std::ptrdiff_t>(apex_index(n));

    g.assign(n + 3, 0.0);
    for (const Active& a : waves) {
      const std::ptrdiff_t peak = apex + a.offset;
      if (peak < 0 || peak >= ni) ++out.truncated_waves;
      for (std::ptrdiff_t k = -2; k <= ni; ++k) {
        const double phi = wave_phase(k, n, a.offset);
        if (phi < -kPi || phi >= kPi) continue;
        g[static_cast<std::size_t>(k + 2)] +=
            wave_gradient(phi, a.wave.amplitude, a.wave.width, a.wave.m_pos, a.wave.m_neg) /
            static_cast<double>(n);
      }
    }

    // z_0 = 0; each cell integral uses the cubic through four neighbouring increments.
    double z = 0.0;
    for (std::size_t k = 0; k < n && start + k < n_samples; ++k) {
      if (k > 0) {
        const std::size_t j = k + 2;
        z += (-g[j - 2] + 13.0 * g[j - 1] + 13.0 * g[j] - g[j + 1]) / 24.0;
      }
      out.samples[start + k] = z;
    }
    if (start + static_cast<std::size_t>(apex) < n_samples) {
      out.r_indices.push_back(start + static_cast<std::size_t>(apex));
    }
    start += n;
  }
  return out;
}

}  // namespace synecg
