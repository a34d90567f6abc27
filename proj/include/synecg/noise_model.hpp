#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "synecg/param_space.hpp"
#include "synecg/seeding.hpp"

namespace synecg {

/// PSD(f) = rho / f^alpha + sigma2 on the one-sided frequency grid of an
/// n-sample realization.
struct NoiseSpec {
  double rho = 0.0;
  double alpha = 0.0;
  double sigma2 = 0.0;
  std::size_t n_samples = 0;
  double sampling_rate = 250.0;
};

/// Noise parameters of a draw: sigma is a standard deviation, squared here.
NoiseSpec noise_spec(const ParameterDraw& draw, std::size_t n_samples);

/// Analytic PSD; zero at f = 0 (the DC bin is never populated).
double analytic_psd(const NoiseSpec& spec, double f);

/// Frequencies k fs / n for k = 0 .. n/2.
std::vector<double> one_sided_frequencies(std::size_t n, double sampling_rate);

/// Randomized-spectrum synthesis: every bin amplitude sqrt(PSD(f_k) n^2/(n-1))
/// is multiplied by an independent unit-variance complex Gaussian, the
/// spectrum is completed Hermitian, and the real inverse FFT is returned.
/// The normalization makes a white spectrum (rho = 0) produce variance sigma2
/// in expectation; the sample mean is exactly zero.
///
/// Throws ConfigError for n_samples < 2 or negative parameters.
std::vector<double> generate_noise(const NoiseSpec& spec, Seed seed);

/// One-sided periodogram in the same units as analytic_psd:
/// |X_k|^2 (n-1)/n^2 for k = 0 .. n/2, so its expectation over
/// generate_noise realizations equals analytic_psd(f_k).
std::vector<double> periodogram(std::span<const double> x);

}  // namespace synecg
