#include "synecg/noise_model.hpp"

#include <cmath>
#include <memory>
#include <mutex>

#include <fftw3.h>

#include "synecg/errors.hpp"

namespace synecg {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

class Plan {
 public:
  explicit Plan(fftw_plan plan) : plan_(plan) {}
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

}  // namespace

NoiseSpec noise_spec(const ParameterDraw& draw, std::size_t n_samples) {
  return NoiseSpec{draw.rho, draw.alpha, draw.sigma * draw.sigma, n_samples, draw.sampling_rate};
}

double analytic_psd(const NoiseSpec& spec, double f) {
  if (f <= 0.0) return 0.0;
  const double power_law = spec.rho == 0.0 ? 0.0 : spec.rho / std::pow(f, spec.alpha);
  return power_law + spec.sigma2;
}

std::vector<double> one_sided_frequencies(std::size_t n, double sampling_rate) {
  std::vector<double> f(n / 2 + 1);
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = static_cast<double>(k) * sampling_rate / static_cast<double>(n);
  }
  return f;
}

std::vector<double> generate_noise(const NoiseSpec& spec, Seed seed) {
  const std::size_t n = spec.n_samples;
  if (n < 2) throw ConfigError("noise: n_samples must be >= 2");
  if (!(spec.rho >= 0.0) || !(spec.alpha >= 0.0) || !(spec.sigma2 >= 0.0)) {
    throw ConfigError("noise: rho, alpha and sigma2 must be >= 0");
  }
  if (!(spec.sampling_rate > 0.0)) throw ConfigError("noise: sampling rate must be > 0");

  const std::size_t bins = n / 2 + 1;
  const bool has_nyquist = n % 2 == 0;
  const double nd = static_cast<double>(n);
  const double norm = nd * nd / (nd - 1.0);

  FftwBuffer<fftw_complex> spectrum(fftw_alloc_complex(bins));
  FftwBuffer<double> signal(fftw_alloc_real(n));
  if (!spectrum || !signal) throw std::bad_alloc();

  Rng rng = make_rng(seed);
  std::normal_distribution<double> half(0.0, std::sqrt(0.5));
  std::normal_distribution<double> unit(0.0, 1.0);

  spectrum[0][0] = 0.0;
  spectrum[0][1] = 0.0;
  for (std::size_t k = 1; k < bins; ++k) {
    const double f = static_cast<double>(k) * spec.sampling_rate / nd;
    const double amp = std::sqrt(analytic_psd(spec, f) * norm);
    if (has_nyquist && k == bins - 1) {
      spectrum[k][0] = amp * unit(rng);
      spectrum[k][1] = 0.0;
    } else {
      const double re = half(rng);
      const double im = half(rng);
      spectrum[k][0] = amp * re;
      spectrum[k][1] = amp * im;
    }
  }

  fftw_plan raw = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_dft_c2r_1d(static_cast<int>(n), spectrum.get(), signal.get(), FFTW_ESTIMATE);
  }
  if (raw == nullptr) throw std::runtime_error("noise: FFTW planning failed");
  const Plan plan(raw);
  plan.execute();

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = signal[i] / nd;
  return out;
}

std::vector<double> periodogram(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw ConfigError("periodogram: need at least 2 samples");
  const std::size_t bins = n / 2 + 1;
  FftwBuffer<double> in(fftw_alloc_real(n));
  FftwBuffer<fftw_complex> spectrum(fftw_alloc_complex(bins));
  if (!in || !spectrum) throw std::bad_alloc();

  fftw_plan raw = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), spectrum.get(), FFTW_ESTIMATE);
  }
  if (raw == nullptr) throw std::runtime_error("periodogram: FFTW planning failed");
  const Plan plan(raw);
  for (std::size_t i = 0; i < n; ++i) in[i] = x[i];
  plan.execute();

  const double nd = static_cast<double>(n);
  const double scale = (nd - 1.0) / (nd * nd);
  std::vector<double> p(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    p[k] = (spectrum[k][0] * spectrum[k][0] + spectrum[k][1] * spectrum[k][1]) * scale;
  }
  return p;
}

}  // namespace synecg
