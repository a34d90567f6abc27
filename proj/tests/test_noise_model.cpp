#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "synecg/errors.hpp"
#include "synecg/noise_model.hpp"

using namespace synecg;

namespace {

double mean_square(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("analytic PSD") {
  const NoiseSpec s{0.01, 1.0, 0.5, 100, 250.0};
  CHECK(analytic_psd(s, 0.0) == 0.0);
  CHECK(analytic_psd(s, 2.0) == doctest::Approx(0.005 + 0.5));
  const NoiseSpec white{0.0, 0.0, 0.25, 100, 250.0};
  CHECK(analytic_psd(white, 10.0) == 0.25);
}

TEST_CASE("frequency grid") {
  const std::vector<double> f = one_sided_frequencies(1000, 250.0);
  REQUIRE(f.size() == 501);
  CHECK(f[1] == doctest::Approx(0.25));
  CHECK(f.back() == doctest::Approx(125.0));
}

TEST_CASE("periodogram agrees with the radix-2 oracle") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(1024);
  for (double& v : x) v = g(rng);
  const std::vector<double> want = oracle::periodogram(x);
  const std::vector<double> got = periodogram(x);
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("sample mean is zero") {
  const std::vector<double> x = generate_noise({0.01, 1.5, 0.01, 3000, 250.0}, 4);
  CHECK(std::abs(std::accumulate(x.begin(), x.end(), 0.0)) < 1e-10);
}

TEST_CASE("white spectrum has variance sigma^2") {
  for (std::size_t n : {1000, 4096}) {
    double acc = 0.0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) acc += mean_square(generate_noise({0.0, 0.0, 0.04, n, 250.0}, s));
    CHECK(acc / seeds == doctest::Approx(0.04).epsilon(0.02));
  }
}

TEST_CASE("flat spectrum with a power-law constant has variance rho + sigma^2") {
  double acc = 0.0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) acc += mean_square(generate_noise({0.02, 0.0, 0.01, 2048, 250.0}, s));
  CHECK(acc / seeds == doctest::Approx(0.03).epsilon(0.02));
}

TEST_CASE("mean periodogram matches the analytic PSD bin by bin") {
  const NoiseSpec spec{0.01, 1.0, 0.001, 256, 250.0};
  const int seeds = 2000;
  std::vector<double> mean(spec.n_samples / 2 + 1, 0.0);
  for (int s = 0; s < seeds; ++s) {
    const std::vector<double> p = oracle::periodogram(generate_noise(spec, s));
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += p[k] / seeds;
  }
  const std::vector<double> f = one_sided_frequencies(spec.n_samples, spec.sampling_rate);
  CHECK(mean[0] < 1e-20);
  for (std::size_t k = 1; k < mean.size(); ++k) {
    CAPTURE(k);
    CHECK(mean[k] == doctest::Approx(analytic_psd(spec, f[k])).epsilon(0.10));
  }
}

TEST_CASE("alpha = 1 gives a log-log slope near -1") {
  const NoiseSpec spec{0.01, 1.0, 0.0, 1 << 14, 250.0};
  const int seeds = 30;
  const std::vector<double> f = one_sided_frequencies(spec.n_samples, spec.sampling_rate);
  std::vector<double> mean(f.size(), 0.0);
  for (int s = 0; s < seeds; ++s) {
    const std::vector<double> p = periodogram(generate_noise(spec, s));
    for (std::size_t k = 0; k < f.size(); ++k) mean[k] += p[k] / seeds;
  }
  std::vector<double> lx, ly;
  for (std::size_t k = 1; k < f.size(); ++k) {
    if (f[k] >= 0.1 && f[k] <= 10.0) {
      lx.push_back(std::log10(f[k]));
      ly.push_back(std::log10(mean[k]));
    }
  }
  CHECK(oracle::slope(lx, ly) == doctest::Approx(-1.0).epsilon(0.15));
}

TEST_CASE("zero parameters give silence") {
  const std::vector<double> x = generate_noise({0.0, 0.67, 0.0, 500, 250.0}, 1);
  for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("odd lengths are supported") {
  const std::vector<double> x = generate_noise({0.0, 0.0, 1.0, 999, 250.0}, 1);
  CHECK(x.size() == 999);
}

TEST_CASE("noise is a pure function of (spec, seed)") {
  const NoiseSpec s{0.004, 0.5, 1e-6, 1200, 250.0};
  CHECK(generate_noise(s, 9) == generate_noise(s, 9));
  CHECK(generate_noise(s, 9) != generate_noise(s, 10));
}

TEST_CASE("draw noise parameters use sigma as a standard deviation") {
  ParameterDraw d;
  d.sigma = 0.1;
  d.alpha = 0.5;
  d.rho = 0.002;
  const NoiseSpec s = noise_spec(d, 1000);
  CHECK(s.sigma2 == doctest::Approx(0.01));
  CHECK(s.rho == 0.002);
  CHECK(s.n_samples == 1000);
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(generate_noise({0.0, 0.0, 1.0, 1, 250.0}, 1), ConfigError);
  CHECK_THROWS_AS(generate_noise({-1.0, 0.0, 1.0, 100, 250.0}, 1), ConfigError);
  CHECK_THROWS_AS(generate_noise({0.0, -1.0, 1.0, 100, 250.0}, 1), ConfigError);
  CHECK_THROWS_AS(generate_noise({0.0, 0.0, 1.0, 100, 0.0}, 1), ConfigError);
}
