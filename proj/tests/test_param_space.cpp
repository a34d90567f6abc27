#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "synecg/errors.hpp"
#include "synecg/param_space.hpp"

using namespace synecg;

namespace {

void check_range(Range got, Range want, double eps = 1e-12) {
  CHECK(got.low == doctest::Approx(want.low).epsilon(eps));
  CHECK(got.high == doctest::Approx(want.high).epsilon(eps));
}

}  // namespace

TEST_CASE("stock ranges") {
  const ParameterSpace s = default_space();
  CHECK(s.waves.p.amplitude == Range{0.05, 0.2});
  CHECK(s.waves.q.amplitude == Range{-0.05, -0.2});
  CHECK(s.waves.r.amplitude == Range{0.8, 1.2});
  CHECK(s.waves.s.amplitude == Range{-0.05, -0.2});
  CHECK(s.waves.t.amplitude == Range{0.1, 0.6});
  CHECK(s.waves.p.width == Range{0.065, 0.085});
  CHECK(s.waves.q.width == Range{0.03, 0.08});
  CHECK(s.waves.r.width == Range{0.06, 0.085});
  CHECK(s.waves.s.width == Range{0.03, 0.08});
  CHECK(s.waves.t.width == Range{0.085, 0.21});
  CHECK(s.waves.p.delay == Range{-0.12, -0.18});
  CHECK(s.waves.q.delay == Range{-0.03, -0.05});
  CHECK(s.waves.r.delay == constant(0.0));
  CHECK(s.waves.s.delay == Range{0.03, 0.05});
  CHECK(s.waves.t.delay == Range{0.2, 0.25});
  for (Wave w : {Wave::p, Wave::q, Wave::r, Wave::s}) CHECK(s.waves[w].asymmetry == constant(1.0));
  CHECK(s.waves.t.asymmetry == Range{1.0, 3.0});
  CHECK(s.rr.mu == Range{0.75, 1.0});
  CHECK(s.rr.f_b == 0.28);
  CHECK(s.rr.beta == 0.1);
  CHECK(s.noise.sigma == Range{0.0, 0.17e-3});
  CHECK(s.noise.alpha == Range{0.0, 0.67});
  CHECK(s.noise.rho == Range{0.0, 4e-3});
}

TEST_CASE("C = 1 leaves every range unchanged") {
  const ParameterSpace s = default_space();
  const ParameterSpace e = effective_space(s);
  CHECK(e.waves == s.waves);
  CHECK(e.rr == s.rr);
  CHECK(e.noise == s.noise);
}

TEST_CASE("p amplitude at C = 2 widens to (0.02, 0.23)") {
  check_range(scale_range({0.05, 0.2}, 2.0), {0.02, 0.23});
}

TEST_CASE("scale_range agrees with the literal formula oracle") {
  const ParameterSpace s = default_space();
  for (double c : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0}) {
    CAPTURE(c);
    for (Wave w : kWaves) {
      const WaveRange& wr = s.waves[w];
      for (Range r : {wr.amplitude, wr.width, wr.delay, wr.asymmetry}) {
        check_range(scale_range(r, c), oracle::scale_range(r, c));
      }
    }
    for (Range r : {s.rr.mu, s.noise.sigma, s.noise.alpha, s.noise.rho}) {
      check_range(scale_range(r, c), oracle::scale_range(r, c));
    }
  }
}

TEST_CASE("negative ranges scale on magnitudes and keep their orientation") {
  // q amplitude [-0.05, -0.2] at C = 2: magnitudes (0.05, 0.2) -> (0.02, 0.23)
  check_range(scale_range({-0.05, -0.2}, 2.0), {-0.02, -0.23});
  check_range(scale_range({-0.2, -0.05}, 2.0), {-0.23, -0.02});
}

TEST_CASE("noise lower limits stay at zero for every C") {
  for (double c : {0.0, 1.0, 2.0, 3.0}) {
    const ParameterSpace e = effective_space([&] {
      ParameterSpace s = default_space();
      s.scale = ScaleCoefficients::uniform(c);
      return s;
    }());
    CHECK(e.noise.sigma.low == 0.0);
    CHECK(e.noise.alpha.low == 0.0);
    CHECK(e.noise.rho.low == 0.0);
    CHECK(e.noise.alpha.high == doctest::Approx(0.67 * c));
  }
}

TEST_CASE("r ranges are exempt from scaling unless requested") {
  for (double c : {0.0, 1.0, 2.0, 3.0}) {
    ParameterSpace s = default_space();
    s.scale = ScaleCoefficients::uniform(c);
    const ParameterSpace e = effective_space(s);
    CHECK(e.waves.r.amplitude == Range{0.8, 1.2});
    CHECK(e.waves.r.width == Range{0.06, 0.085});
  }
  ParameterSpace s = default_space();
  s.scale = ScaleCoefficients::uniform(2.0);
  s.scale.scale_r = true;
  CHECK(effective_space(s).waves.r.amplitude != Range{0.8, 1.2});
}

TEST_CASE("C = 0 collapses every ranged parameter onto its midpoint") {
  ParameterSpace s = default_space();
  s.scale = ScaleCoefficients::uniform(0.0);
  const ParameterDraw a = sample_draw(s, 1);
  const ParameterDraw b = sample_draw(s, 987654321);
  for (Wave w : {Wave::p, Wave::q, Wave::s, Wave::t}) {
    CHECK(a[w].amplitude == doctest::Approx(default_space().waves[w].amplitude.midpoint()));
    CHECK(a[w].amplitude == b[w].amplitude);
    CHECK(a[w].width == b[w].width);
    CHECK(a[w].delay == b[w].delay);
  }
  CHECK(a.mu == doctest::Approx(0.875));
  CHECK(a.sigma == 0.0);
  CHECK(a.rho == 0.0);
  CHECK(a.alpha == 0.0);
}

TEST_CASE("per-group coefficients act independently") {
  ParameterSpace s = default_space();
  s.scale.noise = 3.0;
  const ParameterSpace e = effective_space(s);
  CHECK(e.waves == default_space().waves);
  CHECK(e.rr.mu == Range{0.75, 1.0});
  CHECK(e.noise.rho.high == doctest::Approx(12e-3));

  s = default_space();
  s.scale.fiducial = 2.0;
  const ParameterSpace f = effective_space(s);
  CHECK(f.waves.p.amplitude == Range{0.05, 0.2});
  CHECK(f.waves.t.delay != Range{0.2, 0.25});
}

TEST_CASE("invalid coefficients and degenerate ranges are rejected") {
  CHECK_THROWS_AS(scale_range({0.1, 0.2}, -1.0), ConfigError);
  CHECK_THROWS_AS(scale_range({0.1, 0.2}, std::nan("")), ConfigError);
  CHECK_THROWS_AS(scale_range({-0.1, 0.1}, 2.0), ConfigError);
  ParameterSpace s = default_space();
  s.scale.wave = -1.0;
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = default_space();
  s.noise.sigma = {0.01, 0.02};
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = default_space();
  s.rr.mu = {0.05, 0.08};
  CHECK_THROWS_AS(validate(s), ConfigError);
}

TEST_CASE("draws stay inside the effective ranges") {
  for (double c : {0.5, 1.0, 2.0, 3.0}) {
    ParameterSpace s = default_space();
    s.scale = ScaleCoefficients::uniform(c);
    const ParameterSpace e = effective_space(s);
    for (Seed seed = 0; seed < 300; ++seed) {
      const ParameterDraw d = sample_draw(s, seed);
      for (Wave w : kWaves) {
        CHECK(e.waves[w].amplitude.contains(d[w].amplitude));
        CHECK((e.waves[w].width.contains(d[w].width) || d[w].width == kMinWidth));
        CHECK(e.waves[w].delay.contains(d[w].delay));
        CHECK(d[w].m_pos >= kMinAsymmetry);
        CHECK(d[w].m_neg == 1.0);
      }
      CHECK(e.rr.mu.contains(d.mu));
      CHECK(e.noise.sigma.contains(d.sigma));
      CHECK(e.noise.alpha.contains(d.alpha));
      CHECK(d.rho <= e.noise.rho.high * d.alpha * d.alpha + 1e-15);
    }
  }
}

TEST_CASE("sampling is a pure function of (space, seed)") {
  const ParameterSpace s = default_space();
  const ParameterDraw a = sample_draw(s, 42);
  const ParameterDraw b = sample_draw(s, 42);
  const ParameterDraw c = sample_draw(s, 43);
  CHECK(to_json(a) == to_json(b));
  CHECK(to_json(a) != to_json(c));
}

TEST_CASE("rho is multiplied by alpha squared") {
  ParameterSpace s = default_space();
  s.noise.alpha = {0.0, 1.0};
  s.noise.rho = {0.0, 8e-3};
  const ParameterDraw d = fixed_draw(s, 0.5);
  CHECK(d.alpha == doctest::Approx(0.5));
  CHECK(d.rho == doctest::Approx(4e-3 * 0.25));
  for (Seed seed = 0; seed < 100; ++seed) {
    const ParameterDraw r = sample_draw(default_space(), seed);
    CHECK(r.rho <= 4e-3 * r.alpha * r.alpha);
  }
}

TEST_CASE("fixed_draw picks the requested point of each range") {
  const ParameterSpace s = default_space();
  const ParameterDraw lo = fixed_draw(s, 0.0);
  const ParameterDraw mid = fixed_draw(s, 0.5);
  CHECK(lo.t.amplitude == doctest::Approx(0.1));
  CHECK(mid.t.amplitude == doctest::Approx(0.35));
  CHECK(mid.q.amplitude == doctest::Approx(-0.125));
  CHECK(mid.mu == doctest::Approx(0.875));
}

TEST_CASE("space and draw JSON round trip") {
  ParameterSpace s = default_space();
  s.scale = {2.0, 1.5, 0.5, 3.0, true};
  s.rr.gamma_sd = 0.01;
  CHECK(space_from_json(to_json(s)) == s);

  const ParameterDraw d = sample_draw(s, 5);
  CHECK(to_json(draw_from_json(to_json(d))) == to_json(d));
}

TEST_CASE("partial JSON falls back to stock ranges") {
  const ParameterSpace s = space_from_json(nlohmann::json::parse(R"({"scale": 2})"));
  CHECK(s.scale.wave == 2.0);
  CHECK(s.waves == default_space().waves);
  CHECK_THROWS_AS(space_from_json(nlohmann::json::parse(R"({"rr": {"mu": "fast"}})")), ConfigError);
}
