#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "synecg/artefact_augment.hpp"
#include "synecg/errors.hpp"
#include "synecg/matrix_io.hpp"

using namespace synecg;

namespace {

void write_record(const std::filesystem::path& p, std::size_t n, double rate, double freq) {
  std::vector<float> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<float>(std::sin(freq * static_cast<double>(i)));
  write_matrix_f32(p, v, 1, n, {{"sampling_rate", rate}});
}

ArtefactBank ramp_bank(std::size_t n) {
  ArtefactBank b;
  for (std::size_t i = 0; i < n; ++i) {
    b.bw.push_back(0.001 * static_cast<double>(i));
    b.ma.push_back(i % 2 ? 0.5 : -0.5);
  }
  return b;
}

}  // namespace

TEST_CASE("bank loads float32 records with their sampling rate") {
  oracle::TempDir dir;
  write_record(dir / "bw.f32", 5000, 250.0, 0.01);
  write_record(dir / "ma.f32", 4000, 250.0, 1.3);
  const ArtefactBank b = load_bank(dir.path);
  CHECK(b.bw.size() == 5000);
  CHECK(b.ma.size() == 4000);
  CHECK(b.source.contains("bw"));
}

TEST_CASE("bank at the wrong rate or with missing records is rejected") {
  oracle::TempDir dir;
  write_record(dir / "bw.f32", 5000, 360.0, 0.01);
  write_record(dir / "ma.f32", 5000, 360.0, 0.01);
  CHECK_THROWS_AS(load_bank(dir.path), ConfigError);
  CHECK_NOTHROW(load_bank(dir.path, 360.0));
  oracle::TempDir empty;
  CHECK_THROWS_AS(load_bank(empty.path), IoError);
}

TEST_CASE("bank records shorter than a segment are rejected") {
  const ArtefactBank b = ramp_bank(999);
  CHECK_THROWS_AS(validate(b, 1000), ConfigError);
  CHECK_NOTHROW(validate(b, 999));
  CHECK_THROWS_AS(draw_artefact(b, 1000, 1), ConfigError);
}

TEST_CASE("BW-only draw on a zero segment is the scaled window plus powerline") {
  const ArtefactBank b = ramp_bank(3000);
  ArtefactDraw d;
  d.category = ArtefactCategory::bw;
  d.bw_offset = 123;
  d.bw_gain = 4.0;
  d.powerline_gain = 0.25;
  d.powerline_phase = 0.3;
  const std::vector<double> zero(1000, 0.0);
  const std::vector<double> out = apply_artefact(zero, b, d);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double want = 4.0 * b.bw[123 + i] +
                        0.25 * std::sin(2 * std::numbers::pi * 60.0 * static_cast<double>(i) / 250.0 + 0.3);
    CHECK(out[i] == doctest::Approx(want).epsilon(1e-12).scale(1e-12));
  }
}

TEST_CASE("draws respect the category and gain bounds") {
  const ArtefactBank b = ramp_bank(3000);
  int seen[3] = {0, 0, 0};
  for (Seed s = 0; s < 600; ++s) {
    const ArtefactDraw d = draw_artefact(b, 1000, s);
    ++seen[static_cast<int>(d.category)];
    CHECK(d.bw_gain >= 0.0);
    CHECK(d.bw_gain <= kBwMaxGain);
    CHECK(d.ma_gain >= 0.0);
    CHECK(d.ma_gain <= kMaMaxGain);
    CHECK(d.powerline_gain <= kPowerlineMaxGain);
    CHECK(d.bw_offset + 1000 <= b.bw.size());
    CHECK(d.ma_offset + 1000 <= b.ma.size());
    if (d.category == ArtefactCategory::bw) CHECK(d.ma_gain == 0.0);
    if (d.category == ArtefactCategory::ma) CHECK(d.bw_gain == 0.0);
  }
  for (int c : seen) CHECK(c > 150);
}

TEST_CASE("augmentation is a pure function of the seed") {
  const ArtefactBank b = ramp_bank(3000);
  std::vector<double> seg(1000);
  for (std::size_t i = 0; i < seg.size(); ++i) seg[i] = std::sin(0.05 * static_cast<double>(i));
  CHECK(augment(seg, b, 3) == augment(seg, b, 3));
  CHECK(augment(seg, b, 3) != augment(seg, b, 4));
}

TEST_CASE("augment requires a normalized segment") {
  const ArtefactBank b = ramp_bank(3000);
  std::vector<double> seg(1000, 0.0);
  seg[10] = 1.5;
  CHECK_THROWS_AS(augment(seg, b, 1), ConfigError);
}
