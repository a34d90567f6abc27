#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "synecg/dataset_pipeline.hpp"
#include "synecg/errors.hpp"
#include "synecg/noise_model.hpp"
#include "synecg/rr_model.hpp"
#include "synecg/waveform_model.hpp"

using namespace synecg;

namespace {

std::shared_ptr<const ArtefactBank> test_bank() {
  auto b = std::make_shared<ArtefactBank>();
  for (std::size_t i = 0; i < 4000; ++i) {
    b->bw.push_back(0.01 * std::sin(0.003 * static_cast<double>(i)));
    b->ma.push_back(0.02 * std::sin(1.7 * static_cast<double>(i)));
  }
  return b;
}

struct Unfiltered {
  std::vector<double> window;
  std::vector<std::size_t> r;
  std::size_t offset = 0;
};

// The pipeline spelled out from the public stage functions.
Unfiltered unfiltered_window(const GenerationConfig& c, std::size_t index) {
  const Seed seed = derive_seed(c.master_seed, index);
  const ParameterDraw d = sample_draw(c.space, stream_seed(seed, Stream::draw));
  const std::size_t margin = static_cast<std::size_t>(std::lround(2.0 * d.mu * d.sampling_rate));
  const std::size_t total = c.segment_length + margin;
  const RrParams p{d.mu, d.beta, d.f_b, d.gamma_sd};
  RrSeries rr;
  for (std::size_t beats = beats_to_cover(p, static_cast<double>(total) / d.sampling_rate);; beats *= 2) {
    rr = generate_rr(p, beats, stream_seed(seed, Stream::rr));
    const auto n = cycle_lengths(rr, d.sampling_rate);
    if (std::accumulate(n.begin(), n.end(), std::size_t{0}) >= total) break;
  }
  const CleanEcg clean = synthesize_clean(d, rr, total);
  const std::vector<double> noise = generate_noise(noise_spec(d, total), stream_seed(seed, Stream::noise));
  Unfiltered u;
  u.offset = window_offset(seed, margin);
  for (std::size_t i = 0; i < c.segment_length; ++i) {
    u.window.push_back(clean.samples[u.offset + i] + noise[u.offset + i]);
  }
  for (std::size_t r : clean.r_indices) {
    if (r >= u.offset && r < u.offset + c.segment_length) u.r.push_back(r - u.offset);
  }
  return u;
}

LabeledSegment stepwise(const GenerationConfig& c, std::size_t index) {
  const Seed seed = derive_seed(c.master_seed, index);
  Unfiltered u = unfiltered_window(c, index);
  LabeledSegment ex;
  ex.draw = sample_draw(c.space, stream_seed(seed, Stream::draw));
  ex.r_indices = u.r;
  ex.labels = make_labels(u.r, c.segment_length);
  std::vector<double> w = u.window;
  if (c.augment) w = augment(normalize(w).samples, *c.bank, stream_seed(seed, Stream::artefact));
  ex.signal = normalize(bandpass(w, c.space.sampling_rate, c.filter_mode)).samples;
  ex.provenance = {index, seed, u.offset};
  return ex;
}

nlohmann::json parameters(const ParameterDraw& d) {
  nlohmann::json j = to_json(d);
  j.erase("seed");
  return j;
}

void check_same(const LabeledSegment& a, const LabeledSegment& b) {
  CHECK(a.signal == b.signal);
  CHECK(a.labels == b.labels);
  CHECK(a.r_indices == b.r_indices);
  CHECK(a.provenance.seed == b.provenance.seed);
  CHECK(a.provenance.window_offset == b.provenance.window_offset);
  CHECK(to_json(a.draw) == to_json(b.draw));
}

}  // namespace

TEST_CASE("next_example equals the stage-by-stage composition") {
  GenerationConfig c;
  c.master_seed = 2024;
  c.space.scale = ScaleCoefficients::uniform(2.0);
  for (std::size_t i = 0; i < 20; ++i) check_same(next_example(c, i), stepwise(c, i));

  c.augment = true;
  c.bank = test_bank();
  c.filter_mode = FilterMode::zero_phase;
  for (std::size_t i = 0; i < 20; ++i) check_same(next_example(c, i), stepwise(c, i));
}

TEST_CASE("segments are normalized and labelled five samples per r-wave") {
  GenerationConfig c;
  c.master_seed = 5;
  for (std::size_t i = 0; i < 30; ++i) {
    const LabeledSegment ex = next_example(c, i);
    REQUIRE(ex.signal.size() == kSegmentLength);
    CHECK(*std::min_element(ex.signal.begin(), ex.signal.end()) == -1.0);
    CHECK(*std::max_element(ex.signal.begin(), ex.signal.end()) == 1.0);
    std::size_t clipped = 0;
    for (std::size_t r : ex.r_indices) clipped += (r < 2) + (r + 2 >= kSegmentLength);
    const int ones = std::accumulate(ex.labels.begin(), ex.labels.end(), 0);
    CHECK(ones >= static_cast<int>(5 * ex.r_indices.size() - 2 * clipped));
    CHECK(ones <= static_cast<int>(5 * ex.r_indices.size()));
    CHECK(ex.r_indices.size() >= 3);
    CHECK(ex.provenance.window_offset <= window_margin(ex.draw));
  }
}

TEST_CASE("parallel generation is bit-identical to the serial twin") {
  GenerationConfig c;
  c.master_seed = 77;
  c.space.scale = ScaleCoefficients::uniform(3.0);
  for (int jobs : {1, 2, 4}) {
    c.jobs = jobs;
    const auto par = generate_examples(c, 10, 24);
    const auto ser = generate_examples_serial(c, 10, 24);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].provenance.index == 10 + i);
      check_same(par[i], ser[i]);
    }
  }
}

TEST_CASE("example index, not call order, determines the example") {
  GenerationConfig c;
  c.master_seed = 9;
  const LabeledSegment late = next_example(c, 7);
  const auto batch = generate_examples_serial(c, 0, 8);
  check_same(batch[7], late);
  c.master_seed = 10;
  CHECK(next_example(c, 7).signal != late.signal);
}

TEST_CASE("finite dataset streams stay inside [0, n)") {
  GenerationConfig c;
  c.dataset_size = 5;
  ExampleStream s(c, 3);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = s.next_index();
    REQUIRE(k < 5);
    ++hits[k];
  }
  for (int h : hits) CHECK(h > 0);

  c.dataset_size.reset();
  ExampleStream u(c, 3);
  for (std::size_t i = 0; i < 10; ++i) CHECK(u.next_index() == i);
}

TEST_CASE("C = 0 with r scaled makes every example a window of one template") {
  GenerationConfig c;
  c.space.scale = ScaleCoefficients::uniform(0.0);
  c.space.scale.scale_r = true;
  const LabeledSegment a = next_example(c, 0);
  const Unfiltered ua = unfiltered_window(c, 0);
  const auto n = static_cast<std::ptrdiff_t>(ua.window.size());
  for (std::size_t i = 1; i < 12; ++i) {
    const LabeledSegment b = next_example(c, i);
    CHECK(parameters(b.draw) == parameters(a.draw));
    const Unfiltered ub = unfiltered_window(c, i);
    // Same clean trace, no noise: the windows differ only by their start.
    const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(ub.offset) - static_cast<std::ptrdiff_t>(ua.offset);
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      if (k + shift >= 0 && k + shift < n) {
        CHECK(ub.window[static_cast<std::size_t>(k)] == ua.window[static_cast<std::size_t>(k + shift)]);
      }
    }
    // Conditioned signals agree once the filter start-up transient has passed.
    std::vector<double> x, y;
    for (std::ptrdiff_t k = 250; k < n; ++k) {
      if (k + shift >= 250 && k + shift < n) {
        x.push_back(b.signal[static_cast<std::size_t>(k)]);
        y.push_back(a.signal[static_cast<std::size_t>(k + shift)]);
      }
    }
    if (x.size() < 200) continue;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      sxy += (x[k] - mx) * (y[k] - my);
      sxx += (x[k] - mx) * (x[k] - mx);
      syy += (y[k] - my) * (y[k] - my);
    }
    CHECK(sxy / std::sqrt(sxx * syy) >= 0.999);
  }
}

TEST_CASE("C = 0 with r exempt varies only the r wave") {
  GenerationConfig c;
  c.space.scale = ScaleCoefficients::uniform(0.0);
  const ParameterDraw a = next_example(c, 0).draw;
  bool r_varies = false;
  for (std::size_t i = 1; i < 8; ++i) {
    const ParameterDraw b = next_example(c, i).draw;
    for (Wave w : {Wave::p, Wave::q, Wave::s, Wave::t}) {
      CHECK(b[w].amplitude == a[w].amplitude);
      CHECK(b[w].width == a[w].width);
      CHECK(b[w].delay == a[w].delay);
      CHECK(b[w].m_pos == a[w].m_pos);
    }
    CHECK(b.mu == a.mu);
    CHECK(b.sigma == 0.0);
    CHECK(b.rho == 0.0);
    r_varies = r_varies || b.r.amplitude != a.r.amplitude;
  }
  CHECK(r_varies);
}

TEST_CASE("export, import and replay") {
  oracle::TempDir dir;
  GenerationConfig c;
  c.master_seed = 31;
  const DatasetManifest m = export_dataset(c, 12, dir / "a");
  CHECK(m.example_seeds.size() == 12);
  CHECK(m.example_seeds[3] == example_seed(c, 3));

  const Dataset d = import_dataset(dir / "a");
  CHECK(d.rows == 12);
  CHECK(d.cols == kSegmentLength);
  const auto ref = generate_examples_serial(c, 0, 12);
  for (std::size_t r = 0; r < 12; ++r) {
    for (std::size_t k = 0; k < d.cols; ++k) {
      CHECK(d.signals[r * d.cols + k] == static_cast<float>(ref[r].signal[k]));
      CHECK(d.labels[r * d.cols + k] == ref[r].labels[k]);
    }
    CHECK(d.r_indices.of(r) == ref[r].r_indices);
  }

  replay_manifest(dir / "a" / "manifest.json", dir / "b");
  CHECK(oracle::same_tree(dir / "a", dir / "b"));

  c.format = ExportFormat::csv;
  export_dataset(c, 3, dir / "c");
  const Dataset e = import_dataset(dir / "c");
  CHECK(e.rows == 3);
  for (std::size_t k = 0; k < e.cols; ++k) CHECK(e.signals[k] == d.signals[k]);
}

TEST_CASE("config JSON round trip") {
  GenerationConfig c;
  c.master_seed = 123456789012345ULL;
  c.dataset_size = 40;
  c.segment_length = 512;
  c.format = ExportFormat::csv;
  c.filter_mode = FilterMode::zero_phase;
  c.space.scale = ScaleCoefficients::uniform(1.5);
  const GenerationConfig r = config_from_json(config_to_json(c));
  CHECK(r.master_seed == c.master_seed);
  CHECK(r.dataset_size == c.dataset_size);
  CHECK(r.segment_length == 512);
  CHECK(r.format == ExportFormat::csv);
  CHECK(r.filter_mode == FilterMode::zero_phase);
  CHECK(r.space == c.space);
}

TEST_CASE("manifests of another version are refused") {
  nlohmann::json j = DatasetManifest{}.to_json();
  j["format_version"] = 2;
  CHECK_THROWS_AS(DatasetManifest::from_json(j), ConfigError);
}

TEST_CASE("invalid configs are rejected") {
  GenerationConfig c;
  c.segment_length = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.augment = true;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.bank = test_bank();
  c.segment_length = 5000;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.dataset_size = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK_THROWS_AS(export_dataset(GenerationConfig{}, 0, "unused"), ConfigError);
}
