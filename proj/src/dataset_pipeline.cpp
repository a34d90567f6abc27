#include "synecg/dataset_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <utility>

#include <omp.h>

#include "synecg/errors.hpp"
#include "synecg/noise_model.hpp"
#include "synecg/rr_model.hpp"
#include "synecg/waveform_model.hpp"

namespace synecg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
constexpr const char* kToolVersion = "synecg 1.0.0";
}

void validate(const GenerationConfig& config) {
  validate(config.space);
  if (config.segment_length == 0) throw ConfigError("segment length must be > 0");
  if (config.dataset_size && *config.dataset_size == 0) throw ConfigError("dataset size must be > 0");
  if (config.augment) {
    if (!config.bank) throw ConfigError("artefact augmentation needs an artefact bank");
    validate(*config.bank, config.segment_length);
    if (config.bank->sampling_rate != config.space.sampling_rate) {
      throw ConfigError("artefact bank and generator sampling rates differ");
    }
  }
}

Seed example_seed(const GenerationConfig& config, std::size_t index) {
  return derive_seed(config.master_seed, index);
}

std::size_t window_margin(const ParameterDraw& draw) {
  return static_cast<std::size_t>(std::lround(2.0 * draw.mu * draw.sampling_rate));
}

std::size_t window_offset(Seed seed, std::size_t margin) {
  Rng rng = make_rng(stream_seed(seed, Stream::window));
  return std::uniform_int_distribution<std::size_t>(0, margin)(rng);
}

LabeledSegment next_example(const GenerationConfig& config, std::size_t index) {
  const Seed seed = example_seed(config, index);
  const std::size_t seg = config.segment_length;
  const double fs = config.space.sampling_rate;

  LabeledSegment ex;
  ex.draw = sample_draw(config.space, stream_seed(seed, Stream::draw));
  const ParameterDraw& draw = ex.draw;

  const std::size_t margin = window_margin(draw);
  const std::size_t total = seg + margin;

  const RrParams rr_params{draw.mu, draw.beta, draw.f_b, draw.gamma_sd};
  std::size_t beats = beats_to_cover(rr_params, static_cast<double>(total) / fs);
  RrSeries rr;
  for (;;) {
    rr = generate_rr(rr_params, beats, stream_seed(seed, Stream::rr));
    std::size_t covered = 0;
    for (std::size_t n : cycle_lengths(rr, fs)) covered += n;
    if (covered >= total) break;
    beats *= 2;
  }

  const CleanEcg clean = synthesize_clean(draw, rr, total);
  const std::vector<double> noise = generate_noise(noise_spec(draw, total), stream_seed(seed, Stream::noise));

  const std::size_t offset = window_offset(seed, margin);
  std::vector<double> window(seg);
  for (std::size_t i = 0; i < seg; ++i) window[i] = clean.samples[offset + i] + noise[offset + i];
  for (std::size_t r : clean.r_indices) {
    if (r >= offset && r < offset + seg) ex.r_indices.push_back(r - offset);
  }
  ex.labels = make_labels(ex.r_indices, seg);

  if (config.augment) {
    const Normalized pre = normalize(window);
    window = augment(pre.samples, *config.bank, stream_seed(seed, Stream::artefact));
  }
  const std::vector<double> filtered = bandpass(window, fs, config.filter_mode);
  ex.signal = normalize(filtered).samples;
  ex.provenance = {index, seed, offset};
  return ex;
}

std::vector<LabeledSegment> generate_examples_serial(const GenerationConfig& config,
                                                     std::size_t first, std::size_t count) {
  validate(config);
  std::vector<LabeledSegment> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(next_example(config, first + i));
  return out;
}

std::vector<LabeledSegment> generate_examples(const GenerationConfig& config, std::size_t first,
                                              std::size_t count) {
  validate(config);
  std::vector<LabeledSegment> out(count);
  const int threads = config.jobs > 0 ? config.jobs : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(count);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = next_example(config, first + static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(synecg_generate_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

ExampleStream::ExampleStream(GenerationConfig config, Seed sampling_seed)
    : config_(std::move(config)), rng_(make_rng(sampling_seed)) {
  validate(config_);
}

std::size_t ExampleStream::next_index() {
  if (config_.dataset_size) {
    return std::uniform_int_distribution<std::size_t>(0, *config_.dataset_size - 1)(rng_);
  }
  return counter_++;
}

LabeledSegment ExampleStream::next() { return next_example(config_, next_index()); }

// ---------------------------------------------------------------------------
// Manifest and export

json DatasetManifest::to_json() const {
  return {{"format", "synecg-dataset"},
          {"format_version", format_version},
          {"config", config},
          {"example_seeds", example_seeds},
          {"created", created}};
}

DatasetManifest DatasetManifest::from_json(const json& j) {
  DatasetManifest m;
  try {
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kFormatVersion) {
      throw ConfigError("unsupported dataset format version " + std::to_string(m.format_version));
    }
    m.config = j.at("config");
    m.example_seeds = j.at("example_seeds").get<std::vector<Seed>>();
    m.created = j.value("created", json::object());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("dataset manifest: ") + e.what());
  }
  return m;
}

json config_to_json(const GenerationConfig& config) {
  return {{"parameter_space", to_json(config.space)},
          {"augment", config.augment},
          {"artefact_bank", config.bank_path.string()},
          {"dataset_size", config.dataset_size ? json(*config.dataset_size) : json(nullptr)},
          {"segment_length", config.segment_length},
          {"master_seed", config.master_seed},
          {"format", config.format == ExportFormat::f32 ? "f32" : "csv"},
          {"filter", config.filter_mode == FilterMode::forward ? "forward" : "zero_phase"}};
}

GenerationConfig config_from_json(const json& j) {
  GenerationConfig c;
  try {
    c.space = space_from_json(j.at("parameter_space"));
    c.augment = j.value("augment", false);
    c.bank_path = j.value("artefact_bank", std::string());
    if (j.contains("dataset_size") && !j.at("dataset_size").is_null()) {
      c.dataset_size = j.at("dataset_size").get<std::size_t>();
    }
    c.segment_length = j.value("segment_length", kSegmentLength);
    c.master_seed = j.at("master_seed").get<Seed>();
    const std::string format = j.value("format", std::string("f32"));
    if (format != "f32" && format != "csv") throw ConfigError("unknown export format '" + format + "'");
    c.format = format == "f32" ? ExportFormat::f32 : ExportFormat::csv;
    const std::string filter = j.value("filter", std::string("forward"));
    if (filter != "forward" && filter != "zero_phase") throw ConfigError("unknown filter mode '" + filter + "'");
    c.filter_mode = filter == "forward" ? FilterMode::forward : FilterMode::zero_phase;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("generation config: ") + e.what());
  }
  if (c.augment) {
    if (c.bank_path.empty()) throw ConfigError("augmentation enabled but no artefact bank path");
    c.bank = std::make_shared<const ArtefactBank>(load_bank(c.bank_path, c.space.sampling_rate));
  }
  return c;
}

DatasetManifest export_dataset(const GenerationConfig& config, std::size_t n, const fs::path& out) {
  if (n == 0) throw ConfigError("export: n must be >= 1");
  validate(config);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create '" + out.string() + "': " + ec.message());

  const std::size_t cols = config.segment_length;
  std::vector<float> signals;
  std::vector<std::uint8_t> labels;
  signals.reserve(n * cols);
  labels.reserve(n * cols);
  IndexTable peaks;
  DatasetManifest manifest;
  manifest.config = config_to_json(config);
  manifest.example_seeds.reserve(n);
  manifest.created = {{"tool", kToolVersion}};

  constexpr std::size_t kChunk = 512;
  for (std::size_t first = 0; first < n; first += kChunk) {
    const std::size_t count = std::min(kChunk, n - first);
    const std::vector<LabeledSegment> batch = generate_examples(config, first, count);
    for (const LabeledSegment& ex : batch) {
      for (double v : ex.signal) signals.push_back(static_cast<float>(v));
      labels.insert(labels.end(), ex.labels.begin(), ex.labels.end());
      for (std::size_t r : ex.r_indices) {
        peaks.record.push_back(ex.provenance.index);
        peaks.index.push_back(r);
      }
      manifest.example_seeds.push_back(ex.provenance.seed);
    }
  }

  const json extra = {{"sampling_rate", config.space.sampling_rate},
                      {"segment_length", cols}};
  if (config.format == ExportFormat::f32) {
    write_matrix_f32(out / "signals.f32", signals, n, cols, extra);
    write_matrix_u8(out / "labels.u8", labels, n, cols, extra);
  } else {
    write_matrix_csv(out / "signals.csv", signals, n, cols);
    write_matrix_csv(out / "labels.csv", labels, n, cols);
  }
  write_index_table(out / "r_indices.csv", peaks, "example,r_index");
  write_json(out / "manifest.json", manifest.to_json());
  return manifest;
}

DatasetManifest replay_manifest(const fs::path& manifest_path, const fs::path& out) {
  const DatasetManifest m = DatasetManifest::from_json(read_json(manifest_path));
  const GenerationConfig config = config_from_json(m.config);
  return export_dataset(config, m.example_seeds.size(), out);
}

Dataset import_dataset(const fs::path& dir) {
  Dataset d;
  d.manifest = DatasetManifest::from_json(read_json(dir / "manifest.json"));
  const bool binary = fs::exists(dir / "signals.f32");
  const Matrix s = read_matrix(dir / (binary ? "signals.f32" : "signals.csv"));
  const Matrix l = read_matrix(dir / (binary ? "labels.u8" : "labels.csv"));
  if (s.rows != l.rows || s.cols != l.cols) {
    throw IoError("signals and labels in '" + dir.string() + "' differ in shape");
  }
  d.rows = s.rows;
  d.cols = s.cols;
  d.signals.assign(s.values.begin(), s.values.end());
  d.labels.reserve(l.values.size());
  for (double v : l.values) d.labels.push_back(static_cast<std::uint8_t>(v));
  d.r_indices = read_index_table(dir / "r_indices.csv");
  return d;
}

}  // namespace synecg
