#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "synecg/artefact_augment.hpp"
#include "synecg/conditioning.hpp"
#include "synecg/matrix_io.hpp"
#include "synecg/param_space.hpp"
#include "synecg/seeding.hpp"

namespace synecg {

enum class ExportFormat { f32, csv };

inline constexpr std::size_t kSegmentLength = 1000;

struct GenerationConfig {
  ParameterSpace space = default_space();
  bool augment = false;
  std::shared_ptr<const ArtefactBank> bank;  // required when augment is set
  std::filesystem::path bank_path;           // echoed into manifests
  std::optional<std::size_t> dataset_size;   // empty: every example unique
  std::size_t segment_length = kSegmentLength;
  Seed master_seed = 0;
  ExportFormat format = ExportFormat::f32;
  FilterMode filter_mode = FilterMode::forward;
  int jobs = 0;  // worker threads, 0 = all available; never affects output
};

/// Throws ConfigError on an invalid space, zero segment length, or
/// augmentation without a usable bank.
void validate(const GenerationConfig& config);

struct Provenance {
  std::size_t index = 0;
  Seed seed = 0;
  std::size_t window_offset = 0;
};

struct LabeledSegment {
  std::vector<double> signal;
  std::vector<std::uint8_t> labels;
  std::vector<std::size_t> r_indices;  // window-relative
  ParameterDraw draw;
  Provenance provenance;
};

Seed example_seed(const GenerationConfig& config, std::size_t index);

/// Extra samples generated beyond the segment so the window start can land
/// anywhere within two mean cycles.
std::size_t window_margin(const ParameterDraw& draw);
std::size_t window_offset(Seed example_seed, std::size_t margin);

/// Example `index` as a pure function of (config, index):
/// draw -> RR series -> clean ECG -> + PSD noise -> random window -> labels
/// -> (normalize + artefact, when enabled) -> band-pass -> normalize.
LabeledSegment next_example(const GenerationConfig& config, std::size_t index);

/// Examples [first, first + count) generated across OpenMP threads.
std::vector<LabeledSegment> generate_examples(const GenerationConfig& config, std::size_t first,
                                              std::size_t count);

/// Reference twin of generate_examples; one thread, index order.
std::vector<LabeledSegment> generate_examples_serial(const GenerationConfig& config,
                                                     std::size_t first, std::size_t count);

/// Training-side view: unbounded configs yield indices 0, 1, 2, ...; a finite
/// dataset_size n yields indices drawn uniformly from [0, n) so only those n
/// examples are ever seen.
class ExampleStream {
 public:
  ExampleStream(GenerationConfig config, Seed sampling_seed);

  std::size_t next_index();
  LabeledSegment next();

 private:
  GenerationConfig config_;
  Rng rng_;
  std::size_t counter_ = 0;
};

struct DatasetManifest {
  int format_version = kFormatVersion;
  nlohmann::json config;
  std::vector<Seed> example_seeds;
  nlohmann::json created;

  nlohmann::json to_json() const;
  static DatasetManifest from_json(const nlohmann::json& j);
};

nlohmann::json config_to_json(const GenerationConfig& config);
/// Inverse of config_to_json. Reloads the artefact bank from bank_path when
/// augmentation is on.
GenerationConfig config_from_json(const nlohmann::json& j);

/// Writes to `out`:
///   signals.f32 + signals.json | signals.csv   n x segment_length, float32
///   labels.u8 + labels.json    | labels.csv    n x segment_length, uint8
///   r_indices.csv                              "example,r_index" per r-wave
///   manifest.json                              config echo + per-example seeds
/// Throws IoError with the failing path.
DatasetManifest export_dataset(const GenerationConfig& config, std::size_t n,
                               const std::filesystem::path& out);

/// Regenerates the dataset described by a manifest into `out`.
DatasetManifest replay_manifest(const std::filesystem::path& manifest,
                                const std::filesystem::path& out);

struct Dataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> signals;
  std::vector<std::uint8_t> labels;
  IndexTable r_indices;
  DatasetManifest manifest;
};

Dataset import_dataset(const std::filesystem::path& dir);

}  // namespace synecg
