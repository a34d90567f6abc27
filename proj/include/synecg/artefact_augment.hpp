#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "synecg/seeding.hpp"

namespace synecg {

/// Recorded baseline-wander and muscle-artifact noise, both at the bank's
/// sampling rate. Immutable once loaded; share freely across workers.
struct ArtefactBank {
  std::vector<double> bw;
  std::vector<double> ma;
  double sampling_rate = 250.0;
  nlohmann::json source = nlohmann::json::object();
};

enum class ArtefactCategory { bw = 0, ma = 1, bw_ma = 2 };

inline constexpr double kBwMaxGain = 10.0;
inline constexpr double kMaMaxGain = 5.0;
inline constexpr double kPowerlineMaxGain = 0.5;
inline constexpr double kPowerlineHz = 60.0;

/// Every random choice of one augmentation. Gains of records not in the
/// category are zero.
struct ArtefactDraw {
  ArtefactCategory category = ArtefactCategory::bw;
  std::size_t bw_offset = 0;
  std::size_t ma_offset = 0;
  double bw_gain = 0.0;
  double ma_gain = 0.0;
  double powerline_gain = 0.0;
  double powerline_phase = 0.0;
};

/// Reads bw.f32 / ma.f32 (float32 with JSON sidecar carrying sampling_rate)
/// or bw.csv / ma.csv (optional sidecar) from `dir`. Records at any other
/// rate than `expected_rate` are rejected with ConfigError; resample them
/// before ingestion. Missing files raise IoError.
ArtefactBank load_bank(const std::filesystem::path& dir, double expected_rate = 250.0);

/// Throws ConfigError if either record is shorter than segment_length.
void validate(const ArtefactBank& bank, std::size_t segment_length);

/// Category uniform over {BW, MA, BW+MA}; random window per record;
/// BW gain U[0,10], MA gain U[0,5]; 60 Hz unit sine with gain U[0,0.5] and
/// uniform phase.
ArtefactDraw draw_artefact(const ArtefactBank& bank, std::size_t segment_length, Seed seed);

/// The composite artefact of a draw (windows times gains plus powerline).
std::vector<double> artefact_signal(const ArtefactBank& bank, const ArtefactDraw& draw,
                                    std::size_t length);

/// segment + artefact_signal. The result is not renormalized.
std::vector<double> apply_artefact(std::span<const double> segment, const ArtefactBank& bank,
                                   const ArtefactDraw& draw);

/// Augments a segment already normalized to [-1, 1].
std::vector<double> augment(std::span<const double> segment, const ArtefactBank& bank, Seed seed);

}  // namespace synecg
