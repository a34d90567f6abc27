#include "synecg/artefact_augment.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "synecg/errors.hpp"
#include "synecg/matrix_io.hpp"

namespace synecg {

namespace fs = std::filesystem;

namespace {

std::vector<double> load_record(const fs::path& dir, const char* name, double expected_rate,
                                nlohmann::json& source) {
  const fs::path f32 = dir / (std::string(name) + ".f32");
  const fs::path csv = dir / (std::string(name) + ".csv");
  fs::path chosen;
  if (fs::exists(f32)) {
    chosen = f32;
  } else if (fs::exists(csv)) {
    chosen = csv;
  } else {
    throw IoError("artefact bank '" + dir.string() + "' has no " + name + ".f32 or " + name + ".csv");
  }
  const Matrix m = read_matrix(chosen);
  if (m.rows != 1 && m.cols != 1) {
    throw IoError("artefact record '" + chosen.string() + "' must be a single series");
  }
  const double rate = m.sampling_rate(chosen.extension() == ".csv" ? expected_rate : -1.0);
  if (rate < 0.0) throw IoError("sidecar of '" + chosen.string() + "' lacks sampling_rate");
  if (rate != expected_rate) {
    throw ConfigError("artefact record '" + chosen.string() + "' is sampled at " +
                      std::to_string(rate) + " Hz, expected " + std::to_string(expected_rate) +
                      " Hz; resample it before ingestion");
  }
  source[name] = {{"path", chosen.string()}, {"samples", m.values.size()}};
  if (m.meta.contains("source")) source[name]["source"] = m.meta.at("source");
  return m.values;
}

}  // namespace

ArtefactBank load_bank(const fs::path& dir, double expected_rate) {
  ArtefactBank bank;
  bank.sampling_rate = expected_rate;
  bank.bw = load_record(dir, "bw", expected_rate, bank.source);
  bank.ma = load_record(dir, "ma", expected_rate, bank.source);
  return bank;
}

void validate(const ArtefactBank& bank, std::size_t segment_length) {
  if (bank.bw.size() < segment_length || bank.ma.size() < segment_length) {
    throw ConfigError("artefact bank records (" + std::to_string(bank.bw.size()) + ", " +
                      std::to_string(bank.ma.size()) + " samples) are shorter than the " +
                      std::to_string(segment_length) + "-sample segment");
  }
  if (!(bank.sampling_rate > 0.0)) throw ConfigError("artefact bank sampling rate must be > 0");
}

ArtefactDraw draw_artefact(const ArtefactBank& bank, std::size_t segment_length, Seed seed) {
  validate(bank, segment_length);
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<int> category(0, 2);
  std::uniform_int_distribution<std::size_t> bw_at(0, bank.bw.size() - segment_length);
  std::uniform_int_distribution<std::size_t> ma_at(0, bank.ma.size() - segment_length);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  ArtefactDraw d;
  d.category = static_cast<ArtefactCategory>(category(rng));
  d.bw_offset = bw_at(rng);
  d.ma_offset = ma_at(rng);
  const double bw_gain = kBwMaxGain * unit(rng);
  const double ma_gain = kMaMaxGain * unit(rng);
  d.powerline_gain = kPowerlineMaxGain * unit(rng);
  d.powerline_phase = 2.0 * std::numbers::pi * unit(rng);
  d.bw_gain = d.category == ArtefactCategory::ma ? 0.0 : bw_gain;
  d.ma_gain = d.category == ArtefactCategory::bw ? 0.0 : ma_gain;
  return d;
}

std::vector<double> artefact_signal(const ArtefactBank& bank, const ArtefactDraw& draw,
                                    std::size_t length) {
  validate(bank, length);
  if (draw.bw_offset + length > bank.bw.size() || draw.ma_offset + length > bank.ma.size()) {
    throw ConfigError("artefact draw window exceeds the bank records");
  }
  std::vector<double> out(length);
  const double w = 2.0 * std::numbers::pi * kPowerlineHz / bank.sampling_rate;
  for (std::size_t i = 0; i < length; ++i) {
    out[i] = draw.bw_gain * bank.bw[draw.bw_offset + i] + draw.ma_gain * bank.ma[draw.ma_offset + i] +
             draw.powerline_gain * std::sin(w * static_cast<double>(i) + draw.powerline_phase);
  }
  return out;
}

std::vector<double> apply_artefact(std::span<const double> segment, const ArtefactBank& bank,
                                   const ArtefactDraw& draw) {
  std::vector<double> out = artefact_signal(bank, draw, segment.size());
  for (std::size_t i = 0; i < segment.size(); ++i) out[i] += segment[i];
  return out;
}

std::vector<double> augment(std::span<const double> segment, const ArtefactBank& bank, Seed seed) {
  for (double v : segment) {
    if (!(std::abs(v) <= 1.0 + 1e-9)) {
      throw ConfigError("augment: segment must be normalized to [-1, 1]");
    }
  }
  return apply_artefact(segment, bank, draw_artefact(bank, segment.size(), seed));
}

}  // namespace synecg
