#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace synecg {

inline constexpr std::size_t kModelWindow = 1000;
inline constexpr std::size_t kModelStride = 250;

struct PostprocessConfig {
  double threshold = 0.05;
  std::size_t min_votes = 5;
  std::size_t min_distance = 75;
  // Shift window [i - shift_before, i + shift_after], ten samples in total.
  std::size_t shift_before = 5;
  std::size_t shift_after = 4;
};

/// Throws ConfigError for a threshold outside [0, 1] or zero min_votes.
void validate(const PostprocessConfig& config);

/// Segment starts k * stride for k = 0, 1, ... up to and including the first
/// segment that reaches the end of the record. A trailing segment may run
/// past the record; its overhang is zero-padded for the model and dropped
/// again before averaging.
std::vector<std::size_t> segment_offsets(std::size_t record_length,
                                         std::size_t window = kModelWindow,
                                         std::size_t stride = kModelStride);

/// Row-major (offsets x window) model input, zero-padded past the record end.
std::vector<double> split_segments(std::span<const double> record,
                                   std::size_t window = kModelWindow,
                                   std::size_t stride = kModelStride);

/// Per-sample mean over every segment covering the sample. `segments` is
/// row-major with one row per entry of segment_offsets(record_length).
/// Throws ConfigError on any other geometry or on values outside [0, 1].
std::vector<double> windowed_average(std::span<const double> segments, std::size_t record_length,
                                     std::size_t window = kModelWindow,
                                     std::size_t stride = kModelStride);

/// Per-sample count of covering segments.
std::vector<std::size_t> coverage(std::size_t record_length, std::size_t window = kModelWindow,
                                  std::size_t stride = kModelStride);

struct DetectionDiagnostics {
  std::size_t above_threshold = 0;
  std::size_t shift_targets = 0;    // distinct indices receiving a shifted sample
  std::size_t r_candidates = 0;     // shift targets with enough votes
  std::size_t isolated = 0;         // approved without competition
  std::size_t greedy_approved = 0;
  std::size_t suppressed = 0;
};

struct DetectionResult {
  std::vector<std::size_t> peaks;    // strictly increasing
  std::vector<double> probabilities; // mean avg over each peak's voters
  DetectionDiagnostics diagnostics;
};

/// 1. samples with avg >= threshold are candidates;
/// 2. each moves to the ECG argmax of its shift window (clipped to the record,
///    lowest index on ties);
/// 3. targets receiving >= min_votes candidates become r-wave candidates;
/// 4. r-wave candidates with no other candidate closer than min_distance are
///    approved; the rest are visited by avg at the candidate, highest first
///    (lower index on ties), and approved when at least min_distance from
///    every approved peak.
///
/// Throws ConfigError when avg and ecg differ in length.
DetectionResult extract_peaks(std::span<const double> avg, std::span<const double> ecg,
                              const PostprocessConfig& config = {});

struct DetectionInput {
  std::vector<double> ecg;
  std::vector<double> avg;
};

/// Records processed across OpenMP threads; `jobs` 0 means all available.
std::vector<DetectionResult> detect_records(const std::vector<DetectionInput>& records,
                                            const PostprocessConfig& config = {}, int jobs = 0);

/// Reference twin of detect_records.
std::vector<DetectionResult> detect_records_serial(const std::vector<DetectionInput>& records,
                                                   const PostprocessConfig& config = {});

}  // namespace synecg
