#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "synecg/matrix_io.hpp"

namespace synecg {

inline constexpr std::size_t kDefaultTolerance = 10;  // samples, 40 ms at 250 Hz
inline constexpr std::size_t kSnapHalfWidth = 8;      // 16-sample window [i-8, i+7]

/// AUC requested for labels of a single class.
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct MatchedPair {
  std::size_t truth = 0;
  std::size_t detected = 0;
  std::ptrdiff_t offset = 0;  // detected - truth
};

struct MatchReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<MatchedPair> pairs;  // ordered by truth index
  std::size_t tolerance = kDefaultTolerance;
};

/// Greedy nearest one-to-one matching: all (truth, detected) pairs within
/// +-tolerance are visited by distance, then by the smaller and the larger
/// index, then by the truth index, and kept when both ends are still free.
/// Throws ConfigError unless both lists are strictly increasing.
MatchReport match_peaks(std::span<const std::size_t> truth, std::span<const std::size_t> detected,
                        std::size_t tolerance = kDefaultTolerance);

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// TP = FP = FN = 0 scores 1 everywhere: a record with no beats and no
/// detections is perfect. Any other vanishing denominator scores 0.
Scores scores(std::size_t tp, std::size_t fp, std::size_t fn);
Scores scores(const MatchReport& report);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
};

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value (rank 1 for p = 0).
/// Throws ConfigError on empty input or p outside [0, 100].
double nearest_rank_percentile(std::span<const double> values, double p);

/// Mean with 10th/90th nearest-rank percentiles. Throws ConfigError on empty input.
Summary aggregate(std::span<const double> values);

/// Rank-based AUC; tied scores count one half. Throws ConfigError on length
/// mismatch and UndefinedMetric when only one class is present.
double roc_auc(std::span<const std::uint8_t> labels, std::span<const double> probabilities);

/// Moves every index to the ECG argmax over [i-8, i+7] (clipped, lowest index
/// on ties); duplicates created by the move are merged.
std::vector<std::size_t> snap_to_max(std::span<const std::size_t> indices,
                                     std::span<const double> ecg,
                                     std::size_t half_width = kSnapHalfWidth);

struct RecordScore {
  std::size_t record = 0;
  MatchReport report;
  Scores scores;
};

/// Per-record matching for records 0 .. record_count-1, across OpenMP threads.
std::vector<RecordScore> evaluate_records(const IndexTable& truth, const IndexTable& detected,
                                          std::size_t record_count,
                                          std::size_t tolerance = kDefaultTolerance, int jobs = 0);

/// Reference twin of evaluate_records.
std::vector<RecordScore> evaluate_records_serial(const IndexTable& truth,
                                                 const IndexTable& detected,
                                                 std::size_t record_count,
                                                 std::size_t tolerance = kDefaultTolerance);

}  // namespace synecg
