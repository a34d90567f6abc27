#include "synecg/peak_postprocess.hpp"

#include <algorithm>
#include <exception>
#include <iterator>
#include <set>
#include <string>

#include <omp.h>

#include "synecg/errors.hpp"

namespace synecg {

void validate(const PostprocessConfig& config) {
  if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
    throw ConfigError("threshold must lie in [0, 1], got " + std::to_string(config.threshold));
  }
  if (config.min_votes == 0) throw ConfigError("min_votes must be >= 1");
}

std::vector<std::size_t> segment_offsets(std::size_t record_length, std::size_t window,
                                         std::size_t stride) {
  if (window == 0 || stride == 0) throw ConfigError("segment window and stride must be > 0");
  if (stride > window) throw ConfigError("segment stride exceeds window; samples would be skipped");
  std::vector<std::size_t> offsets;
  if (record_length == 0) return offsets;
  for (std::size_t o = 0;; o += stride) {
    offsets.push_back(o);
    if (o + window >= record_length) break;
  }
  return offsets;
}

std::vector<double> split_segments(std::span<const double> record, std::size_t window,
                                   std::size_t stride) {
  const std::vector<std::size_t> offsets = segment_offsets(record.size(), window, stride);
  std::vector<double> out(offsets.size() * window, 0.0);
  for (std::size_t r = 0; r < offsets.size(); ++r) {
    const std::size_t n = std::min(window, record.size() - offsets[r]);
    std::copy_n(record.begin() + static_cast<std::ptrdiff_t>(offsets[r]), n,
                out.begin() + static_cast<std::ptrdiff_t>(r * window));
  }
  return out;
}

std::vector<std::size_t> coverage(std::size_t record_length, std::size_t window,
                                  std::size_t stride) {
  std::vector<std::size_t> count(record_length, 0);
  for (std::size_t o : segment_offsets(record_length, window, stride)) {
    const std::size_t end = std::min(record_length, o + window);
    for (std::size_t i = o; i < end; ++i) ++count[i];
  }
  return count;
}

std::vector<double> windowed_average(std::span<const double> segments, std::size_t record_length,
                                     std::size_t window, std::size_t stride) {
  const std::vector<std::size_t> offsets = segment_offsets(record_length, window, stride);
  if (segments.size() != offsets.size() * window) {
    throw ConfigError("probability segments: expected " + std::to_string(offsets.size()) + " x " +
                      std::to_string(window) + " values for a record of " +
                      std::to_string(record_length) + " samples, got " +
                      std::to_string(segments.size()));
  }
  std::vector<double> sum(record_length, 0.0);
  std::vector<std::size_t> count(record_length, 0);
  for (std::size_t r = 0; r < offsets.size(); ++r) {
    const std::size_t n = std::min(window, record_length - offsets[r]);
    for (std::size_t j = 0; j < n; ++j) {
      const double p = segments[r * window + j];
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("probability " + std::to_string(p) + " outside [0, 1] in segment " +
                          std::to_string(r));
      }
      sum[offsets[r] + j] += p;
      ++count[offsets[r] + j];
    }
  }
  for (std::size_t i = 0; i < record_length; ++i) sum[i] /= static_cast<double>(count[i]);
  return sum;
}

DetectionResult extract_peaks(std::span<const double> avg, std::span<const double> ecg,
                              const PostprocessConfig& config) {
  validate(config);
  if (avg.size() != ecg.size()) {
    throw ConfigError("probability trace has " + std::to_string(avg.size()) +
                      " samples but the ECG has " + std::to_string(ecg.size()));
  }
  const std::size_t n = avg.size();
  DetectionResult result;
  DetectionDiagnostics& diag = result.diagnostics;

  // Steps 1-3: shift every above-threshold sample onto its local ECG max and
  // count votes per target.
  std::vector<std::size_t> votes(n, 0);
  std::vector<double> vote_mass(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(avg[i] >= config.threshold)) continue;
    ++diag.above_threshold;
    const std::size_t lo = i >= config.shift_before ? i - config.shift_before : 0;
    const std::size_t hi = std::min(n - 1, i + config.shift_after);
    std::size_t best = lo;
    for (std::size_t k = lo + 1; k <= hi; ++k) {
      if (ecg[k] > ecg[best]) best = k;
    }
    if (votes[best]++ == 0) ++diag.shift_targets;
    vote_mass[best] += avg[i];
  }

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (votes[i] >= config.min_votes) candidates.push_back(i);
  }
  diag.r_candidates = candidates.size();

  // Step 4: isolated candidates first, then greedy suppression by probability.
  const std::size_t d = config.min_distance;
  std::set<std::size_t> approved;
  std::vector<std::size_t> contested;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const bool left = c > 0 && candidates[c] - candidates[c - 1] < d;
    const bool right = c + 1 < candidates.size() && candidates[c + 1] - candidates[c] < d;
    if (left || right) {
      contested.push_back(candidates[c]);
    } else {
      approved.insert(candidates[c]);
      ++diag.isolated;
    }
  }
  std::stable_sort(contested.begin(), contested.end(),
                   [&](std::size_t a, std::size_t b) { return avg[a] > avg[b]; });
  for (std::size_t c : contested) {
    const auto next = approved.lower_bound(c);
    const bool clear_right = next == approved.end() || *next - c >= d;
    const bool clear_left = next == approved.begin() || c - *std::prev(next) >= d;
    if (clear_left && clear_right) {
      approved.insert(c);
      ++diag.greedy_approved;
    } else {
      ++diag.suppressed;
    }
  }

  result.peaks.assign(approved.begin(), approved.end());
  result.probabilities.reserve(result.peaks.size());
  for (std::size_t p : result.peaks) {
    result.probabilities.push_back(vote_mass[p] / static_cast<double>(votes[p]));
  }
  return result;
}

std::vector<DetectionResult> detect_records_serial(const std::vector<DetectionInput>& records,
                                                   const PostprocessConfig& config) {
  std::vector<DetectionResult> out;
  out.reserve(records.size());
  for (const DetectionInput& r : records) out.push_back(extract_peaks(r.avg, r.ecg, config));
  return out;
}

std::vector<DetectionResult> detect_records(const std::vector<DetectionInput>& records,
                                            const PostprocessConfig& config, int jobs) {
  validate(config);
  std::vector<DetectionResult> out(records.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(records.size());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const DetectionInput& r = records[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] = extract_peaks(r.avg, r.ecg, config);
    } catch (...) {
#pragma omp critical(synecg_detect_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace synecg
