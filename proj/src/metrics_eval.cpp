#include "synecg/metrics_eval.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <tuple>

#include <omp.h>

#include "synecg/errors.hpp"

namespace synecg {

namespace {

void require_increasing(std::span<const std::size_t> v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) {
      throw ConfigError(std::string(what) + " indices must be strictly increasing (position " +
                        std::to_string(i) + ")");
    }
  }
}

std::size_t gap(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

MatchReport match_peaks(std::span<const std::size_t> truth, std::span<const std::size_t> detected,
                        std::size_t tolerance) {
  require_increasing(truth, "truth");
  require_increasing(detected, "detected");

  struct Edge {
    std::size_t dist, lo, hi, t, ti, di;
  };
  std::vector<Edge> edges;
  std::size_t start = 0;
  for (std::size_t ti = 0; ti < truth.size(); ++ti) {
    const std::size_t t = truth[ti];
    while (start < detected.size() && detected[start] + tolerance < t) ++start;
    for (std::size_t di = start; di < detected.size() && detected[di] <= t + tolerance; ++di) {
      const std::size_t d = detected[di];
      edges.push_back({gap(t, d), std::min(t, d), std::max(t, d), t, ti, di});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.dist, a.lo, a.hi, a.t) < std::tie(b.dist, b.lo, b.hi, b.t);
  });

  MatchReport report;
  report.tolerance = tolerance;
  std::vector<char> t_used(truth.size(), 0);
  std::vector<char> d_used(detected.size(), 0);
  for (const Edge& e : edges) {
    if (t_used[e.ti] || d_used[e.di]) continue;
    t_used[e.ti] = d_used[e.di] = 1;
    report.pairs.push_back({truth[e.ti], detected[e.di],
                            static_cast<std::ptrdiff_t>(detected[e.di]) -
                                static_cast<std::ptrdiff_t>(truth[e.ti])});
  }
  std::sort(report.pairs.begin(), report.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.truth < b.truth; });
  report.tp = report.pairs.size();
  report.fn = truth.size() - report.tp;
  report.fp = detected.size() - report.tp;
  return report;
}

Scores scores(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp == 0 && fp == 0 && fn == 0) return {1.0, 1.0, 1.0};
  Scores s;
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  s.precision = ratio(tp, tp + fp);
  s.recall = ratio(tp, tp + fn);
  s.f1 = ratio(2 * tp, 2 * tp + fp + fn);
  return s;
}

Scores scores(const MatchReport& report) { return scores(report.tp, report.fp, report.fn); }

double nearest_rank_percentile(std::span<const double> values, double p) {
  if (values.empty()) throw ConfigError("percentile of an empty list");
  if (!(p >= 0.0 && p <= 100.0)) throw ConfigError("percentile must lie in [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // Round before ceil so p/100 * n landing on an integer is not pushed up by
  // representation error (10/100 * 11 = 1.1000000000000001).
  const double exact = p / 100.0 * static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(std::round(exact * 1e9) / 1e9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

Summary aggregate(std::span<const double> values) {
  if (values.empty()) throw ConfigError("aggregate needs at least one record");
  Summary s;
  s.count = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.p10 = nearest_rank_percentile(values, 10.0);
  s.p90 = nearest_rank_percentile(values, 90.0);
  return s;
}

double roc_auc(std::span<const std::uint8_t> labels, std::span<const double> probabilities) {
  if (labels.size() != probabilities.size()) {
    throw ConfigError("roc_auc: " + std::to_string(labels.size()) + " labels vs " +
                      std::to_string(probabilities.size()) + " probabilities");
  }
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return probabilities[a] < probabilities[b]; });

  // Sum of mid-ranks of the positives (Mann-Whitney U).
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && probabilities[order[j]] == probabilities[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) {
        positive_rank_sum += mid_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetric("ROC-AUC is undefined when only one class is present");
  }
  const double np = static_cast<double>(positives);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(negatives));
}

std::vector<std::size_t> snap_to_max(std::span<const std::size_t> indices,
                                     std::span<const double> ecg, std::size_t half_width) {
  std::vector<std::size_t> out;
  out.reserve(indices.size());
  if (half_width == 0) throw ConfigError("snap half width must be >= 1");
  for (std::size_t i : indices) {
    if (i >= ecg.size()) {
      throw ConfigError("index " + std::to_string(i) + " outside a record of " +
                        std::to_string(ecg.size()) + " samples");
    }
    const std::size_t lo = i >= half_width ? i - half_width : 0;
    const std::size_t hi = std::min(ecg.size() - 1, i + half_width - 1);
    std::size_t best = lo;
    for (std::size_t k = lo + 1; k <= hi; ++k) {
      if (ecg[k] > ecg[best]) best = k;
    }
    out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

using Grouped = std::vector<std::vector<std::size_t>>;

Grouped group(const IndexTable& table, std::size_t record_count, const char* what) {
  Grouped g(record_count);
  for (std::size_t i = 0; i < table.record.size(); ++i) {
    if (table.record[i] >= record_count) {
      throw ConfigError(std::string(what) + " table names record " +
                        std::to_string(table.record[i]) + " but only " +
                        std::to_string(record_count) + " records are scored");
    }
    g[table.record[i]].push_back(table.index[i]);
  }
  for (auto& v : g) std::sort(v.begin(), v.end());
  return g;
}

RecordScore score_record(const Grouped& truth, const Grouped& detected, std::size_t record,
                         std::size_t tolerance) {
  RecordScore r;
  r.record = record;
  r.report = match_peaks(truth[record], detected[record], tolerance);
  r.scores = scores(r.report);
  return r;
}

}  // namespace

std::vector<RecordScore> evaluate_records_serial(const IndexTable& truth,
                                                 const IndexTable& detected,
                                                 std::size_t record_count, std::size_t tolerance) {
  const Grouped t = group(truth, record_count, "truth");
  const Grouped d = group(detected, record_count, "detection");
  std::vector<RecordScore> out;
  out.reserve(record_count);
  for (std::size_t r = 0; r < record_count; ++r) {
    out.push_back(score_record(t, d, r, tolerance));
  }
  return out;
}

std::vector<RecordScore> evaluate_records(const IndexTable& truth, const IndexTable& detected,
                                          std::size_t record_count, std::size_t tolerance,
                                          int jobs) {
  const Grouped t = group(truth, record_count, "truth");
  const Grouped d = group(detected, record_count, "detection");
  std::vector<RecordScore> out(record_count);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(record_count);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    try {
      out[static_cast<std::size_t>(r)] =
          score_record(t, d, static_cast<std::size_t>(r), tolerance);
    } catch (...) {
#pragma omp critical(synecg_evaluate_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace synecg
