#pragma once

#include <cstddef>
#include <vector>

#include "synecg/seeding.hpp"

namespace synecg {

/// Beat intervals and their onset times. onsets[i] is the sum of the
/// intervals emitted before beat i, so onsets[0] = 0.
struct RrSeries {
  std::vector<double> intervals;
  std::vector<double> onsets;
  std::size_t clamped = 0;  // intervals raised to the floor

  std::size_t size() const { return intervals.size(); }
  double mean() const;
  double duration() const;
};

struct RrParams {
  double mu = 1.0;
  double beta = 0.1;
  double f_b = 0.28;
  double gamma_sd = 0.0;
};

inline constexpr double kRrFloor = 0.2;

/// rr_i = mu + beta sin(2 pi f_b t_i) + gamma_i with gamma_i ~ N(0, gamma_sd^2)
/// and t_i the running sum of the (post-clamp) intervals. Intervals below
/// `floor` are raised to it and counted in `clamped`; floor <= 0 disables the
/// clamp.
///
/// Throws ConfigError unless mu > 0, n_beats >= 1, gamma_sd >= 0 and
/// mu - beta - 5 gamma_sd > 0.
RrSeries generate_rr(const RrParams& params, std::size_t n_beats, Seed seed,
                     double floor = kRrFloor);

/// Beat count guaranteed to span `duration` seconds for any realization.
std::size_t beats_to_cover(const RrParams& params, double duration, double floor = kRrFloor);

}  // namespace synecg
