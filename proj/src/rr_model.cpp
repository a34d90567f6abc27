#include "synecg/rr_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "synecg/errors.hpp"

namespace synecg {

double RrSeries::mean() const {
  if (intervals.empty()) return 0.0;
  return duration() / static_cast<double>(intervals.size());
}

double RrSeries::duration() const {
  return std::accumulate(intervals.begin(), intervals.end(), 0.0);
}

namespace {

void check(const RrParams& p) {
  if (!(p.mu > 0.0)) throw ConfigError("rr: mu must be > 0");
  if (!(p.gamma_sd >= 0.0)) throw ConfigError("rr: gamma_sd must be >= 0");
  if (!(p.mu - p.beta - 5.0 * p.gamma_sd > 0.0)) {
    throw ConfigError("rr: mu - beta - 5*gamma_sd must be > 0");
  }
}

}  // namespace

RrSeries generate_rr(const RrParams& params, std::size_t n_beats, Seed seed, double floor) {
  check(params);
  if (n_beats == 0) throw ConfigError("rr: n_beats must be >= 1");

  Rng rng = make_rng(seed);
  std::normal_distribution<double> gamma(0.0, 1.0);

  RrSeries out;
  out.intervals.reserve(n_beats);
  out.onsets.reserve(n_beats);
  double t = 0.0;
  for (std::size_t i = 0; i < n_beats; ++i) {
    double rr = params.mu + params.beta * std::sin(2.0 * std::numbers::pi * params.f_b * t);
    if (params.gamma_sd > 0.0) rr += params.gamma_sd * gamma(rng);
    if (floor > 0.0 && rr < floor) {
      rr = floor;
      ++out.clamped;
    }
    out.onsets.push_back(t);
    out.intervals.push_back(rr);
    t += rr;
  }
  return out;
}

std::size_t beats_to_cover(const RrParams& params, double duration, double floor) {
  check(params);
  double shortest = params.mu - params.beta - 5.0 * params.gamma_sd;
  if (floor > 0.0) shortest = std::max(shortest, floor);
  return static_cast<std::size_t>(std::ceil(std::max(duration, 0.0) / shortest)) + 2;
}

}  // namespace synecg
