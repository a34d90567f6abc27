#include "synecg/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "synecg/errors.hpp"

namespace synecg {

std::string_view wave_name(Wave w) {
  switch (w) {
    case Wave::p: return "p";
    case Wave::q: return "q";
    case Wave::r: return "r";
    case Wave::s: return "s";
    case Wave::t: return "t";
  }
  return "?";
}

const WaveRange& WaveRanges::operator[](Wave w) const {
  switch (w) {
    case Wave::p: return p;
    case Wave::q: return q;
    case Wave::r: return r;
    case Wave::s: return s;
    case Wave::t: break;
  }
  return t;
}

WaveRange& WaveRanges::operator[](Wave w) {
  return const_cast<WaveRange&>(std::as_const(*this)[w]);
}

const WaveDraw& ParameterDraw::operator[](Wave w) const {
  switch (w) {
    case Wave::p: return p;
    case Wave::q: return q;
    case Wave::r: return r;
    case Wave::s: return s;
    case Wave::t: break;
  }
  return t;
}

WaveDraw& ParameterDraw::operator[](Wave w) {
  return const_cast<WaveDraw&>(std::as_const(*this)[w]);
}

Range scale_range(Range range, double c) {
  if (!std::isfinite(c) || c < 0.0) {
    throw ConfigError("scaling coefficient must be finite and >= 0, got " + std::to_string(c));
  }
  if (range.is_constant()) return range;

  if (range.low == 0.0 || range.high == 0.0) {
    const double other = range.low == 0.0 ? range.high : range.low;
    return range.low == 0.0 ? Range{0.0, other * c} : Range{other * c, 0.0};
  }

  const bool mixed = (range.low < 0.0) != (range.high < 0.0);
  const bool negative = !mixed && range.low < 0.0;

  // (near, far): the limit closer to zero first. Mixed-sign limits use raw order.
  double near = 0.0;
  double far = 0.0;
  bool listed_near_first = true;
  if (mixed) {
    near = std::min(range.low, range.high);
    far = std::max(range.low, range.high);
    listed_near_first = range.low < range.high;
  } else {
    const double a = std::abs(range.low);
    const double b = std::abs(range.high);
    near = std::min(a, b);
    far = std::max(a, b);
    listed_near_first = a <= b;
  }
  if (near + far == 0.0) {
    throw ConfigError("degenerate range: l_low + l_high = 0 for [" + std::to_string(range.low) +
                      ", " + std::to_string(range.high) + "]");
  }

  double lo = 0.0;
  double hi = 0.0;
  if (c >= 1.0) {
    const double d = std::abs(near - far) * (c - 1.0) * near / (near + far);
    lo = near - d;
    hi = far + d;
  } else {
    const double mid = 0.5 * (near + far);
    lo = mid - c * (mid - near);
    hi = mid + c * (far - mid);
  }
  if (negative) {
    lo = -lo;
    hi = -hi;
  }
  return listed_near_first ? Range{lo, hi} : Range{hi, lo};
}

ParameterSpace default_space() {
  ParameterSpace s;
  s.waves.p = {{0.05, 0.2}, {0.065, 0.085}, {-0.12, -0.18}, constant(1.0)};
  s.waves.q = {{-0.05, -0.2}, {0.03, 0.08}, {-0.03, -0.05}, constant(1.0)};
  s.waves.r = {{0.8, 1.2}, {0.06, 0.085}, constant(0.0), constant(1.0)};
  s.waves.s = {{-0.05, -0.2}, {0.03, 0.08}, {0.03, 0.05}, constant(1.0)};
  s.waves.t = {{0.1, 0.6}, {0.085, 0.21}, {0.2, 0.25}, {1.0, 3.0}};
  s.rr = {{0.75, 1.0}, 0.28, 0.1, 0.0};
  s.noise = {{0.0, 0.17e-3}, {0.0, 0.67}, {0.0, 4e-3}};
  s.scale = ScaleCoefficients::uniform(1.0);
  s.sampling_rate = 250.0;
  return s;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool finite(Range r) { return std::isfinite(r.low) && std::isfinite(r.high); }

std::string name(Wave w, const char* field) {
  return std::string(wave_name(w)) + "." + field;
}

}  // namespace

void validate(const ParameterSpace& space) {
  require(std::isfinite(space.sampling_rate) && space.sampling_rate > 0.0,
          "sampling_rate must be > 0");
  for (double c : {space.scale.rr, space.scale.wave, space.scale.fiducial, space.scale.noise}) {
    require(std::isfinite(c) && c >= 0.0,
            "scaling coefficient must be finite and >= 0, got " + std::to_string(c));
  }
  for (Wave w : kWaves) {
    const WaveRange& wr = space.waves[w];
    require(finite(wr.amplitude) && finite(wr.width) && finite(wr.delay) && finite(wr.asymmetry),
            name(w, "*") + " has a non-finite limit");
    require(wr.width.low > 0.0 && wr.width.high > 0.0, name(w, "b") + " must be > 0");
    require(wr.asymmetry.low >= 1.0 && wr.asymmetry.high >= 1.0, name(w, "m") + " must be >= 1");
  }
  require(finite(space.rr.mu) && space.rr.mu.low > 0.0 && space.rr.mu.high > 0.0,
          "rr.mu must be > 0");
  require(std::isfinite(space.rr.f_b) && space.rr.f_b > 0.0, "rr.f_b must be > 0");
  require(std::isfinite(space.rr.beta) && space.rr.beta >= 0.0, "rr.beta must be >= 0");
  require(std::isfinite(space.rr.gamma_sd) && space.rr.gamma_sd >= 0.0,
          "rr.gamma_sd must be >= 0");
  for (auto [r, label] : {std::pair{space.noise.sigma, "noise.sigma"},
                          std::pair{space.noise.alpha, "noise.alpha"},
                          std::pair{space.noise.rho, "noise.rho"}}) {
    require(finite(r) && r.low == 0.0 && r.high >= 0.0,
            std::string(label) + " must be [0, upper] with upper >= 0");
  }

  // Throws on degenerate ranges; also checks the scaled RR headroom.
  const ParameterSpace eff = effective_space(space);
  const double headroom = space.rr.beta + 5.0 * space.rr.gamma_sd;
  require(std::min(eff.rr.mu.low, eff.rr.mu.high) > headroom,
          "scaled rr.mu lower limit must exceed beta + 5*gamma_sd");
}

ParameterSpace effective_space(const ParameterSpace& space) {
  ParameterSpace e = space;
  const ScaleCoefficients& c = space.scale;
  for (Wave w : kWaves) {
    WaveRange& wr = e.waves[w];
    const bool exempt = (w == Wave::r) && !c.scale_r;
    if (!exempt) {
      wr.amplitude = scale_range(wr.amplitude, c.wave);
      wr.width = scale_range(wr.width, c.wave);
      wr.asymmetry = scale_range(wr.asymmetry, c.wave);
      wr.delay = scale_range(wr.delay, c.fiducial);
    }
  }
  e.rr.mu = scale_range(space.rr.mu, c.rr);
  e.noise.sigma = scale_range(space.noise.sigma, c.noise);
  e.noise.alpha = scale_range(space.noise.alpha, c.noise);
  e.noise.rho = scale_range(space.noise.rho, c.noise);
  e.scale = ScaleCoefficients::uniform(1.0);
  e.scale.scale_r = c.scale_r;
  return e;
}

namespace {

double at(Range r, double position) { return r.low + position * (r.high - r.low); }

WaveDraw finish_wave(double a, double b, double d, double m) {
  return WaveDraw{a, std::max(kMinWidth, b), d, std::max(kMinAsymmetry, m), 1.0};
}

}  // namespace

ParameterDraw sample_draw(const ParameterSpace& space, Seed seed) {
  validate(space);
  const ParameterSpace eff = effective_space(space);
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample = [&](Range r) { return at(r, unit(rng)); };

  ParameterDraw draw;
  for (Wave w : kWaves) {
    const WaveRange& wr = eff.waves[w];
    const double a = sample(wr.amplitude);
    const double b = sample(wr.width);
    const double d = sample(wr.delay);
    const double m = sample(wr.asymmetry);
    draw[w] = finish_wave(a, b, d, m);
  }
  draw.mu = sample(eff.rr.mu);
  draw.f_b = eff.rr.f_b;
  draw.beta = eff.rr.beta;
  draw.gamma_sd = eff.rr.gamma_sd;
  draw.sigma = sample(eff.noise.sigma);
  draw.alpha = sample(eff.noise.alpha);
  draw.rho = sample(eff.noise.rho) * draw.alpha * draw.alpha;
  draw.sampling_rate = eff.sampling_rate;
  draw.seed = seed;
  return draw;
}

ParameterDraw fixed_draw(const ParameterSpace& space, double position) {
  validate(space);
  const ParameterSpace eff = effective_space(space);
  ParameterDraw draw;
  for (Wave w : kWaves) {
    const WaveRange& wr = eff.waves[w];
    draw[w] = finish_wave(at(wr.amplitude, position), at(wr.width, position),
                          at(wr.delay, position), at(wr.asymmetry, position));
  }
  draw.mu = at(eff.rr.mu, position);
  draw.f_b = eff.rr.f_b;
  draw.beta = eff.rr.beta;
  draw.gamma_sd = eff.rr.gamma_sd;
  draw.sigma = at(eff.noise.sigma, position);
  draw.alpha = at(eff.noise.alpha, position);
  draw.rho = at(eff.noise.rho, position) * draw.alpha * draw.alpha;
  draw.sampling_rate = eff.sampling_rate;
  return draw;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json range_json(Range r) {
  if (r.is_constant()) return r.low;
  return json::array({r.low, r.high});
}

Range range_from(const json& j, const char* key) {
  if (j.is_number()) return constant(j.get<double>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Range{j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError(std::string("expected number or [low, high] for '") + key + "'");
}

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void range_if(const json& obj, const char* key, Range& out) {
  if (obj.contains(key)) out = range_from(obj.at(key), key);
}

}  // namespace

json to_json(const ParameterSpace& space) {
  json waves = json::object();
  for (Wave w : kWaves) {
    const WaveRange& wr = space.waves[w];
    waves[std::string(wave_name(w))] = {{"a", range_json(wr.amplitude)},
                                        {"b", range_json(wr.width)},
                                        {"d", range_json(wr.delay)},
                                        {"m", range_json(wr.asymmetry)}};
  }
  return {
      {"format_version", 1},
      {"sampling_rate", space.sampling_rate},
      {"scale",
       {{"rr", space.scale.rr},
        {"wave", space.scale.wave},
        {"fiducial", space.scale.fiducial},
        {"noise", space.scale.noise},
        {"scale_r", space.scale.scale_r}}},
      {"waveform", waves},
      {"rr",
       {{"mu", range_json(space.rr.mu)},
        {"f_b", space.rr.f_b},
        {"beta", space.rr.beta},
        {"gamma_sd", space.rr.gamma_sd}}},
      {"noise",
       {{"sigma", range_json(space.noise.sigma)},
        {"alpha", range_json(space.noise.alpha)},
        {"rho", range_json(space.noise.rho)}}},
  };
}

ParameterSpace space_from_json(const json& j) {
  ParameterSpace s = default_space();
  try {
    if (!j.is_object()) throw ConfigError("parameter space must be a JSON object");
    read_if(j, "sampling_rate", s.sampling_rate);
    if (j.contains("scale")) {
      const json& c = j.at("scale");
      if (c.is_number()) {
        s.scale = ScaleCoefficients::uniform(c.get<double>());
      } else {
        read_if(c, "rr", s.scale.rr);
        read_if(c, "wave", s.scale.wave);
        read_if(c, "fiducial", s.scale.fiducial);
        read_if(c, "noise", s.scale.noise);
        read_if(c, "scale_r", s.scale.scale_r);
      }
    }
    if (j.contains("waveform")) {
      const json& wj = j.at("waveform");
      for (Wave w : kWaves) {
        const std::string key(wave_name(w));
        if (!wj.contains(key)) continue;
        const json& one = wj.at(key);
        WaveRange& wr = s.waves[w];
        range_if(one, "a", wr.amplitude);
        range_if(one, "b", wr.width);
        range_if(one, "d", wr.delay);
        range_if(one, "m", wr.asymmetry);
      }
    }
    if (j.contains("rr")) {
      const json& r = j.at("rr");
      range_if(r, "mu", s.rr.mu);
      read_if(r, "f_b", s.rr.f_b);
      read_if(r, "beta", s.rr.beta);
      read_if(r, "gamma_sd", s.rr.gamma_sd);
    }
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      range_if(n, "sigma", s.noise.sigma);
      range_if(n, "alpha", s.noise.alpha);
      range_if(n, "rho", s.noise.rho);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("parameter space JSON: ") + e.what());
  }
  validate(s);
  return s;
}

json to_json(const ParameterDraw& draw) {
  json waves = json::object();
  for (Wave w : kWaves) {
    const WaveDraw& wd = draw[w];
    waves[std::string(wave_name(w))] = {{"a", wd.amplitude},
                                        {"b", wd.width},
                                        {"d", wd.delay},
                                        {"m_pos", wd.m_pos},
                                        {"m_neg", wd.m_neg}};
  }
  return {{"waveform", waves},
          {"rr", {{"mu", draw.mu}, {"f_b", draw.f_b}, {"beta", draw.beta}, {"gamma_sd", draw.gamma_sd}}},
          {"noise", {{"sigma", draw.sigma}, {"alpha", draw.alpha}, {"rho", draw.rho}}},
          {"sampling_rate", draw.sampling_rate},
          {"seed", draw.seed}};
}

ParameterDraw draw_from_json(const json& j) {
  ParameterDraw d = fixed_draw(default_space(), 0.5);
  try {
    if (j.contains("waveform")) {
      const json& wj = j.at("waveform");
      for (Wave w : kWaves) {
        const std::string key(wave_name(w));
        if (!wj.contains(key)) continue;
        const json& one = wj.at(key);
        WaveDraw& wd = d[w];
        read_if(one, "a", wd.amplitude);
        read_if(one, "b", wd.width);
        read_if(one, "d", wd.delay);
        read_if(one, "m_pos", wd.m_pos);
        read_if(one, "m_neg", wd.m_neg);
      }
    }
    if (j.contains("rr")) {
      const json& r = j.at("rr");
      read_if(r, "mu", d.mu);
      read_if(r, "f_b", d.f_b);
      read_if(r, "beta", d.beta);
      read_if(r, "gamma_sd", d.gamma_sd);
    }
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      read_if(n, "sigma", d.sigma);
      read_if(n, "alpha", d.alpha);
      read_if(n, "rho", d.rho);
    }
    read_if(j, "sampling_rate", d.sampling_rate);
    read_if(j, "seed", d.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("parameter draw JSON: ") + e.what());
  }
  for (Wave w : kWaves) {
    if (!(d[w].width > 0.0)) throw ConfigError(std::string(wave_name(w)) + ".b must be > 0");
    if (d[w].m_pos < 1.0 || d[w].m_neg < 1.0) {
      throw ConfigError(std::string(wave_name(w)) + " asymmetry must be >= 1");
    }
  }
  if (!(d.mu > 0.0) || !(d.sampling_rate > 0.0)) throw ConfigError("draw mu and sampling_rate must be > 0");
  return d;
}

}  // namespace synecg
