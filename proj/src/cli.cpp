#include "synecg/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "synecg/artefact_augment.hpp"
#include "synecg/dataset_pipeline.hpp"
#include "synecg/errors.hpp"
#include "synecg/matrix_io.hpp"
#include "synecg/metrics_eval.hpp"
#include "synecg/noise_model.hpp"
#include "synecg/param_space.hpp"
#include "synecg/peak_postprocess.hpp"
#include "synecg/rr_model.hpp"
#include "synecg/waveform_model.hpp"

namespace synecg::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

/// A required flag is missing or flags contradict each other.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON config files: {"generate": {"n": 10, "scale": 3}, "detect": {...}}.
// Objects open a subcommand section; arrays feed multi-value options.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& r = opt->results();
        j[name] = r.size() == 1 ? json(r.front()) : json(r);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      j = json::parse(input);
    } catch (const json::parse_error& e) {
      throw CLI::ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConfigError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConfigError("config key '" + key + "' holds an unsupported value");
  }

  static void flatten(const json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      // Run manifests double as config files; skip their bookkeeping keys.
      if (parents.empty() && (key == "format_version" || key == "created")) continue;
      if (value.is_null()) continue;
      if (value.is_object()) {
        std::vector<std::string> inner = parents;
        inner.push_back(key);
        flatten(value, inner, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const json& v : value) item.inputs.push_back(scalar(v, key));
      } else {
        item.inputs.push_back(scalar(value, key));
      }
      items.push_back(std::move(item));
    }
  }
};

Seed resolve_seed(const std::optional<Seed>& seed, std::ostream& err) {
  if (seed) return *seed;
  std::random_device rd;
  const Seed s = (static_cast<Seed>(rd()) << 32) ^ static_cast<Seed>(rd());
  err << "seed: " << s << '\n';
  return s;
}

std::string extension(const std::string& path) { return fs::path(path).extension().string(); }

void write_float_matrix(const std::string& path, const std::vector<float>& values,
                        std::size_t rows, std::size_t cols, const json& extra) {
  const std::string ext = extension(path);
  if (ext == ".f32") {
    write_matrix_f32(path, values, rows, cols, extra);
  } else if (ext == ".csv") {
    write_matrix_csv(path, values, rows, cols);
  } else {
    throw ConfigError("output '" + path + "' must end in .f32 or .csv");
  }
}

// Echo of a run in config-file form, so `synecg --config <manifest> <command>`
// repeats it.
void write_run_manifest(const std::string& out, const std::string& command, const json& options) {
  fs::path p(out);
  p.replace_filename(p.stem().string() + ".manifest.json");
  json j = {{"format_version", kFormatVersion},
            {"created", {{"tool", std::string("synecg ") + kVersion}}},
            {command, options}};
  write_json(p, j);
}

std::vector<float> to_float(const std::vector<double>& v) { return {v.begin(), v.end()}; }

// ---------------------------------------------------------------------------
// generate

struct GenerateOptions {
  std::size_t n = 0;
  std::string out;
  std::optional<Seed> seed;
  std::optional<double> scale, scale_rr, scale_wave, scale_fiducial, scale_noise;
  bool scale_r = false;
  std::string space;
  bool augment = false;
  std::string artefacts;
  std::optional<std::size_t> dataset_size;
  std::size_t segment_length = kSegmentLength;
  std::string format = "f32";
  bool zero_phase = false;
  int jobs = 0;
  std::string replay;
};

void add_generate(CLI::App& app, GenerateOptions& o) {
  CLI::App* sub = app.add_subcommand("generate", "Export a labeled synthetic dataset");
  sub->add_option("--n", o.n, "Number of examples");
  sub->add_option("--out", o.out, "Output directory")->required();
  sub->add_option("--seed", o.seed, "Master seed (drawn from entropy and echoed when omitted)");
  sub->add_option("--scale", o.scale, "Scaling coefficient C for every group");
  sub->add_option("--scale-rr", o.scale_rr, "C for the RR group");
  sub->add_option("--scale-wave", o.scale_wave, "C for wave amplitudes, widths and asymmetries");
  sub->add_option("--scale-fiducial", o.scale_fiducial, "C for fiducial delays");
  sub->add_option("--scale-noise", o.scale_noise, "C for the noise group");
  sub->add_flag("--scale-r", o.scale_r, "Also scale r amplitude and width");
  sub->add_option("--space", o.space, "Parameter space JSON");
  sub->add_flag("--augment", o.augment, "Add recorded artefacts and powerline interference");
  sub->add_option("--artefacts", o.artefacts, "Directory holding bw/ma artefact records");
  sub->add_option("--dataset-size", o.dataset_size, "Finite training set size echoed to the manifest");
  sub->add_option("--segment-length", o.segment_length, "Samples per example")->capture_default_str();
  sub->add_option("--format", o.format, "Signal encoding")
      ->check(CLI::IsMember({"f32", "csv"}))
      ->capture_default_str();
  sub->add_flag("--zero-phase", o.zero_phase, "Filter forward and backward");
  sub->add_option("--jobs", o.jobs, "Worker threads, 0 = all cores")->capture_default_str();
  sub->add_option("--replay", o.replay, "Regenerate the dataset of an existing manifest");
}

ParameterSpace space_with_scales(const GenerateOptions& o) {
  ParameterSpace space = o.space.empty() ? default_space() : space_from_json(read_json(o.space));
  if (o.scale) space.scale = ScaleCoefficients::uniform(*o.scale);
  if (o.scale_rr) space.scale.rr = *o.scale_rr;
  if (o.scale_wave) space.scale.wave = *o.scale_wave;
  if (o.scale_fiducial) space.scale.fiducial = *o.scale_fiducial;
  if (o.scale_noise) space.scale.noise = *o.scale_noise;
  if (o.scale_r) space.scale.scale_r = true;
  return space;
}

int run_generate(const GenerateOptions& o, std::ostream& out, std::ostream& err) {
  if (!o.replay.empty()) {
    const DatasetManifest m = replay_manifest(o.replay, o.out);
    out << json{{"format_version", kFormatVersion},
                {"out", o.out},
                {"n", m.example_seeds.size()},
                {"seed", m.config.at("master_seed")}}
               .dump()
        << '\n';
    return kOk;
  }
  if (o.n == 0) throw UsageError("generate: --n is required (>= 1) unless --replay is given");

  GenerationConfig config;
  config.space = space_with_scales(o);
  validate(config.space);
  config.augment = o.augment;
  if (o.augment) {
    if (o.artefacts.empty()) throw ConfigError("--augment needs --artefacts <dir>");
    config.bank_path = fs::absolute(o.artefacts);
    config.bank = std::make_shared<const ArtefactBank>(
        load_bank(config.bank_path, config.space.sampling_rate));
  }
  config.dataset_size = o.dataset_size;
  config.segment_length = o.segment_length;
  config.format = o.format == "csv" ? ExportFormat::csv : ExportFormat::f32;
  config.filter_mode = o.zero_phase ? FilterMode::zero_phase : FilterMode::forward;
  config.jobs = o.jobs;
  config.master_seed = resolve_seed(o.seed, err);
  validate(config);

  export_dataset(config, o.n, o.out);
  out << json{{"format_version", kFormatVersion},
              {"out", o.out},
              {"n", o.n},
              {"seed", config.master_seed}}
             .dump()
      << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// noise

struct NoiseOptions {
  double rho = 0.0;
  double alpha = 1.0;
  double sigma = 0.0;
  std::size_t n_samples = 0;
  double fs = 250.0;
  std::optional<Seed> seed;
  std::string out;
  std::string psd;
};

void add_noise(CLI::App& app, NoiseOptions& o) {
  CLI::App* sub = app.add_subcommand("noise", "Synthesize power-law plus white noise");
  sub->add_option("--rho", o.rho, "Power-law constant")->capture_default_str();
  sub->add_option("--alpha", o.alpha, "Power-law exponent")->capture_default_str();
  sub->add_option("--sigma", o.sigma, "White-noise standard deviation")->capture_default_str();
  sub->add_option("--n-samples", o.n_samples, "Realization length")->required();
  sub->add_option("--fs", o.fs, "Sampling rate in Hz")->capture_default_str();
  sub->add_option("--seed", o.seed, "Seed (drawn from entropy and echoed when omitted)");
  sub->add_option("--out", o.out, "Output series (.f32 or .csv)")->required();
  sub->add_option("--psd", o.psd, "Also write frequency, analytic PSD and periodogram as CSV");
}

int run_noise(const NoiseOptions& o, std::ostream& out, std::ostream& err) {
  const NoiseSpec spec{o.rho, o.alpha, o.sigma * o.sigma, o.n_samples, o.fs};
  if (!(o.fs > 0.0)) throw ConfigError("--fs must be > 0");
  const Seed seed = resolve_seed(o.seed, err);
  const std::vector<double> noise = generate_noise(spec, seed);
  write_float_matrix(o.out, to_float(noise), 1, noise.size(), {{"sampling_rate", o.fs}});

  if (!o.psd.empty()) {
    const std::vector<double> f = one_sided_frequencies(noise.size(), o.fs);
    const std::vector<double> pg = periodogram(noise);
    std::ofstream csv(o.psd);
    if (!csv) throw IoError("cannot write '" + o.psd + "'");
    csv << "frequency_hz,analytic_psd,periodogram\n";
    for (std::size_t k = 0; k < f.size(); ++k) {
      csv << shortest(f[k]) << ',' << shortest(analytic_psd(spec, f[k])) << ',' << shortest(pg[k])
          << '\n';
    }
    if (!csv) throw IoError("failed writing '" + o.psd + "'");
  }

  json echo = {{"rho", o.rho}, {"alpha", o.alpha}, {"sigma", o.sigma},
               {"n-samples", o.n_samples}, {"fs", o.fs}, {"seed", seed}, {"out", o.out}};
  if (!o.psd.empty()) echo["psd"] = o.psd;
  write_run_manifest(o.out, "noise", echo);
  out << json{{"format_version", kFormatVersion}, {"out", o.out}, {"seed", seed}}.dump() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// augment

struct AugmentOptions {
  std::string in;
  std::string artefacts;
  std::string out;
  std::optional<Seed> seed;
  bool normalize = false;
};

void add_augment(CLI::App& app, AugmentOptions& o) {
  CLI::App* sub = app.add_subcommand("augment", "Add artefacts to normalized ECG segments");
  sub->add_option("--in", o.in, "Input matrix, one segment per row")->required();
  sub->add_option("--artefacts", o.artefacts, "Directory holding bw/ma artefact records")->required();
  sub->add_option("--out", o.out, "Output matrix (.f32 or .csv)")->required();
  sub->add_option("--seed", o.seed, "Seed (drawn from entropy and echoed when omitted)");
  sub->add_flag("--normalize", o.normalize, "Normalize each row to [-1, 1] first");
}

int run_augment(const AugmentOptions& o, std::ostream& out, std::ostream& err) {
  const Matrix in = read_matrix(o.in);
  const ArtefactBank bank = load_bank(o.artefacts, in.sampling_rate(250.0));
  const Seed seed = resolve_seed(o.seed, err);
  std::vector<float> result;
  result.reserve(in.values.size());
  for (std::size_t r = 0; r < in.rows; ++r) {
    std::vector<double> row(in.row(r).begin(), in.row(r).end());
    if (o.normalize) row = normalize(row).samples;
    for (double v : augment(row, bank, derive_seed(seed, r))) result.push_back(static_cast<float>(v));
  }
  write_float_matrix(o.out, result, in.rows, in.cols, {{"sampling_rate", bank.sampling_rate}});
  write_run_manifest(o.out, "augment",
                     {{"in", o.in}, {"artefacts", o.artefacts}, {"out", o.out}, {"seed", seed},
                      {"normalize", o.normalize}});
  out << json{{"format_version", kFormatVersion}, {"out", o.out}, {"rows", in.rows}, {"seed", seed}}
             .dump()
      << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// detect

struct DetectOptions {
  std::string ecg;
  std::string probabilities;
  std::string out;
  double threshold = 0.05;
  std::size_t min_distance = 75;
  std::size_t min_votes = 5;
  bool averaged = false;
  std::size_t window = kModelWindow;
  std::size_t stride = kModelStride;
  int jobs = 0;
};

void add_detect(CLI::App& app, DetectOptions& o) {
  CLI::App* sub = app.add_subcommand("detect", "Turn r-wave probabilities into peak indices");
  sub->add_option("--ecg", o.ecg, "ECG matrix, one record per row")->required();
  sub->add_option("--probabilities", o.probabilities,
                  "Per-segment probabilities, rows grouped by record in stride order")
      ->required();
  sub->add_option("--out", o.out, "Peak CSV (record,index)")->required();
  sub->add_option("--threshold", o.threshold, "Candidate threshold")->capture_default_str();
  sub->add_option("--min-distance", o.min_distance, "Minimum peak spacing in samples")
      ->capture_default_str();
  sub->add_option("--min-votes", o.min_votes, "Shifted samples needed per r-wave candidate")
      ->capture_default_str();
  sub->add_flag("--averaged", o.averaged, "Probabilities are already one averaged row per record");
  sub->add_option("--window", o.window, "Model segment length")->capture_default_str();
  sub->add_option("--stride", o.stride, "Model segment stride")->capture_default_str();
  sub->add_option("--jobs", o.jobs, "Worker threads, 0 = all cores")->capture_default_str();
}

int run_detect(const DetectOptions& o, std::ostream& out) {
  PostprocessConfig pp;
  pp.threshold = o.threshold;
  pp.min_distance = o.min_distance;
  pp.min_votes = o.min_votes;
  validate(pp);

  const Matrix ecg = read_matrix(o.ecg);
  const Matrix prob = read_matrix(o.probabilities);
  std::vector<DetectionInput> records(ecg.rows);
  std::size_t next_row = 0;
  for (std::size_t r = 0; r < ecg.rows; ++r) {
    records[r].ecg.assign(ecg.row(r).begin(), ecg.row(r).end());
    if (o.averaged) {
      if (prob.rows != ecg.rows || prob.cols != ecg.cols) {
        throw ConfigError("averaged probabilities must match the ECG shape");
      }
      records[r].avg.assign(prob.row(r).begin(), prob.row(r).end());
      for (double p : records[r].avg) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("probability outside [0, 1]");
      }
      continue;
    }
    if (prob.cols != o.window) {
      throw ConfigError("probability rows hold " + std::to_string(prob.cols) +
                        " samples, expected the segment window " + std::to_string(o.window));
    }
    const std::size_t segs = segment_offsets(ecg.cols, o.window, o.stride).size();
    if (next_row + segs > prob.rows) {
      throw ConfigError("probability file has too few segments for record " + std::to_string(r));
    }
    const auto block = std::span<const double>(prob.values).subspan(next_row * o.window, segs * o.window);
    records[r].avg = windowed_average(block, ecg.cols, o.window, o.stride);
    next_row += segs;
  }
  if (!o.averaged && next_row != prob.rows) {
    throw ConfigError("probability file has " + std::to_string(prob.rows - next_row) +
                      " segments beyond the last record");
  }

  const std::vector<DetectionResult> results = detect_records(records, pp, o.jobs);
  IndexTable table;
  DetectionDiagnostics total;
  for (std::size_t r = 0; r < results.size(); ++r) {
    for (std::size_t p : results[r].peaks) {
      table.record.push_back(r);
      table.index.push_back(p);
    }
    const DetectionDiagnostics& d = results[r].diagnostics;
    total.above_threshold += d.above_threshold;
    total.shift_targets += d.shift_targets;
    total.r_candidates += d.r_candidates;
    total.isolated += d.isolated;
    total.greedy_approved += d.greedy_approved;
    total.suppressed += d.suppressed;
  }
  write_index_table(o.out, table, "record,index");
  out << json{{"format_version", kFormatVersion},
              {"records", results.size()},
              {"peaks", table.index.size()},
              {"diagnostics",
               {{"above_threshold", total.above_threshold},
                {"shift_targets", total.shift_targets},
                {"r_candidates", total.r_candidates},
                {"isolated", total.isolated},
                {"greedy_approved", total.greedy_approved},
                {"suppressed", total.suppressed}}}}
             .dump()
      << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  std::string truth;
  std::string detected;
  std::size_t tolerance = kDefaultTolerance;
  std::optional<std::size_t> records;
  std::string per_record;
  std::string report;
  std::string labels;
  std::string probabilities;
  std::string snap_ecg;
  int jobs = 0;
};

void add_evaluate(CLI::App& app, EvaluateOptions& o) {
  CLI::App* sub = app.add_subcommand("evaluate", "Score detections against reference peaks");
  sub->add_option("--truth", o.truth, "Reference peaks CSV (record,index)")->required();
  sub->add_option("--detected", o.detected, "Detected peaks CSV (record,index)")->required();
  sub->add_option("--tolerance", o.tolerance, "Matching tolerance in samples")->capture_default_str();
  sub->add_option("--records", o.records, "Record count (default: highest record id + 1)");
  sub->add_option("--per-record", o.per_record, "Per-record scores CSV");
  sub->add_option("--report", o.report, "Also write the JSON report here");
  sub->add_option("--labels", o.labels, "Per-sample labels matrix for ROC-AUC");
  sub->add_option("--probabilities", o.probabilities, "Per-sample probability matrix for ROC-AUC");
  sub->add_option("--snap-ecg", o.snap_ecg, "ECG matrix; reference peaks move to the local max");
  sub->add_option("--jobs", o.jobs, "Worker threads, 0 = all cores")->capture_default_str();
}

json summary_json(const Summary& s) {
  return {{"mean", s.mean}, {"p10", s.p10}, {"p90", s.p90}};
}

int run_evaluate(const EvaluateOptions& o, std::ostream& out) {
  if (o.labels.empty() != o.probabilities.empty()) {
    throw UsageError("evaluate: --labels and --probabilities go together");
  }
  IndexTable truth = read_index_table(o.truth);
  const IndexTable detected = read_index_table(o.detected);

  if (!o.snap_ecg.empty()) {
    const Matrix ecg = read_matrix(o.snap_ecg);
    IndexTable snapped;
    for (std::size_t r = 0; r < std::max(ecg.rows, truth.record_count()); ++r) {
      const std::vector<std::size_t> idx = truth.of(r);
      if (idx.empty()) continue;
      if (r >= ecg.rows) throw ConfigError("no ECG row for record " + std::to_string(r));
      for (std::size_t i : snap_to_max(idx, ecg.row(r))) {
        snapped.record.push_back(r);
        snapped.index.push_back(i);
      }
    }
    truth = std::move(snapped);
  }

  const std::size_t records =
      o.records ? *o.records : std::max(truth.record_count(), detected.record_count());
  if (records == 0) throw ConfigError("no records to score; pass --records");

  const std::vector<RecordScore> scored =
      evaluate_records(truth, detected, records, o.tolerance, o.jobs);
  std::vector<double> f1, precision, recall;
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const RecordScore& s : scored) {
    f1.push_back(s.scores.f1);
    precision.push_back(s.scores.precision);
    recall.push_back(s.scores.recall);
    tp += s.report.tp;
    fp += s.report.fp;
    fn += s.report.fn;
  }
  const Scores pooled = scores(tp, fp, fn);
  json report = {{"format_version", kFormatVersion},
                 {"tolerance", o.tolerance},
                 {"records", records},
                 {"pooled",
                  {{"tp", tp},
                   {"fp", fp},
                   {"fn", fn},
                   {"precision", pooled.precision},
                   {"recall", pooled.recall},
                   {"f1", pooled.f1}}},
                 {"per_record",
                  {{"f1", summary_json(aggregate(f1))},
                   {"precision", summary_json(aggregate(precision))},
                   {"recall", summary_json(aggregate(recall))}}}};

  if (!o.labels.empty()) {
    const Matrix l = read_matrix(o.labels);
    const Matrix p = read_matrix(o.probabilities);
    if (l.values.size() != p.values.size()) {
      throw ConfigError("labels and probabilities differ in size");
    }
    std::vector<std::uint8_t> lab;
    lab.reserve(l.values.size());
    for (double v : l.values) lab.push_back(v != 0.0 ? 1 : 0);
    report["roc_auc"] = roc_auc(lab, p.values);
  }

  if (!o.per_record.empty()) {
    std::ofstream csv(o.per_record);
    if (!csv) throw IoError("cannot write '" + o.per_record + "'");
    csv << "record,tp,fp,fn,precision,recall,f1\n";
    for (const RecordScore& s : scored) {
      csv << s.record << ',' << s.report.tp << ',' << s.report.fp << ',' << s.report.fn << ','
          << shortest(s.scores.precision) << ',' << shortest(s.scores.recall) << ','
          << shortest(s.scores.f1) << '\n';
    }
    if (!csv) throw IoError("failed writing '" + o.per_record + "'");
  }
  if (!o.report.empty()) write_json(o.report, report);
  out << report.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// fit-dump

struct FitDumpOptions {
  std::string space;
  double position = 0.5;
  bool random = false;
  std::optional<Seed> seed;
  std::size_t beats = 3;
  std::optional<double> mu;
  bool hrv = false;
  std::string out;
  std::string params;
};

void add_fit_dump(CLI::App& app, FitDumpOptions& o) {
  CLI::App* sub = app.add_subcommand("fit-dump", "Write a clean waveform and its parameters");
  sub->add_option("--space", o.space, "Parameter space JSON");
  sub->add_option("--position", o.position, "Point of every range: 0 low, 0.5 mid, 1 high")
      ->capture_default_str();
  sub->add_flag("--random", o.random, "Sample the draw instead of using --position");
  sub->add_option("--seed", o.seed, "Seed for --random (drawn from entropy and echoed when omitted)");
  sub->add_option("--beats", o.beats, "Cardiac cycles to emit")->capture_default_str();
  sub->add_option("--mu", o.mu, "Override the mean RR interval in seconds");
  sub->add_flag("--hrv", o.hrv, "Keep breathing modulation and RR jitter");
  sub->add_option("--out", o.out, "Waveform CSV: sample,time_s,ecg,p,q,r,s,t")->required();
  sub->add_option("--params", o.params, "Parameter echo JSON (default: stdout)");
}

int run_fit_dump(const FitDumpOptions& o, std::ostream& out, std::ostream& err) {
  const ParameterSpace space =
      o.space.empty() ? default_space() : space_from_json(read_json(o.space));
  validate(space);
  std::optional<Seed> seed;
  ParameterDraw draw;
  if (o.random) {
    seed = resolve_seed(o.seed, err);
    draw = sample_draw(space, *seed);
  } else {
    if (!(o.position >= 0.0 && o.position <= 1.0)) throw ConfigError("--position must lie in [0, 1]");
    draw = fixed_draw(space, o.position);
  }
  if (o.mu) draw.mu = *o.mu;
  if (!o.hrv) {
    draw.beta = 0.0;
    draw.gamma_sd = 0.0;
  }
  if (o.beats == 0) throw ConfigError("--beats must be >= 1");

  const RrSeries rr = generate_rr({draw.mu, draw.beta, draw.f_b, draw.gamma_sd}, o.beats,
                                  seed ? stream_seed(*seed, Stream::rr) : 0);
  std::size_t n = 0;
  for (std::size_t c : cycle_lengths(rr, draw.sampling_rate)) n += c;
  const CleanEcg clean = synthesize_clean(draw, rr, n);
  std::vector<std::vector<double>> parts;
  for (Wave w : kWaves) {
    ParameterDraw only = draw;
    for (Wave v : kWaves) {
      if (v != w) only[v].amplitude = 0.0;
    }
    parts.push_back(synthesize_clean(only, rr, n).samples);
  }

  std::ofstream csv(o.out);
  if (!csv) throw IoError("cannot write '" + o.out + "'");
  csv << "sample,time_s,ecg,p,q,r,s,t\n";
  for (std::size_t i = 0; i < n; ++i) {
    csv << i << ',' << shortest(static_cast<double>(i) / draw.sampling_rate) << ','
        << shortest(clean.samples[i]);
    for (const auto& p : parts) csv << ',' << shortest(p[i]);
    csv << '\n';
  }
  if (!csv) throw IoError("failed writing '" + o.out + "'");

  json params = {{"format_version", kFormatVersion},
                 {"draw", to_json(draw)},
                 {"t_delay_effective", clean.t_delay},
                 {"r_indices", clean.r_indices},
                 {"truncated_waves", clean.truncated_waves}};
  if (o.params.empty()) {
    out << params.dump(2) << '\n';
  } else {
    write_json(o.params, params);
  }

  json echo = {{"position", o.position}, {"random", o.random}, {"beats", o.beats},
               {"hrv", o.hrv}, {"out", o.out}};
  if (!o.space.empty()) echo["space"] = o.space;
  if (seed) echo["seed"] = *seed;
  if (o.mu) echo["mu"] = *o.mu;
  if (!o.params.empty()) echo["params"] = o.params;
  write_run_manifest(o.out, "fit-dump", echo);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthetic ECG toolchain: dataset generation, artefact augmentation, "
               "r-peak post-processing and scoring",
               "synecg"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file of option defaults, one object per subcommand");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenerateOptions generate;
  NoiseOptions noise;
  AugmentOptions augment_opts;
  DetectOptions detect;
  EvaluateOptions evaluate;
  FitDumpOptions fit_dump;
  add_generate(app, generate);
  add_noise(app, noise);
  add_augment(app, augment_opts);
  add_detect(app, detect);
  add_evaluate(app, evaluate);
  add_fit_dump(app, fit_dump);
  for (CLI::App* sub : app.get_subcommands({})) {
    sub->allow_config_extras(CLI::config_extras_mode::error);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const CLI::ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (app.got_subcommand("generate")) return run_generate(generate, out, err);
    if (app.got_subcommand("noise")) return run_noise(noise, out, err);
    if (app.got_subcommand("augment")) return run_augment(augment_opts, out, err);
    if (app.got_subcommand("detect")) return run_detect(detect, out);
    if (app.got_subcommand("evaluate")) return run_evaluate(evaluate, out);
    if (app.got_subcommand("fit-dump")) return run_fit_dump(fit_dump, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UndefinedMetric& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace synecg::cli
