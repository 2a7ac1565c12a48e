#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "g2lab/stats.hpp"
#include "serialize.hpp"

namespace g2lab::experiments {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path,
                               const std::string& why) {
  throw Error(ErrorKind::invalid_config, path + ": " + why);
}

bool is_stochastic(const std::string& experiment) {
  return experiment != "chsh-operator";
}

bool is_field_source(const std::string& type) {
  return type == "deterministic" || type == "thermal" ||
         type == "anticorrelated" || type == "custom";
}

void reject_unknown_keys(const json& j, const std::string& path,
                         std::initializer_list<const char*> known) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return key == k;
        }) == known.end())
      config_error(path + "." + key, "unknown field");
  }
}

std::uint64_t read_count(const json& j, const std::string& path,
                         std::uint64_t minimum) {
  if (!j.is_number_unsigned() && !j.is_number_integer())
    config_error(path, "must be a non-negative integer");
  if (j.is_number_integer() && j.get<std::int64_t>() < 0)
    config_error(path, "must be a non-negative integer");
  const auto v = j.get<std::uint64_t>();
  if (v < minimum)
    config_error(path, "must be >= " + std::to_string(minimum));
  return v;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_error(path, "must be a number");
  return j.get<double>();
}

SourceSpec parse_source(const json& j) {
  SourceSpec s;
  if (!j.is_object()) config_error("$.source", "must be an object");
  reject_unknown_keys(j, "$.source",
                      {"type", "amplitudes", "means", "correlated", "total",
                       "epsilon", "jitter", "csv"});
  if (!j.contains("type") || !j["type"].is_string())
    config_error("$.source.type", "must name a source");
  s.type = j["type"].get<std::string>();

  const bool field = is_field_source(s.type);
  if (!field && s.type != "single-photon" && s.type != "singlet" &&
      s.type != "state")
    config_error("$.source.type", "unknown source `" + s.type + "`");

  if (s.type == "state") {
    if (!j.contains("amplitudes") || !j["amplitudes"].is_array() ||
        j["amplitudes"].empty())
      config_error("$.source.amplitudes",
                   "state sources need a nonempty [re, im] pair list");
    for (const auto& pair : j["amplitudes"]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number())
        config_error("$.source.amplitudes", "entries are [re, im] pairs");
      s.amplitudes.push_back(
          {pair[0].get<double>(), pair[1].get<double>()});
    }
  }
  if (field) {
    s.field.model = s.type;
    if (j.contains("means")) {
      const auto& m = j["means"];
      if (!m.is_array() || m.size() != 2 || !m[0].is_number() ||
          !m[1].is_number())
        config_error("$.source.means", "must be [mean1, mean2]");
      s.field.means = {m[0].get<double>(), m[1].get<double>()};
    }
    if (j.contains("correlated")) {
      if (!j["correlated"].is_boolean())
        config_error("$.source.correlated", "must be a boolean");
      s.field.correlated = j["correlated"].get<bool>();
    }
    if (j.contains("total"))
      s.field.total = read_number(j["total"], "$.source.total");
    if (j.contains("epsilon"))
      s.field.epsilon = read_number(j["epsilon"], "$.source.epsilon");
    if (j.contains("jitter"))
      s.field.jitter = read_number(j["jitter"], "$.source.jitter");
    if (s.type == "custom") {
      if (!j.contains("csv") || !j["csv"].is_string())
        config_error("$.source.csv",
                     "custom sources need a CSV path (`trial,i1,i2`)");
      s.field.csv_path = j["csv"].get<std::string>();
    }
  }
  return s;
}

DetectorSpec parse_detector(const json& j) {
  DetectorSpec d;
  if (!j.is_object()) config_error("$.detector", "must be an object");
  reject_unknown_keys(j, "$.detector",
                      {"model", "efficiency", "gate_time", "threshold",
                       "dark_count_rate"});
  if (j.contains("model")) {
    if (!j["model"].is_string())
      config_error("$.detector.model", "must be a string");
    const auto name = j["model"].get<std::string>();
    if (name != "quantum-born" && name != "semiclassical" &&
        name != "threshold")
      config_error("$.detector.model", "unknown detector `" + name + "`");
    d.model = name;
  }
  if (j.contains("efficiency")) {
    d.efficiency = read_number(j["efficiency"], "$.detector.efficiency");
    if (!(*d.efficiency > 0.0) || *d.efficiency > 1.0)
      config_error("$.detector.efficiency", "must lie in (0, 1]");
  }
  if (j.contains("gate_time")) {
    d.gate_time = read_number(j["gate_time"], "$.detector.gate_time");
    if (!(*d.gate_time > 0.0))
      config_error("$.detector.gate_time", "must be > 0");
  }
  if (j.contains("threshold")) {
    d.threshold = read_number(j["threshold"], "$.detector.threshold");
    if (*d.threshold < 0.0)
      config_error("$.detector.threshold", "must be >= 0");
  }
  if (j.contains("dark_count_rate")) {
    d.dark_count_rate =
        read_number(j["dark_count_rate"], "$.detector.dark_count_rate");
    if (*d.dark_count_rate < 0.0)
      config_error("$.detector.dark_count_rate", "must be >= 0");
  }
  return d;
}

OutputSpec parse_output(const json& j) {
  OutputSpec o;
  if (!j.is_object()) config_error("$.output", "must be an object");
  reject_unknown_keys(j, "$.output",
                      {"path", "format", "timestamp", "raw_clicks"});
  if (j.contains("path")) {
    if (!j["path"].is_string())
      config_error("$.output.path", "must be a string");
    o.path = j["path"].get<std::string>();
  }
  if (j.contains("format")) {
    if (!j["format"].is_string())
      config_error("$.output.format", "must be a string");
    o.format = j["format"].get<std::string>();
    if (o.format != "json" && o.format != "csv")
      config_error("$.output.format", "must be `json` or `csv`");
  }
  if (j.contains("timestamp")) {
    if (!j["timestamp"].is_boolean())
      config_error("$.output.timestamp", "must be a boolean");
    o.timestamp = j["timestamp"].get<bool>();
  }
  if (j.contains("raw_clicks")) {
    if (!j["raw_clicks"].is_boolean())
      config_error("$.output.raw_clicks", "must be a boolean");
    o.raw_clicks = j["raw_clicks"].get<bool>();
  }
  return o;
}

// --- resolution helpers ----------------------------------------------------

ClassicalFieldModel build_field_model(const FieldSpec& f) {
  try {
    if (f.model == "deterministic")
      return ClassicalFieldModel::deterministic(f.means[0], f.means[1]);
    if (f.model == "thermal")
      return ClassicalFieldModel::thermal(f.means[0], f.means[1],
                                          f.correlated);
    if (f.model == "anticorrelated")
      return ClassicalFieldModel::anti_correlated(f.total, f.epsilon,
                                                  f.jitter);
    std::ifstream in(f.csv_path);
    if (!in)
      config_error("$.source.csv", "cannot open `" + f.csv_path + "`");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return ClassicalFieldModel::custom_from_csv(buffer.str());
  } catch (const Error& e) {
    const std::string what = e.what();
    if (e.kind() == ErrorKind::invalid_config && what.rfind("$", 0) != 0)
      config_error("$.source", what);
    throw;
  }
}

StateVector build_state(const SourceSpec& s) {
  if (s.type == "single-photon") {
    ComplexVector v(2);
    v << 1.0, 1.0;
    return normalize(v);
  }
  if (s.type == "singlet") return singlet_state();
  ComplexVector v(static_cast<Eigen::Index>(s.amplitudes.size()));
  for (std::size_t i = 0; i < s.amplitudes.size(); ++i)
    v(static_cast<Eigen::Index>(i)) =
        Complex(s.amplitudes[i][0], s.amplitudes[i][1]);
  try {
    return normalize(v);
  } catch (const Error& e) {
    throw Error(ErrorKind::invalid_config,
                std::string("$.source.amplitudes: ") + e.what());
  }
}

DetectorConfig resolve_detector(const ExperimentConfig& cfg,
                                bool quantum_source,
                                double mean_total_intensity) {
  DetectorConfig d;
  std::string model;
  if (cfg.detector.model) {
    model = *cfg.detector.model;
  } else if (cfg.experiment == "threshold") {
    model = "threshold";
  } else {
    model = quantum_source ? "quantum-born" : "semiclassical";
  }
  if (model == "quantum-born") d.model = DetectorModel::quantum_born;
  else if (model == "semiclassical")
    d.model = DetectorModel::semiclassical_poisson;
  else d.model = DetectorModel::threshold;

  d.efficiency = cfg.detector.efficiency.value_or(1.0);
  d.gate_time = cfg.detector.gate_time.value_or(0.1);
  d.threshold =
      cfg.detector.threshold.value_or(0.5 * mean_total_intensity);
  d.dark_count_rate = cfg.detector.dark_count_rate.value_or(0.0);
  d.validate();
  return d;
}

BellScenario resolve_scenario(const ExperimentConfig& cfg) {
  if (!cfg.scenario_custom) return preset_scenario(cfg.scenario);
  const json& j = *cfg.scenario_custom;
  reject_unknown_keys(j, "$.scenario",
                      {"a1", "a2", "b1", "b2", "local_dims", "dichotomous"});
  for (const char* key : {"a1", "a2", "b1", "b2"})
    if (!j.contains(key))
      config_error(std::string("$.scenario.") + key, "missing operator");
  std::optional<std::pair<Eigen::Index, Eigen::Index>> dims;
  if (j.contains("local_dims")) {
    const auto& d = j["local_dims"];
    if (!d.is_array() || d.size() != 2)
      config_error("$.scenario.local_dims", "must be [dimA, dimB]");
    dims = std::make_pair(d[0].get<Eigen::Index>(),
                          d[1].get<Eigen::Index>());
  }
  bool dichotomous = false;
  if (j.contains("dichotomous")) {
    if (!j["dichotomous"].is_boolean())
      config_error("$.scenario.dichotomous", "must be a boolean");
    dichotomous = j["dichotomous"].get<bool>();
  }
  try {
    return BellScenario(operator_from_json(j["a1"], "$.scenario.a1"),
                        operator_from_json(j["a2"], "$.scenario.a2"),
                        operator_from_json(j["b1"], "$.scenario.b1"),
                        operator_from_json(j["b2"], "$.scenario.b2"), dims,
                        dichotomous);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::invalid_config) throw;
    throw Error(ErrorKind::invalid_config,
                std::string("$.scenario: ") + e.what());
  }
}

json source_json(const ExperimentConfig& cfg, bool quantum_source) {
  json out{{"type", cfg.source.type}};
  if (quantum_source) {
    if (cfg.source.type == "state") {
      json amps = json::array();
      for (const auto& p : cfg.source.amplitudes) amps.push_back({p[0], p[1]});
      out["amplitudes"] = std::move(amps);
    }
    return out;
  }
  const auto& f = cfg.source.field;
  if (f.model == "deterministic" || f.model == "thermal")
    out["means"] = {f.means[0], f.means[1]};
  if (f.model == "thermal") out["correlated"] = f.correlated;
  if (f.model == "anticorrelated") {
    out["total"] = f.total;
    out["epsilon"] = f.epsilon;
    out["jitter"] = f.jitter;
  }
  if (f.model == "custom") out["csv"] = f.csv_path;
  return out;
}

json detector_json(const DetectorConfig& d) {
  json out{{"model", d.model_name()}};
  if (d.model == DetectorModel::semiclassical_poisson) {
    out["efficiency"] = d.efficiency;
    out["gate_time"] = d.gate_time;
    out["dark_count_rate"] = d.dark_count_rate;
  }
  if (d.model == DetectorModel::threshold) out["threshold"] = d.threshold;
  return out;
}

json output_json(const OutputSpec& o) {
  return json{{"path", o.path},
              {"format", o.format},
              {"timestamp", o.timestamp},
              {"raw_clicks", o.raw_clicks}};
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string number_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string detection_csv(const std::string& model, const json& results) {
  std::ostringstream os;
  os << "model,N,p1,p2,pc,g2,se_g2,alpha,verdict\n";
  os << model << ',' << results["stats"]["trials"].get<std::uint64_t>() << ','
     << number_text(results["stats"]["p1"].get<double>()) << ','
     << number_text(results["stats"]["p2"].get<double>()) << ','
     << number_text(results["stats"]["pc"].get<double>()) << ',';
  if (results["stats"]["g2"].is_null())
    os << ",";
  else
    os << number_text(results["stats"]["g2"].get<double>()) << ',';
  os << number_text(results["stats"]["se_g2"].get<double>()) << ',';
  if (results["alpha"].is_null())
    os << ",";
  else
    os << number_text(results["alpha"].get<double>()) << ',';
  os << results["verdict"].get<std::string>() << '\n';
  return os.str();
}

// --- experiment bodies -----------------------------------------------------

struct DetectionRun {
  DetectionStats stats;
  int max_clicks_per_trial = 0;
  std::string raw_csv;
};

DetectionRun run_detection(const ExperimentSource& source,
                           const DetectorConfig& detector,
                           std::uint64_t trials, std::uint64_t seed,
                           bool keep_raw) {
  DetectionRun run;
  ClickAccumulator acc;
  std::ostringstream raw;
  if (keep_raw) raw << "trial,c1,c2\n";
  run_experiment(source, detector, trials, seed, [&](const ClickRecord& r) {
    acc.add(r);
    run.max_clicks_per_trial =
        std::max(run.max_clicks_per_trial, r.click_count());
    if (keep_raw)
      raw << r.trial_index << ',' << (r.clicked(0) ? 1 : 0) << ','
          << (r.clicked(1) ? 1 : 0) << '\n';
  });
  run.stats = acc.stats();
  if (keep_raw) run.raw_csv = raw.str();
  return run;
}

json detection_results(const DetectionRun& run) {
  json results;
  results["stats"] = to_json(run.stats);
  results["max_clicks_per_trial"] = run.max_clicks_per_trial;
  if (run.stats.g2().has_value()) {
    const auto verdict = grangier_test(run.stats, 3.0);
    results["alpha"] = verdict.alpha;
    results["se_alpha"] = verdict.se_alpha;
    results["confidence_sigma"] = verdict.confidence_sigma;
    results["verdict"] = verdict.classical_compatible ? "classical-compatible"
                                                      : "nonclassical";
  } else {
    results["alpha"] = nullptr;
    results["se_alpha"] = nullptr;
    results["confidence_sigma"] = 3.0;
    results["verdict"] = "insufficient-data";
  }
  return results;
}

json run_lhv_body(const ExperimentConfig& cfg) {
  const double exact_max = lhv_deterministic_max();
  double sampled_max = 0.0;
  for (std::uint64_t i = 0; i < cfg.models; ++i) {
    RandomStream rng(*cfg.seed, streams::lhv_models, i);
    const auto model = random_lhv_model(cfg.sample_space_size, rng);
    sampled_max = std::max(sampled_max, lhv_chsh(model));
  }
  return json{{"models", cfg.models},
              {"sample_space_size", cfg.sample_space_size},
              {"deterministic_max", exact_max},
              {"sampled_max", sampled_max},
              {"max_s", std::max(exact_max, sampled_max)}};
}

json run_chsh_counts_body(const ExperimentConfig& cfg,
                          const BellScenario& scenario) {
  const StateVector psi =
      (cfg.source.type.empty() || cfg.source.type == "singlet")
          ? singlet_state()
          : build_state(cfg.source);
  if (psi.dim() != scenario.dim())
    config_error("$.source.amplitudes",
                 "state dimension does not match the scenario");

  const std::array<const HermitianOperator*, 2> as = {&scenario.a1,
                                                      &scenario.a2};
  const std::array<const HermitianOperator*, 2> bs = {&scenario.b1,
                                                      &scenario.b2};
  std::array<SettingCounts, 4> settings{};
  json counts = json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto p = joint_outcome_probabilities(*as[i], *bs[j], psi);
      const std::array<double, 4> cum = {p[0], p[0] + p[1],
                                         p[0] + p[1] + p[2], 1.0};
      auto& c = settings[2 * i + j];
      for (std::uint64_t t = 0; t < cfg.trials_per_setting; ++t) {
        RandomStream rng(*cfg.seed, streams::counting,
                         (2 * i + j) * cfg.trials_per_setting + t);
        switch (rng.categorical(cum)) {
          case 0: ++c.n_pp; break;
          case 1: ++c.n_pm; break;
          case 2: ++c.n_mp; break;
          default: ++c.n_mm; break;
        }
      }
      counts.push_back(json{{"setting", {i + 1, j + 1}},
                            {"n_pp", c.n_pp},
                            {"n_pm", c.n_pm},
                            {"n_mp", c.n_mp},
                            {"n_mm", c.n_mm}});
    }
  const auto est = chsh_from_counts(settings);
  return json{{"trials_per_setting", cfg.trials_per_setting},
              {"counts", std::move(counts)},
              {"correlators",
               {est.correlators[0], est.correlators[1], est.correlators[2],
                est.correlators[3]}},
              {"s", est.value},
              {"se", est.se},
              {"operator_prediction", std::abs(chsh_value(scenario, psi))},
              {"state", to_json(psi)}};
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) config_error("$", "config must be a JSON object");
  reject_unknown_keys(
      j, "$",
      {"experiment", "seed", "trials", "trials_per_setting", "models",
       "sample_space_size", "scenario", "source", "detector", "output"});

  ExperimentConfig cfg;
  if (!j.contains("experiment") || !j["experiment"].is_string())
    config_error("$.experiment", "must name an experiment");
  cfg.experiment = j["experiment"].get<std::string>();
  if (std::find(kExperimentNames.begin(), kExperimentNames.end(),
                cfg.experiment) == kExperimentNames.end())
    config_error("$.experiment",
                 "unknown experiment `" + cfg.experiment + "`");

  if (j.contains("seed")) cfg.seed = read_count(j["seed"], "$.seed", 0);
  if (j.contains("trials"))
    cfg.trials = read_count(j["trials"], "$.trials", 1);
  if (j.contains("trials_per_setting"))
    cfg.trials_per_setting =
        read_count(j["trials_per_setting"], "$.trials_per_setting", 1);
  if (j.contains("models"))
    cfg.models = read_count(j["models"], "$.models", 1);
  if (j.contains("sample_space_size"))
    cfg.sample_space_size =
        read_count(j["sample_space_size"], "$.sample_space_size", 1);

  if (j.contains("scenario")) {
    if (j["scenario"].is_string()) {
      cfg.scenario = j["scenario"].get<std::string>();
      const auto names = preset_scenario_names();
      if (std::find(names.begin(), names.end(), cfg.scenario) == names.end())
        config_error("$.scenario",
                     "unknown scenario preset `" + cfg.scenario + "`");
    } else if (j["scenario"].is_object()) {
      cfg.scenario = "custom";
      cfg.scenario_custom = j["scenario"];
    } else {
      config_error("$.scenario", "must be a preset name or an object");
    }
  }

  if (j.contains("source")) cfg.source = parse_source(j["source"]);
  if (j.contains("detector")) cfg.detector = parse_detector(j["detector"]);
  if (j.contains("output")) cfg.output = parse_output(j["output"]);

  // Experiment-specific source defaults.
  if (cfg.source.type.empty()) {
    if (cfg.experiment == "grangier") cfg.source.type = "single-photon";
    else if (cfg.experiment == "threshold") cfg.source.type = "anticorrelated";
    else if (cfg.experiment == "chsh-counts") cfg.source.type = "singlet";
  }
  if (cfg.experiment == "threshold" && !is_field_source(cfg.source.type))
    config_error("$.source.type",
                 "the threshold experiment needs a classical field source");
  if (cfg.experiment == "chsh-counts" && cfg.source.type != "singlet" &&
      cfg.source.type != "state")
    config_error("$.source.type",
                 "chsh-counts samples a state (`singlet` or `state`)");
  if (cfg.experiment == "grangier") {
    if (cfg.source.type == "singlet")
      config_error("$.source.type",
                   "grangier uses `single-photon`, `state`, or a field model");
    if (cfg.source.type == "state" && cfg.source.amplitudes.size() != 2)
      config_error("$.source.amplitudes",
                   "the coincidence experiment uses two channels");
  }

  if (is_stochastic(cfg.experiment) && !cfg.seed)
    config_error("$.seed", "required for experiment `" + cfg.experiment +
                               "` (no wall-clock default)");
  return cfg;
}

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(),
                            text.begin() + std::min(byte, text.size()),
                            '\n'));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::invalid_config,
                "cannot open config file `" + path + "`");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "config parse error at line " << line_of_offset(text, e.byte)
       << ": " << e.what();
    throw Error(ErrorKind::invalid_config, os.str());
  }
}

// Re-throws a $.path error with the line where the named field appears in
// the config text, when it does.
[[noreturn]] void rethrow_with_field_line(const Error& e,
                                          const std::string& text) {
  const std::string what = e.what();
  const auto colon = what.find(':');
  if (!text.empty() && colon != std::string::npos && what.rfind("$", 0) == 0) {
    const std::string path_part = what.substr(0, colon);
    const auto last_dot = path_part.rfind('.');
    if (last_dot != std::string::npos) {
      const std::string key = path_part.substr(last_dot + 1);
      const auto pos = text.find("\"" + key + "\"");
      if (pos != std::string::npos) {
        std::ostringstream os;
        os << what << " (line " << line_of_offset(text, pos) << ")";
        throw Error(e.kind(), os.str());
      }
    }
  }
  throw e;
}

void deep_merge(json& base, const json& overlay) {
  if (!base.is_object() || !overlay.is_object()) {
    base = overlay;
    return;
  }
  for (const auto& [key, value] : overlay.items()) {
    if (base.contains(key))
      deep_merge(base[key], value);
    else
      base[key] = value;
  }
}

}  // namespace

ExperimentConfig load_config_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_config(parse_json_text(text));
  } catch (const Error& e) {
    rethrow_with_field_line(e, text);
  }
}

ExperimentConfig resolve_config(const nlohmann::json& overlay,
                                const std::string& config_path) {
  std::string text;
  json doc = json::object();
  if (!config_path.empty()) {
    text = read_text_file(config_path);
    doc = parse_json_text(text);
    if (!doc.is_object())
      throw Error(ErrorKind::invalid_config,
                  "config file must hold a JSON object");
  }
  deep_merge(doc, overlay);
  try {
    return parse_config(doc);
  } catch (const Error& e) {
    rethrow_with_field_line(e, text);
  }
}

nlohmann::json resolved_config(const ExperimentConfig& cfg) {
  json out{{"experiment", cfg.experiment},
           {"output", output_json(cfg.output)}};
  if (is_stochastic(cfg.experiment)) out["seed"] = *cfg.seed;

  if (cfg.experiment == "grangier" || cfg.experiment == "threshold") {
    out["trials"] = cfg.trials;
    const bool quantum = !is_field_source(cfg.source.type);
    out["source"] = source_json(cfg, quantum);
    double mean_total = 1.0;
    if (!quantum) {
      const auto model = build_field_model(cfg.source.field);
      mean_total =
          model.mean_intensities()[0] + model.mean_intensities()[1];
    }
    out["detector"] = detector_json(resolve_detector(cfg, quantum, mean_total));
  } else if (cfg.experiment == "chsh-operator") {
    out["scenario"] = cfg.scenario_custom ? *cfg.scenario_custom
                                          : json(cfg.scenario);
  } else if (cfg.experiment == "chsh-counts") {
    out["scenario"] = cfg.scenario_custom ? *cfg.scenario_custom
                                          : json(cfg.scenario);
    out["trials_per_setting"] = cfg.trials_per_setting;
    out["source"] =
        source_json(cfg, /*quantum_source=*/true);
  } else if (cfg.experiment == "lhv") {
    out["models"] = cfg.models;
    out["sample_space_size"] = cfg.sample_space_size;
  }
  return out;
}

RunArtifacts execute(const ExperimentConfig& cfg) {
  RunArtifacts artifacts;
  json results;
  std::string csv_text;

  if (cfg.experiment == "grangier" || cfg.experiment == "threshold") {
    const bool quantum = !is_field_source(cfg.source.type);
    ExperimentSource source =
        quantum ? ExperimentSource(build_state(cfg.source))
                : ExperimentSource(build_field_model(cfg.source.field));
    double mean_total = 1.0;
    if (!quantum) {
      const auto& model = std::get<ClassicalFieldModel>(source);
      mean_total =
          model.mean_intensities()[0] + model.mean_intensities()[1];
    }
    const auto detector = resolve_detector(cfg, quantum, mean_total);
    const auto run = run_detection(source, detector, cfg.trials, *cfg.seed,
                                   cfg.output.raw_clicks);
    results = detection_results(run);
    if (cfg.experiment == "threshold") {
      results["subpoissonian"] =
          run.stats.g2().has_value() && *run.stats.g2() < 1.0;
    }
    artifacts.raw_clicks_csv = run.raw_csv;
    const std::string model_name =
        quantum ? cfg.source.type
                : std::get<ClassicalFieldModel>(source).kind_name();
    csv_text = detection_csv(model_name, results);
  } else if (cfg.experiment == "chsh-operator") {
    const auto scenario = resolve_scenario(cfg);
    const auto report = analyze(scenario);
    results = to_json(report);
    results["scenario"] = cfg.scenario;
    results["bell_operator"] = to_json(bell_operator(scenario).matrix());
    if (scenario.local_dims)
      results["local_structure_verified"] = verify_local_structure(scenario);
    std::ostringstream os;
    os << "scenario,bell_norm,landau_residual,commutator_a_norm,"
          "commutator_b_norm,permutation_max,permutation_argmax,"
          "classification\n"
       << cfg.scenario << ',' << number_text(report.bell_norm) << ','
       << number_text(report.landau_residual) << ','
       << number_text(report.commutator_a_norm) << ','
       << number_text(report.commutator_b_norm) << ','
       << number_text(report.permutation_max) << ','
       << setting_swap_name(report.permutation_argmax) << ','
       << classification_name(report.classification) << '\n';
    csv_text = os.str();
  } else if (cfg.experiment == "chsh-counts") {
    const auto scenario = resolve_scenario(cfg);
    results = run_chsh_counts_body(cfg, scenario);
    std::ostringstream os;
    os << "scenario,trials_per_setting,e11,e12,e21,e22,s,se\n"
       << cfg.scenario << ',' << cfg.trials_per_setting;
    for (const auto& e : results["correlators"])
      os << ',' << number_text(e.get<double>());
    os << ',' << number_text(results["s"].get<double>()) << ','
       << number_text(results["se"].get<double>()) << '\n';
    csv_text = os.str();
  } else if (cfg.experiment == "lhv") {
    results = run_lhv_body(cfg);
    std::ostringstream os;
    os << "models,sample_space_size,deterministic_max,sampled_max,max_s\n"
       << cfg.models << ',' << cfg.sample_space_size << ','
       << number_text(results["deterministic_max"].get<double>()) << ','
       << number_text(results["sampled_max"].get<double>()) << ','
       << number_text(results["max_s"].get<double>()) << '\n';
    csv_text = os.str();
  }

  artifacts.document = json{{"experiment", cfg.experiment},
                            {"config", resolved_config(cfg)},
                            {"results", std::move(results)}};
  if (cfg.output.timestamp)
    artifacts.document["generated_at"] = iso8601_utc_now();

  artifacts.primary_text = cfg.output.format == "csv"
                               ? csv_text
                               : artifacts.document.dump(2) + "\n";
  return artifacts;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorKind::invalid_config,
                  "cannot write output file `" + path + "`");
    out << content;
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
    throw Error(ErrorKind::invalid_config,
                "cannot move output into place at `" + path + "`");
}

void run(const ExperimentConfig& cfg) {
  if (cfg.output.raw_clicks && cfg.output.path.empty())
    throw Error(ErrorKind::invalid_config,
                "$.output.path: --raw-clicks needs an output path");
  const auto artifacts = execute(cfg);
  if (cfg.output.path.empty()) {
    std::cout << artifacts.primary_text;
  } else {
    write_file_atomic(cfg.output.path, artifacts.primary_text);
    if (!artifacts.raw_clicks_csv.empty())
      write_file_atomic(cfg.output.path + ".clicks.csv",
                        artifacts.raw_clicks_csv);
  }
}

std::string list_experiments() {
  return
      "grangier (§4)                  anticorrelation test: quantum Born "
      "clicks vs semiclassical coincidences\n"
      "chsh-operator (§11)            exact Bell-combination analysis: norm, "
      "commutators, setting swaps\n"
      "chsh-counts (§11)              count-based CHSH estimate sampled from "
      "exact joint probabilities\n"
      "threshold (Appendix 2)         threshold detection of an engineered "
      "anticorrelated classical field\n"
      "lhv (§10)                      response-model ceiling: exhaustive "
      "strategies plus random mixtures\n";
}

}  // namespace g2lab::experiments
