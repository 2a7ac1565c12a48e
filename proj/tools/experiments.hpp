#ifndef G2LAB_EXPERIMENTS_HPP
#define G2LAB_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "g2lab/bell.hpp"
#include "g2lab/detection.hpp"
#include "g2lab/fields.hpp"

// The reproduction harness: five named experiments, each runnable from one
// JSON config (or CLI flags), emitting machine-readable results. Identical
// config + seed gives byte-identical primary output; the generated_at
// timestamp is outside that contract and can be suppressed.

namespace g2lab::experiments {

inline const std::vector<std::string> kExperimentNames = {
    "grangier", "chsh-operator", "chsh-counts", "threshold", "lhv"};

struct FieldSpec {
  std::string model = "anticorrelated";
  std::array<double, 2> means{1.0, 1.0};   // deterministic / thermal
  bool correlated = true;                  // thermal: common-mode beam
  double total = 1.0;                      // anticorrelated
  double epsilon = 0.01;
  double jitter = 0.05;
  std::string csv_path;                    // custom
};

struct SourceSpec {
  // "single-photon", "singlet", "state", or a field model name
  // ("deterministic", "thermal", "anticorrelated", "custom").
  std::string type;
  std::vector<std::array<double, 2>> amplitudes;  // type == "state"
  FieldSpec field;
};

struct DetectorSpec {
  std::optional<std::string> model;  // defaults per source type
  std::optional<double> efficiency;
  std::optional<double> gate_time;
  std::optional<double> threshold;   // defaults to half the energy budget
  std::optional<double> dark_count_rate;
};

struct OutputSpec {
  std::string path;  // empty: stdout
  std::string format = "json";
  bool timestamp = true;
  bool raw_clicks = false;
};

struct ExperimentConfig {
  std::string experiment;
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 1'000'000;
  std::uint64_t trials_per_setting = 100'000;  // chsh-counts
  std::uint64_t models = 100'000;              // lhv mixtures
  std::uint64_t sample_space_size = 16;        // lhv
  std::string scenario = "optimal";
  std::optional<nlohmann::json> scenario_custom;
  SourceSpec source;
  DetectorSpec detector;
  OutputSpec output;
};

/// Parses and validates a config document. Violations throw invalid_config
/// with the offending field path ($.detector.efficiency style).
ExperimentConfig parse_config(const nlohmann::json& j);

/// Loads a config file; JSON parse errors carry the line number, field
/// errors the path plus the line where the field appears.
ExperimentConfig load_config_file(const std::string& path);

/// Overlay semantics for CLI flags: loads config_path (when nonempty),
/// deep-merges the overlay on top (overlay wins), then validates. Errors
/// about fields that came from the file are annotated with line numbers.
ExperimentConfig resolve_config(const nlohmann::json& overlay,
                                const std::string& config_path);

/// The fully resolved config (defaults applied) as embedded in outputs.
nlohmann::json resolved_config(const ExperimentConfig& cfg);

struct RunArtifacts {
  nlohmann::json document;     // {experiment, config, results[, generated_at]}
  std::string primary_text;    // rendered in the requested format
  std::string raw_clicks_csv;  // nonempty only when requested
};

/// Runs the named experiment and renders its outputs. Throws Error on
/// config or numeric failures.
RunArtifacts execute(const ExperimentConfig& cfg);

/// Runs and writes artifacts to cfg.output.path (atomic temp-file +
/// rename), or to stdout when no path is set. Raw clicks land next to the
/// primary output as <path>.clicks.csv.
void run(const ExperimentConfig& cfg);

/// One line per experiment with the part of the analysis it reproduces.
std::string list_experiments();

/// Atomic file write used for all artifacts.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace g2lab::experiments

#endif
