#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fockphase/angle_policy.hpp"
#include "fockphase/core_model.hpp"

namespace fockphase {

struct PriorConfig {
  enum class Kind { uniform, coefficients, coherent };
  Kind kind = Kind::uniform;
  std::string file;      ///< coefficients CSV (Q,re,im)
  double modulus = 0.0;  ///< coherent |α|
  double phase = 0.0;    ///< coherent Θ
};

struct EventPlanConfig {
  std::size_t count = 0;
  EventKind kind = EventKind::position;
  AnglePolicy policy = AnglePolicy::fixed(0.0);
  std::size_t candidate_grid = 1024;
  std::optional<double> u;         ///< spin events at one reduced position
  std::vector<std::string> sites;  ///< region names (tabulated runs)
};

struct OracleConfig {
  std::vector<std::pair<std::int64_t, std::int64_t>> populations;
  std::vector<DetectionEvent> record;  ///< empty: draw from the engine with the config seed
};

struct SweepConfig {
  std::vector<std::size_t> event_counts;
  std::vector<double> moduli;  ///< coherent |α| values; empty keeps the configured prior
  std::size_t seeds = 1;
};

struct ExperimentConfig {
  std::string name = "experiment";
  CondensateSpec condensate;
  std::vector<Region> regions;
  PriorConfig prior;
  EventPlanConfig events;
  std::size_t posterior_grid = 0;  ///< 0: engine default for the event count
  std::size_t grid_2d = 0;         ///< 0: engine default
  std::size_t candidate_side_2d = 64;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  bool allow_approximation_violation = false;
  std::vector<std::string> remote_targets;
  OracleConfig oracle;
  SweepConfig sweep;
};

struct ConfigIssue {
  std::string path;
  std::string message;
};

/// Parses a JSON document. Schema problems are appended to `issues` with a
/// field path; the returned config holds whatever parsed cleanly.
ExperimentConfig parse_config(const std::string& text, std::vector<ConfigIssue>& issues);
ExperimentConfig load_config(const std::filesystem::path& path, std::vector<ConfigIssue>& issues);

/// Semantic checks. An empty result means the config can run.
std::vector<ConfigIssue> validate(const ExperimentConfig& config);

/// Region layout built from the config, or nullopt for plane-wave runs.
std::optional<RegionLayout> layout_of(const ExperimentConfig& config);

}  // namespace fockphase
