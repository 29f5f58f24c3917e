#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fockphase/errors.hpp"
#include "fockphase/experiment_config.hpp"
#include "fockphase/phase_distribution.hpp"
#include "fockphase/sampling.hpp"
#include "fockphase/spin_engine.hpp"
#include "fockphase/three_mode.hpp"

namespace fockphase::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_runtime = 3;

inline constexpr std::size_t max_wallis_events = 64;
inline constexpr std::size_t max_oracle_events = 2000;

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::size_t jobs = 1;
  bool final_only = false;
  std::optional<std::filesystem::path> record;
  std::size_t max_events = 20;  ///< wallis table size
};

/// Runs one subcommand end to end and returns the process exit code.
/// Diagnostics go to `err`; tables without an output directory go to `out`.
int run_command(const std::string& command, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

int exit_code_for(ErrorKind kind);

// Library entry points behind the subcommands.

PhaseDistribution build_prior(const ExperimentConfig& config, std::size_t grid_size);
CandidatePlan build_plan(const ExperimentConfig& config);

struct RemoteEntry {
  std::string region;
  RemotePrediction prediction;
};

struct SimulationResult {
  bool three_mode = false;
  std::optional<MeasurementRecord> record;
  std::optional<ThreeModeRecord> record3;
  std::vector<CircularStats> trajectory;  ///< entry 0 is the prior
  std::vector<RemoteEntry> remote;
  const CircularStats& final_stats() const { return trajectory.back(); }
};

SimulationResult simulate(const ExperimentConfig& config, SnapshotMode snapshots);

struct OracleRow {
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
  std::size_t events = 0;
  double engine_times_np = 0.0;
  double oracle_power = 0.0;
  double oracle_falling = 0.0;
  double engine_power_deviation = 0.0;   ///< relative
  double falling_power_deviation = 0.0;  ///< relative
};

std::vector<OracleRow> oracle_compare(const ExperimentConfig& config);

struct WallisRow {
  std::int64_t p_plus = 0;
  std::int64_t p_minus = 0;
  double closed_form = 0.0;
  double quadrature = 0.0;
  double abs_diff = 0.0;
};

std::vector<WallisRow> wallis_table(std::size_t max_events);

struct SweepCell {
  std::size_t events = 0;
  std::string prior;
  double modulus = 0.0;
  std::size_t seeds = 0;
  double median_width = 0.0;
  double median_resultant = 0.0;
  double theta_dispersion = 0.0;  ///< sample circular std of the emergent θ*
  double rayleigh_p = 1.0;        ///< uniformity test of the emergent θ*
};

std::vector<SweepCell> sweep(const ExperimentConfig& config, std::size_t jobs);

}  // namespace fockphase::cli
