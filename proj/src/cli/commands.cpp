#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cli/csv.hpp"
#include "cli/log.hpp"
#include "fockphase/angles.hpp"
#include "fockphase/exact_oracle.hpp"
#include "fockphase/initial_phase.hpp"
#include "fockphase/phase_engine.hpp"

namespace fockphase::cli {

namespace {

using json = nlohmann::ordered_json;

class ValidationFailure : public std::runtime_error {
 public:
  explicit ValidationFailure(std::vector<ConfigIssue> issues)
      : std::runtime_error("invalid configuration"), issues_(std::move(issues)) {}
  ValidationFailure(std::string path, std::string message)
      : ValidationFailure(std::vector<ConfigIssue>{{std::move(path), std::move(message)}}) {}
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

const char* prior_name(PriorConfig::Kind kind) {
  switch (kind) {
    case PriorConfig::Kind::uniform: return "uniform";
    case PriorConfig::Kind::coefficients: return "coefficients";
    case PriorConfig::Kind::coherent: return "coherent";
  }
  return "";
}

json stats_json(const CircularStats& s) {
  json j;
  j["mean"] = s.mean ? json(*s.mean) : json(nullptr);
  j["resultant"] = s.resultant;
  j["circular_std"] = std::isfinite(s.circular_std) ? json(s.circular_std) : json(nullptr);
  return j;
}

CondensateSpec effective_spec(const ExperimentConfig& config) {
  CondensateSpec spec = config.condensate;
  if (auto layout = layout_of(config)) spec.tabulated = layout->mode_pair();
  return spec;
}

std::size_t posterior_grid(const ExperimentConfig& config) {
  return config.posterior_grid != 0 ? config.posterior_grid
                                    : default_posterior_grid(config.events.count);
}

std::filesystem::path output_dir(const ExperimentConfig& config, const CommandOptions& options) {
  return options.out_dir ? *options.out_dir : std::filesystem::path(config.output_dir);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
  finish_output(out, path);
}

void write_density(std::ostream& out, const PhaseDistribution& dist) {
  CsvWriter csv(out, {"phi", "density"});
  for (std::size_t j = 0; j < dist.grid_size(); ++j) csv.cell(dist.angle(j)).cell(dist[j]).end_row();
}

ExperimentConfig load_validated(const CommandOptions& options) {
  if (!options.config) throw ValidationFailure("--config", "required");
  std::vector<ConfigIssue> issues;
  auto config = load_config(*options.config, issues);
  if (options.seed) config.seed = *options.seed;
  if (issues.empty()) issues = validate(config);
  if (!issues.empty()) throw ValidationFailure(std::move(issues));
  return config;
}

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, std::size_t jobs, Fn fn) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  // Lowest index wins so failures are reproducible regardless of scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

double relative_deviation(double value, double reference) {
  const double diff = std::abs(value - reference);
  return reference != 0.0 ? diff / std::abs(reference) : diff;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_input, where + ": not a finite number '" + text + "'");
  }
}

std::vector<DetectionEvent> read_record(const std::filesystem::path& path,
                                        const ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open record " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::invalid_input, "record file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  const bool with_site = header.size() == 5 && header[4] == "site";
  if (!(header.size() == 4 || with_site) || header[0] != "index" || header[1] != "u" ||
      header[2] != "theta" || header[3] != "eta") {
    throw Error(ErrorKind::invalid_input, "record header must be index,u,theta,eta[,site]");
  }
  const auto layout = layout_of(config);
  if (with_site && !layout) {
    throw Error(ErrorKind::invalid_input, "record has sites but the config has no regions");
  }
  std::vector<DetectionEvent> events;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    const std::string where = path.filename().string() + ":" + std::to_string(row);
    if (cells.size() != header.size()) throw Error(ErrorKind::invalid_input, where + ": wrong column count");
    const double u = parse_number(cells[1], where);
    const double theta = parse_number(cells[2], where);
    const double eta_value = parse_number(cells[3], where);
    if (eta_value != 1.0 && eta_value != -1.0) {
      throw Error(ErrorKind::invalid_input, where + ": eta must be 1 or -1");
    }
    const int eta = static_cast<int>(eta_value);
    const bool spin = config.events.kind == EventKind::spin;
    if (with_site) {
      const std::size_t site = layout->index_of(cells[4]);
      events.push_back(spin ? DetectionEvent::spin_at(site, theta, eta)
                            : DetectionEvent::position_at(site));
    } else {
      events.push_back(spin ? DetectionEvent::spin(u, theta, eta) : DetectionEvent::position(u));
    }
  }
  return events;
}

void write_record(const std::filesystem::path& path, const MeasurementRecord& record,
                  const ExperimentConfig& config) {
  auto out = open_output(path);
  const auto layout = layout_of(config);
  if (layout) {
    CsvWriter csv(out, {"index", "u", "theta", "eta", "site"});
    for (std::size_t i = 0; i < record.events.size(); ++i) {
      const auto& e = record.events[i];
      csv.cell(i).cell(e.u).cell(e.theta).cell(e.eta).cell(layout->regions()[*e.site].name).end_row();
    }
  } else {
    CsvWriter csv(out, {"index", "u", "theta", "eta"});
    for (std::size_t i = 0; i < record.events.size(); ++i) {
      const auto& e = record.events[i];
      csv.cell(i).cell(e.u).cell(e.theta).cell(e.eta).end_row();
    }
  }
  finish_output(out, path);
}

json remote_json(const std::vector<RemoteEntry>& remote) {
  json arr = json::array();
  for (const auto& r : remote) {
    arr.push_back({{"region", r.region},
                   {"axis", r.prediction.axis},
                   {"confidence", r.prediction.confidence},
                   {"magnitude", r.prediction.magnitude}});
  }
  return arr;
}

json summary_header(const ExperimentConfig& config, const char* command) {
  json doc;
  doc["command"] = command;
  doc["name"] = config.name;
  doc["seed"] = config.seed;
  doc["n_a"] = config.condensate.n_a;
  doc["n_b"] = config.condensate.n_b;
  doc["n_c"] = config.condensate.n_c;
  doc["prior"] = prior_name(config.prior.kind);
  return doc;
}

json trajectory_json(const std::vector<CircularStats>& trajectory) {
  json arr = json::array();
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    json row = stats_json(trajectory[k]);
    row["step"] = k;
    arr.push_back(std::move(row));
  }
  return arr;
}

std::vector<RemoteEntry> remote_predictions(const ExperimentConfig& config,
                                            const PhaseDistribution& posterior) {
  std::vector<RemoteEntry> out;
  const auto layout = layout_of(config);
  if (!layout) return out;
  const auto spec = effective_spec(config);
  for (const auto& name : config.remote_targets) {
    out.push_back({name, predict_remote_orientation(posterior, layout->index_of(name),
                                                    *spec.tabulated, spec)});
  }
  return out;
}

int cmd_simulate(const CommandOptions& options) {
  const auto config = load_validated(options);
  const auto dir = output_dir(config, options);
  const auto started = std::chrono::steady_clock::now();
  const auto result =
      simulate(config, options.final_only ? SnapshotMode::summary : SnapshotMode::full);

  json doc = summary_header(config, "simulate");
  doc["events"] = config.events.count;
  if (result.three_mode) {
    const auto& rec = *result.record3;
    doc["engine"] = "three-mode";
    doc["grid"] = rec.posterior.grid_size();
    auto out = open_output(dir / "record.csv");
    CsvWriter csv(out, {"index", "u_ab", "u_bc", "u_ca"});
    for (std::size_t i = 0; i < rec.events.size(); ++i) {
      const auto& e = rec.events[i];
      csv.cell(i).cell(e.u_ab).cell(e.u_bc).cell(e.u_ca).end_row();
    }
    finish_output(out, dir / "record.csv");
    auto post = open_output(dir / "posterior.csv");
    CsvWriter pcsv(post, {"phi", "phi_prime", "density"});
    for (std::size_t j = 0; j < rec.posterior.grid_size(); ++j) {
      for (std::size_t k = 0; k < rec.posterior.grid_size(); ++k) {
        pcsv.cell(rec.posterior.angle(j)).cell(rec.posterior.angle(k)).cell(rec.posterior.at(j, k)).end_row();
      }
    }
    finish_output(post, dir / "posterior.csv");
    doc["phi"] = stats_json(circular_stats(rec.posterior.marginal(0)));
    doc["phi_prime"] = stats_json(circular_stats(rec.posterior.marginal(1)));
    doc["initial"] = stats_json(result.trajectory.front());
    doc["final"] = stats_json(result.final_stats());
    doc["trajectory_of"] = "phi+phi_prime";
  } else {
    const auto& rec = *result.record;
    doc["engine"] = "two-mode";
    doc["kind"] = config.events.kind == EventKind::spin ? "spin" : "position";
    doc["policy"] = rec.policy;
    doc["grid"] = rec.posterior.grid_size();
    write_record(dir / "record.csv", rec, config);
    auto post = open_output(dir / "posterior.csv");
    write_density(post, rec.posterior);
    finish_output(post, dir / "posterior.csv");
    if (!options.final_only) {
      auto steps = open_output(dir / "posterior_steps.csv");
      CsvWriter csv(steps, {"step", "phi", "density"});
      for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
        const auto& d = *rec.snapshots[k].density;
        for (std::size_t j = 0; j < d.grid_size(); ++j) csv.cell(k + 1).cell(d.angle(j)).cell(d[j]).end_row();
      }
      finish_output(steps, dir / "posterior_steps.csv");
    }
    doc["initial"] = stats_json(result.trajectory.front());
    doc["final"] = stats_json(result.final_stats());
    if (!result.remote.empty()) doc["remote"] = remote_json(result.remote);
  }
  doc["trajectory"] = trajectory_json(result.trajectory);
  write_json(dir / "summary.json", doc);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  log(LogLevel::info, "simulate finished in " + format_double(elapsed.count()) + " s");
  return exit_ok;
}

int cmd_posterior(const CommandOptions& options) {
  const auto config = load_validated(options);
  if (!options.record) throw ValidationFailure("--record", "required for posterior");
  if (config.condensate.n_c > 0) {
    throw ValidationFailure("condensate.n_c", "posterior takes two-mode records");
  }
  const auto events = read_record(*options.record, config);
  const auto dir = output_dir(config, options);
  const std::size_t grid = config.posterior_grid != 0 ? config.posterior_grid
                                                      : default_posterior_grid(events.size());
  if (grid < events.size() + 1) {
    throw ValidationFailure("grid.posterior", "must exceed the record length");
  }
  const auto model = EventFactorModel::from_spec(effective_spec(config));
  auto dist = build_prior(config, grid);
  std::vector<CircularStats> trajectory{circular_stats(dist)};
  const double log_probability = log_sequence_probability(events, dist, model);
  std::optional<std::ofstream> steps;
  std::optional<CsvWriter> steps_csv;
  if (!options.final_only) {
    steps.emplace(open_output(dir / "posterior_steps.csv"));
    steps_csv.emplace(*steps, std::initializer_list<std::string_view>{"step", "phi", "density"});
  }
  for (std::size_t k = 0; k < events.size(); ++k) {
    dist = posterior_update(dist, events[k], model);
    trajectory.push_back(circular_stats(dist));
    if (steps_csv) {
      for (std::size_t j = 0; j < dist.grid_size(); ++j) steps_csv->cell(k + 1).cell(dist.angle(j)).cell(dist[j]).end_row();
    }
  }
  if (steps) finish_output(*steps, dir / "posterior_steps.csv");
  auto post = open_output(dir / "posterior.csv");
  write_density(post, dist);
  finish_output(post, dir / "posterior.csv");

  json doc = summary_header(config, "posterior");
  doc["events"] = events.size();
  doc["grid"] = grid;
  doc["log_sequence_probability"] = log_probability;
  doc["initial"] = stats_json(trajectory.front());
  doc["final"] = stats_json(trajectory.back());
  const auto remote = remote_predictions(config, dist);
  if (!remote.empty()) doc["remote"] = remote_json(remote);
  doc["trajectory"] = trajectory_json(trajectory);
  write_json(dir / "summary.json", doc);
  return exit_ok;
}

int cmd_oracle_compare(const CommandOptions& options, std::ostream& out) {
  const auto config = load_validated(options);
  const auto rows = oracle_compare(config);
  auto emit = [&](std::ostream& os) {
    CsvWriter csv(os, {"n_a", "n_b", "N", "P", "engine_times_np", "oracle_power", "oracle_falling",
                       "engine_power_deviation", "falling_power_deviation"});
    for (const auto& r : rows) {
      csv.cell(static_cast<long long>(r.n_a)).cell(static_cast<long long>(r.n_b))
          .cell(static_cast<long long>(r.n_a + r.n_b)).cell(r.events).cell(r.engine_times_np)
          .cell(r.oracle_power).cell(r.oracle_falling).cell(r.engine_power_deviation)
          .cell(r.falling_power_deviation).end_row();
    }
  };
  if (!options.out_dir) {
    emit(out);
    return exit_ok;
  }
  const auto dir = *options.out_dir;
  auto file = open_output(dir / "oracle_compare.csv");
  emit(file);
  finish_output(file, dir / "oracle_compare.csv");
  json doc = summary_header(config, "oracle-compare");
  double worst_engine = 0.0;
  for (const auto& r : rows) worst_engine = std::max(worst_engine, r.engine_power_deviation);
  doc["rows"] = rows.size();
  doc["max_engine_power_deviation"] = worst_engine;
  write_json(dir / "summary.json", doc);
  return exit_ok;
}

int cmd_wallis(const CommandOptions& options, std::ostream& out) {
  if (options.max_events > max_wallis_events) {
    throw ValidationFailure("--max-p", "must not exceed 64");
  }
  const auto rows = wallis_table(options.max_events);
  auto emit = [&](std::ostream& os) {
    CsvWriter csv(os, {"p_plus", "p_minus", "closed_form", "quadrature", "abs_diff"});
    for (const auto& r : rows) {
      csv.cell(static_cast<long long>(r.p_plus)).cell(static_cast<long long>(r.p_minus))
          .cell(r.closed_form).cell(r.quadrature).cell(r.abs_diff).end_row();
    }
  };
  if (!options.out_dir) {
    emit(out);
    return exit_ok;
  }
  auto file = open_output(*options.out_dir / "wallis.csv");
  emit(file);
  finish_output(file, *options.out_dir / "wallis.csv");
  return exit_ok;
}

int cmd_sweep(const CommandOptions& options) {
  const auto config = load_validated(options);
  const auto dir = output_dir(config, options);
  const auto started = std::chrono::steady_clock::now();
  const auto cells = sweep(config, options.jobs);
  auto file = open_output(dir / "sweep.csv");
  CsvWriter csv(file, {"events", "prior", "modulus", "seeds", "median_width", "median_resultant",
                       "theta_dispersion", "rayleigh_p"});
  for (const auto& c : cells) {
    csv.cell(c.events).cell(c.prior).cell(c.modulus).cell(c.seeds).cell(c.median_width)
        .cell(c.median_resultant).cell(c.theta_dispersion).cell(c.rayleigh_p).end_row();
  }
  finish_output(file, dir / "sweep.csv");
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  log(LogLevel::info, "sweep finished in " + format_double(elapsed.count()) + " s");
  return exit_ok;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_spec:
    case ErrorKind::invalid_input:
      return exit_validation;
    default:
      return exit_runtime;
  }
}

PhaseDistribution build_prior(const ExperimentConfig& config, std::size_t grid_size) {
  const auto& p = config.prior;
  switch (p.kind) {
    case PriorConfig::Kind::uniform:
      return uniform_prior(grid_size);
    case PriorConfig::Kind::coefficients:
      return g_from_coefficients(normalized(load_coefficients_csv(p.file)), grid_size);
    case PriorConfig::Kind::coherent:
      return g_from_coefficients(
          coherent_coefficients({p.modulus, p.phase, coherent_cutoff(p.modulus)}), grid_size);
  }
  return uniform_prior(grid_size);
}

CandidatePlan build_plan(const ExperimentConfig& config) {
  const auto& ev = config.events;
  if (!ev.sites.empty()) {
    const auto layout = layout_of(config);
    std::vector<std::size_t> sites;
    for (const auto& name : ev.sites) sites.push_back(layout->index_of(name));
    return ev.kind == EventKind::spin ? CandidatePlan::spin_sites(std::move(sites), ev.policy)
                                      : CandidatePlan::position_sites(std::move(sites));
  }
  if (ev.kind == EventKind::position) return CandidatePlan::position_grid(ev.candidate_grid);
  if (ev.u) return CandidatePlan::spin_at_u(*ev.u, ev.policy);
  return CandidatePlan::spin_grid(ev.candidate_grid, ev.policy);
}

SimulationResult simulate(const ExperimentConfig& config, SnapshotMode snapshots) {
  SimulationResult result;
  const auto& spec = config.condensate;
  if (spec.n_c > 0) {
    result.three_mode = true;
    const std::size_t grid =
        config.grid_2d != 0 ? config.grid_2d : default_posterior_grid_2d(config.events.count);
    const auto model = ThreeModeModel::from_populations(spec.n_a, spec.n_b, spec.n_c);
    const auto prior = PhaseDistribution::uniform(grid, 2);
    auto rec = sample_record3(config.seed, config.events.count, config.candidate_side_2d, prior, model);
    result.trajectory.push_back(circular_stats(prior.sum_marginal()));
    result.trajectory.insert(result.trajectory.end(), rec.sum_stats.begin(), rec.sum_stats.end());
    result.record3 = std::move(rec);
    return result;
  }
  const auto prior = build_prior(config, posterior_grid(config));
  const auto model = EventFactorModel::from_spec(effective_spec(config));
  auto rec = sample_record(config.seed, config.events.count, build_plan(config), prior, model, snapshots);
  result.trajectory.push_back(circular_stats(prior));
  for (const auto& s : rec.snapshots) result.trajectory.push_back(s.stats);
  result.remote = remote_predictions(config, rec.posterior);
  result.record = std::move(rec);
  return result;
}

std::vector<OracleRow> oracle_compare(const ExperimentConfig& config) {
  if (config.condensate.n_c > 0) {
    throw Error(ErrorKind::invalid_input, "oracle-compare takes two-mode configs");
  }
  std::vector<DetectionEvent> record = config.oracle.record;
  if (record.empty()) record = simulate(config, SnapshotMode::summary).record->events;
  if (record.size() > max_oracle_events) {
    throw Error(ErrorKind::cap_exceeded, "oracle-compare is capped at 2000 events");
  }
  auto populations = config.oracle.populations;
  if (populations.empty()) populations.emplace_back(config.condensate.n_a, config.condensate.n_b);

  const std::size_t p = record.size();
  const std::size_t grid = std::max(default_posterior_grid(p), config.posterior_grid);
  std::vector<OracleRow> rows;
  for (const auto& [n_a, n_b] : populations) {
    CondensateSpec spec = effective_spec(config);
    spec.n_a = n_a;
    spec.n_b = n_b;
    const auto model = EventFactorModel::from_spec(spec);
    const double log_engine = log_sequence_probability(record, uniform_prior(grid), model);
    const auto power = exact_sequence_probability(record, spec, WeightMode::power);
    const auto falling = exact_sequence_probability(record, spec, WeightMode::falling_factorial);
    const double log_np = static_cast<double>(p) * std::log(static_cast<double>(n_a + n_b));
    OracleRow row;
    row.n_a = n_a;
    row.n_b = n_b;
    row.events = p;
    row.engine_times_np = std::exp(log_engine + log_np);
    row.oracle_power = power.value;
    row.oracle_falling = falling.value;
    row.engine_power_deviation = relative_deviation(std::exp(log_engine), power.scaled);
    row.falling_power_deviation = relative_deviation(falling.scaled, power.scaled);
    rows.push_back(row);
  }
  return rows;
}

std::vector<WallisRow> wallis_table(std::size_t max_events) {
  const auto model = EventFactorModel::plane_wave(1.0);
  std::vector<WallisRow> rows;
  for (std::size_t total = 0; total <= max_events; ++total) {
    const auto prior = uniform_prior(std::max(PhaseDistribution::min_grid, 2 * total + 2));
    for (std::size_t minus = 0; minus <= total; ++minus) {
      const std::size_t plus = total - minus;
      std::vector<DetectionEvent> events(plus, DetectionEvent::spin(0.0, 0.0, 1));
      events.insert(events.end(), minus, DetectionEvent::spin(0.0, 0.0, -1));
      WallisRow row;
      row.p_plus = static_cast<std::int64_t>(plus);
      row.p_minus = static_cast<std::int64_t>(minus);
      row.closed_form = wallis_reference(row.p_plus, row.p_minus);
      row.quadrature = sequence_probability(events, prior, model);
      row.abs_diff = std::abs(row.closed_form - row.quadrature);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<SweepCell> sweep(const ExperimentConfig& config, std::size_t jobs) {
  std::vector<std::size_t> counts = config.sweep.event_counts;
  if (counts.empty()) counts.push_back(config.events.count);
  const bool vary_modulus = !config.sweep.moduli.empty();
  std::vector<double> moduli = config.sweep.moduli;
  if (!vary_modulus) moduli.push_back(config.prior.modulus);
  const std::size_t seeds = config.sweep.seeds;
  if (seeds == 0) throw Error(ErrorKind::invalid_input, "sweep needs at least one seed");

  struct RunResult {
    double width;
    double resultant;
    std::optional<double> theta;
  };
  const std::size_t cell_count = counts.size() * moduli.size();
  const auto runs = parallel_map<RunResult>(cell_count * seeds, jobs, [&](std::size_t task) {
    const std::size_t cell = task / seeds;
    ExperimentConfig run = config;
    run.events.count = counts[cell / moduli.size()];
    run.posterior_grid = config.posterior_grid;
    if (vary_modulus) {
      run.prior.kind = PriorConfig::Kind::coherent;
      run.prior.modulus = moduli[cell % moduli.size()];
    }
    run.seed = config.seed + task % seeds;
    const auto result = simulate(run, SnapshotMode::summary);
    const auto& final_stats = result.final_stats();
    std::optional<double> theta;
    if (!result.remote.empty()) {
      theta = result.remote.front().prediction.axis;
    } else if (final_stats.mean) {
      theta = canonical_angle(*final_stats.mean - run.events.u.value_or(0.0));
    }
    return RunResult{final_stats.circular_std, final_stats.resultant, theta};
  });

  std::vector<SweepCell> cells;
  for (std::size_t cell = 0; cell < cell_count; ++cell) {
    std::vector<double> widths;
    std::vector<double> resultants;
    std::vector<double> thetas;
    for (std::size_t s = 0; s < seeds; ++s) {
      const auto& r = runs[cell * seeds + s];
      widths.push_back(r.width);
      resultants.push_back(r.resultant);
      if (r.theta) thetas.push_back(*r.theta);
    }
    SweepCell c;
    c.events = counts[cell / moduli.size()];
    c.prior = vary_modulus ? "coherent" : prior_name(config.prior.kind);
    c.modulus = vary_modulus || config.prior.kind == PriorConfig::Kind::coherent
                    ? moduli[cell % moduli.size()]
                    : 0.0;
    c.seeds = seeds;
    c.median_width = median(widths);
    c.median_resultant = median(resultants);
    if (!thetas.empty()) {
      std::complex<double> sum = 0.0;
      for (double t : thetas) sum += std::polar(1.0, t);
      const double r_bar = std::abs(sum) / static_cast<double>(thetas.size());
      c.theta_dispersion = r_bar > 0.0 ? std::sqrt(std::max(0.0, -2.0 * std::log(r_bar)))
                                       : std::numeric_limits<double>::infinity();
      c.rayleigh_p = rayleigh_test(thetas);
    } else {
      c.theta_dispersion = std::nan("");
      c.rayleigh_p = std::nan("");
    }
    cells.push_back(std::move(c));
  }
  return cells;
}

int run_command(const std::string& command, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    if (command == "simulate") return cmd_simulate(options);
    if (command == "posterior") return cmd_posterior(options);
    if (command == "oracle-compare") return cmd_oracle_compare(options, out);
    if (command == "wallis") return cmd_wallis(options, out);
    if (command == "sweep") return cmd_sweep(options);
    err << "unknown command '" << command << "'\n";
    return exit_validation;
  } catch (const ValidationFailure& e) {
    for (const auto& issue : e.issues()) err << "error: " << issue.path << ": " << issue.message << '\n';
    return exit_validation;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
}

}  // namespace fockphase::cli
