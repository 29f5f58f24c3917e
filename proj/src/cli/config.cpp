#include "fockphase/experiment_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fockphase/errors.hpp"
#include "fockphase/initial_phase.hpp"

namespace fockphase {

namespace {

using json = nlohmann::json;

class Reader {
 public:
  explicit Reader(std::vector<ConfigIssue>& issues) : issues_(issues) {}

  void fail(const std::string& path, const std::string& message) {
    issues_.push_back({path, message});
  }

  const json* object(const json& parent, const char* key, const std::string& path) {
    if (!parent.contains(key)) return nullptr;
    const json& v = parent.at(key);
    if (!v.is_object()) {
      fail(path, "expected an object");
      return nullptr;
    }
    return &v;
  }

  template <class T>
  void number(const json& parent, const char* key, const std::string& path, T& out) {
    if (!parent.contains(key)) return;
    const json& v = parent.at(key);
    if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) return fail(path, "expected a number");
      out = v.get<T>();
      if (!std::isfinite(static_cast<double>(out))) fail(path, "must be finite");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) return fail(path, "expected a nonnegative integer");
      out = v.get<T>();
    } else {
      if (!v.is_number_integer()) return fail(path, "expected an integer");
      out = v.get<T>();
    }
  }

  void boolean(const json& parent, const char* key, const std::string& path, bool& out) {
    if (!parent.contains(key)) return;
    if (!parent.at(key).is_boolean()) return fail(path, "expected true or false");
    out = parent.at(key).get<bool>();
  }

  void string(const json& parent, const char* key, const std::string& path, std::string& out) {
    if (!parent.contains(key)) return;
    if (!parent.at(key).is_string()) return fail(path, "expected a string");
    out = parent.at(key).get<std::string>();
  }

  std::optional<Vec3> vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number()) {
      fail(path, "expected [x, y, z]");
      return std::nullopt;
    }
    return Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }

  std::optional<complex> cplx(const json& v, const std::string& path) {
    if (v.is_number()) return complex(v.get<double>(), 0.0);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(path, "expected [re, im]");
      return std::nullopt;
    }
    return complex(v[0].get<double>(), v[1].get<double>());
  }

  std::optional<AnglePolicy> policy(const json& v, const std::string& path) {
    if (!v.is_object()) {
      fail(path, "expected an object");
      return std::nullopt;
    }
    std::string kind = "fixed";
    string(v, "kind", path + ".kind", kind);
    if (kind == "fixed") {
      double theta = 0.0;
      number(v, "theta", path + ".theta", theta);
      return AnglePolicy::fixed(theta);
    }
    if (kind == "alternating") {
      double theta0 = 0.0;
      double delta = 0.0;
      number(v, "theta0", path + ".theta0", theta0);
      number(v, "delta", path + ".delta", delta);
      return AnglePolicy::alternating(theta0, delta);
    }
    if (kind == "perpendicular") {
      double fallback = 0.0;
      number(v, "fallback", path + ".fallback", fallback);
      return AnglePolicy::perpendicular(fallback);
    }
    fail(path + ".kind", "unknown policy '" + kind + "'");
    return std::nullopt;
  }

  std::optional<DetectionEvent> event(const json& v, const std::string& path) {
    if (!v.is_object()) {
      fail(path, "expected an object");
      return std::nullopt;
    }
    std::string kind = "position";
    double u = 0.0;
    double theta = 0.0;
    int eta = 1;
    string(v, "kind", path + ".kind", kind);
    number(v, "u", path + ".u", u);
    number(v, "theta", path + ".theta", theta);
    number(v, "eta", path + ".eta", eta);
    if (kind == "position") return DetectionEvent::position(u);
    if (kind != "spin") {
      fail(path + ".kind", "expected 'position' or 'spin'");
      return std::nullopt;
    }
    if (eta != 1 && eta != -1) {
      fail(path + ".eta", "must be +1 or -1");
      return std::nullopt;
    }
    return DetectionEvent::spin(u, theta, eta);
  }

 private:
  std::vector<ConfigIssue>& issues_;
};

void parse_condensate(Reader& r, const json& c, ExperimentConfig& cfg) {
  auto& spec = cfg.condensate;
  r.number(c, "n_a", "condensate.n_a", spec.n_a);
  r.number(c, "n_b", "condensate.n_b", spec.n_b);
  r.number(c, "n_c", "condensate.n_c", spec.n_c);
  r.boolean(c, "spinful", "condensate.spinful", spec.spinful);
  const std::pair<const char*, Vec3*> wavevectors[] = {{"k_a", &spec.plane_waves.k_a},
                                                       {"k_b", &spec.plane_waves.k_b},
                                                       {"k_c", &spec.plane_waves.k_c}};
  for (const auto& [key, target] : wavevectors) {
    if (!c.contains(key)) continue;
    if (auto v = r.vec3(c.at(key), std::string("condensate.") + key)) *target = *v;
  }
  if (!c.contains("regions")) return;
  const json& regions = c.at("regions");
  if (!regions.is_array()) return r.fail("condensate.regions", "expected an array");
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const std::string path = "condensate.regions[" + std::to_string(i) + "]";
    const json& item = regions[i];
    if (!item.is_object()) {
      r.fail(path, "expected an object");
      continue;
    }
    Region region;
    r.string(item, "name", path + ".name", region.name);
    r.number(item, "volume", path + ".volume", region.volume);
    if (item.contains("phi_a")) {
      if (auto v = r.cplx(item.at("phi_a"), path + ".phi_a")) region.phi_a = *v;
    }
    if (item.contains("phi_b")) {
      if (auto v = r.cplx(item.at("phi_b"), path + ".phi_b")) region.phi_b = *v;
    }
    if (item.contains("center")) {
      if (auto v = r.vec3(item.at("center"), path + ".center")) region.center = *v;
    }
    cfg.regions.push_back(std::move(region));
  }
}

void parse_prior(Reader& r, const json& p, PriorConfig& prior) {
  std::string kind = "uniform";
  r.string(p, "kind", "prior.kind", kind);
  if (kind == "uniform") {
    prior.kind = PriorConfig::Kind::uniform;
  } else if (kind == "coefficients") {
    prior.kind = PriorConfig::Kind::coefficients;
    r.string(p, "file", "prior.file", prior.file);
  } else if (kind == "coherent") {
    prior.kind = PriorConfig::Kind::coherent;
    r.number(p, "modulus", "prior.modulus", prior.modulus);
    r.number(p, "phase", "prior.phase", prior.phase);
  } else {
    r.fail("prior.kind", "expected 'uniform', 'coefficients' or 'coherent'");
  }
}

void parse_events(Reader& r, const json& e, EventPlanConfig& plan) {
  r.number(e, "count", "events.count", plan.count);
  std::string kind = "position";
  r.string(e, "kind", "events.kind", kind);
  if (kind == "position") {
    plan.kind = EventKind::position;
  } else if (kind == "spin") {
    plan.kind = EventKind::spin;
  } else {
    r.fail("events.kind", "expected 'position' or 'spin'");
  }
  if (e.contains("policy")) {
    if (auto p = r.policy(e.at("policy"), "events.policy")) plan.policy = *p;
  }
  r.number(e, "candidate_grid", "events.candidate_grid", plan.candidate_grid);
  if (e.contains("u")) {
    double u = 0.0;
    r.number(e, "u", "events.u", u);
    plan.u = u;
  }
  if (e.contains("sites")) {
    const json& s = e.at("sites");
    if (!s.is_array()) return r.fail("events.sites", "expected an array of region names");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_string()) {
        r.fail("events.sites[" + std::to_string(i) + "]", "expected a string");
        continue;
      }
      plan.sites.push_back(s[i].get<std::string>());
    }
  }
}

void parse_oracle(Reader& r, const json& o, OracleConfig& oracle) {
  if (o.contains("populations")) {
    const json& pops = o.at("populations");
    if (!pops.is_array()) return r.fail("oracle.populations", "expected an array of [n_a, n_b]");
    for (std::size_t i = 0; i < pops.size(); ++i) {
      const json& p = pops[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
          !p[1].is_number_integer()) {
        r.fail("oracle.populations[" + std::to_string(i) + "]", "expected [n_a, n_b]");
        continue;
      }
      oracle.populations.emplace_back(p[0].get<std::int64_t>(), p[1].get<std::int64_t>());
    }
  }
  if (o.contains("record")) {
    const json& rec = o.at("record");
    if (!rec.is_array()) return r.fail("oracle.record", "expected an array of events");
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (auto ev = r.event(rec[i], "oracle.record[" + std::to_string(i) + "]")) {
        oracle.record.push_back(*ev);
      }
    }
  }
}

void parse_sweep(Reader& r, const json& s, SweepConfig& sweep) {
  r.number(s, "seeds", "sweep.seeds", sweep.seeds);
  if (s.contains("events")) {
    const json& v = s.at("events");
    if (!v.is_array()) return r.fail("sweep.events", "expected an array of event counts");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_unsigned()) {
        r.fail("sweep.events[" + std::to_string(i) + "]", "expected a nonnegative integer");
        continue;
      }
      sweep.event_counts.push_back(v[i].get<std::size_t>());
    }
  }
  if (s.contains("modulus")) {
    const json& v = s.at("modulus");
    if (!v.is_array()) return r.fail("sweep.modulus", "expected an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        r.fail("sweep.modulus[" + std::to_string(i) + "]", "expected a number");
        continue;
      }
      sweep.moduli.push_back(v[i].get<double>());
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, std::vector<ConfigIssue>& issues) {
  ExperimentConfig cfg;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    issues.push_back({"$", std::string("malformed JSON: ") + e.what()});
    return cfg;
  }
  if (!doc.is_object()) {
    issues.push_back({"$", "expected a JSON object"});
    return cfg;
  }
  static const std::set<std::string> known = {
      "name",  "condensate", "prior",  "events",          "grid",   "seed",
      "output_dir", "allow_approximation_violation", "remote", "oracle", "sweep"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) issues.push_back({key, "unknown field"});
  }
  Reader r(issues);
  r.string(doc, "name", "name", cfg.name);
  r.number(doc, "seed", "seed", cfg.seed);
  r.string(doc, "output_dir", "output_dir", cfg.output_dir);
  r.boolean(doc, "allow_approximation_violation", "allow_approximation_violation",
            cfg.allow_approximation_violation);
  if (const json* c = r.object(doc, "condensate", "condensate")) {
    parse_condensate(r, *c, cfg);
  } else {
    issues.push_back({"condensate", "required"});
  }
  if (const json* p = r.object(doc, "prior", "prior")) parse_prior(r, *p, cfg.prior);
  if (const json* e = r.object(doc, "events", "events")) parse_events(r, *e, cfg.events);
  if (const json* g = r.object(doc, "grid", "grid")) {
    r.number(*g, "posterior", "grid.posterior", cfg.posterior_grid);
    r.number(*g, "posterior_2d", "grid.posterior_2d", cfg.grid_2d);
    r.number(*g, "candidates_2d", "grid.candidates_2d", cfg.candidate_side_2d);
  }
  if (const json* rem = r.object(doc, "remote", "remote")) {
    if (rem->contains("targets")) {
      const json& t = rem->at("targets");
      if (!t.is_array()) {
        r.fail("remote.targets", "expected an array of region names");
      } else {
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (t[i].is_string()) {
            cfg.remote_targets.push_back(t[i].get<std::string>());
          } else {
            r.fail("remote.targets[" + std::to_string(i) + "]", "expected a string");
          }
        }
      }
    }
  }
  if (const json* o = r.object(doc, "oracle", "oracle")) parse_oracle(r, *o, cfg.oracle);
  if (const json* s = r.object(doc, "sweep", "sweep")) parse_sweep(r, *s, cfg.sweep);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::vector<ConfigIssue>& issues) {
  std::ifstream in(path);
  if (!in) {
    issues.push_back({"--config", "cannot open " + path.string()});
    return {};
  }
  std::ostringstream text;
  text << in.rdbuf();
  auto cfg = parse_config(text.str(), issues);
  // Relative coefficient files resolve against the config's directory.
  if (cfg.prior.kind == PriorConfig::Kind::coefficients && !cfg.prior.file.empty()) {
    std::filesystem::path file(cfg.prior.file);
    if (file.is_relative()) cfg.prior.file = (path.parent_path() / file).string();
  }
  return cfg;
}

std::optional<RegionLayout> layout_of(const ExperimentConfig& config) {
  if (config.regions.empty()) return std::nullopt;
  return RegionLayout(config.regions);
}

std::vector<ConfigIssue> validate(const ExperimentConfig& config) {
  std::vector<ConfigIssue> issues;
  const auto& spec = config.condensate;
  const auto& ev = config.events;

  if (spec.n_a < 0) issues.push_back({"condensate.n_a", "must be nonnegative"});
  if (spec.n_b < 0) issues.push_back({"condensate.n_b", "must be nonnegative"});
  if (spec.n_c < 0) issues.push_back({"condensate.n_c", "must be nonnegative"});
  if (spec.n_a == 0 && spec.n_b == 0 && spec.n_c <= 0) {
    issues.push_back({"condensate", "empty condensate"});
  }
  for (const Vec3* k : {&spec.plane_waves.k_a, &spec.plane_waves.k_b, &spec.plane_waves.k_c}) {
    if (!is_finite(*k)) issues.push_back({"condensate", "wave vectors must be finite"});
  }

  const bool three_mode = spec.n_c > 0;
  std::optional<RegionLayout> layout;
  if (!config.regions.empty()) {
    try {
      layout = layout_of(config);
    } catch (const Error& e) {
      issues.push_back({"condensate.regions", e.what()});
    }
  }
  if (three_mode) {
    if (!config.regions.empty()) {
      issues.push_back({"condensate.regions", "three-mode runs take plane waves only"});
    }
    if (ev.kind != EventKind::position) {
      issues.push_back({"events.kind", "three-mode runs take position events only"});
    }
  }

  if (ev.kind == EventKind::spin && !spec.spinful) {
    issues.push_back({"events.kind", "spin events need condensate.spinful = true"});
  }
  if (ev.candidate_grid == 0) issues.push_back({"events.candidate_grid", "must be positive"});
  if (!ev.sites.empty() && config.regions.empty()) {
    issues.push_back({"events.sites", "region names need condensate.regions"});
  }
  if (!config.regions.empty() && ev.sites.empty()) {
    issues.push_back({"events.sites", "tabulated runs need at least one detection region"});
  }
  if (ev.u && !ev.sites.empty()) {
    issues.push_back({"events.u", "give either a reduced position or region names"});
  }
  if (ev.u && ev.kind != EventKind::spin) {
    issues.push_back({"events.u", "a fixed position only makes sense for spin events"});
  }
  auto check_names = [&](const std::vector<std::string>& names, const std::string& path) {
    if (!layout) return;
    for (std::size_t i = 0; i < names.size(); ++i) {
      try {
        (void)layout->index_of(names[i]);
      } catch (const Error&) {
        issues.push_back({path + "[" + std::to_string(i) + "]", "unknown region '" + names[i] + "'"});
      }
    }
  };
  check_names(ev.sites, "events.sites");
  check_names(config.remote_targets, "remote.targets");
  if (!config.remote_targets.empty() && config.regions.empty()) {
    issues.push_back({"remote.targets", "remote predictions need condensate.regions"});
  }

  // Phase-engine runs stay inside the large-population domain unless told otherwise.
  const std::int64_t total = spec.total();
  std::size_t largest = ev.count;
  for (std::size_t p : config.sweep.event_counts) largest = std::max(largest, p);
  if (!config.allow_approximation_violation && total > 0 &&
      static_cast<double>(largest) > static_cast<double>(total) / 10.0) {
    issues.push_back({"events.count", "approximation domain violated"});
  }

  if (config.posterior_grid != 0) {
    if (config.posterior_grid < PhaseDistribution::min_grid) {
      issues.push_back({"grid.posterior", "must be at least 16"});
    } else if (config.posterior_grid < largest + 1) {
      issues.push_back({"grid.posterior", "must exceed the event count"});
    }
  }
  if (config.grid_2d != 0 && config.grid_2d < std::max<std::size_t>(PhaseDistribution::min_grid, largest + 1)) {
    issues.push_back({"grid.posterior_2d", "must be at least 16 and exceed the event count"});
  }
  if (config.candidate_side_2d == 0) issues.push_back({"grid.candidates_2d", "must be positive"});

  const auto& prior = config.prior;
  auto check_modulus = [&](double modulus, const std::string& path) {
    if (!(modulus >= 0.0)) {
      issues.push_back({path, "must be nonnegative"});
    } else if (10 * coherent_cutoff(modulus) > std::min(spec.n_a, spec.n_b)) {
      issues.push_back({path, "population window too wide: need 10·q_max <= min(N_a, N_b)"});
    }
  };
  if (prior.kind == PriorConfig::Kind::coherent) check_modulus(prior.modulus, "prior.modulus");
  for (std::size_t i = 0; i < config.sweep.moduli.size(); ++i) {
    check_modulus(config.sweep.moduli[i], "sweep.modulus[" + std::to_string(i) + "]");
  }
  if (prior.kind == PriorConfig::Kind::coefficients) {
    if (prior.file.empty()) {
      issues.push_back({"prior.file", "required for a coefficients prior"});
    } else {
      try {
        const auto table = load_coefficients_csv(prior.file);
        validate_superposition(table, spec.n_a, spec.n_b);
      } catch (const Error& e) {
        issues.push_back({"prior.file", e.what()});
      }
    }
  }
  if (prior.kind != PriorConfig::Kind::uniform && three_mode) {
    issues.push_back({"prior.kind", "three-mode runs use a uniform prior"});
  }

  for (std::size_t i = 0; i < config.oracle.populations.size(); ++i) {
    const auto [a, b] = config.oracle.populations[i];
    if (a < 0 || b < 0 || a + b == 0) {
      issues.push_back({"oracle.populations[" + std::to_string(i) + "]", "empty condensate"});
    }
  }
  return issues;
}

}  // namespace fockphase
