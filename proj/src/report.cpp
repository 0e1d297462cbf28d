#include "wegner2p/report.hpp"

#include <cstdio>
#include <ostream>
#include <set>

#include "wegner2p/errors.hpp"

namespace wegner2p {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& context) {
  if (!j.is_object()) throw PreconditionError(context + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw PreconditionError("unknown key '" + key + "' in " + context);
  }
}

const Json& require(const Json& j, const std::string& key, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) throw PreconditionError("missing required key '" + key + "' in " + context);
  return *it;
}

template <class T>
T get_as(const Json& j, const std::string& key, const std::string& context) {
  const Json& v = require(j, key, context);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw PreconditionError("malformed value for '" + key + "' in " + context + ": " + v.dump());
  }
}

std::size_t get_count(const Json& j, const std::string& key, const std::string& context) {
  const Json& v = require(j, key, context);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw PreconditionError("'" + key + "' in " + context + " must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> doubles(const Json& j) { return j.get<std::vector<double>>(); }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// points, laws, interaction

LatticePoint lattice_point_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw PreconditionError("lattice point must be a nonempty integer array");
  LatticePoint p;
  for (const auto& c : j) {
    if (!c.is_number_integer()) throw PreconditionError("lattice coordinates must be integers: " + j.dump());
    p.coords.push_back(c.get<Coord>());
  }
  return p;
}

Json to_json(const LatticePoint& p) { return Json(p.coords); }

PairPoint pair_point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw PreconditionError("pair point must be [[x1...], [x2...]]: " + j.dump());
  return PairPoint(lattice_point_from_json(j[0]), lattice_point_from_json(j[1]));
}

Json to_json(const PairPoint& p) { return Json::array({to_json(p.first), to_json(p.second)}); }

DistributionSpec distribution_from_json(const Json& j) {
  const std::string ctx = "distribution";
  if (!j.is_object()) throw PreconditionError("distribution must be a JSON object");
  const auto kind = get_as<std::string>(j, "kind", ctx);
  DistributionSpec dist;
  if (kind == "uniform") {
    check_keys(j, {"kind", "lo", "hi"}, ctx);
    dist = UniformLaw{get_as<double>(j, "lo", ctx), get_as<double>(j, "hi", ctx)};
  } else if (kind == "gaussian") {
    check_keys(j, {"kind", "mean", "sigma"}, ctx);
    dist = GaussianLaw{get_as<double>(j, "mean", ctx), get_as<double>(j, "sigma", ctx)};
  } else if (kind == "bernoulli") {
    check_keys(j, {"kind", "p", "values"}, ctx);
    const auto values = get_as<std::vector<double>>(j, "values", ctx);
    if (values.size() != 2) throw PreconditionError("bernoulli 'values' must have two entries");
    BernoulliLaw b;
    b.p = get_as<double>(j, "p", ctx);
    b.values[0] = values[0];
    b.values[1] = values[1];
    dist = b;
  } else if (kind == "discrete") {
    check_keys(j, {"kind", "atoms"}, ctx);
    DiscreteLaw d;
    for (const auto& a : require(j, "atoms", ctx)) {
      if (!a.is_array() || a.size() != 2) throw PreconditionError("discrete atom must be [value, probability]");
      d.atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
    dist = d;
  } else {
    throw PreconditionError("unknown distribution kind '" + kind + "'");
  }
  return validate_distribution(dist);
}

Json to_json(const DistributionSpec& dist) {
  Json j;
  j["kind"] = kind_name(dist);
  if (const auto* u = std::get_if<UniformLaw>(&dist)) {
    j["lo"] = u->lo;
    j["hi"] = u->hi;
  } else if (const auto* g = std::get_if<GaussianLaw>(&dist)) {
    j["mean"] = g->mean;
    j["sigma"] = g->sigma;
  } else if (const auto* b = std::get_if<BernoulliLaw>(&dist)) {
    j["p"] = b->p;
    j["values"] = {b->values[0], b->values[1]};
  } else {
    Json atoms = Json::array();
    for (const auto& a : std::get<DiscreteLaw>(dist).atoms) atoms.push_back({a.value, a.probability});
    j["atoms"] = atoms;
  }
  return j;
}

InteractionSpec interaction_from_json(const Json& j) {
  const std::string ctx = "interaction";
  check_keys(j, {"range", "table"}, ctx);
  InteractionSpec spec;
  spec.range = get_as<Coord>(j, "range", ctx);
  if (auto it = j.find("table"); it != j.end()) {
    for (const auto& e : *it) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer()) {
        throw PreconditionError("interaction entry must be [r, value] with integer r");
      }
      spec.table[e[0].get<Coord>()] = e[1].get<double>();
    }
  }
  spec.validate();
  return spec;
}

Json to_json(const InteractionSpec& spec) {
  Json table = Json::array();
  for (const auto& [r, v] : spec.table) table.push_back({r, v});
  return {{"range", spec.range}, {"table", table}};
}

// ---------------------------------------------------------------------------
// ExperimentConfig

ExperimentConfig experiment_config_from_json(const Json& j, ConfigUse use) {
  const std::string ctx = "config";
  check_keys(j,
             {"dimension", "radius", "center", "center_prime", "interaction", "coupling", "distribution", "energy",
              "epsilon", "trials", "conditioning_rounds", "master_seed", "bound_mode", "hopping_norm"},
             ctx);
  ExperimentConfig cfg;
  cfg.dimension = get_count(j, "dimension", ctx);
  cfg.radius = get_as<Coord>(j, "radius", ctx);
  cfg.center = pair_point_from_json(require(j, "center", ctx));
  if (j.contains("center_prime")) cfg.center_prime = pair_point_from_json(j["center_prime"]);
  cfg.interaction = j.contains("interaction") ? interaction_from_json(j["interaction"])
                                              : InteractionSpec::none(static_cast<Coord>(cfg.dimension));
  if (j.contains("bound_mode")) cfg.bound_mode = bound_mode_from_string(get_as<std::string>(j, "bound_mode", ctx));
  if (j.contains("hopping_norm")) cfg.hopping = hopping_norm_from_string(get_as<std::string>(j, "hopping_norm", ctx));
  if (j.contains("energy")) cfg.energy = get_as<double>(j, "energy", ctx);
  if (j.contains("conditioning_rounds")) cfg.conditioning_rounds = get_count(j, "conditioning_rounds", ctx);

  if (cfg.center.dimension() != cfg.dimension) throw PreconditionError("center dimension does not match 'dimension'");
  if (cfg.center_prime && cfg.center_prime->dimension() != cfg.dimension) {
    throw PreconditionError("center_prime dimension does not match 'dimension'");
  }
  if (cfg.radius < 0) throw PreconditionError("radius must be nonnegative");

  if (use == ConfigUse::kGeometry) {
    require(j, "center_prime", ctx);
    return cfg;
  }
  cfg.coupling = get_as<double>(j, "coupling", ctx);
  if (use == ConfigUse::kHamiltonian) {
    if (j.contains("distribution")) cfg.distribution = distribution_from_json(j["distribution"]);
    if (j.contains("master_seed")) cfg.master_seed = get_as<std::uint64_t>(j, "master_seed", ctx);
    return cfg;
  }
  cfg.distribution = distribution_from_json(require(j, "distribution", ctx));
  cfg.epsilon = get_as<double>(j, "epsilon", ctx);
  cfg.trials = get_count(j, "trials", ctx);
  cfg.master_seed = get_as<std::uint64_t>(j, "master_seed", ctx);
  if (use == ConfigUse::kSingleVolume) {
    require(j, "energy", ctx);
  } else {
    require(j, "center_prime", ctx);
    require(j, "conditioning_rounds", ctx);
  }
  cfg.validate();
  return cfg;
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["dimension"] = cfg.dimension;
  j["radius"] = cfg.radius;
  j["center"] = to_json(cfg.center);
  if (cfg.center_prime) j["center_prime"] = to_json(*cfg.center_prime);
  j["interaction"] = to_json(cfg.interaction);
  j["coupling"] = cfg.coupling;
  j["distribution"] = to_json(cfg.distribution);
  j["energy"] = cfg.energy;
  j["epsilon"] = cfg.epsilon;
  j["trials"] = cfg.trials;
  j["conditioning_rounds"] = cfg.conditioning_rounds;
  j["master_seed"] = cfg.master_seed;
  j["bound_mode"] = to_string(cfg.bound_mode);
  j["hopping_norm"] = to_string(cfg.hopping);
  return j;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.dimension == b.dimension && a.radius == b.radius && a.center == b.center &&
         a.center_prime == b.center_prime && a.interaction == b.interaction && a.coupling == b.coupling &&
         a.distribution == b.distribution && a.energy == b.energy && a.epsilon == b.epsilon &&
         a.trials == b.trials && a.conditioning_rounds == b.conditioning_rounds && a.master_seed == b.master_seed &&
         a.bound_mode == b.bound_mode && a.hopping == b.hopping;
}

// ---------------------------------------------------------------------------
// reports

namespace {

Json report_header(const std::string& kind, std::uint64_t seed) {
  return {{"schema_version", kSchemaVersion}, {"tool_version", kToolVersion}, {"kind", kind}, {"master_seed", seed}};
}

void check_header(const Json& j, const std::string& kind) {
  if (j.at("schema_version").get<int>() != kSchemaVersion) throw PreconditionError("unsupported schema_version");
  if (j.at("kind").get<std::string>() != kind) throw PreconditionError("expected a " + kind + " report");
}

ExperimentConfig config_echo_from_json(const Json& j) {
  // echoes carry every key, so parse leniently with respect to purpose
  ExperimentConfig cfg = experiment_config_from_json(j, ConfigUse::kHamiltonian);
  cfg.distribution = distribution_from_json(j.at("distribution"));
  cfg.epsilon = j.at("epsilon").get<double>();
  cfg.trials = j.at("trials").get<std::size_t>();
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  return cfg;
}

}  // namespace

Json to_json(const SingleVolumeReport& r) {
  Json j = report_header("single_volume", r.config.master_seed);
  j["config"] = to_json(r.config);
  j["results"] = {{"trials", r.trials},
                  {"events", r.events},
                  {"empirical_probability", r.empirical_probability},
                  {"std_error", r.std_error},
                  {"analytic_bound", r.analytic_bound},
                  {"bound_mode", to_string(r.config.bound_mode)},
                  {"low_power", r.low_power},
                  {"min_distance", r.min_distance},
                  {"mean_distance", r.mean_distance},
                  {"max_distance", r.max_distance},
                  {"trial_distances", r.trial_distances}};
  j["verdict"] = to_string(r.verdict);
  return j;
}

SingleVolumeReport single_volume_report_from_json(const Json& j) {
  check_header(j, "single_volume");
  SingleVolumeReport r;
  r.config = config_echo_from_json(j.at("config"));
  const Json& res = j.at("results");
  r.trials = res.at("trials").get<std::size_t>();
  r.events = res.at("events").get<std::size_t>();
  r.empirical_probability = res.at("empirical_probability").get<double>();
  r.std_error = res.at("std_error").get<double>();
  r.analytic_bound = res.at("analytic_bound").get<double>();
  r.low_power = res.at("low_power").get<bool>();
  r.min_distance = res.at("min_distance").get<double>();
  r.mean_distance = res.at("mean_distance").get<double>();
  r.max_distance = res.at("max_distance").get<double>();
  r.trial_distances = doubles(res.at("trial_distances"));
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  return r;
}

bool operator==(const SingleVolumeReport& a, const SingleVolumeReport& b) {
  return a.config == b.config && a.trials == b.trials && a.events == b.events &&
         a.empirical_probability == b.empirical_probability && a.std_error == b.std_error &&
         a.analytic_bound == b.analytic_bound && a.verdict == b.verdict && a.low_power == b.low_power &&
         a.min_distance == b.min_distance && a.mean_distance == b.mean_distance && a.max_distance == b.max_distance &&
         a.trial_distances == b.trial_distances;
}

Json to_json(const TwoVolumeReport& r) {
  Json j = report_header("two_volume", r.config.master_seed);
  j["config"] = to_json(r.config);
  Json rounds = Json::array();
  for (const auto& rd : r.rounds) {
    rounds.push_back({{"round", rd.round},
                      {"frozen_digest", rd.frozen_digest},
                      {"trials", rd.trials},
                      {"events", rd.events},
                      {"conditional_probability", rd.conditional_probability},
                      {"std_error", rd.std_error},
                      {"bound", rd.bound},
                      {"verdict", to_string(rd.verdict)}});
  }
  j["results"] = {{"separation", r.separation.names()},
                  {"random_box", to_string(r.random_box)},
                  {"analytic_bound", r.analytic_bound},
                  {"bound_mode", to_string(r.config.bound_mode)},
                  {"rounds", rounds}};
  j["verdict"] = to_string(r.verdict);
  return j;
}

TwoVolumeReport two_volume_report_from_json(const Json& j) {
  check_header(j, "two_volume");
  TwoVolumeReport r;
  r.config = config_echo_from_json(j.at("config"));
  const Json& res = j.at("results");
  for (const auto& name : res.at("separation")) r.separation.add(separation_from_string(name.get<std::string>()));
  r.random_box = random_box_from_string(res.at("random_box").get<std::string>());
  r.analytic_bound = res.at("analytic_bound").get<double>();
  for (const auto& rd : res.at("rounds")) {
    TwoVolumeRound x;
    x.round = rd.at("round").get<std::size_t>();
    x.frozen_digest = rd.at("frozen_digest").get<std::string>();
    x.trials = rd.at("trials").get<std::size_t>();
    x.events = rd.at("events").get<std::size_t>();
    x.conditional_probability = rd.at("conditional_probability").get<double>();
    x.std_error = rd.at("std_error").get<double>();
    x.bound = rd.at("bound").get<double>();
    x.verdict = verdict_from_string(rd.at("verdict").get<std::string>());
    r.rounds.push_back(std::move(x));
  }
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  return r;
}

bool operator==(const TwoVolumeRound& a, const TwoVolumeRound& b) {
  return a.round == b.round && a.frozen_digest == b.frozen_digest && a.trials == b.trials && a.events == b.events &&
         a.conditional_probability == b.conditional_probability && a.std_error == b.std_error &&
         a.bound == b.bound && a.verdict == b.verdict;
}

bool operator==(const TwoVolumeReport& a, const TwoVolumeReport& b) {
  return a.config == b.config && a.separation == b.separation && a.random_box == b.random_box &&
         a.analytic_bound == b.analytic_bound && a.rounds == b.rounds && a.verdict == b.verdict;
}

Json to_json(const DMReport& r) {
  Json j = report_header("dm_eigenvalues", 0);
  j["results"] = {{"trials", r.trials},
                  {"shift_violations", r.shift_violations},
                  {"monotonicity_violations", r.monotonicity_violations},
                  {"worst_shift_error", r.worst_shift_error},
                  {"worst_monotone_step", r.worst_monotone_step},
                  {"shift_witness", r.shift_witness},
                  {"monotonicity_witness", r.monotonicity_witness}};
  j["verdict"] = r.passed() ? "holds" : "violated";
  return j;
}

DMReport dm_report_from_json(const Json& j) {
  check_header(j, "dm_eigenvalues");
  const Json& res = j.at("results");
  DMReport r;
  r.trials = res.at("trials").get<std::size_t>();
  r.shift_violations = res.at("shift_violations").get<std::size_t>();
  r.monotonicity_violations = res.at("monotonicity_violations").get<std::size_t>();
  r.worst_shift_error = res.at("worst_shift_error").get<double>();
  r.worst_monotone_step = res.at("worst_monotone_step").get<double>();
  r.shift_witness = res.at("shift_witness").get<std::int64_t>();
  r.monotonicity_witness = res.at("monotonicity_witness").get<std::int64_t>();
  return r;
}

void write_csv(const SingleVolumeReport& r, std::ostream& os) {
  os << "trial,distance,event\n";
  for (std::size_t i = 0; i < r.trial_distances.size(); ++i) {
    const double d = r.trial_distances[i];
    os << i << ',' << format_double(d) << ',' << (d <= r.config.epsilon ? 1 : 0) << '\n';
  }
}

void write_csv(const TwoVolumeReport& r, std::ostream& os) {
  os << "round,frozen_digest,trials,events,conditional_probability,std_error,bound,random_box,verdict\n";
  for (const auto& rd : r.rounds) {
    os << rd.round << ',' << rd.frozen_digest << ',' << rd.trials << ',' << rd.events << ','
       << format_double(rd.conditional_probability) << ',' << format_double(rd.std_error) << ','
       << format_double(rd.bound) << ',' << to_string(r.random_box) << ',' << to_string(rd.verdict) << '\n';
  }
}

void write_csv(const DMReport& r, std::ostream& os) {
  os << "trials,shift_violations,monotonicity_violations,worst_shift_error,worst_monotone_step,verdict\n";
  os << r.trials << ',' << r.shift_violations << ',' << r.monotonicity_violations << ','
     << format_double(r.worst_shift_error) << ',' << format_double(r.worst_monotone_step) << ','
     << (r.passed() ? "holds" : "violated") << '\n';
}

}  // namespace wegner2p
