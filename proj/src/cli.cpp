#include "wegner2p/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "wegner2p/errors.hpp"
#include "wegner2p/experiments.hpp"
#include "wegner2p/report.hpp"
#include "wegner2p/spectral.hpp"
#include "wegner2p/stollmann.hpp"

namespace wegner2p::cli {

namespace {

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
};

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw PreconditionError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

class Output {
 public:
  Output(const Options& opt, std::ostream& fallback) : opt_(opt), fallback_(fallback) {}

  void emit(const std::string& text) {
    if (opt_.out_path.empty()) {
      fallback_ << text;
      return;
    }
    std::ofstream f(opt_.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + opt_.out_path + "'");
    f << text;
    if (!f) throw std::runtime_error("write to '" + opt_.out_path + "' failed");
  }
  void emit(const Json& j) { emit(j.dump(2) + "\n"); }
  bool csv() const { return opt_.format == "csv"; }

 private:
  const Options& opt_;
  std::ostream& fallback_;
};

// "field" is an explicit potential: [[[x...], value], ...]
std::optional<PotentialField> explicit_field(Json& j) {
  auto it = j.find("field");
  if (it == j.end()) return std::nullopt;
  std::map<LatticePoint, double> values;
  for (const auto& e : *it) {
    if (!e.is_array() || e.size() != 2) throw PreconditionError("field entries must be [[coords...], value]");
    values[lattice_point_from_json(e[0])] = e[1].get<double>();
  }
  j.erase(it);
  return PotentialField(std::move(values));
}

std::optional<std::size_t> take_count(Json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  if (!it->is_number_unsigned()) throw PreconditionError("'" + key + "' must be a nonnegative integer");
  const auto v = it->get<std::size_t>();
  j.erase(it);
  return v;
}

PotentialField field_for(const ExperimentConfig& cfg, const HamiltonianBuilder& builder,
                         const std::optional<PotentialField>& given) {
  if (given) return *given;
  RngStream rng = derive_trial_rng(cfg.master_seed, 0, 0);
  return sample_field(builder.sites(), cfg.distribution, rng);
}

int run_geometry(const Options& opt, Output& out) {
  const ExperimentConfig cfg = experiment_config_from_json(load_config(opt.config_path), ConfigUse::kGeometry);
  const PairPoint& u = cfg.center;
  const PairPoint& v = *cfg.center_prime;
  const SeparationClass classes = classify_separation(u, v, cfg.radius);
  Json j = {{"schema_version", kSchemaVersion}, {"tool_version", kToolVersion}, {"kind", "geometry"}};
  j["config"] = {{"dimension", cfg.dimension}, {"radius", cfg.radius}, {"center", to_json(u)},
                 {"center_prime", to_json(v)}};
  j["results"] = {{"distance_condition", true},
                  {"distance", sup_norm_pair(u, v)},
                  {"swapped_distance", sup_norm_pair(apply_symmetry(u), v)},
                  {"classes", classes.names()},
                  {"union_sizes",
                   {projections(make_box(u, cfg.radius)).union_size, projections(make_box(v, cfg.radius)).union_size}}};
  if (!classes.empty()) j["results"]["random_box"] = to_string(select_random_box(classes));
  j["verdict"] = classes.empty() ? "violated" : "holds";
  if (out.csv()) {
    std::ostringstream os;
    os << "class\n";
    for (const auto& n : classes.names()) os << n << '\n';
    out.emit(os.str());
  } else {
    out.emit(j);
  }
  return classes.empty() ? kBoundViolated : kOk;
}

int run_matrix(const Options& opt, Output& out, bool spectrum_only) {
  Json raw = load_config(opt.config_path);
  const auto given = explicit_field(raw);
  ExperimentConfig cfg = experiment_config_from_json(raw, ConfigUse::kHamiltonian);
  if (opt.seed) cfg.master_seed = *opt.seed;
  const HamiltonianBuilder builder(cfg.hamiltonian_spec(cfg.center));
  const SymmetricMatrix h = builder.build(field_for(cfg, builder, given));
  const BoxSpec& box = builder.spec().box;

  std::ostringstream os;
  Json j = {{"schema_version", kSchemaVersion}, {"tool_version", kToolVersion}, {"master_seed", cfg.master_seed}};
  j["config"] = to_json(cfg);
  if (spectrum_only) {
    const Spectrum s = eigenvalues(h);
    j["kind"] = "spectrum";
    j["results"] = {{"dim", h.dim()}, {"eigenvalues", s.values()}, {"dist_to_energy", dist_to_energy(s, cfg.energy)}};
    os << "index,eigenvalue\n";
    for (std::size_t k = 0; k < s.size(); ++k) os << k << ',' << format_double(s[k]) << '\n';
  } else {
    j["kind"] = "hamiltonian";
    Json rows = Json::array();
    Json points = Json::array();
    for (std::size_t i = 0; i < h.dim(); ++i) {
      Json row = Json::array();
      for (std::size_t c = 0; c < h.dim(); ++c) row.push_back(h(i, c));
      rows.push_back(row);
      points.push_back(to_json(box.point_at(i)));
    }
    j["results"] = {{"dim", h.dim()}, {"points", points}, {"matrix", rows}};
    for (std::size_t i = 0; i < h.dim(); ++i) {
      for (std::size_t c = 0; c < h.dim(); ++c) os << (c ? "," : "") << format_double(h(i, c));
      os << '\n';
    }
  }
  if (out.csv()) {
    out.emit(os.str());
  } else {
    out.emit(j);
  }
  return kOk;
}

int run_single(const Options& opt, Output& out) {
  Json raw = load_config(opt.config_path);
  if (opt.seed) raw["master_seed"] = *opt.seed;
  const ExperimentConfig cfg = experiment_config_from_json(raw, ConfigUse::kSingleVolume);
  const SingleVolumeReport r = run_single_volume(cfg, opt.threads);
  if (out.csv()) {
    std::ostringstream os;
    write_csv(r, os);
    out.emit(os.str());
  } else {
    out.emit(to_json(r));
  }
  return r.verdict == Verdict::kHolds ? kOk : kBoundViolated;
}

int run_two(const Options& opt, Output& out) {
  Json raw = load_config(opt.config_path);
  if (opt.seed) raw["master_seed"] = *opt.seed;
  const ExperimentConfig cfg = experiment_config_from_json(raw, ConfigUse::kTwoVolume);
  const TwoVolumeReport r = run_two_volume(cfg, opt.threads);
  if (out.csv()) {
    std::ostringstream os;
    write_csv(r, os);
    out.emit(os.str());
  } else {
    out.emit(to_json(r));
  }
  return r.verdict == Verdict::kHolds ? kOk : kBoundViolated;
}

DomainBox dm_domain(const DistributionSpec& dist) {
  if (const auto* u = std::get_if<UniformLaw>(&dist)) return {u->lo, u->hi};
  if (const auto* g = std::get_if<GaussianLaw>(&dist)) return {g->mean - 4 * g->sigma, g->mean + 4 * g->sigma};
  const auto atoms = atoms_of(dist);
  if (atoms.front().value == atoms.back().value) return {atoms.front().value - 1, atoms.front().value + 1};
  return {atoms.front().value, atoms.back().value};
}

int run_stollmann(const Options& opt, Output& out) {
  const Json raw = load_config(opt.config_path);
  const std::string ctx = "stollmann config";
  for (const auto& [key, value] : raw.items()) {
    static const std::set<std::string> allowed = {"function", "arity", "distribution", "interval",
                                                  "method",   "trials", "master_seed"};
    if (!allowed.count(key)) throw PreconditionError("unknown key '" + key + "' in " + ctx);
  }
  const auto arity = raw.at("arity").get<std::size_t>();
  const DMFunctionSpec f = dm::by_name(raw.at("function").get<std::string>(), arity);
  const DistributionSpec dist = distribution_from_json(raw.at("distribution"));
  const auto iv = raw.at("interval").get<std::vector<double>>();
  if (iv.size() != 2) throw PreconditionError("interval must be [lower, upper]");
  const IntervalSpec interval{iv[0], iv[1]};
  interval.validate();
  const std::string method = raw.at("method").get<std::string>();

  Json j = {{"schema_version", kSchemaVersion}, {"tool_version", kToolVersion}, {"kind", "stollmann"}};
  j["config"] = raw;
  bool holds = false;
  std::ostringstream csv;
  if (method == "exact") {
    const StollmannResult r = stollmann_exact(f, dist, interval);
    holds = r.holds;
    j["master_seed"] = 0;
    j["results"] = {{"probability", r.probability}, {"bound", r.bound}};
    csv << "probability,bound,holds\n"
        << format_double(r.probability) << ',' << format_double(r.bound) << ',' << r.holds << '\n';
  } else if (method == "monte_carlo") {
    std::uint64_t seed = opt.seed ? *opt.seed : raw.at("master_seed").get<std::uint64_t>();
    RngStream check_rng(seed, 1);
    const DMCheckReport dm_report = check_dm_function(f, dm_domain(dist), 10000, check_rng);
    if (!dm_report.passed()) {
      throw PreconditionError("function '" + f.name + "' failed the diagonal-monotonicity check");
    }
    RngStream rng(seed, 0);
    const StollmannMCResult r = stollmann_mc(f, dist, interval, raw.at("trials").get<std::size_t>(), rng);
    holds = r.holds_within_3sigma;
    j["master_seed"] = seed;
    j["results"] = {{"trials", r.trials},       {"hits", r.hits},   {"estimate", r.estimate},
                    {"std_error", r.std_error}, {"bound", r.bound}, {"dm_samples", dm_report.samples}};
    csv << "trials,hits,estimate,std_error,bound,holds\n"
        << r.trials << ',' << r.hits << ',' << format_double(r.estimate) << ',' << format_double(r.std_error)
        << ',' << format_double(r.bound) << ',' << holds << '\n';
  } else {
    throw PreconditionError("method must be 'exact' or 'monte_carlo'");
  }
  j["verdict"] = holds ? "holds" : "violated";
  if (out.csv()) {
    out.emit(csv.str());
  } else {
    out.emit(j);
  }
  return holds ? kOk : kBoundViolated;
}

int run_dm(const Options& opt, Output& out) {
  Json raw = load_config(opt.config_path);
  const auto given = explicit_field(raw);
  const auto trials = take_count(raw, "trials");
  if (!trials) throw PreconditionError("missing required key 'trials' in config");
  ExperimentConfig cfg = experiment_config_from_json(raw, ConfigUse::kHamiltonian);
  if (opt.seed) cfg.master_seed = *opt.seed;
  const HamiltonianSpec spec = cfg.hamiltonian_spec(cfg.center);
  const HamiltonianBuilder builder(spec);
  const PotentialField field = field_for(cfg, builder, given);
  RngStream rng = derive_trial_rng(cfg.master_seed, 0, 1);
  const DMReport r = verify_dm_eigenvalues(spec, field, *trials, rng);
  if (out.csv()) {
    std::ostringstream os;
    write_csv(r, os);
    out.emit(os.str());
  } else {
    Json j = to_json(r);
    j["master_seed"] = cfg.master_seed;
    j["config"] = to_json(cfg);
    j["config"]["trials"] = *trials;
    out.emit(j);
  }
  return r.passed() ? kOk : kBoundViolated;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-volume two-particle Anderson Hamiltonians and Wegner-bound checks", "wegner2p"};
  app.require_subcommand(1);
  Options opt;

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"geometry-classify", "Classify the separation of two boxes"},
      {"build-hamiltonian", "Assemble the finite-volume Hamiltonian matrix"},
      {"spectrum", "Eigenvalues of the finite-volume Hamiltonian"},
      {"wegner-single", "Monte Carlo check of the single-volume Wegner bound"},
      {"wegner-two", "Monte Carlo check of the conditional two-volume Wegner bound"},
      {"stollmann-check", "Exact or Monte Carlo check of the DM concentration lemma"},
      {"dm-check", "Verify eigenvalue diagonal monotonicity under potential shifts"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opt.config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_path, "Report path (default: standard output)");
    sub->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", opt.seed, "Override master_seed");
    sub->add_option("--threads", opt.threads, "Worker threads (speed only)")->check(CLI::PositiveNumber);
  }

  if (args.size() <= 1) {
    err << app.help();
    return kUsageError;
  }
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsageError;
  }

  Output output(opt, out);
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "geometry-classify") return run_geometry(opt, output);
    if (name == "build-hamiltonian") return run_matrix(opt, output, false);
    if (name == "spectrum") return run_matrix(opt, output, true);
    if (name == "wegner-single") return run_single(opt, output);
    if (name == "wegner-two") return run_two(opt, output);
    if (name == "stollmann-check") return run_stollmann(opt, output);
    if (name == "dm-check") return run_dm(opt, output);
  } catch (const TheoremViolation& e) {
    err << "error: " << e.what() << "\n";
    return kBoundViolated;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace wegner2p::cli
