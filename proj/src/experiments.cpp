#include "wegner2p/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "wegner2p/errors.hpp"
#include "wegner2p/spectral.hpp"

namespace wegner2p {

std::string to_string(BoundMode mode) { return mode == BoundMode::kLiteral ? "literal" : "tight"; }

BoundMode bound_mode_from_string(const std::string& name) {
  if (name == "literal") return BoundMode::kLiteral;
  if (name == "tight") return BoundMode::kTight;
  throw PreconditionError("unknown bound mode '" + name + "' (expected literal or tight)");
}

std::string to_string(RandomBox which) { return which == RandomBox::kFirst ? "first" : "second"; }

RandomBox random_box_from_string(const std::string& name) {
  if (name == "first") return RandomBox::kFirst;
  if (name == "second") return RandomBox::kSecond;
  throw PreconditionError("unknown random box '" + name + "' (expected first or second)");
}

std::string to_string(Verdict v) { return v == Verdict::kHolds ? "holds" : "violated"; }

Verdict verdict_from_string(const std::string& name) {
  if (name == "holds") return Verdict::kHolds;
  if (name == "violated") return Verdict::kViolated;
  throw PreconditionError("unknown verdict '" + name + "'");
}

Verdict three_sigma_verdict(double p_hat, double std_error, double bound) {
  return p_hat - 3.0 * std_error <= bound ? Verdict::kHolds : Verdict::kViolated;
}

void ExperimentConfig::validate() const {
  if (dimension == 0) throw PreconditionError("dimension must be >= 1");
  if (radius < 0) throw PreconditionError("radius must be nonnegative");
  if (center.dimension() != dimension) throw PreconditionError("center dimension does not match 'dimension'");
  if (center_prime && center_prime->dimension() != dimension) {
    throw PreconditionError("center_prime dimension does not match 'dimension'");
  }
  if (trials == 0) throw PreconditionError("trials must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw PreconditionError("epsilon must be > 0");
  if (!std::isfinite(coupling)) throw PreconditionError("coupling must be finite");
  if (!std::isfinite(energy)) throw PreconditionError("energy must be finite");
  if (bound_mode == BoundMode::kTight && !(coupling > 0.0)) {
    throw PreconditionError("tight bound mode needs coupling g > 0");
  }
  interaction.validate();
  validate_distribution(distribution);
}

HamiltonianSpec ExperimentConfig::hamiltonian_spec(const PairPoint& c) const {
  return HamiltonianSpec{make_box(c, radius), interaction, coupling, hopping};
}

namespace {

double s_factor(const DistributionSpec& dist, double eps, double g, BoundMode mode, double tight_width) {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be > 0");
  if (mode == BoundMode::kLiteral) return concentration(dist, 2.0 * eps);
  if (!(g > 0.0)) throw PreconditionError("tight bound mode needs coupling g > 0");
  return concentration(dist, tight_width * eps / g);
}

struct TrialError {
  std::size_t index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;
};

}  // namespace

double single_volume_bound(const BoxSpec& box, const DistributionSpec& dist, double eps, double g, BoundMode mode) {
  const double s = s_factor(dist, eps, g, mode, 1.0);
  return static_cast<double>(box.size()) * static_cast<double>(projections(box).union_size) * s;
}

double two_volume_bound(const BoxSpec& box, const BoxSpec& box_prime, const DistributionSpec& dist, double eps,
                        double g, RandomBox which, BoundMode mode) {
  const double s = s_factor(dist, eps, g, mode, 2.0);
  const BoxSpec& random = which == RandomBox::kFirst ? box : box_prime;
  return static_cast<double>(box.size()) * static_cast<double>(box_prime.size()) *
         static_cast<double>(projections(random).union_size) * s;
}

RngStream derive_trial_rng(std::uint64_t master_seed, std::uint64_t round, std::uint64_t trial) {
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 32;
  if (round >= kLimit || trial >= kLimit) throw PreconditionError("round and trial indices must be < 2^32");
  return RngStream(master_seed, (round << 32) | trial);
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  TrialError first;
  std::mutex mu;
  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < first.index) first = {i, std::current_exception()};
        return;
      }
    }
  };
  if (threads == 1) {
    run_chunk(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(run_chunk, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  if (first.error) {
    try {
      std::rethrow_exception(first.error);
    } catch (const std::exception& e) {
      throw std::runtime_error("trial " + std::to_string(first.index) + " failed: " + e.what());
    }
  }
}

std::string field_digest(const std::map<LatticePoint, double>& values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [site, value] : values) {
    for (Coord c : site.coords) mix(static_cast<std::uint64_t>(c));
    mix(std::bit_cast<std::uint64_t>(value));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SingleVolumeReport run_single_volume(const ExperimentConfig& cfg, std::size_t threads) {
  cfg.validate();
  const HamiltonianBuilder builder(cfg.hamiltonian_spec(cfg.center));
  const DistributionSpec law = validate_distribution(cfg.distribution);
  const auto& sites = builder.sites();

  std::vector<double> distances(cfg.trials);
  parallel_for(cfg.trials, threads, [&](std::size_t i) {
    RngStream rng = derive_trial_rng(cfg.master_seed, 0, i);
    const PotentialField field = sample_field(sites, law, rng);
    distances[i] = dist_to_energy(eigenvalues(builder.build(field)), cfg.energy);
  });

  SingleVolumeReport r;
  r.config = cfg;
  r.trials = cfg.trials;
  double sum = 0.0;
  r.min_distance = std::numeric_limits<double>::infinity();
  r.max_distance = 0.0;
  for (double d : distances) {
    r.events += d <= cfg.epsilon;
    sum += d;
    r.min_distance = std::min(r.min_distance, d);
    r.max_distance = std::max(r.max_distance, d);
  }
  const double n = static_cast<double>(r.trials);
  r.mean_distance = sum / n;
  r.empirical_probability = static_cast<double>(r.events) / n;
  r.std_error = std::sqrt(r.empirical_probability * (1.0 - r.empirical_probability) / n);
  r.analytic_bound = single_volume_bound(builder.spec().box, law, cfg.epsilon, cfg.coupling, cfg.bound_mode);
  r.verdict = three_sigma_verdict(r.empirical_probability, r.std_error, r.analytic_bound);
  r.low_power = r.trials < kLowPowerTrials;
  r.trial_distances = std::move(distances);
  return r;
}

RandomBox select_random_box(const SeparationClass& classes) {
  if (classes.empty()) throw TheoremViolation("empty separation classification");
  if (classes.has(Separation::kCompletelySeparated) || classes.has(Separation::kA) ||
      classes.has(Separation::kB)) {
    return RandomBox::kFirst;
  }
  return RandomBox::kSecond;
}

namespace {

std::vector<LatticePoint> all_sites(const BoxSpec& a, const BoxSpec& b) {
  std::vector<LatticePoint> sites = projection_union(a);
  const auto more = projection_union(b);
  sites.insert(sites.end(), more.begin(), more.end());
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

void require_two_volume(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.center_prime) throw PreconditionError("two-volume experiment needs center_prime");
  if (!distance_condition(cfg.center, *cfg.center_prime, cfg.radius)) {
    throw PreconditionError("centers " + to_string(cfg.center) + " and " + to_string(*cfg.center_prime) +
                            " violate the distance condition min(|u-u'|, |S(u)-u'|) >= 8L for L=" + std::to_string(cfg.radius));
  }
}

}  // namespace

TwoVolumeReport run_two_volume(const ExperimentConfig& cfg, std::size_t threads) {
  require_two_volume(cfg);
  if (cfg.conditioning_rounds == 0) throw PreconditionError("conditioning_rounds must be >= 1");
  const PairPoint& u = cfg.center;
  const PairPoint& u_prime = *cfg.center_prime;

  TwoVolumeReport report;
  report.config = cfg;
  report.separation = classify_separation(u, u_prime, cfg.radius);
  if (report.separation.empty()) {
    throw TheoremViolation("separation classification is empty for centers " + to_string(u) + " and " +
                           to_string(u_prime) + " at L=" + std::to_string(cfg.radius));
  }
  report.random_box = select_random_box(report.separation);

  const DistributionSpec law = validate_distribution(cfg.distribution);
  const bool first_random = report.random_box == RandomBox::kFirst;
  const HamiltonianBuilder random_builder(cfg.hamiltonian_spec(first_random ? u : u_prime));
  const HamiltonianBuilder frozen_builder(cfg.hamiltonian_spec(first_random ? u_prime : u));
  const std::vector<LatticePoint> sites = all_sites(random_builder.spec().box, frozen_builder.spec().box);
  const std::vector<LatticePoint>& frozen_sites = frozen_builder.sites();

  report.analytic_bound = two_volume_bound(make_box(u, cfg.radius), make_box(u_prime, cfg.radius), law, cfg.epsilon,
                                           cfg.coupling, report.random_box, cfg.bound_mode);

  for (std::size_t r = 1; r <= cfg.conditioning_rounds; ++r) {
    RngStream crng = derive_trial_rng(cfg.master_seed, r, 0);
    const std::map<LatticePoint, double> frozen = sample_field(frozen_sites, law, crng).values();
    // the conditioning box sees only frozen sites, so its spectrum is fixed for the round
    const Spectrum fixed = eigenvalues(frozen_builder.build(PotentialField(frozen)));

    std::vector<char> hit(cfg.trials);
    parallel_for(cfg.trials, threads, [&](std::size_t j) {
      RngStream rng = derive_trial_rng(cfg.master_seed, r, j + 1);
      const PotentialField field = sample_field(sites, law, rng, frozen);
      const Spectrum random = eigenvalues(random_builder.build(field));
      hit[j] = dist_between_spectra(random, fixed) <= cfg.epsilon;
    });

    TwoVolumeRound round;
    round.round = r;
    round.frozen_digest = field_digest(frozen);
    round.trials = cfg.trials;
    round.events = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
    const double n = static_cast<double>(round.trials);
    round.conditional_probability = static_cast<double>(round.events) / n;
    round.std_error = std::sqrt(round.conditional_probability * (1.0 - round.conditional_probability) / n);
    round.bound = report.analytic_bound;
    round.verdict = three_sigma_verdict(round.conditional_probability, round.std_error, round.bound);
    if (round.verdict == Verdict::kViolated) report.verdict = Verdict::kViolated;
    report.rounds.push_back(std::move(round));
  }
  return report;
}

ProbabilityEstimate estimate_two_volume_unconditional(const ExperimentConfig& cfg, std::size_t threads) {
  require_two_volume(cfg);
  const DistributionSpec law = validate_distribution(cfg.distribution);
  const HamiltonianBuilder a(cfg.hamiltonian_spec(cfg.center));
  const HamiltonianBuilder b(cfg.hamiltonian_spec(*cfg.center_prime));
  const std::vector<LatticePoint> sites = all_sites(a.spec().box, b.spec().box);

  std::vector<char> hit(cfg.trials);
  parallel_for(cfg.trials, threads, [&](std::size_t i) {
    RngStream rng = derive_trial_rng(cfg.master_seed, 0, i);
    const PotentialField field = sample_field(sites, law, rng);
    hit[i] = dist_between_spectra(eigenvalues(a.build(field)), eigenvalues(b.build(field))) <= cfg.epsilon;
  });

  ProbabilityEstimate e;
  e.trials = cfg.trials;
  e.events = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  const double n = static_cast<double>(e.trials);
  e.probability = static_cast<double>(e.events) / n;
  e.std_error = std::sqrt(e.probability * (1.0 - e.probability) / n);
  return e;
}

}  // namespace wegner2p
