#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wegner2p/geometry.hpp"
#include "wegner2p/hamiltonian.hpp"
#include "wegner2p/potential.hpp"

namespace wegner2p {

/// How the concentration factor of a Wegner bound is evaluated.
///  - kLiteral: s(2 eps), as stated for the bound.
///  - kTight:   rescaled by the coupling, from the exact eigenvalue shift
///              lambda_k(v + t) = lambda_k(v) + 2gt. Single volume: s(eps / g).
///              Two volumes: s(2 eps / g), since conditioning can leave only
///              one particle's cube random and the shift rate drops to g.
enum class BoundMode { kLiteral, kTight };

std::string to_string(BoundMode mode);
BoundMode bound_mode_from_string(const std::string& name);

/// Which box of a two-volume pair carries the randomness; the other box's
/// projection sites are frozen (conditioned on).
enum class RandomBox { kFirst, kSecond };

std::string to_string(RandomBox which);
RandomBox random_box_from_string(const std::string& name);

struct ExperimentConfig {
  std::size_t dimension = 1;
  Coord radius = 0;
  PairPoint center;
  std::optional<PairPoint> center_prime;
  InteractionSpec interaction = InteractionSpec::none(1);
  double coupling = 1.0;
  DistributionSpec distribution = UniformLaw{};
  double energy = 0.0;
  double epsilon = 0.0;
  std::size_t trials = 0;
  std::size_t conditioning_rounds = 0;
  std::uint64_t master_seed = 0;
  BoundMode bound_mode = BoundMode::kLiteral;
  HoppingNorm hopping = HoppingNorm::kSup;

  /// Throws PreconditionError on N = 0, eps <= 0, dimension mismatch, a bad
  /// distribution or interaction, or kTight with g <= 0. Two-volume checks
  /// (center_prime present, distance condition) live in run_two_volume.
  void validate() const;
  HamiltonianSpec hamiltonian_spec(const PairPoint& c) const;
};

/// |Lambda| * |Pi_1 ∪ Pi_2| * s-factor.
double single_volume_bound(const BoxSpec& box, const DistributionSpec& dist, double eps, double g, BoundMode mode);

/// |Lambda(u)| * |Lambda(u')| * |Pi_1 ∪ Pi_2 of the random box| * s-factor.
double two_volume_bound(const BoxSpec& box, const BoxSpec& box_prime, const DistributionSpec& dist, double eps,
                        double g, RandomBox which, BoundMode mode);

/// Stream for trial `trial` of conditioning round `round`: stream index
/// round * 2^32 + trial. Round 0 holds unconditioned runs, so trial i of a
/// single-volume run uses stream index i. Both arguments must be < 2^32.
RngStream derive_trial_rng(std::uint64_t master_seed, std::uint64_t round, std::uint64_t trial);

enum class Verdict { kHolds, kViolated };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& name);

/// One-sided 3 sigma check: holds iff p_hat - 3 sigma <= bound.
Verdict three_sigma_verdict(double p_hat, double std_error, double bound);

/// Runs below this many trials are flagged as low power.
inline constexpr std::size_t kLowPowerTrials = 100;

struct SingleVolumeReport {
  ExperimentConfig config;
  std::size_t trials = 0;
  std::size_t events = 0;
  double empirical_probability = 0.0;
  double std_error = 0.0;
  double analytic_bound = 0.0;
  Verdict verdict = Verdict::kHolds;
  bool low_power = false;
  double min_distance = 0.0;
  double mean_distance = 0.0;
  double max_distance = 0.0;
  /// dist[Sigma(H), E] for each trial, in trial order
  std::vector<double> trial_distances;
};

/// Monte Carlo estimate of P(dist[Sigma(H_Lambda), E] <= eps) against
/// single_volume_bound. Trial i draws a fresh field on Pi_1 ∪ Pi_2 from
/// derive_trial_rng(seed, 0, i). `threads` affects speed only.
SingleVolumeReport run_single_volume(const ExperimentConfig& cfg, std::size_t threads = 1);

struct TwoVolumeRound {
  std::size_t round = 0;
  std::string frozen_digest;
  std::size_t trials = 0;
  std::size_t events = 0;
  double conditional_probability = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  Verdict verdict = Verdict::kHolds;
};

struct TwoVolumeReport {
  ExperimentConfig config;
  SeparationClass separation;
  RandomBox random_box = RandomBox::kFirst;
  double analytic_bound = 0.0;
  std::vector<TwoVolumeRound> rounds;
  Verdict verdict = Verdict::kHolds;
};

/// CompletelySeparated, A or B -> the first box is random; only C and/or D
/// -> the second box is random.
RandomBox select_random_box(const SeparationClass& classes);

/// Conditional two-volume experiment. For each round r = 1..M the potential
/// on the conditioning box's projections is drawn from
/// derive_trial_rng(seed, r, 0) and frozen; inner trials j = 1..N resample
/// the remaining sites from derive_trial_rng(seed, r, j) and count
/// dist[Sigma(H_Lambda(u)), Sigma(H_Lambda(u'))] <= eps. Throws
/// PreconditionError if the distance condition fails and TheoremViolation
/// if the separation classification is empty.
TwoVolumeReport run_two_volume(const ExperimentConfig& cfg, std::size_t threads = 1);

struct ProbabilityEstimate {
  std::size_t trials = 0;
  std::size_t events = 0;
  double probability = 0.0;
  double std_error = 0.0;
};

/// Unconditional P(dist between the two spectra <= eps): every site of the
/// four projections drawn fresh per trial (round 0 streams).
ProbabilityEstimate estimate_two_volume_unconditional(const ExperimentConfig& cfg, std::size_t threads = 1);

/// Calls fn(i) for i in [0, n) on up to `threads` workers with static
/// chunking. fn must write only to slot i of preallocated output.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// FNV-1a over the (site, value bit pattern) pairs of a frozen field.
std::string field_digest(const std::map<LatticePoint, double>& values);

}  // namespace wegner2p
