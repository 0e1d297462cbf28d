#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wegner2p/geometry.hpp"

namespace wegner2p {

struct UniformLaw {
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const UniformLaw&) const = default;
};

struct GaussianLaw {
  double mean = 0.0;
  double sigma = 1.0;
  bool operator==(const GaussianLaw&) const = default;
};

/// Two-point law: values[1] with probability p, values[0] otherwise.
struct BernoulliLaw {
  double p = 0.5;
  double values[2] = {0.0, 1.0};
  bool operator==(const BernoulliLaw&) const = default;
};

struct Atom {
  double value = 0.0;
  double probability = 0.0;
  bool operator==(const Atom&) const = default;
};

struct DiscreteLaw {
  std::vector<Atom> atoms;
  bool operator==(const DiscreteLaw&) const = default;
};

/// The single-site law F of the IID external potential.
using DistributionSpec = std::variant<UniformLaw, GaussianLaw, BernoulliLaw, DiscreteLaw>;

std::string kind_name(const DistributionSpec& dist);

/// Checks the parameters and returns the normalized law: discrete atoms
/// sorted by value with duplicate values merged. Throws PreconditionError on
/// sigma <= 0, lo >= hi, negative weights or weights not summing to 1 within 1e-12.
DistributionSpec validate_distribution(const DistributionSpec& dist);

/// Atoms of a purely atomic law (Bernoulli or discrete), sorted and merged.
std::vector<Atom> atoms_of(const DistributionSpec& dist);

/// Concentration function s(F, eps) = sup_a P(a < V <= a + eps), exact.
double concentration(const DistributionSpec& dist, double eps);

double gaussian_cdf(double x);

/// A reproducible random stream identified by (master_seed, stream_index).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq from the four
/// 32-bit halves of the two identifiers; both algorithms are fully specified
/// by the standard, so sequences are identical across platforms. Variates are
/// produced by explicit transforms rather than the implementation-defined
/// <random> distributions.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on (0, 1].
  double uniform_open0();
  double standard_normal();
  std::size_t index_below(std::size_t n);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

double sample(const DistributionSpec& dist, RngStream& rng);

/// Realized potential V(x; omega) on a finite site set, with the subset of
/// sites whose values were held fixed (conditioned on) when it was sampled.
class PotentialField {
 public:
  PotentialField() = default;
  explicit PotentialField(std::map<LatticePoint, double> values, std::set<LatticePoint> frozen = {});

  const std::map<LatticePoint, double>& values() const { return values_; }
  const std::set<LatticePoint>& frozen() const { return frozen_; }
  bool contains(const LatticePoint& site) const { return values_.count(site) != 0; }
  /// Throws PreconditionError if the site is not in the domain.
  double at(const LatticePoint& site) const;
  std::size_t size() const { return values_.size(); }

  /// V + t at every site.
  PotentialField shifted(double t) const;
  /// V with the value at `site` replaced.
  PotentialField with_value(const LatticePoint& site, double value) const;
  /// The values restricted to the frozen set, suitable for re-freezing.
  std::map<LatticePoint, double> frozen_values() const;

  bool operator==(const PotentialField&) const = default;

 private:
  std::map<LatticePoint, double> values_;
  std::set<LatticePoint> frozen_;
};

/// Fresh IID draws at every site not in `frozen`, consumed in the order of
/// `sites`; frozen sites keep their given values exactly.
PotentialField sample_field(std::span<const LatticePoint> sites, const DistributionSpec& dist,
                            RngStream& rng, const std::map<LatticePoint, double>& frozen = {});

}  // namespace wegner2p
