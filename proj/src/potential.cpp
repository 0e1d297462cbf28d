#include "wegner2p/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wegner2p/errors.hpp"

namespace wegner2p {

namespace {

constexpr double kNormalizationTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw PreconditionError("discrete law needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!std::isfinite(a.value) || !std::isfinite(a.probability)) {
      throw PreconditionError("discrete atom values and weights must be finite");
    }
    if (a.probability < 0.0) throw PreconditionError("negative atom probability");
    total += a.probability;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw PreconditionError("atom probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().value == a.value) {
      merged.back().probability += a.probability;
    } else {
      merged.push_back(a);
    }
  }
  return merged;
}

// sup over windows (x_j - eps, x_j]: some optimal window has its right end on an atom.
double atomic_concentration(const std::vector<Atom>& atoms, double eps) {
  if (eps <= 0.0) return 0.0;
  double best = 0.0;
  double window = 0.0;
  std::size_t left = 0;
  for (std::size_t right = 0; right < atoms.size(); ++right) {
    window += atoms[right].probability;
    while (atoms[left].value <= atoms[right].value - eps) window -= atoms[left++].probability;
    best = std::max(best, window);
  }
  return std::min(best, 1.0);
}

}  // namespace

std::string kind_name(const DistributionSpec& dist) {
  return std::visit(overloaded{[](const UniformLaw&) { return std::string("uniform"); },
                               [](const GaussianLaw&) { return std::string("gaussian"); },
                               [](const BernoulliLaw&) { return std::string("bernoulli"); },
                               [](const DiscreteLaw&) { return std::string("discrete"); }},
                    dist);
}

DistributionSpec validate_distribution(const DistributionSpec& dist) {
  return std::visit(
      overloaded{
          [](const UniformLaw& u) -> DistributionSpec {
            if (!std::isfinite(u.lo) || !std::isfinite(u.hi) || !(u.lo < u.hi)) {
              throw PreconditionError("uniform law needs finite lo < hi");
            }
            return u;
          },
          [](const GaussianLaw& g) -> DistributionSpec {
            if (!std::isfinite(g.mean) || !std::isfinite(g.sigma) || !(g.sigma > 0.0)) {
              throw PreconditionError("gaussian law needs finite mean and sigma > 0");
            }
            return g;
          },
          [](const BernoulliLaw& b) -> DistributionSpec {
            if (!(b.p >= 0.0 && b.p <= 1.0)) throw PreconditionError("bernoulli p must lie in [0, 1]");
            if (!std::isfinite(b.values[0]) || !std::isfinite(b.values[1])) {
              throw PreconditionError("bernoulli values must be finite");
            }
            return b;
          },
          [](const DiscreteLaw& d) -> DistributionSpec { return DiscreteLaw{merge_atoms(d.atoms)}; }},
      dist);
}

std::vector<Atom> atoms_of(const DistributionSpec& dist) {
  if (const auto* b = std::get_if<BernoulliLaw>(&dist)) {
    return merge_atoms({{b->values[0], 1.0 - b->p}, {b->values[1], b->p}});
  }
  if (const auto* d = std::get_if<DiscreteLaw>(&dist)) return merge_atoms(d->atoms);
  throw PreconditionError(kind_name(dist) + " law is not atomic");
}

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double concentration(const DistributionSpec& dist, double eps) {
  if (!(eps >= 0.0)) throw PreconditionError("concentration needs eps >= 0");
  const DistributionSpec law = validate_distribution(dist);
  return std::visit(
      overloaded{[&](const UniformLaw& u) { return std::min(1.0, eps / (u.hi - u.lo)); },
                 // unimodal and symmetric: the centered window is optimal
                 [&](const GaussianLaw& g) { return std::erf(eps / (2.0 * g.sigma * std::numbers::sqrt2)); },
                 [&](const BernoulliLaw&) { return atomic_concentration(atoms_of(law), eps); },
                 [&](const DiscreteLaw& d) { return atomic_concentration(d.atoms, eps); }},
      law);
}

// ---------------------------------------------------------------------------
// RngStream

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_index), static_cast<std::uint32_t>(stream_index >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RngStream::uniform_open0() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

double RngStream::standard_normal() {
  // Box-Muller, one variate per call
  const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
  return r * std::cos(2.0 * std::numbers::pi * uniform01());
}

std::size_t RngStream::index_below(std::size_t n) {
  if (n == 0) throw PreconditionError("index_below(0)");
  return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
}

double sample(const DistributionSpec& dist, RngStream& rng) {
  return std::visit(overloaded{[&](const UniformLaw& u) { return u.lo + (u.hi - u.lo) * rng.uniform01(); },
                               [&](const GaussianLaw& g) { return g.mean + g.sigma * rng.standard_normal(); },
                               [&](const BernoulliLaw& b) { return rng.uniform01() < b.p ? b.values[1] : b.values[0]; },
                               [&](const DiscreteLaw& d) {
                                 const double x = rng.uniform01();
                                 double acc = 0.0;
                                 for (const auto& a : d.atoms) {
                                   acc += a.probability;
                                   if (x < acc) return a.value;
                                 }
                                 return d.atoms.back().value;
                               }},
                    dist);
}

// ---------------------------------------------------------------------------
// PotentialField

PotentialField::PotentialField(std::map<LatticePoint, double> values, std::set<LatticePoint> frozen)
    : values_(std::move(values)), frozen_(std::move(frozen)) {
  for (const auto& s : frozen_) {
    if (!values_.count(s)) throw PreconditionError("frozen site " + to_string(s) + " has no value");
  }
}

double PotentialField::at(const LatticePoint& site) const {
  auto it = values_.find(site);
  if (it == values_.end()) throw PreconditionError("no potential value at site " + to_string(site));
  return it->second;
}

PotentialField PotentialField::shifted(double t) const {
  auto v = values_;
  for (auto& [site, value] : v) value += t;
  return PotentialField(std::move(v), frozen_);
}

PotentialField PotentialField::with_value(const LatticePoint& site, double value) const {
  if (!contains(site)) throw PreconditionError("no potential value at site " + to_string(site));
  auto v = values_;
  v[site] = value;
  return PotentialField(std::move(v), frozen_);
}

std::map<LatticePoint, double> PotentialField::frozen_values() const {
  std::map<LatticePoint, double> out;
  for (const auto& s : frozen_) out.emplace(s, values_.at(s));
  return out;
}

PotentialField sample_field(std::span<const LatticePoint> sites, const DistributionSpec& dist, RngStream& rng,
                            const std::map<LatticePoint, double>& frozen) {
  std::map<LatticePoint, double> values;
  for (const auto& site : sites) {
    if (values.count(site)) throw PreconditionError("duplicate site " + to_string(site));
    values.emplace(site, 0.0);
  }
  std::set<LatticePoint> frozen_sites;
  for (const auto& [site, value] : frozen) {
    if (!values.count(site)) throw PreconditionError("frozen site " + to_string(site) + " is outside the site set");
    frozen_sites.insert(site);
  }
  for (const auto& site : sites) {
    auto f = frozen.find(site);
    values[site] = f != frozen.end() ? f->second : sample(dist, rng);
  }
  return PotentialField(std::move(values), std::move(frozen_sites));
}

}  // namespace wegner2p
