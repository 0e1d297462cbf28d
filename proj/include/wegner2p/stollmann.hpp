#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wegner2p/potential.hpp"

namespace wegner2p {

/// A scalar function on R^p that is claimed to be diagonally monotone:
/// nondecreasing in every coordinate and Phi(v + t e) - Phi(v) >= t along
/// the all-ones direction e.
struct DMFunctionSpec {
  std::size_t arity = 0;
  std::function<double(std::span<const double>)> evaluator;
  std::string name;

  double operator()(std::span<const double> v) const { return evaluator(v); }
};

namespace dm {

DMFunctionSpec sum(std::size_t arity);
DMFunctionSpec max(std::size_t arity);
/// Phi(v) = v_1.
DMFunctionSpec first(std::size_t arity);
/// Phi(v) = -v_1; not DM, used as a negative control.
DMFunctionSpec negated_first(std::size_t arity);
/// sum_j c_j v_j with c_j >= 0 and sum_j c_j >= 1.
DMFunctionSpec weighted_sum(std::vector<double> coefficients);
/// k-th smallest (0-based) of v_j + w_j.
DMFunctionSpec order_statistic(std::size_t k, std::vector<double> shifts);
DMFunctionSpec plus_constant(DMFunctionSpec f, double c);
/// v -> Phi(v + w).
DMFunctionSpec translated(DMFunctionSpec f, std::vector<double> w);

/// Built-in functions by name: sum, max, first, negated_first.
DMFunctionSpec by_name(const std::string& name, std::size_t arity);

}  // namespace dm

/// Open interval (lower, upper) of length eps = upper - lower > 0.
struct IntervalSpec {
  double lower = 0.0;
  double upper = 0.0;

  double length() const { return upper - lower; }
  bool contains(double x) const { return lower < x && x < upper; }
  /// Throws PreconditionError unless lower < upper (both finite).
  void validate() const;
};

struct DomainBox {
  double lo = 0.0;
  double hi = 1.0;
};

struct DMCheckReport {
  std::size_t samples = 0;
  std::size_t monotonicity_violations = 0;
  std::size_t diagonal_violations = 0;
  /// first witness of each kind (empty if none)
  std::vector<double> monotonicity_witness;
  std::vector<double> diagonal_witness;

  bool passed() const { return monotonicity_violations == 0 && diagonal_violations == 0; }
};

/// Sampling semidecision for the DM property: draws v uniformly in the
/// domain box (every coordinate), r uniformly in [0, hi - lo]^p and t in
/// (0, hi - lo], and counts violations beyond 1e-12 (scaled by magnitude).
/// "passed" means no violation was found in the sample budget.
DMCheckReport check_dm_function(const DMFunctionSpec& f, DomainBox domain, std::size_t samples, RngStream& rng);

struct StollmannResult {
  double probability = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// Exact mu^p{Phi in I} for an atomic law by enumerating all atom tuples,
/// against the bound p * s(mu, eps). Throws PreconditionError if the law is
/// not atomic, the interval is degenerate, atoms^p > 1e7, or the function
/// fails the DM sampling check on the atom range.
StollmannResult stollmann_exact(const DMFunctionSpec& f, const DistributionSpec& atoms, const IntervalSpec& interval);

struct StollmannMCResult {
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool holds_within_3sigma = false;
  std::size_t trials = 0;
  std::size_t hits = 0;
};

/// Monte Carlo estimate of mu^p{Phi in I}; requires at least 1000 trials.
StollmannMCResult stollmann_mc(const DMFunctionSpec& f, const DistributionSpec& dist, const IntervalSpec& interval,
                               std::size_t trials, RngStream& rng);

/// Uniform grid lo + i * step, i = 0..points-1, on every coordinate.
struct LayerGrid {
  double lo = 0.0;
  double step = 1.0;
  std::size_t points = 2;
};

struct LayerCheckResult {
  bool chain_holds = false;
  bool inclusion_holds = false;
  std::size_t inclusion_failures = 0;
  std::vector<double> witness;
  /// grid-point counts of A = A_0, A_1, ..., A_p
  std::vector<std::size_t> layer_sizes;

  bool passed() const { return chain_holds && inclusion_holds; }
};

/// Builds A = {Phi <= a} and A_j = A_{j-1} + [0, eps] e_j on the grid and
/// checks A_0 ⊆ A_1 ⊆ ... ⊆ A_p and {Phi < b} ⊆ A_p. The grid is extended
/// downward by eps on every axis so that v - eps e stays representable for
/// every checked point v. eps must be a multiple of the step.
LayerCheckResult layer_sets_check(const DMFunctionSpec& f, const LayerGrid& grid, const IntervalSpec& interval);

}  // namespace wegner2p
