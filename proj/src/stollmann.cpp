#include "wegner2p/stollmann.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wegner2p/errors.hpp"

namespace wegner2p {

namespace dm {

DMFunctionSpec sum(std::size_t arity) {
  return {arity, [](std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }, "sum"};
}

DMFunctionSpec max(std::size_t arity) {
  return {arity, [](std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }, "max"};
}

DMFunctionSpec first(std::size_t arity) {
  return {arity, [](std::span<const double> v) { return v[0]; }, "first"};
}

DMFunctionSpec negated_first(std::size_t arity) {
  return {arity, [](std::span<const double> v) { return -v[0]; }, "negated_first"};
}

DMFunctionSpec weighted_sum(std::vector<double> coefficients) {
  const std::size_t p = coefficients.size();
  if (p == 0) throw PreconditionError("weighted sum needs at least one coefficient");
  for (double c : coefficients) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw PreconditionError("weighted sum coefficients must be finite and >= 0");
  }
  return {p,
          [c = std::move(coefficients)](std::span<const double> v) {
            double s = 0.0;
            for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * v[j];
            return s;
          },
          "weighted_sum"};
}

DMFunctionSpec order_statistic(std::size_t k, std::vector<double> shifts) {
  const std::size_t p = shifts.size();
  if (k >= p) throw PreconditionError("order statistic index out of range");
  return {p,
          [k, w = std::move(shifts)](std::span<const double> v) {
            std::vector<double> x(w.size());
            for (std::size_t j = 0; j < w.size(); ++j) x[j] = v[j] + w[j];
            std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
            return x[k];
          },
          "order_statistic_" + std::to_string(k)};
}

DMFunctionSpec plus_constant(DMFunctionSpec f, double c) {
  auto inner = f.evaluator;
  return {f.arity, [inner, c](std::span<const double> v) { return inner(v) + c; }, f.name + "+const"};
}

DMFunctionSpec translated(DMFunctionSpec f, std::vector<double> w) {
  if (w.size() != f.arity) throw PreconditionError("translation vector has wrong length");
  auto inner = f.evaluator;
  return {f.arity,
          [inner, w = std::move(w)](std::span<const double> v) {
            std::vector<double> x(v.begin(), v.end());
            for (std::size_t j = 0; j < x.size(); ++j) x[j] += w[j];
            return inner(x);
          },
          f.name + "@shift"};
}

DMFunctionSpec by_name(const std::string& name, std::size_t arity) {
  if (arity == 0) throw PreconditionError("function arity must be >= 1");
  if (name == "sum") return sum(arity);
  if (name == "max") return max(arity);
  if (name == "first") return first(arity);
  if (name == "negated_first") return negated_first(arity);
  throw PreconditionError("unknown function '" + name + "' (expected sum, max, first, negated_first)");
}

}  // namespace dm

void IntervalSpec::validate() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw PreconditionError("interval needs finite lower < upper");
  }
}

DMCheckReport check_dm_function(const DMFunctionSpec& f, DomainBox domain, std::size_t samples, RngStream& rng) {
  if (samples == 0) throw PreconditionError("DM check needs at least one sample");
  if (f.arity == 0) throw PreconditionError("function arity must be >= 1");
  if (!(domain.lo < domain.hi)) throw PreconditionError("DM check domain needs lo < hi");
  const std::size_t p = f.arity;
  const double width = domain.hi - domain.lo;
  DMCheckReport report;
  report.samples = samples;
  std::vector<double> v(p), w(p);
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& x : v) x = domain.lo + width * rng.uniform01();
    const double base = f(v);

    for (std::size_t j = 0; j < p; ++j) w[j] = v[j] + width * rng.uniform01();
    const double raised = f(w);
    const double tol_m = 1e-12 * (1.0 + std::abs(base) + std::abs(raised));
    if (raised < base - tol_m) {
      if (report.monotonicity_violations++ == 0) report.monotonicity_witness = v;
    }

    const double t = width * rng.uniform_open0();
    for (std::size_t j = 0; j < p; ++j) w[j] = v[j] + t;
    const double diag = f(w);
    const double tol_d = 1e-12 * (1.0 + std::abs(base) + std::abs(diag));
    if (diag - base < t - tol_d) {
      if (report.diagonal_violations++ == 0) report.diagonal_witness = v;
    }
  }
  return report;
}

StollmannResult stollmann_exact(const DMFunctionSpec& f, const DistributionSpec& law, const IntervalSpec& interval) {
  interval.validate();
  const std::vector<Atom> atoms = atoms_of(validate_distribution(law));
  const std::size_t p = f.arity;
  if (p == 0) throw PreconditionError("function arity must be >= 1");
  double tuples = std::pow(static_cast<double>(atoms.size()), static_cast<double>(p));
  if (tuples > 1e7) throw PreconditionError("enumeration of " + std::to_string(tuples) + " tuples exceeds 1e7");

  if (atoms.size() > 1) {
    RngStream check_rng(0x57011a, 0);
    const auto dm_report = check_dm_function(f, {atoms.front().value, atoms.back().value}, 2000, check_rng);
    if (!dm_report.passed()) {
      throw PreconditionError("function '" + f.name + "' is not diagonally monotone on the atom range");
    }
  }

  std::vector<std::size_t> idx(p, 0);
  std::vector<double> v(p, atoms[0].value);
  double probability = 0.0;
  while (true) {
    double weight = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      v[j] = atoms[idx[j]].value;
      weight *= atoms[idx[j]].probability;
    }
    if (interval.contains(f(v))) probability += weight;
    std::size_t j = p;
    while (j-- > 0) {
      if (++idx[j] < atoms.size()) break;
      idx[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }

  StollmannResult r;
  r.probability = probability;
  r.bound = static_cast<double>(p) * concentration(law, interval.length());
  r.holds = r.probability <= r.bound + 1e-12;
  return r;
}

StollmannMCResult stollmann_mc(const DMFunctionSpec& f, const DistributionSpec& dist, const IntervalSpec& interval,
                               std::size_t trials, RngStream& rng) {
  interval.validate();
  if (trials < 1000) throw PreconditionError("Monte Carlo check needs at least 1000 trials");
  const DistributionSpec law = validate_distribution(dist);
  std::vector<double> v(f.arity);
  StollmannMCResult r;
  r.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    for (auto& x : v) x = sample(law, rng);
    if (interval.contains(f(v))) ++r.hits;
  }
  const double n = static_cast<double>(trials);
  r.estimate = static_cast<double>(r.hits) / n;
  r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / n);
  r.bound = static_cast<double>(f.arity) * concentration(law, interval.length());
  r.holds_within_3sigma = r.estimate - 3.0 * r.std_error <= r.bound;
  return r;
}

LayerCheckResult layer_sets_check(const DMFunctionSpec& f, const LayerGrid& grid, const IntervalSpec& interval) {
  interval.validate();
  const std::size_t p = f.arity;
  if (p == 0) throw PreconditionError("function arity must be >= 1");
  if (!(grid.step > 0.0) || grid.points == 0) throw PreconditionError("grid needs step > 0 and points >= 1");
  const double ratio = interval.length() / grid.step;
  const auto k = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(k)) > 1e-9 * std::max(1.0, ratio)) {
    throw PreconditionError("interval length must be a multiple of the grid step");
  }
  // extended axis: indices 0..n-1 map to lo + (i - k) * step
  const std::size_t n = grid.points + k;
  const double total = std::pow(static_cast<double>(n), static_cast<double>(p));
  if (total > 1e6) throw PreconditionError("layer grid of " + std::to_string(total) + " points exceeds 1e6");
  const auto size = static_cast<std::size_t>(total);

  std::vector<std::size_t> stride(p, 1);
  for (std::size_t j = p - 1; j-- > 0;) stride[j] = stride[j + 1] * n;
  auto coords_of = [&](std::size_t flat) {
    std::vector<double> v(p);
    for (std::size_t j = 0; j < p; ++j) {
      const std::size_t i = (flat / stride[j]) % n;
      v[j] = grid.lo + (static_cast<double>(i) - static_cast<double>(k)) * grid.step;
    }
    return v;
  };

  std::vector<double> values(size);
  std::vector<std::vector<char>> layers(p + 1, std::vector<char>(size, 0));
  for (std::size_t flat = 0; flat < size; ++flat) {
    values[flat] = f(coords_of(flat));
    // absorbs rounding in lo + i * step so exact-arithmetic ties stay in A
    layers[0][flat] = values[flat] <= interval.lower + 1e-12 * (1.0 + std::abs(interval.lower));
  }
  for (std::size_t j = 1; j <= p; ++j) {
    const std::size_t axis = j - 1;
    for (std::size_t flat = 0; flat < size; ++flat) {
      const std::size_t i = (flat / stride[axis]) % n;
      char in = 0;
      for (std::size_t s = 0; s <= std::min(k, i) && !in; ++s) in = layers[j - 1][flat - s * stride[axis]];
      layers[j][flat] = in;
    }
  }

  LayerCheckResult result;
  result.chain_holds = true;
  for (std::size_t j = 0; j <= p; ++j) {
    result.layer_sizes.push_back(static_cast<std::size_t>(std::count(layers[j].begin(), layers[j].end(), 1)));
    if (j == 0) continue;
    for (std::size_t flat = 0; flat < size; ++flat) {
      if (layers[j - 1][flat] && !layers[j][flat]) result.chain_holds = false;
    }
  }
  // inclusion on the original (non-extended) grid only
  for (std::size_t flat = 0; flat < size; ++flat) {
    bool original = true;
    for (std::size_t j = 0; j < p; ++j) original = original && (flat / stride[j]) % n >= k;
    if (!original || !(values[flat] < interval.upper) || layers[p][flat]) continue;
    if (result.inclusion_failures++ == 0) result.witness = coords_of(flat);
  }
  result.inclusion_holds = result.inclusion_failures == 0;
  return result;
}

}  // namespace wegner2p
