#include "wegner2p/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "wegner2p/errors.hpp"

namespace wegner2p {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (!std::is_sorted(values_.begin(), values_.end())) throw PreconditionError("spectrum must be sorted ascending");
}

Spectrum eigenvalues(const SymmetricMatrix& m) {
  if (!m.matrix().allFinite()) throw PreconditionError("matrix has non-finite entries");
  if (m.dim() == 0) return Spectrum{};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  std::vector<double> values(ev.data(), ev.data() + ev.size());
  std::sort(values.begin(), values.end());
  return Spectrum(std::move(values));
}

double max_eigen_residual(const SymmetricMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix(), Eigen::ComputeEigenvectors);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const Eigen::VectorXd v = solver.eigenvectors().col(k);
    worst = std::max(worst, (m.matrix() * v - solver.eigenvalues()(k) * v).norm());
  }
  return worst;
}

double dist_to_energy(const Spectrum& spectrum, double energy) {
  if (spectrum.empty()) throw PreconditionError("distance to an empty spectrum");
  const auto& v = spectrum.values();
  auto it = std::lower_bound(v.begin(), v.end(), energy);
  double best = std::numeric_limits<double>::infinity();
  if (it != v.end()) best = *it - energy;
  if (it != v.begin()) best = std::min(best, energy - *std::prev(it));
  return best;
}

double dist_between_spectra(const Spectrum& a, const Spectrum& b) {
  if (a.empty() || b.empty()) throw PreconditionError("distance between spectra needs nonempty inputs");
  const auto& x = a.values();
  const auto& y = b.values();
  double best = std::numeric_limits<double>::infinity();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    best = std::min(best, std::abs(x[i] - y[j]));
    if (x[i] < y[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return best;
}

DMReport verify_dm_eigenvalues(const HamiltonianSpec& spec, const PotentialField& field, std::size_t trials,
                               RngStream& rng) {
  if (!(spec.coupling >= 0.0)) throw PreconditionError("DM verification needs coupling g >= 0");
  if (trials == 0) throw PreconditionError("DM verification needs at least one trial");
  const HamiltonianBuilder builder(spec);
  const std::vector<double> base = builder.gather(field);
  const Spectrum ref = eigenvalues(builder.build(base));
  const double g = spec.coupling;

  DMReport report;
  report.trials = trials;
  report.worst_monotone_step = std::numeric_limits<double>::infinity();
  std::vector<double> work(base.size());
  for (std::size_t trial = 0; trial < trials; ++trial) {
    // (a) diagonal shift by t in (0, 10]
    const double t = 10.0 * rng.uniform_open0();
    for (std::size_t k = 0; k < base.size(); ++k) work[k] = base[k] + t;
    const Spectrum shifted = eigenvalues(builder.build(work));
    bool shift_ok = true;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      const double err = std::abs(shifted[k] - ref[k] - 2.0 * g * t);
      const double scale = 1.0 + std::abs(ref[k]);
      report.worst_shift_error = std::max(report.worst_shift_error, err / scale);
      shift_ok = shift_ok && err <= kShiftTolerance * scale;
    }
    if (!shift_ok) {
      ++report.shift_violations;
      if (report.shift_witness < 0) report.shift_witness = static_cast<std::int64_t>(trial);
    }

    // (b) raise a single site by t in [0, 10]
    const std::size_t site = rng.index_below(base.size());
    const double bump = 10.0 * rng.uniform01();
    work = base;
    work[site] += bump;
    const Spectrum raised = eigenvalues(builder.build(work));
    bool mono_ok = true;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      const double step = raised[k] - ref[k];
      report.worst_monotone_step = std::min(report.worst_monotone_step, step);
      mono_ok = mono_ok && step >= kMonotoneTolerance;
    }
    if (!mono_ok) {
      ++report.monotonicity_violations;
      if (report.monotonicity_witness < 0) report.monotonicity_witness = static_cast<std::int64_t>(trial);
    }
  }
  return report;
}

}  // namespace wegner2p
