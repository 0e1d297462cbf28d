#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wegner2p/hamiltonian.hpp"
#include "wegner2p/potential.hpp"

namespace wegner2p {

/// Eigenvalues of a finite-volume Hamiltonian, ascending, with multiplicity.
class Spectrum {
 public:
  Spectrum() = default;
  /// Throws PreconditionError unless `values` is nondecreasing.
  explicit Spectrum(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t k) const { return values_[k]; }

 private:
  std::vector<double> values_;
};

/// Full spectrum of a dense symmetric matrix (Eigen's tridiagonal QR).
/// Throws PreconditionError on non-finite entries.
Spectrum eigenvalues(const SymmetricMatrix& m);

/// max_k |M v_k - lambda_k v_k| over the computed eigenpairs.
double max_eigen_residual(const SymmetricMatrix& m);

/// min_k |E - lambda_k|.
double dist_to_energy(const Spectrum& spectrum, double energy);

/// min over all pairs of |a_k - b_k'|, by a linear merge of the sorted lists.
double dist_between_spectra(const Spectrum& a, const Spectrum& b);

/// Outcome of the eigenvalue diagonal-monotonicity checks.
struct DMReport {
  std::size_t trials = 0;
  std::size_t shift_violations = 0;
  std::size_t monotonicity_violations = 0;
  /// max over trials and k of |lambda_k(v + t) - lambda_k(v) - 2gt| / (1 + |lambda_k(v)|)
  double worst_shift_error = 0.0;
  /// min over trials and k of lambda_k(v + t e_y) - lambda_k(v); exact math gives >= 0
  double worst_monotone_step = 0.0;
  /// first failing trial for each check, -1 if none
  std::int64_t shift_witness = -1;
  std::int64_t monotonicity_witness = -1;

  bool passed() const { return shift_violations == 0 && monotonicity_violations == 0; }
  bool operator==(const DMReport&) const = default;
};

inline constexpr double kShiftTolerance = 1e-9;
inline constexpr double kMonotoneTolerance = -1e-9;

/// For each trial: (a) shift the whole field by t in (0, 10] and require
/// lambda_k to move by exactly 2gt (relative tolerance 1e-9); (b) raise one
/// random site by t in [0, 10] and require no lambda_k to decrease by more
/// than 1e-9. The base field is `field` in every trial.
DMReport verify_dm_eigenvalues(const HamiltonianSpec& spec, const PotentialField& field, std::size_t trials,
                               RngStream& rng);

}  // namespace wegner2p
