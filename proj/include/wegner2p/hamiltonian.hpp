#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wegner2p/geometry.hpp"
#include "wegner2p/potential.hpp"

namespace wegner2p {

/// Finite-range two-body interaction U(x) = table(|x1 - x2|), zero beyond `range`.
struct InteractionSpec {
  std::map<Coord, double> table;
  Coord range = 1;

  /// U == 0 with the given cutoff.
  static InteractionSpec none(Coord range) { return InteractionSpec{{}, range}; }

  /// Throws PreconditionError on negative distances, entries beyond the range
  /// or non-finite values.
  void validate() const;
  double at(Coord r) const;

  bool operator==(const InteractionSpec&) const = default;
};

/// Which lattice norm defines the hopping "|y - x| = 1".
enum class HoppingNorm { kSup, kL1 };

std::string to_string(HoppingNorm norm);
HoppingNorm hopping_norm_from_string(const std::string& name);

struct HamiltonianSpec {
  BoxSpec box;
  InteractionSpec interaction;
  double coupling = 1.0;
  HoppingNorm hopping = HoppingNorm::kSup;
};

/// Dense real symmetric matrix; symmetric by construction.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  /// Throws PreconditionError unless `m` is square and exactly symmetric.
  explicit SymmetricMatrix(Eigen::MatrixXd m);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

/// All y in the box at distance exactly 1 from x in the chosen norm, in
/// canonical order. Throws PreconditionError if x lies outside the box.
std::vector<PairPoint> neighbors(const BoxSpec& box, const PairPoint& x, HoppingNorm norm);

/// Precomputed structure of H_Lambda for a fixed spec: hopping edges, the
/// interaction diagonal, and for every row the two sites whose potential
/// values enter its diagonal. Building for a new potential realization only
/// refills the diagonal.
class HamiltonianBuilder {
 public:
  explicit HamiltonianBuilder(HamiltonianSpec spec);

  const HamiltonianSpec& spec() const { return spec_; }
  std::size_t dim() const { return spec_.box.size(); }
  /// Sites Pi_1 ∪ Pi_2 in sorted order; the layout expected by build(values).
  const std::vector<LatticePoint>& sites() const { return sites_; }

  /// `values[k]` is the potential at sites()[k].
  SymmetricMatrix build(std::span<const double> values) const;
  /// Throws PreconditionError if the field misses a site of Pi_1 ∪ Pi_2.
  SymmetricMatrix build(const PotentialField& field) const;

  /// Potential values of `field` in sites() order.
  std::vector<double> gather(const PotentialField& field) const;

 private:
  HamiltonianSpec spec_;
  std::vector<LatticePoint> sites_;
  std::vector<std::pair<std::size_t, std::size_t>> row_sites_;
  std::vector<double> interaction_diag_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

/// H_Lambda = hopping + U + g (V(x1) + V(x2)) on the box of `spec`.
SymmetricMatrix build_hamiltonian(const HamiltonianSpec& spec, const PotentialField& field);

}  // namespace wegner2p
