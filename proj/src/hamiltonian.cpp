#include "wegner2p/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "wegner2p/errors.hpp"

namespace wegner2p {

void InteractionSpec::validate() const {
  if (range < 0) throw PreconditionError("interaction range must be nonnegative");
  for (const auto& [r, value] : table) {
    if (r < 0) throw PreconditionError("interaction distance must be nonnegative");
    if (r > range) {
      throw PreconditionError("interaction entry at r=" + std::to_string(r) + " exceeds range " +
                              std::to_string(range));
    }
    if (!std::isfinite(value)) throw PreconditionError("interaction values must be finite");
  }
}

double InteractionSpec::at(Coord r) const {
  if (r > range) return 0.0;
  auto it = table.find(r);
  return it == table.end() ? 0.0 : it->second;
}

std::string to_string(HoppingNorm norm) { return norm == HoppingNorm::kSup ? "sup" : "l1"; }

HoppingNorm hopping_norm_from_string(const std::string& name) {
  if (name == "sup") return HoppingNorm::kSup;
  if (name == "l1") return HoppingNorm::kL1;
  throw PreconditionError("unknown hopping norm '" + name + "' (expected sup or l1)");
}

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw PreconditionError("matrix is not square");
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (m_(i, j) != m_(j, i)) throw PreconditionError("matrix is not symmetric");
    }
  }
}

std::vector<PairPoint> neighbors(const BoxSpec& box, const PairPoint& x, HoppingNorm norm) {
  if (!box.contains(x)) throw PreconditionError("point " + to_string(x) + " is outside the box");
  const std::size_t d = box.dimension();
  const std::size_t k = 2 * d;
  std::vector<int> offset(k, -1);
  std::vector<PairPoint> out;
  // offsets in {-1,0,1}^{2d} in lexicographic order, so x + offset comes out canonical
  while (true) {
    int nonzero = 0;
    for (int o : offset) nonzero += o != 0;
    if (nonzero > 0 && (norm == HoppingNorm::kSup || nonzero == 1)) {
      PairPoint y = x;
      for (std::size_t i = 0; i < d; ++i) {
        y.first.coords[i] += offset[i];
        y.second.coords[i] += offset[d + i];
      }
      if (box.contains(y)) out.push_back(std::move(y));
    }
    std::size_t i = k;
    while (i-- > 0) {
      if (offset[i] < 1) {
        ++offset[i];
        break;
      }
      offset[i] = -1;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

HamiltonianBuilder::HamiltonianBuilder(HamiltonianSpec spec) : spec_(std::move(spec)) {
  spec_.interaction.validate();
  if (!std::isfinite(spec_.coupling)) throw PreconditionError("coupling must be finite");
  const BoxSpec& box = spec_.box;
  sites_ = projection_union(box);
  auto site_index = [&](const LatticePoint& p) {
    return static_cast<std::size_t>(std::lower_bound(sites_.begin(), sites_.end(), p) - sites_.begin());
  };
  const std::size_t m = box.size();
  row_sites_.reserve(m);
  interaction_diag_.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const PairPoint x = box.point_at(i);
    row_sites_.emplace_back(site_index(x.first), site_index(x.second));
    interaction_diag_.push_back(spec_.interaction.at(sup_norm(x.first, x.second)));
    for (const auto& y : neighbors(box, x, spec_.hopping)) {
      const std::size_t j = *box.index_of(y);
      if (j > i) edges_.emplace_back(i, j);
    }
  }
}

SymmetricMatrix HamiltonianBuilder::build(std::span<const double> values) const {
  if (values.size() != sites_.size()) {
    throw PreconditionError("expected " + std::to_string(sites_.size()) + " potential values, got " +
                            std::to_string(values.size()));
  }
  const auto m = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (const auto& [i, j] : edges_) {
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
  }
  const double g = spec_.coupling;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto [a, b] = row_sites_[static_cast<std::size_t>(i)];
    // x1 == x2 gives g * 2 V(x1)
    h(i, i) = interaction_diag_[static_cast<std::size_t>(i)] + g * (values[a] + values[b]);
  }
  return SymmetricMatrix(std::move(h));
}

std::vector<double> HamiltonianBuilder::gather(const PotentialField& field) const {
  std::vector<double> values;
  values.reserve(sites_.size());
  for (const auto& s : sites_) values.push_back(field.at(s));
  return values;
}

SymmetricMatrix HamiltonianBuilder::build(const PotentialField& field) const { return build(gather(field)); }

SymmetricMatrix build_hamiltonian(const HamiltonianSpec& spec, const PotentialField& field) {
  return HamiltonianBuilder(spec).build(field);
}

}  // namespace wegner2p
