#include "wegner2p/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "wegner2p/errors.hpp"

namespace wegner2p {

namespace {

void require_same_dimension(const LatticePoint& a, const LatticePoint& b) {
  if (a.dimension() != b.dimension()) {
    throw PreconditionError("dimension mismatch: " + std::to_string(a.dimension()) + " vs " +
                            std::to_string(b.dimension()));
  }
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// Number of sites shared by two cubes: product of per-axis overlaps.
std::size_t overlap_size(const Cube& a, const Cube& b) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    const Coord lo = std::max(a.center().coords[i] - a.radius(), b.center().coords[i] - b.radius());
    const Coord hi = std::min(a.center().coords[i] + a.radius(), b.center().coords[i] + b.radius());
    if (hi < lo) return 0;
    n *= static_cast<std::size_t>(hi - lo + 1);
  }
  return n;
}

}  // namespace

PairPoint::PairPoint(LatticePoint a, LatticePoint b) : first(std::move(a)), second(std::move(b)) {
  require_same_dimension(first, second);
  if (first.dimension() == 0) throw PreconditionError("lattice dimension must be >= 1");
}

std::string to_string(const LatticePoint& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.coords.size(); ++i) os << (i ? "," : "") << p.coords[i];
  os << ')';
  return os.str();
}

std::string to_string(const PairPoint& p) {
  return "(" + to_string(p.first) + "," + to_string(p.second) + ")";
}

Coord sup_norm(const LatticePoint& a, const LatticePoint& b) {
  require_same_dimension(a, b);
  Coord m = 0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    m = std::max(m, a.coords[i] > b.coords[i] ? a.coords[i] - b.coords[i] : b.coords[i] - a.coords[i]);
  }
  return m;
}

Coord sup_norm_pair(const PairPoint& a, const PairPoint& b) {
  return std::max(sup_norm(a.first, b.first), sup_norm(a.second, b.second));
}

PairPoint apply_symmetry(const PairPoint& a) { return PairPoint(a.second, a.first); }

// ---------------------------------------------------------------------------
// Cube

Cube::Cube(LatticePoint center, Coord radius) : center_(std::move(center)), radius_(radius) {
  if (radius_ < 0) throw PreconditionError("cube radius must be nonnegative");
  if (center_.dimension() == 0) throw PreconditionError("lattice dimension must be >= 1");
}

std::size_t Cube::size() const { return ipow(static_cast<std::size_t>(2 * radius_ + 1), dimension()); }

bool Cube::contains(const LatticePoint& p) const {
  if (p.dimension() != dimension()) return false;
  for (std::size_t i = 0; i < dimension(); ++i) {
    const Coord off = p.coords[i] - center_.coords[i];
    if (off < -radius_ || off > radius_) return false;
  }
  return true;
}

bool Cube::intersects(const Cube& other) const {
  require_same_dimension(center_, other.center_);
  return overlap_size(*this, other) > 0;
}

std::vector<LatticePoint> Cube::points() const {
  std::vector<LatticePoint> out;
  out.reserve(size());
  LatticePoint p = center_;
  for (auto& c : p.coords) c -= radius_;
  for (std::size_t n = 0; n < size(); ++n) {
    out.push_back(p);
    // odometer increment, last axis fastest
    for (std::size_t i = dimension(); i-- > 0;) {
      if (p.coords[i] < center_.coords[i] + radius_) {
        ++p.coords[i];
        break;
      }
      p.coords[i] = center_.coords[i] - radius_;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// BoxSpec

BoxSpec::BoxSpec(PairPoint center, Coord radius) : center_(std::move(center)), radius_(radius) {
  if (radius_ < 0) throw PreconditionError("box radius must be nonnegative, got " + std::to_string(radius_));
  require_same_dimension(center_.first, center_.second);
  if (dimension() == 0) throw PreconditionError("lattice dimension must be >= 1");
  size_ = ipow(static_cast<std::size_t>(2 * radius_ + 1), 2 * dimension());
}

bool BoxSpec::contains(const PairPoint& x) const { return index_of(x).has_value(); }

std::optional<std::size_t> BoxSpec::index_of(const PairPoint& x) const {
  const std::size_t d = dimension();
  if (x.first.dimension() != d || x.second.dimension() != d) return std::nullopt;
  const auto side = static_cast<std::size_t>(2 * radius_ + 1);
  std::size_t index = 0;
  for (std::size_t k = 0; k < 2 * d; ++k) {
    const Coord c = k < d ? x.first.coords[k] : x.second.coords[k - d];
    const Coord c0 = k < d ? center_.first.coords[k] : center_.second.coords[k - d];
    const Coord off = c - c0 + radius_;
    if (off < 0 || off > 2 * radius_) return std::nullopt;
    index = index * side + static_cast<std::size_t>(off);
  }
  return index;
}

PairPoint BoxSpec::point_at(std::size_t index) const {
  if (index >= size_) throw PreconditionError("box index out of range");
  const std::size_t d = dimension();
  const auto side = static_cast<std::size_t>(2 * radius_ + 1);
  PairPoint x = center_;
  for (std::size_t k = 2 * d; k-- > 0;) {
    const auto off = static_cast<Coord>(index % side) - radius_;
    index /= side;
    if (k < d) {
      x.first.coords[k] += off;
    } else {
      x.second.coords[k - d] += off;
    }
  }
  return x;
}

std::vector<PairPoint> BoxSpec::points() const {
  std::vector<PairPoint> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(point_at(i));
  return out;
}

Cube BoxSpec::projection(int particle) const {
  if (particle == 1) return Cube(center_.first, radius_);
  if (particle == 2) return Cube(center_.second, radius_);
  throw PreconditionError("particle index must be 1 or 2");
}

BoxSpec make_box(const PairPoint& center, Coord radius) { return BoxSpec(center, radius); }

Projections projections(const BoxSpec& box) {
  Cube p1 = box.projection(1);
  Cube p2 = box.projection(2);
  const std::size_t u = p1.size() + p2.size() - overlap_size(p1, p2);
  return Projections{std::move(p1), std::move(p2), u};
}

std::vector<LatticePoint> projection_union(const BoxSpec& box) {
  std::vector<LatticePoint> sites = box.projection(1).points();
  const auto second = box.projection(2).points();
  sites.insert(sites.end(), second.begin(), second.end());
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

// ---------------------------------------------------------------------------
// Separation

bool distance_condition(const PairPoint& u, const PairPoint& u_prime, Coord radius) {
  if (radius < 0) throw PreconditionError("radius must be nonnegative");
  const Coord direct = sup_norm_pair(u, u_prime);
  const Coord swapped = sup_norm_pair(apply_symmetry(u), u_prime);
  return std::min(direct, swapped) >= 8 * radius;
}

std::string to_string(Separation s) {
  switch (s) {
    case Separation::kCompletelySeparated: return "CompletelySeparated";
    case Separation::kA: return "A";
    case Separation::kB: return "B";
    case Separation::kC: return "C";
    case Separation::kD: return "D";
  }
  return "?";
}

Separation separation_from_string(const std::string& name) {
  for (auto s : {Separation::kCompletelySeparated, Separation::kA, Separation::kB, Separation::kC,
                 Separation::kD}) {
    if (to_string(s) == name) return s;
  }
  throw PreconditionError("unknown separation class '" + name + "'");
}

std::vector<std::string> SeparationClass::names() const {
  std::vector<std::string> out;
  for (auto s : {Separation::kCompletelySeparated, Separation::kA, Separation::kB, Separation::kC,
                 Separation::kD}) {
    if (has(s)) out.push_back(to_string(s));
  }
  return out;
}

SeparationClass separation_relations(const PairPoint& u, const PairPoint& u_prime, Coord radius) {
  require_same_dimension(u.first, u_prime.first);
  const Cube c[4] = {Cube(u.first, radius), Cube(u.second, radius), Cube(u_prime.first, radius),
                     Cube(u_prime.second, radius)};
  bool meets[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) meets[i][j] = c[i].intersects(c[j]);

  SeparationClass out;
  // (Pi_1 u ∪ Pi_2 u) ∩ (Pi_1 u' ∪ Pi_2 u') = ∅
  if (!meets[0][2] && !meets[0][3] && !meets[1][2] && !meets[1][3]) {
    out.add(Separation::kCompletelySeparated);
  }
  // cube k is disjoint from the union of the other three
  const Separation isolated[4] = {Separation::kA, Separation::kB, Separation::kC, Separation::kD};
  for (int k = 0; k < 4; ++k) {
    bool alone = true;
    for (int j = 0; j < 4; ++j) alone = alone && (j == k || !meets[k][j]);
    if (alone) out.add(isolated[k]);
  }
  return out;
}

SeparationClass classify_separation(const PairPoint& u, const PairPoint& u_prime, Coord radius) {
  if (!distance_condition(u, u_prime, radius)) {
    throw PreconditionError("centers " + to_string(u) + " and " + to_string(u_prime) +
                            " violate the distance condition min(|u-u'|, |S(u)-u'|) >= 8L for L=" + std::to_string(radius));
  }
  return separation_relations(u, u_prime, radius);
}

}  // namespace wegner2p
