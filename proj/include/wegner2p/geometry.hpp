#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wegner2p {

using Coord = std::int64_t;

/// A site of Z^d.
struct LatticePoint {
  std::vector<Coord> coords;

  std::size_t dimension() const { return coords.size(); }
  auto operator<=>(const LatticePoint&) const = default;
  bool operator==(const LatticePoint&) const = default;
};

/// A configuration (x1, x2) of the two particles, a point of Z^d x Z^d.
struct PairPoint {
  LatticePoint first;
  LatticePoint second;

  PairPoint() = default;
  PairPoint(LatticePoint a, LatticePoint b);

  std::size_t dimension() const { return first.dimension(); }
  auto operator<=>(const PairPoint&) const = default;
  bool operator==(const PairPoint&) const = default;
};

std::string to_string(const LatticePoint& p);
std::string to_string(const PairPoint& p);

/// Sup-norm distance between two sites of Z^d.
Coord sup_norm(const LatticePoint& a, const LatticePoint& b);

/// Sup-norm distance on Z^d x Z^d: max over both particles and all axes.
Coord sup_norm_pair(const PairPoint& a, const PairPoint& b);

/// The particle swap (x1, x2) -> (x2, x1).
PairPoint apply_symmetry(const PairPoint& a);

/// The lattice cube of side 2L+1 around `center` in Z^d.
class Cube {
 public:
  Cube(LatticePoint center, Coord radius);

  const LatticePoint& center() const { return center_; }
  Coord radius() const { return radius_; }
  std::size_t dimension() const { return center_.dimension(); }
  std::size_t size() const;
  bool contains(const LatticePoint& p) const;
  bool intersects(const Cube& other) const;
  /// All sites in lexicographic order.
  std::vector<LatticePoint> points() const;

 private:
  LatticePoint center_;
  Coord radius_;
};

/// The box Lambda_L(u) = Pi_1 x Pi_2, a product of two cubes of equal radius.
///
/// Points are enumerated in lexicographic order of the 2d concatenated
/// coordinates (first particle's axes, then the second's). That order fixes
/// the row/column indexing of every matrix built on the box.
class BoxSpec {
 public:
  BoxSpec(PairPoint center, Coord radius);

  const PairPoint& center() const { return center_; }
  Coord radius() const { return radius_; }
  std::size_t dimension() const { return center_.dimension(); }
  std::size_t size() const { return size_; }

  bool contains(const PairPoint& x) const;
  /// Canonical index of `x`, or nullopt if `x` lies outside the box.
  std::optional<std::size_t> index_of(const PairPoint& x) const;
  /// Inverse of index_of.
  PairPoint point_at(std::size_t index) const;
  std::vector<PairPoint> points() const;

  Cube projection(int particle) const;

 private:
  PairPoint center_;
  Coord radius_;
  std::size_t size_;
};

BoxSpec make_box(const PairPoint& center, Coord radius);

struct Projections {
  Cube first;
  Cube second;
  std::size_t union_size;
};

Projections projections(const BoxSpec& box);

/// Sites of Pi_1 ∪ Pi_2, sorted and without duplicates.
std::vector<LatticePoint> projection_union(const BoxSpec& box);

/// min(|u - u'|, |S(u) - u'|) >= 8L.
bool distance_condition(const PairPoint& u, const PairPoint& u_prime, Coord radius);

/// Disjointness relations between the four projection cubes of two boxes.
/// kA..kD name the cube that is disjoint from the union of the other three:
/// A = Pi_1(u), B = Pi_2(u), C = Pi_1(u'), D = Pi_2(u').
enum class Separation : unsigned {
  kCompletelySeparated = 1u << 0,
  kA = 1u << 1,
  kB = 1u << 2,
  kC = 1u << 3,
  kD = 1u << 4,
};

class SeparationClass {
 public:
  SeparationClass() = default;
  explicit SeparationClass(unsigned bits) : bits_(bits) {}

  bool has(Separation s) const { return (bits_ & static_cast<unsigned>(s)) != 0; }
  void add(Separation s) { bits_ |= static_cast<unsigned>(s); }
  bool empty() const { return bits_ == 0; }
  unsigned bits() const { return bits_; }
  std::vector<std::string> names() const;

  bool operator==(const SeparationClass&) const = default;

 private:
  unsigned bits_ = 0;
};

std::string to_string(Separation s);
Separation separation_from_string(const std::string& name);

/// Every separation relation that holds for the boxes Lambda_L(u), Lambda_L(u').
/// Throws PreconditionError unless distance_condition(u, u', L) holds. The
/// result can be empty only if the geometric lemma fails for these inputs;
/// callers treat that as a TheoremViolation.
SeparationClass classify_separation(const PairPoint& u, const PairPoint& u_prime, Coord radius);

/// Same relations without the distance precondition; used by oracles.
SeparationClass separation_relations(const PairPoint& u, const PairPoint& u_prime, Coord radius);

}  // namespace wegner2p
