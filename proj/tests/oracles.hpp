// Independent reference computations used by the tests. Nothing here calls
// the library routine it is checking; geometry is done with explicit point
// sets, spectra by brute force, and so on.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "wegner2p/geometry.hpp"

namespace wegner2p::oracle {

using Site = std::vector<Coord>;

/// All sites of the cube of radius L around c, by nested recursion.
inline std::set<Site> cube_sites(const Site& c, Coord L) {
  std::set<Site> out;
  Site cur(c.size());
  std::function<void(std::size_t)> rec = [&](std::size_t axis) {
    if (axis == c.size()) {
      out.insert(cur);
      return;
    }
    for (Coord x = c[axis] - L; x <= c[axis] + L; ++x) {
      cur[axis] = x;
      rec(axis + 1);
    }
  };
  rec(0);
  return out;
}

inline std::set<Site> set_union(const std::set<Site>& a, const std::set<Site>& b) {
  std::set<Site> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline bool disjoint(const std::set<Site>& a, const std::set<Site>& b) {
  for (const auto& x : a)
    if (b.count(x)) return false;
  return true;
}

/// Separation relations from explicit point sets.
inline unsigned brute_force_classes(const PairPoint& u, const PairPoint& v, Coord L) {
  const std::set<Site> p[4] = {cube_sites(u.first.coords, L), cube_sites(u.second.coords, L),
                               cube_sites(v.first.coords, L), cube_sites(v.second.coords, L)};
  unsigned bits = 0;
  const auto pu = set_union(p[0], p[1]);
  const auto pv = set_union(p[2], p[3]);
  if (disjoint(pu, pv)) bits |= static_cast<unsigned>(Separation::kCompletelySeparated);
  const Separation iso[4] = {Separation::kA, Separation::kB, Separation::kC, Separation::kD};
  for (int k = 0; k < 4; ++k) {
    std::set<Site> rest;
    for (int j = 0; j < 4; ++j)
      if (j != k) rest = set_union(rest, p[j]);
    if (disjoint(p[k], rest)) bits |= static_cast<unsigned>(iso[k]);
  }
  return bits;
}

inline Coord brute_sup(const PairPoint& a, const PairPoint& b) {
  Coord m = 0;
  for (std::size_t i = 0; i < a.first.coords.size(); ++i) {
    m = std::max({m, std::abs(a.first.coords[i] - b.first.coords[i]), std::abs(a.second.coords[i] - b.second.coords[i])});
  }
  return m;
}

inline bool brute_distance_condition(const PairPoint& u, const PairPoint& v, Coord L) {
  const PairPoint su(u.second, u.first);
  return std::min(brute_sup(u, v), brute_sup(su, v)) >= 8 * L;
}

/// Per-axis signature of four centers (0, a, b, c): for each of the six
/// pairs, 0 if the cubes meet (|diff| <= 2L), 2 if |diff| >= 8L, else 1.
/// The separation relations and the distance condition of a d-dimensional
/// configuration depend on its axes only through these signatures.
inline std::array<int, 6> axis_signature(const std::array<Coord, 4>& c, Coord L) {
  std::array<int, 6> sig{};
  int n = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const Coord diff = std::abs(c[i] - c[j]);
      sig[n++] = diff <= 2 * L ? 0 : (diff >= 8 * L ? 2 : 1);
    }
  }
  return sig;
}

inline int pair_slot(int i, int j) {
  static constexpr int slot[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return slot[i][j];
}

/// Separation relations and distance condition of a d-dimensional
/// configuration given only the per-axis signatures. Two cubes are disjoint
/// iff some axis separates them; a sup-norm distance is >= 8L iff some axis
/// (and some particle) attains it.
inline unsigned signature_classes(const std::vector<std::array<int, 6>>& axes, Coord L, bool& admissible) {
  auto apart = [&](int i, int j) {
    for (const auto& s : axes)
      if (s[pair_slot(i, j)] > 0) return true;
    return false;
  };
  auto far = [&](int i, int j) {
    for (const auto& s : axes)
      if (s[pair_slot(i, j)] == 2) return true;
    return false;
  };
  admissible = L == 0 || ((far(0, 2) || far(1, 3)) && (far(1, 2) || far(0, 3)));
  unsigned bits = 0;
  if (apart(0, 2) && apart(0, 3) && apart(1, 2) && apart(1, 3)) bits |= static_cast<unsigned>(Separation::kCompletelySeparated);
  const Separation iso[4] = {Separation::kA, Separation::kB, Separation::kC, Separation::kD};
  for (int k = 0; k < 4; ++k) {
    bool alone = true;
    for (int j = 0; j < 4; ++j)
      if (j != k) alone = alone && apart(k, j);
    if (alone) bits |= static_cast<unsigned>(iso[k]);
  }
  return bits;
}

/// Calls fn(a, b, c) for the d = 1 grid with u1 pinned at the origin:
/// a = u2, b = u1', c = u2' each in [-(20L+10), 20L+10), a side of 40L+20.
inline void for_each_axis_config(Coord L, const std::function<void(Coord, Coord, Coord)>& fn) {
  const Coord h = 20 * L + 10;
  for (Coord a = -h; a < h; ++a)
    for (Coord b = -h; b < h; ++b)
      for (Coord c = -h; c < h; ++c) fn(a, b, c);
}

/// Sorted eigenvalues of a dense symmetric matrix (test-side solve).
inline std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

/// Adjacency of the n-site path graph.
inline Eigen::MatrixXd path_adjacency(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = 1.0;
  return a;
}

/// Kronecker sum A ⊗ I + I ⊗ A.
inline Eigen::MatrixXd kronecker_sum(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index l = 0; l < n; ++l) {
        k(i * n + l, j * n + l) += a(i, j);
        k(l * n + i, l * n + j) += a(i, j);
      }
  return k;
}

/// O(mn) minimum pairwise distance.
inline double brute_pair_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (double x : a)
    for (double y : b) best = std::min(best, std::abs(x - y));
  return best;
}

/// sup_a (F(a + eps) - F(a)) over a dense grid of a values.
inline double grid_concentration(const std::function<double(double)>& cdf, double eps, double lo, double hi,
                                 std::size_t points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double a = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    best = std::max(best, cdf(a + eps) - cdf(a));
  }
  return best;
}

}  // namespace wegner2p::oracle
