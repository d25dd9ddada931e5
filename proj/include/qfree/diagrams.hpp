#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfree {

/// A pair (creation position m_j, annihilation position m'_j), 1-based.
struct Edge {
  int creation = 0;
  int annihilation = 0;

  /// sign(m_j − m'_j): +1 when the creation sits to the right.
  int delta() const { return creation > annihilation ? 1 : -1; }
  int left() const { return std::min(creation, annihilation); }
  int right() const { return std::max(creation, annihilation); }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class Relation {
  Disjoint,
  Contains,     // l contains j
  Inside,       // j contains l
  LeftCross,    // a(l) < a(j) < b(l) < b(j)
  RightCross,   // a(j) < a(l) < b(j) < b(l)
};

/// Relation of edge l to edge j (l ≠ j).
inline Relation classify(const Edge& l, const Edge& j) {
  const int al = l.left(), bl = l.right(), aj = j.left(), bj = j.right();
  if (bl < aj || bj < al) return Relation::Disjoint;
  if (al < aj && bj < bl) return Relation::Contains;
  if (aj < al && bl < bj) return Relation::Inside;
  if (al < aj) return Relation::LeftCross;
  return Relation::RightCross;
}

/// Pair partition of a balanced word; edges ordered by left vertex.
class Diagram {
 public:
  Diagram() = default;
  explicit Diagram(std::vector<Edge> edges) : edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& x, const Edge& y) { return x.left() < y.left(); });
    std::vector<bool> seen(2 * edges_.size() + 1, false);
    for (auto& e : edges_) {
      for (int p : {e.creation, e.annihilation}) {
        if (p < 1 || p > static_cast<int>(2 * edges_.size()) || seen[p])
          throw std::invalid_argument("diagram edges must cover positions 1..N exactly once");
        seen[p] = true;
      }
    }
  }

  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  const Edge& operator[](std::size_t j) const { return edges_[j]; }

  Relation relation(std::size_t l, std::size_t j) const { return classify(edges_[l], edges_[j]); }

  /// "(m1,m'1)(m2,m'2)…" in edge order.
  std::string to_string() const {
    std::string s;
    for (auto& e : edges_)
      s += "(" + std::to_string(e.creation) + "," + std::to_string(e.annihilation) + ")";
    return s;
  }

  friend bool operator==(const Diagram&, const Diagram&) = default;

 private:
  std::vector<Edge> edges_;
};

/// All perfect matchings of creation positions to annihilation positions,
/// lexicographic in the annihilation assigned to each creation (ascending
/// creation order). Unbalanced patterns have none.
inline std::vector<Diagram> enumeratePairings(const std::vector<int>& pattern) {
  std::vector<int> creations, annihilations;
  for (std::size_t i = 0; i < pattern.size(); ++i)
    (pattern[i] > 0 ? creations : annihilations).push_back(static_cast<int>(i) + 1);
  std::vector<Diagram> out;
  if (creations.size() != annihilations.size()) return out;

  std::vector<int> perm(annihilations.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<Edge> edges;
    for (std::size_t c = 0; c < creations.size(); ++c)
      edges.push_back({creations[c], annihilations[perm[c]]});
    out.emplace_back(std::move(edges));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

inline bool isNonCrossing(const Diagram& d) {
  for (std::size_t l = 0; l < d.size(); ++l)
    for (std::size_t j = l + 1; j < d.size(); ++j) {
      auto r = d.relation(l, j);
      if (r == Relation::LeftCross || r == Relation::RightCross) return false;
    }
  return true;
}

inline std::size_t countNonCrossing(const std::vector<int>& pattern) {
  auto ds = enumeratePairings(pattern);
  return static_cast<std::size_t>(std::count_if(ds.begin(), ds.end(), isNonCrossing));
}

/// Diagrams whose every edge has the creation on the right (the only ones
/// with nonzero Fock weight).
inline bool fockSurviving(const Diagram& d) {
  return std::all_of(d.edges().begin(), d.edges().end(),
                     [](const Edge& e) { return e.delta() > 0; });
}

}  // namespace qfree
