#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfree/correlator.hpp"
#include "qfree/render.hpp"
#include "qfree/word.hpp"

namespace qfree {

enum class Species { B, BDag, B1, B1Dag, B2, B2Dag };

struct MasterLetter {
  Species species = Species::B;
  TimeLabel time;
  WaveLabel wave;
};

namespace masterfield {

struct SpeciesRule {
  Species species;
  bool annihilator;
  int channel;      // 1 or 2
  int carry_shift;  // p → p + carry_shift·k for a scalar moved left past this letter
};

// Scalar moved from the right of a letter to its left:
//   b1 f(p) = f(p+k) b1        (b1 p = (p+k) b1)
//   b1† f(p) = f(p−k) b1†      (adjoint)
//   b2 f(p) = f(p−k) b2        (b2 p = (p−k) b2)
//   b2† f(p) = f(p+k) b2†      (adjoint)
inline constexpr std::array<SpeciesRule, 4> kRules{{
    {Species::B1, true, 1, +1},
    {Species::B1Dag, false, 1, -1},
    {Species::B2, true, 2, -1},
    {Species::B2Dag, false, 2, +1},
}};

inline const SpeciesRule& rule(Species s) {
  for (auto& r : kRules)
    if (r.species == s) return r;
  throw std::invalid_argument("unexpanded master-field letter (b or b†)");
}

/// b = b1 + b2†, b† = b1† + b2: all 2^N expansions in lexicographic order.
inline std::vector<std::vector<MasterLetter>> expand(const std::vector<MasterLetter>& word) {
  std::vector<std::vector<MasterLetter>> out{{}};
  for (auto& l : word) {
    std::vector<Species> choices;
    switch (l.species) {
      case Species::B: choices = {Species::B1, Species::B2Dag}; break;
      case Species::BDag: choices = {Species::B1Dag, Species::B2}; break;
      default: choices = {l.species};
    }
    std::vector<std::vector<MasterLetter>> next;
    for (auto& prefix : out)
      for (auto s : choices) {
        auto w = prefix;
        w.push_back({s, l.time, l.wave});
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

/// Value of the adjacent pair b_α(t,k) b_α†(t',k'):
///   b1 b1† = 2π δ(t−t') δ(ω(k)+½k²+k·p) (N(k)+1) δ(k−k')
///   b2 b2† = 2π δ(t−t') δ(ω(k)−½k²+k·p) N(k) δ(k−k')
/// with its energy carried past every letter in `left`.
inline ScalarMonomial contraction(const MasterLetter& an, const MasterLetter& cr,
                                  const std::vector<MasterLetter>& left) {
  const int channel = rule(an.species).channel;
  EnergyComb e = energy::pairing(an.wave, channel == 1 ? +1 : -1);
  for (auto& l : left) e = shiftP(e, l.wave, rule(l.species).carry_shift);
  ScalarMonomial m = ScalarMonomial::unit();
  m.mul_2pi();
  m.mul(TimeDelta{TimeComb(an.time) - TimeComb(cr.time)});
  m.mul(EnergyDelta{std::move(e)});
  m.mul(MFactor{an.wave, channel == 1 ? 1 : 0});
  m.mul(DeltaK{an.wave, cr.wave});
  return m;
}

inline std::vector<std::size_t> redexes(const std::vector<MasterLetter>& w) {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (rule(w[i].species).annihilator && !rule(w[i + 1].species).annihilator) r.push_back(i);
  return r;
}

/// Free Fock expectation of an expanded word, always reducing the redex picked
/// by `choose`. Returns the scalar or nothing when the word vanishes.
inline std::optional<ScalarMonomial> reduce(
    std::vector<MasterLetter> w,
    const std::function<std::size_t(const std::vector<std::size_t>&)>& choose) {
  ScalarMonomial acc = ScalarMonomial::unit();
  while (!w.empty()) {
    auto rs = redexes(w);
    if (rs.empty()) return std::nullopt;
    std::size_t i = choose(rs);
    if (rule(w[i].species).channel != rule(w[i + 1].species).channel)
      return std::nullopt;  // b1 b2† = b2 b1† = 0
    std::vector<MasterLetter> left(w.begin(), w.begin() + static_cast<long>(i));
    acc.mul(contraction(w[i], w[i + 1], left));
    w.erase(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i) + 2);
  }
  return applyMomentumDeltas(acc);
}

}  // namespace masterfield

/// Master-field letters b(t,k)/b†(t,k) for an entangled word.
inline std::vector<MasterLetter> master_word(const OperatorWord& word) {
  std::vector<MasterLetter> out;
  for (auto& l : word.letters())
    out.push_back({l.is_creation() ? Species::BDag : Species::B, l.time, l.wave});
  return out;
}

/// Correlator of the free master field: expand b, b† into the two species and
/// evaluate each word in the free Fock state by innermost adjacent contraction.
inline ScalarSum freeCorrelator(const std::vector<MasterLetter>& word, const StateSpec& state) {
  ScalarSum out;
  for (auto& w : masterfield::expand(word)) {
    auto v = masterfield::reduce(w, [](const auto& rs) { return rs.front(); });
    if (v) out.add(*v);
  }
  return apply_state(out, state);
}

/// All reduction orders of one expanded word, for confluence tests.
inline std::vector<std::optional<ScalarMonomial>> freeAllReductionOrders(
    const std::vector<MasterLetter>& expanded) {
  std::vector<std::optional<ScalarMonomial>> out;
  std::function<void(std::vector<MasterLetter>, ScalarMonomial)> go =
      [&](std::vector<MasterLetter> w, ScalarMonomial acc) {
        if (w.empty()) {
          out.push_back(applyMomentumDeltas(acc));
          return;
        }
        auto rs = masterfield::redexes(w);
        if (rs.empty()) {
          out.push_back(std::nullopt);
          return;
        }
        for (auto i : rs) {
          if (masterfield::rule(w[i].species).channel !=
              masterfield::rule(w[i + 1].species).channel) {
            out.push_back(std::nullopt);
            continue;
          }
          std::vector<MasterLetter> left(w.begin(), w.begin() + static_cast<long>(i));
          ScalarMonomial next = acc;
          next.mul(masterfield::contraction(w[i], w[i + 1], left));
          auto rest = w;
          rest.erase(rest.begin() + static_cast<long>(i), rest.begin() + static_cast<long>(i) + 2);
          go(std::move(rest), std::move(next));
        }
      };
  go(expanded, ScalarMonomial::unit());
  return out;
}

struct Theorem2Report {
  bool equal = false;
  ScalarSum limit;
  ScalarSum free;
  std::vector<std::string> only_in_limit;
  std::vector<std::string> only_in_free;
};

/// Compares the stochastic limit of the entangled correlator with the free
/// master-field correlator of the same word.
inline Theorem2Report theorem2Check(const OperatorWord& word, const StateSpec& state,
                                    const Symbols& sym = {}) {
  Theorem2Report r;
  r.limit = limitCorrelator(word, state);
  r.free = freeCorrelator(master_word(word), state);
  r.equal = r.limit == r.free;
  std::set<std::string> a, b;
  for (auto& m : r.limit) a.insert(render(m, sym));
  for (auto& m : r.free) b.insert(render(m, sym));
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.only_in_limit));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(r.only_in_free));
  return r;
}

// --- bosonic temperature double --------------------------------------------

/// c0 + cN·N(k), exact.
struct AffineN {
  Rational c0{0};
  Rational cN{0};
  friend bool operator==(const AffineN&, const AffineN&) = default;
  friend AffineN operator+(AffineN a, const AffineN& b) { return {a.c0 + b.c0, a.cN + b.cN}; }
  friend AffineN operator-(AffineN a, const AffineN& b) { return {a.c0 - b.c0, a.cN - b.cN}; }
  friend AffineN operator*(const Rational& s, AffineN a) { return {s * a.c0, s * a.cN}; }
  static AffineN N() { return {0, 1}; }
  static AffineN constant(Rational c) { return {c, 0}; }
};

/// |u|² and |v|² of a(k) ↦ u a₁(k) + v a₂†(k), symbolic (AffineN) or numeric (double).
template <typename T>
struct BogoliubovCoeffs {
  T u2;
  T v2;
};

template <typename T>
struct DoubleCheckReport {
  bool ccr_normalized = false;   // |u|² − |v|² = 1
  T annihilator_creator{};       // ⟨a a†⟩ / δ(k−k')
  T creator_annihilator{};       // ⟨a† a⟩ / δ(k−k')
  T annihilator_annihilator{};   // ⟨a a⟩
  T creator_creator{};           // ⟨a† a†⟩
  bool passed = false;
};

namespace masterfield {

/// ⟨x y⟩ in the double-Fock vacuum for x, y ∈ {a, a†} after the doubling,
/// as a combination of |u|², |v|² and uv-cross terms. Cross terms carry
/// ⟨a₁ a₂⟩-type expectations which vanish, so only moduli survive.
template <typename T>
T two_point(bool first_dag, bool second_dag, const BogoliubovCoeffs<T>& c) {
  // Components of each operator: (species, dag, weight is u-type?)
  struct Part {
    int species;
    bool dag;
    bool u_type;
  };
  auto parts = [](bool dag) {
    return dag ? std::array<Part, 2>{{{1, true, true}, {2, false, false}}}
               : std::array<Part, 2>{{{1, false, true}, {2, true, false}}};
  };
  T total{};
  for (auto& x : parts(first_dag))
    for (auto& y : parts(second_dag)) {
      // ⟨0|x y|0⟩ = 1 iff x annihilates and y creates the same species.
      if (x.dag || !y.dag || x.species != y.species) continue;
      if (x.u_type != y.u_type) throw std::logic_error("mixed u/v weight in a nonzero pairing");
      total = total + (x.u_type ? c.u2 : c.v2);
    }
  return total;
}

}  // namespace masterfield

/// Verifies the bosonic temperature double: with Fock a₁, a₂ the mapped field
/// has ⟨a†a⟩ = |v|²δ, ⟨aa†⟩ = (|v|²+1)δ, ⟨aa⟩ = ⟨a†a†⟩ = 0 and |u|²−|v|² = 1.
inline DoubleCheckReport<AffineN> bosonicDoubleCheck(const BogoliubovCoeffs<AffineN>& c) {
  DoubleCheckReport<AffineN> r;
  r.ccr_normalized = c.u2 - c.v2 == AffineN::constant(1);
  r.annihilator_creator = masterfield::two_point(false, true, c);
  r.creator_annihilator = masterfield::two_point(true, false, c);
  r.annihilator_annihilator = masterfield::two_point(false, false, c);
  r.creator_creator = masterfield::two_point(true, true, c);
  r.passed = r.ccr_normalized && r.creator_annihilator == c.v2 &&
             r.annihilator_creator == c.v2 + AffineN::constant(1) &&
             r.annihilator_annihilator == AffineN{} && r.creator_creator == AffineN{};
  return r;
}

inline DoubleCheckReport<double> bosonicDoubleCheck(const BogoliubovCoeffs<double>& c,
                                                    double tol = 1e-12) {
  DoubleCheckReport<double> r;
  auto close = [&](double a, double b) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); };
  r.ccr_normalized = close(c.u2 - c.v2, 1.0);
  r.annihilator_creator = masterfield::two_point(false, true, c);
  r.creator_annihilator = masterfield::two_point(true, false, c);
  r.annihilator_annihilator = masterfield::two_point(false, false, c);
  r.creator_creator = masterfield::two_point(true, true, c);
  r.passed = r.ccr_normalized && close(r.creator_annihilator, c.v2) &&
             close(r.annihilator_creator, c.v2 + 1.0) && r.annihilator_annihilator == 0.0 &&
             r.creator_creator == 0.0;
  return r;
}

}  // namespace qfree
