#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qfree/scalar.hpp"
#include "qfree/word.hpp"

namespace qfree::oracle {

/// Which annihilator–creator adjacency to rewrite next.
enum class Strategy { Leftmost, Rightmost };

namespace detail {

/// Scalar carried to the far left of a word. p-dependent energies pick up a
/// shift for every letter they pass: p → p + k past a_λ(·,k), p → p − k past
/// a†_λ(·,k) (from a_λ p = (p + k) a_λ and its adjoint).
inline EnergyComb carry_left(EnergyComb e, const std::vector<Letter>& passed) {
  for (auto& l : passed) e = shiftP(e, l.wave, l.is_annihilation() ? 1 : -1);
  return e;
}

struct Branch {
  ScalarMonomial scalar;
  std::vector<Letter> letters;
};

/// Number of (annihilator before creator) pairs; strictly decreases under an
/// exchange, length decreases under a contraction.
inline std::pair<std::size_t, std::size_t> measure(const std::vector<Letter>& w) {
  std::size_t inv = 0, creations_seen = 0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (it->is_creation()) {
      ++creations_seen;
    } else {
      inv += creations_seen;
    }
  }
  return {w.size(), inv};
}

/// Field vacuum kills a trailing a or a leading a†.
inline bool vanishes(const std::vector<Letter>& w) {
  return !w.empty() && (w.back().is_annihilation() || w.front().is_creation());
}

inline std::vector<std::size_t> redexes(const std::vector<Letter>& w) {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i].is_annihilation() && w[i + 1].is_creation()) r.push_back(i);
  return r;
}

/// One application of the exchange relation
///   a_λ(t,k) a†_λ(t',k') = a†_λ(t',k') a_λ(t,k) q_λ(t−t',k·k')
///                          + λ⁻² q_λ(t−t', ω(k)+½k²+k·p) δ(k−k')
/// at position i. Returns {exchanged, contracted}.
inline std::pair<Branch, Branch> rewrite(const Branch& b, std::size_t i) {
  const Letter an = b.letters[i];
  const Letter cr = b.letters[i + 1];
  const TimeComb time = TimeComb(an.time) - TimeComb(cr.time);

  Branch exchanged = b;
  std::swap(exchanged.letters[i], exchanged.letters[i + 1]);
  exchanged.scalar.mul(OscExp{time, -energy::dot(an.wave, cr.wave)});

  Branch contracted{b.scalar, {}};
  std::vector<Letter> left(b.letters.begin(), b.letters.begin() + static_cast<long>(i));
  EnergyComb e = carry_left(-energy::pairing(an.wave, +1), left);
  contracted.scalar.mul(ScalarMonomial::pairing(time, e));
  contracted.scalar.mul(DeltaK{an.wave, cr.wave});
  contracted.letters = left;
  contracted.letters.insert(contracted.letters.end(), b.letters.begin() + static_cast<long>(i) + 2,
                            b.letters.end());
  return {std::move(exchanged), std::move(contracted)};
}

}  // namespace detail

/// Fock vacuum expectation of an entangled-operator word computed only from
/// the q-deformed exchange relations. Terminates because every rewrite
/// lowers (length, inversions) lexicographically.
inline ScalarSum qdefNormalOrder(const OperatorWord& word, Strategy strategy = Strategy::Leftmost) {
  ScalarSum out;
  if (!word.balanced()) return out;
  std::vector<detail::Branch> work{{ScalarMonomial::unit(), word.letters()}};
  while (!work.empty()) {
    detail::Branch b = std::move(work.back());
    work.pop_back();
    if (detail::vanishes(b.letters)) continue;
    if (b.letters.empty()) {
      out.add(applyMomentumDeltas(b.scalar));
      continue;
    }
    auto rs = detail::redexes(b.letters);
    if (rs.empty()) continue;  // normal ordered and nonempty
    std::size_t i = strategy == Strategy::Leftmost ? rs.front() : rs.back();
    auto before = detail::measure(b.letters);
    auto [ex, co] = detail::rewrite(b, i);
    if (!(detail::measure(ex.letters) < before) || !(detail::measure(co.letters) < before))
      throw std::logic_error("qdef rewriting failed to decrease its termination measure");
    work.push_back(std::move(ex));
    work.push_back(std::move(co));
  }
  return out;
}

/// Every distinct full reduction order, each evaluated separately. Used to
/// test confluence of the rewriting on short words.
inline std::vector<ScalarSum> qdefAllStrategies(const OperatorWord& word) {
  std::vector<ScalarSum> results;
  // Explores the choice tree: each path picks one redex per step for every
  // branch, so paths are enumerated as per-branch choices.
  std::function<std::vector<ScalarSum>(const detail::Branch&)> eval =
      [&](const detail::Branch& b) -> std::vector<ScalarSum> {
    if (detail::vanishes(b.letters)) return {ScalarSum{}};
    if (b.letters.empty()) return {ScalarSum(applyMomentumDeltas(b.scalar))};
    auto rs = detail::redexes(b.letters);
    if (rs.empty()) return {ScalarSum{}};
    std::vector<ScalarSum> all;
    for (auto i : rs) {
      auto [ex, co] = detail::rewrite(b, i);
      for (auto& x : eval(ex))
        for (auto& y : eval(co)) all.push_back(x + y);
    }
    return all;
  };
  if (!word.balanced()) return {ScalarSum{}};
  return eval({ScalarMonomial::unit(), word.letters()});
}

/// Exchanges the annihilators at 0-based positions i, i+1:
///   a_λ(t,k) a_λ(t',k') = a_λ(t',k') a_λ(t,k) q_λ⁻¹(t−t', k·k').
/// Returns the swapped word and the factor q_λ⁻¹(t−t',k·k') = OscExp(t−t', k·k').
inline std::pair<OperatorWord, OscExp> reorderAnnihilators(const OperatorWord& word, std::size_t i) {
  if (i + 1 >= word.size()) throw std::out_of_range("reorderAnnihilators: position out of range");
  const Letter& x = word[i];
  const Letter& y = word[i + 1];
  if (!x.is_annihilation() || !y.is_annihilation())
    throw std::invalid_argument("reorderAnnihilators: both letters must be annihilators");
  std::vector<Letter> ls = word.letters();
  std::swap(ls[i], ls[i + 1]);
  OscExp factor{TimeComb(x.time) - TimeComb(y.time), energy::dot(x.wave, y.wave)};
  return {OperatorWord(std::move(ls)), std::move(factor)};
}

}  // namespace qfree::oracle
