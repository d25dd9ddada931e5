#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "qfree/correlator.hpp"
#include "qfree/scalar.hpp"
#include "qfree/word.hpp"

namespace qfree::oracle {

/// Bosonic letter after the doubling a(k) ↦ u a₁(k) + v a₂†(k).
struct FieldLetter {
  int species = 1;  // 1 or 2
  bool dag = false;
  TimeLabel time;
  WaveLabel wave;
  std::size_t origin = 0;  // position in the entangled word
};

/// Word with its particle dressing pulled out: prefix(p)·e^{i shift·q}·letters.
struct DressedWord {
  ScalarMonomial prefix;
  WaveComb shift;
  std::vector<FieldLetter> letters;
};

namespace detail {

/// Pulls the particle factors of each entangled letter to the left,
///   a_λ(t,k)  = λ⁻¹ e^{-it[ω(k)+½k²+k·p]/λ²} e^{-ik·q} a(k)
///   a†_λ(t,k) = λ⁻¹ e^{+it[ω(k)−½k²+k·p]/λ²} e^{+ik·q} a†(k)
/// using e^{iκ·q} f(p) = f(p − κ) e^{iκ·q}. Field letters are left unexpanded
/// (species 0 placeholder is filled by the caller).
inline DressedWord dress(const OperatorWord& word) {
  DressedWord w;
  w.prefix = ScalarMonomial::unit();
  for (std::size_t s = 0; s < word.size(); ++s) {
    const Letter& l = word[s];
    EnergyComb e = l.is_annihilation() ? -energy::pairing(l.wave, +1) : energy::pairing(l.wave, -1);
    w.prefix.mul(OscExp{TimeComb(l.time), shiftP(e, -w.shift)});
    w.prefix.mul_lambda(-1);
    w.shift.add(l.wave, l.epsilon);
    w.letters.push_back({0, l.is_creation(), l.time, l.wave, s});
  }
  return w;
}

struct FieldBranch {
  std::vector<FieldLetter> letters;
  std::vector<std::pair<FieldLetter, FieldLetter>> contractions;  // (annihilator, creator)
};

/// Double-Fock vacuum expectation with [a_α(k), a_β†(k')] = δ_αβ δ(k−k'):
/// returns the list of complete contraction patterns.
inline std::vector<FieldBranch> normal_order_fields(std::vector<FieldLetter> letters) {
  std::vector<FieldBranch> done;
  std::vector<FieldBranch> work{{std::move(letters), {}}};
  while (!work.empty()) {
    FieldBranch b = std::move(work.back());
    work.pop_back();
    auto& w = b.letters;
    if (w.empty()) {
      done.push_back(std::move(b));
      continue;
    }
    if (!w.back().dag || w.front().dag) continue;
    std::size_t i = 0;
    while (i + 1 < w.size() && !(!w[i].dag && w[i + 1].dag)) ++i;
    if (i + 1 >= w.size()) continue;
    FieldBranch ex = b;
    std::swap(ex.letters[i], ex.letters[i + 1]);
    if (w[i].species == w[i + 1].species) {
      FieldBranch co = b;
      co.contractions.emplace_back(w[i], w[i + 1]);
      co.letters.erase(co.letters.begin() + static_cast<long>(i),
                       co.letters.begin() + static_cast<long>(i) + 2);
      work.push_back(std::move(co));
    }
    work.push_back(std::move(ex));
  }
  return done;
}

}  // namespace detail

/// Correlator of entangled operators in a Gaussian state, computed through
/// the temperature double: each field letter is expanded into two Fock
/// species with |u(k)|² = N(k)+1 and |v(k)|² = N(k), the particle factors are
/// reordered with [q,p] = i, and the fields are normal ordered with plain CCR.
inline ScalarSum doubledNormalOrder(const OperatorWord& word, const StateSpec& state) {
  ScalarSum out;
  if (!word.balanced()) return out;
  DressedWord dressed = detail::dress(word);

  const std::size_t n = dressed.letters.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<FieldLetter> expanded = dressed.letters;
    for (std::size_t s = 0; s < n; ++s) {
      // a ↦ u a₁ + v a₂†,  a† ↦ u* a₁† + v* a₂
      const bool second = (mask >> s) & 1U;
      FieldLetter& f = expanded[s];
      f.species = second ? 2 : 1;
      if (second) f.dag = !f.dag;
    }
    for (auto& branch : detail::normal_order_fields(std::move(expanded))) {
      ScalarMonomial term = dressed.prefix;
      // The two λ⁻¹ of a contracted pair form one budget on its time difference.
      term.mul_lambda(static_cast<int>(n));
      for (auto& [an, cr] : branch.contractions) {
        term.add_budget(TimeComb(an.time) - TimeComb(cr.time));
        term.mul(DeltaK{an.wave, cr.wave});
        // species 1 pairs u with u*, species 2 pairs v with v*
        term.mul(MFactor{an.wave, an.species == 1 ? 1 : 0});
      }
      ScalarMonomial unified = applyMomentumDeltas(term);

      // The pending e^{iκ·q} must be the identity once momenta are identified.
      std::map<WaveLabel, WaveLabel> rep;
      for (auto& f : unified.factors())
        if (auto* d = std::get_if<DeltaK>(&f)) rep[d->right] = d->left;
      WaveComb residual = dressed.shift.map_keys([&](WaveLabel k) {
        auto it = rep.find(k);
        return it == rep.end() ? k : it->second;
      });
      if (!residual.is_zero())
        throw std::logic_error("doubled oracle: q-exponential did not cancel");
      out.add(unified);
    }
  }
  return apply_state(out, state);
}

}  // namespace qfree::oracle
