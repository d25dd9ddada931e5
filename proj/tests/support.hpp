#pragma once

// Test-side oracles and generators shared by the unit tests and the
// acceptance binary. Nothing here calls the engines under test.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "qfree/scalar.hpp"
#include "qfree/word.hpp"

namespace qfree::testing {

inline TimeComb T(std::uint32_t i) { return TimeComb(TimeLabel{i}); }
inline WaveLabel K(std::uint32_t i) { return WaveLabel{i}; }

/// q_λ(T, x) = e^{-iTx/λ²}.
inline OscExp q(const TimeComb& t, const EnergyComb& x) { return OscExp{t, -x}; }

/// (1/λ²)·q_λ(T, x) carrying its pairing budget.
inline ScalarMonomial qpair(const TimeComb& t, const EnergyComb& x) {
  return ScalarMonomial::pairing(t, -x);
}

/// ω(k) + ½k² + k·(p + Σ shift).
inline EnergyComb bare(WaveLabel k, std::vector<WaveLabel> shift = {}) {
  EnergyComb e = energy::omega(k) + energy::dot(k, k, Rational(1, 2)) + energy::dotp(k);
  for (auto s : shift) e += energy::dot(k, s);
  return e;
}

// Positional labels of the four-point word a(t1,k1) a(t2,k2) a†(t2',k2') a†(t1',k1').
inline constexpr std::uint32_t t1 = 0, t2 = 1, t2p = 2, t1p = 3;

inline Symbols four_point_symbols() {
  return Symbols({"t1", "t2", "t2'", "t1'"}, {"k1", "k2", "k2'", "k1'"});
}

inline OperatorWord four_point_word() { return OperatorWord::from_pattern({-1, -1, 1, 1}); }

/// The word with its two annihilators exchanged, labels kept.
inline OperatorWord four_point_swapped_word() {
  return OperatorWord({{-1, TimeLabel{t2}, K(t2)},
                       {-1, TimeLabel{t1}, K(t1)},
                       {1, TimeLabel{t2p}, K(t2p)},
                       {1, TimeLabel{t1p}, K(t1p)}});
}

/// Fock four-point correlator written factor by factor from its printed
/// closed form. The q(t2−t2', k2·k2') exponent is attached to the crossing
/// term only.
inline ScalarSum four_point_golden() {
  ScalarMonomial rainbow = qpair(T(t2) - T(t2p), bare(K(t2), {K(t1)}));
  rainbow.mul(DeltaK{K(t2), K(t2p)});
  rainbow.mul(qpair(T(t1) - T(t1p), bare(K(t1))));
  rainbow.mul(DeltaK{K(t1), K(t1p)});

  ScalarMonomial crossing = qpair(T(t1) - T(t2p), bare(K(t1)));
  crossing.mul(DeltaK{K(t1), K(t2p)});
  crossing.mul(qpair(T(t2) - T(t1p), bare(K(t2))));
  crossing.mul(DeltaK{K(t2), K(t1p)});
  crossing.mul(q(T(t2) - T(t2p), energy::dot(K(t2), K(t2p))));

  return applyMomentumDeltas(ScalarSum{rainbow, crossing});
}

/// Swapped-order correlator times q⁻¹(t1−t2, k1k2), with the nested shift
/// k1(p+k2) on the non-crossing term and q(t1−t2', k1k2') on the crossing term.
inline ScalarSum four_point_swapped_golden() {
  ScalarMonomial rainbow = qpair(T(t1) - T(t2p), bare(K(t1), {K(t2)}));
  rainbow.mul(DeltaK{K(t1), K(t2p)});
  rainbow.mul(qpair(T(t2) - T(t1p), bare(K(t2))));
  rainbow.mul(DeltaK{K(t2), K(t1p)});

  ScalarMonomial crossing = qpair(T(t2) - T(t2p), bare(K(t2)));
  crossing.mul(DeltaK{K(t2), K(t2p)});
  crossing.mul(qpair(T(t1) - T(t1p), bare(K(t1))));
  crossing.mul(DeltaK{K(t1), K(t1p)});
  crossing.mul(q(T(t1) - T(t2p), energy::dot(K(t1), K(t2p))));

  ScalarSum s{rainbow, crossing};
  ScalarMonomial prefactor = ScalarMonomial::unit();
  prefactor.mul(OscExp{T(t1) - T(t2), energy::dot(K(t1), K(t2))});  // q⁻¹(t1−t2, k1k2)
  return applyMomentumDeltas(s * ScalarSum(prefactor));
}

/// Limit of the four-point correlator: the rainbow term as 2π·δ(t)·δ(E) pairs.
inline ScalarSum four_point_limit_golden() {
  ScalarMonomial m(Rational(1));
  m.mul_2pi(2);
  m.mul(DeltaK{K(t1), K(t1p)});
  m.mul(DeltaK{K(t2), K(t2p)});
  m.mul(TimeDelta{T(t1) - T(t1p)});
  m.mul(TimeDelta{T(t2) - T(t2p)});
  m.mul(EnergyDelta{bare(K(t1))});
  m.mul(EnergyDelta{bare(K(t2), {K(t1)})});
  return applyMomentumDeltas(ScalarSum(m));
}

// --- numeric rewriting oracle -------------------------------------------

/// Fock correlator evaluated by running the q-deformed relations on numbers:
///   a a'† = a'† a q(t−t', k·k') + λ⁻² q(t−t', ω(k)+½k²+k·p) δ(k−k'),
/// with a scalar f(p) moved left past a(k) becoming f(p+k) and past a†(k)
/// becoming f(p−k). Momentum deltas identify a creator's wave vector with
/// its partner's; the identification is applied once the branch is complete,
/// so every factor is a closure over the final vectors.
struct NumericModel {
  double lambda = 0.7;
  std::map<std::uint32_t, double> times;
  std::map<std::uint32_t, std::array<double, 3>> waves;
  std::array<double, 3> p{};
};

inline std::complex<double> numeric_qdef(const OperatorWord& word, const NumericModel& m) {
  using Vec = std::array<double, 3>;
  using Waves = std::map<std::uint32_t, Vec>;
  using Thunk = std::function<std::complex<double>(const Waves&)>;
  struct Branch {
    std::vector<Letter> letters;
    std::vector<Thunk> factors;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> unions;
  };
  auto dot = [](const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
  const double l2 = m.lambda * m.lambda;
  auto q = [l2](double t, double x) { return std::polar(1.0, -t * x / l2); };

  std::complex<double> total = 0;
  std::vector<Branch> work{{word.letters(), {}, {}}};
  while (!work.empty()) {
    Branch b = std::move(work.back());
    work.pop_back();
    auto& w = b.letters;
    if (w.empty()) {
      std::map<std::uint32_t, std::uint32_t> parent;
      std::function<std::uint32_t(std::uint32_t)> root = [&](std::uint32_t x) {
        auto it = parent.find(x);
        return it == parent.end() ? x : root(it->second);
      };
      for (auto [x, y] : b.unions) {
        auto rx = root(x), ry = root(y);
        if (rx != ry) parent[std::max(rx, ry)] = std::min(rx, ry);
      }
      Waves vecs;
      for (auto& [id, v] : m.waves) vecs[id] = m.waves.at(root(id));
      std::complex<double> v = 1;
      for (auto& f : b.factors) v *= f(vecs);
      total += v;
      continue;
    }
    if (w.back().is_annihilation() || w.front().is_creation()) continue;
    std::size_t i = 0;
    while (!(w[i].is_annihilation() && w[i + 1].is_creation())) ++i;
    const Letter an = w[i], cr = w[i + 1];
    const double dt = m.times.at(an.time.id) - m.times.at(cr.time.id);

    Branch ex = b;
    std::swap(ex.letters[i], ex.letters[i + 1]);
    ex.factors.push_back([=](const Waves& v) {
      return q(dt, dot(v.at(an.wave.id), v.at(cr.wave.id)));
    });

    Branch co = b;
    std::vector<Letter> left(w.begin(), w.begin() + static_cast<long>(i));
    const Vec p = m.p;
    co.factors.push_back([=](const Waves& v) {
      Vec pp = p;
      for (auto& l : left)
        for (int c = 0; c < 3; ++c) pp[c] -= l.epsilon * v.at(l.wave.id)[c];
      const Vec& k = v.at(an.wave.id);
      double e = std::sqrt(dot(k, k)) + 0.5 * dot(k, k) + dot(k, pp);
      return q(dt, e) / l2;
    });
    co.unions.emplace_back(an.wave.id, cr.wave.id);
    co.letters.erase(co.letters.begin() + static_cast<long>(i),
                     co.letters.begin() + static_cast<long>(i) + 2);
    work.push_back(std::move(ex));
    work.push_back(std::move(co));
  }
  return total;
}

template <typename Rng>
NumericModel random_numeric_model(std::size_t n, Rng& rng, double lambda = 0.7) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  NumericModel m;
  m.lambda = lambda;
  for (std::uint32_t i = 0; i < n; ++i) {
    m.times[i] = 2 * u(rng);
    m.waves[i] = {u(rng), u(rng), u(rng)};
  }
  m.p = {u(rng), u(rng), u(rng)};
  return m;
}

// --- combinatorial oracles -------------------------------------------------

inline std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

/// Catalan numbers from the recurrence C_{n+1} = Σ C_i C_{n−i}.
inline std::vector<std::size_t> catalan_table(std::size_t n) {
  std::vector<std::size_t> c{1};
  for (std::size_t m = 0; m < n; ++m) {
    std::size_t s = 0;
    for (std::size_t i = 0; i <= m; ++i) s += c[i] * c[m - i];
    c.push_back(s);
  }
  return c;
}

/// Non-crossing creation/annihilation pairings by brute recursion on the
/// first letter: it pairs with an opposite letter at an odd distance and the
/// inside and outside intervals are matched independently.
inline std::size_t noncrossing_oracle(const std::vector<int>& p) {
  if (p.empty()) return 1;
  std::size_t total = 0;
  for (std::size_t j = 1; j < p.size(); j += 2) {
    if (p[j] == p[0]) continue;
    std::vector<int> in(p.begin() + 1, p.begin() + static_cast<long>(j));
    std::vector<int> out(p.begin() + static_cast<long>(j) + 1, p.end());
    total += noncrossing_oracle(in) * noncrossing_oracle(out);
  }
  return total;
}

inline std::vector<int> alternating(std::size_t pairs) {
  std::vector<int> p;
  for (std::size_t i = 0; i < pairs; ++i) {
    p.push_back(-1);
    p.push_back(1);
  }
  return p;
}

inline std::vector<int> rainbow(std::size_t pairs) {
  std::vector<int> p(pairs, -1);
  p.resize(2 * pairs, 1);
  return p;
}

// --- random symbolic values ------------------------------------------------

struct RandomMonomials {
  std::mt19937_64 rng;
  std::uint32_t labels = 4;

  explicit RandomMonomials(std::uint64_t seed) : rng(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  std::uint32_t label() { return static_cast<std::uint32_t>(pick(0, static_cast<int>(labels) - 1)); }

  TimeComb time() {
    TimeComb t;
    int n = pick(1, 2);
    for (int i = 0; i < n; ++i) t.add(TimeLabel{label()}, pick(-2, 2));
    if (t.is_zero()) t.add(TimeLabel{label()}, 1);
    return t;
  }

  EnergyComb energy() {
    EnergyComb e;
    int n = pick(1, 3);
    for (int i = 0; i < n; ++i) {
      Rational c(pick(-3, 3), pick(1, 2));
      switch (pick(0, 2)) {
        case 0: e.add(EnergyKey::omega(K(label())), c); break;
        case 1: e.add(EnergyKey::dot(K(label()), K(label())), c); break;
        default: e.add(EnergyKey::dotp(K(label())), c); break;
      }
    }
    return e;
  }

  ScalarMonomial monomial() {
    ScalarMonomial m(Rational(pick(-4, 4) == 0 ? 1 : pick(-4, 4), pick(1, 3)));
    m.mul_2pi(pick(0, 1));
    m.mul_lambda(-pick(0, 2));
    int n = pick(0, 3);
    for (int i = 0; i < n; ++i) {
      switch (pick(0, 2)) {
        case 0: m.mul(OscExp{time(), energy()}); break;
        case 1: m.mul(DeltaK{K(label()), K(label())}); break;
        default: m.mul(MFactor{K(label()), pick(0, 1)}); break;
      }
    }
    return m;
  }

  ScalarSum sum() {
    ScalarSum s;
    int n = pick(0, 3);
    for (int i = 0; i < n; ++i) s.add(monomial());
    return s;
  }
};

}  // namespace qfree::testing
