#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>

#include "qfree/labels.hpp"

namespace qfree {

using Rational = boost::rational<std::int64_t>;

inline std::strong_ordering compare_coeff(std::int64_t a, std::int64_t b) {
  return a <=> b;
}
inline std::strong_ordering compare_coeff(const Rational& a, const Rational& b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

/// Sparse exact linear combination over an ordered key set. Zero coefficients
/// are never stored, so the empty combination is zero.
template <typename Key, typename Coeff>
class LinearComb {
 public:
  using map_type = std::map<Key, Coeff>;

  LinearComb() = default;
  LinearComb(Key k, Coeff c = Coeff(1)) { add(k, c); }

  static LinearComb from(std::initializer_list<std::pair<Key, Coeff>> terms) {
    LinearComb r;
    for (auto& [k, c] : terms) r.add(k, c);
    return r;
  }

  LinearComb& add(const Key& k, const Coeff& c) {
    if (c == Coeff(0)) return *this;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Coeff(0)) terms_.erase(it);
    }
    return *this;
  }

  Coeff coeff(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const map_type& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  /// First (smallest-key) term; precondition: nonzero.
  const std::pair<const Key, Coeff>& lead() const {
    if (terms_.empty()) throw std::logic_error("lead() of zero combination");
    return *terms_.begin();
  }

  LinearComb& operator+=(const LinearComb& o) {
    for (auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  LinearComb& operator-=(const LinearComb& o) {
    for (auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  LinearComb& operator*=(const Coeff& s) {
    if (s == Coeff(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }
  friend LinearComb operator+(LinearComb a, const LinearComb& b) { return a += b; }
  friend LinearComb operator-(LinearComb a, const LinearComb& b) { return a -= b; }
  friend LinearComb operator*(LinearComb a, const Coeff& s) { return a *= s; }
  friend LinearComb operator*(const Coeff& s, LinearComb a) { return a *= s; }
  LinearComb operator-() const { return *this * Coeff(-1); }

  /// Rewrites every key through `f`; colliding keys are summed.
  template <typename F>
  LinearComb map_keys(F&& f) const {
    LinearComb r;
    for (auto& [k, c] : terms_) r.add(f(k), c);
    return r;
  }

  /// Same combination with the sign chosen so the lead coefficient is positive.
  LinearComb sign_normalized() const {
    if (is_zero() || lead().second > Coeff(0)) return *this;
    return -*this;
  }

  friend bool operator==(const LinearComb&, const LinearComb&) = default;
  friend std::strong_ordering operator<=>(const LinearComb& a, const LinearComb& b) {
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
      if (auto c = ia->first <=> ib->first; c != 0) return c;
      if (auto c = compare_coeff(ia->second, ib->second); c != 0) return c;
    }
    return a.terms_.size() <=> b.terms_.size();
  }

 private:
  map_type terms_;
};

using TimeComb = LinearComb<TimeLabel, std::int64_t>;
using WaveComb = LinearComb<WaveLabel, std::int64_t>;

/// Basis symbol of an energy argument: ω(k), k·k' or k·p.
struct EnergyKey {
  enum class Kind : std::uint8_t { Omega = 0, Dot = 1, DotP = 2 };
  Kind kind = Kind::Omega;
  WaveLabel a;
  WaveLabel b;  // only meaningful for Dot; a <= b

  static EnergyKey omega(WaveLabel k) { return {Kind::Omega, k, k}; }
  static EnergyKey dot(WaveLabel x, WaveLabel y) {
    return x <= y ? EnergyKey{Kind::Dot, x, y} : EnergyKey{Kind::Dot, y, x};
  }
  static EnergyKey dotp(WaveLabel k) { return {Kind::DotP, k, k}; }

  /// Relabels wave vectors, keeping the Dot key unordered.
  template <typename F>
  EnergyKey relabel(F&& f) const {
    switch (kind) {
      case Kind::Omega: return omega(f(a));
      case Kind::Dot: return dot(f(a), f(b));
      case Kind::DotP: return dotp(f(a));
    }
    return *this;
  }

  friend auto operator<=>(const EnergyKey&, const EnergyKey&) = default;
};

using EnergyComb = LinearComb<EnergyKey, Rational>;

namespace energy {
inline EnergyComb omega(WaveLabel k, Rational c = 1) { return {EnergyKey::omega(k), c}; }
inline EnergyComb dot(WaveLabel x, WaveLabel y, Rational c = 1) {
  return {EnergyKey::dot(x, y), c};
}
inline EnergyComb dotp(WaveLabel k, Rational c = 1) { return {EnergyKey::dotp(k), c}; }

/// ω(k) + s·½k² + k·p, the bare pairing energy for orientation s.
inline EnergyComb pairing(WaveLabel k, int orientation) {
  return omega(k) + dot(k, k, Rational(orientation, 2)) + dotp(k);
}
}  // namespace energy

/// Substitutes p → p + s·k_j: every c·(k_i·p) gains c·s·(k_i·k_j).
inline EnergyComb shiftP(const EnergyComb& e, WaveLabel j, std::int64_t s) {
  EnergyComb r = e;
  for (auto& [key, c] : e) {
    if (key.kind == EnergyKey::Kind::DotP) r.add(EnergyKey::dot(key.a, j), c * s);
  }
  return r;
}

/// Substitutes p → p + shift for a whole combination of wave labels.
inline EnergyComb shiftP(const EnergyComb& e, const WaveComb& shift) {
  EnergyComb r = e;
  for (auto& [k, s] : shift) r = shiftP(r, k, s);
  return r;
}

}  // namespace qfree
