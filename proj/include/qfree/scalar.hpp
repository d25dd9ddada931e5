#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "qfree/combs.hpp"

namespace qfree {

/// Thrown when an expression cannot be processed because its structure is
/// inconsistent (e.g. λ powers that do not match pairing budgets).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// exp(i·(time·energy)/λ²). The oscillating exponent q_λ(T,x)=e^{-iTx/λ²}
/// is OscExp{T, -x}.
struct OscExp {
  TimeComb time;
  EnergyComb energy;
  friend auto operator<=>(const OscExp&, const OscExp&) = default;
};

/// δ(k_left − k_right).
struct DeltaK {
  WaveLabel left;
  WaveLabel right;
  friend auto operator<=>(const DeltaK&, const DeltaK&) = default;
};

/// δ(T), limit objects only.
struct TimeDelta {
  TimeComb time;
  friend auto operator<=>(const TimeDelta&, const TimeDelta&) = default;
};

/// δ(E) with E a function of p, limit objects only.
struct EnergyDelta {
  EnergyComb energy;
  friend auto operator<=>(const EnergyDelta&, const EnergyDelta&) = default;
};

/// N(k) + offset, offset ∈ {0, 1}.
struct MFactor {
  WaveLabel k;
  int offset = 0;
  friend auto operator<=>(const MFactor&, const MFactor&) = default;
};

using ScalarFactor = std::variant<OscExp, DeltaK, TimeDelta, EnergyDelta, MFactor>;

/// Product of oscillating exponents stored as the bilinear form
/// Σ_t t·row(t). Two products are equal as functions iff their rows are.
class Phase {
 public:
  using rows_type = std::map<TimeLabel, EnergyComb>;

  void add(const TimeComb& time, const EnergyComb& energy) {
    if (time.is_zero() || energy.is_zero()) return;
    for (auto& [t, c] : time) {
      auto& row = rows_[t];
      row += energy * Rational(c);
      if (row.is_zero()) rows_.erase(t);
    }
  }
  void add(const Phase& o) {
    for (auto& [t, row] : o.rows_) add(TimeComb(t), row);
  }

  const EnergyComb& row(TimeLabel t) const {
    static const EnergyComb zero;
    auto it = rows_.find(t);
    return it == rows_.end() ? zero : it->second;
  }
  const rows_type& rows() const { return rows_; }
  bool is_zero() const { return rows_.empty(); }

  template <typename F>
  Phase relabel_waves(F&& f) const {
    Phase r;
    for (auto& [t, row] : rows_)
      r.add(TimeComb(t), row.map_keys([&](const EnergyKey& k) { return k.relabel(f); }));
    return r;
  }

  friend bool operator==(const Phase&, const Phase&) = default;
  friend std::strong_ordering operator<=>(const Phase& a, const Phase& b) {
    auto ia = a.rows_.begin();
    auto ib = b.rows_.begin();
    for (; ia != a.rows_.end() && ib != b.rows_.end(); ++ia, ++ib) {
      if (auto c = ia->first <=> ib->first; c != 0) return c;
      if (auto c = ia->second <=> ib->second; c != 0) return c;
    }
    return a.rows_.size() <=> b.rows_.size();
  }

 private:
  rows_type rows_;
};

/// Result of splitting a phase along pairing budgets: Σ_j T_j⊗E_j + residual.
struct PhaseSplit {
  std::vector<OscExp> budgeted;
  Phase residual;
};

/// Splits `phase` against `budgets`. Each budget takes the row of its lead
/// label (divided by the lead coefficient); whatever is left is the residual.
/// The residual is zero iff the phase lies in span{T_j ⊗ ·} for disjoint T_j.
inline PhaseSplit split_phase(const Phase& phase, const std::vector<TimeComb>& budgets) {
  PhaseSplit out;
  out.residual = phase;
  for (auto& t : budgets) {
    auto [lead, c] = t.lead();
    EnergyComb e = out.residual.row(lead) * Rational(1, c);
    out.residual.add(t, -e);
    out.budgeted.push_back(OscExp{t, std::move(e)});
  }
  return out;
}

/// Canonical decomposition of an unbudgeted phase into OscExp factors: rows
/// that are exact negatives of each other pair up as t_i − t_j, the rest stay
/// single-time.
inline std::vector<OscExp> residual_factors(const Phase& residual) {
  std::vector<std::pair<TimeLabel, EnergyComb>> rows(residual.rows().begin(),
                                                     residual.rows().end());
  std::vector<bool> used(rows.size(), false);
  std::vector<OscExp> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    TimeComb time(rows[i].first);
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      if (!used[j] && rows[j].second == -rows[i].second) {
        used[j] = true;
        time.add(rows[j].first, -1);
        break;
      }
    }
    out.push_back(OscExp{time, rows[i].second});
  }
  return out;
}

/// One term: coeff·(2π)^pow2pi·λ^powLambda·exp(i·phase/λ²)·Π factors.
/// Every budget is a time combination that owns one 1/λ².
class ScalarMonomial {
 public:
  ScalarMonomial() = default;
  explicit ScalarMonomial(Rational coeff) : coeff_(coeff) {}

  static ScalarMonomial unit() { return ScalarMonomial(Rational(1)); }

  /// (1/λ²)·OscExp(time, energy) with one budget attached to `time`.
  static ScalarMonomial pairing(const TimeComb& time, const EnergyComb& energy) {
    ScalarMonomial m;
    m.add_budget(time);
    m.mul(OscExp{time, energy});
    return m;
  }

  const Rational& coeff() const { return coeff_; }
  int pow2pi() const { return pow2pi_; }
  int pow_lambda() const { return pow_lambda_; }
  const Phase& phase() const { return phase_; }
  const std::vector<TimeComb>& budgets() const { return budgets_; }
  const std::vector<ScalarFactor>& factors() const { return factors_; }
  bool is_zero() const { return coeff_ == Rational(0); }

  ScalarMonomial& scale(const Rational& c) {
    coeff_ *= c;
    return *this;
  }
  ScalarMonomial& mul_2pi(int power = 1) {
    pow2pi_ += power;
    return *this;
  }
  /// Multiplies by λ^power without attaching any budget.
  ScalarMonomial& mul_lambda(int power) {
    pow_lambda_ += power;
    return *this;
  }
  ScalarMonomial& add_budget(const TimeComb& time) {
    if (time.is_zero()) throw StructuralError("pairing budget with zero time argument");
    budgets_.insert(std::upper_bound(budgets_.begin(), budgets_.end(), time.sign_normalized()),
                    time.sign_normalized());
    pow_lambda_ -= 2;
    return *this;
  }

  ScalarMonomial& mul(const ScalarFactor& f) {
    if (auto* osc = std::get_if<OscExp>(&f)) {
      phase_.add(osc->time, osc->energy);
      return *this;
    }
    ScalarFactor g = normalized(f);
    factors_.insert(std::upper_bound(factors_.begin(), factors_.end(), g), std::move(g));
    return *this;
  }
  ScalarMonomial& mul(const ScalarMonomial& o) {
    coeff_ *= o.coeff_;
    pow2pi_ += o.pow2pi_;
    pow_lambda_ += o.pow_lambda_;
    phase_.add(o.phase_);
    for (auto& b : o.budgets_)
      budgets_.insert(std::upper_bound(budgets_.begin(), budgets_.end(), b), b);
    for (auto& f : o.factors_)
      factors_.insert(std::upper_bound(factors_.begin(), factors_.end(), f), f);
    return *this;
  }
  friend ScalarMonomial operator*(ScalarMonomial a, const ScalarMonomial& b) {
    return a.mul(b);
  }

  /// Relabels wave vectors in every factor except DeltaK.
  template <typename F>
  ScalarMonomial relabel_waves(F&& f) const {
    ScalarMonomial r(coeff_);
    r.pow2pi_ = pow2pi_;
    r.pow_lambda_ = pow_lambda_;
    r.budgets_ = budgets_;
    r.phase_ = phase_.relabel_waves(f);
    auto rekey = [&](const EnergyComb& e) {
      return e.map_keys([&](const EnergyKey& k) { return k.relabel(f); });
    };
    for (auto& fac : factors_) {
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, EnergyDelta>) {
              r.mul(EnergyDelta{rekey(x.energy)});
            } else if constexpr (std::is_same_v<T, MFactor>) {
              r.mul(MFactor{f(x.k), x.offset});
            } else {
              r.mul(x);
            }
          },
          fac);
    }
    return r;
  }

  /// Returns a copy with factors replaced (coefficient, powers, budgets kept).
  ScalarMonomial with_factors(Phase phase, std::vector<ScalarFactor> factors) const {
    ScalarMonomial r(coeff_);
    r.pow2pi_ = pow2pi_;
    r.pow_lambda_ = pow_lambda_;
    r.budgets_ = budgets_;
    r.phase_ = std::move(phase);
    for (auto& f : factors) r.mul(f);
    return r;
  }
  ScalarMonomial without_budgets() const {
    ScalarMonomial r = *this;
    r.budgets_.clear();
    return r;
  }

  /// Structural comparison ignoring the rational coefficient.
  friend std::strong_ordering compare_shape(const ScalarMonomial& a, const ScalarMonomial& b) {
    if (auto c = a.pow2pi_ <=> b.pow2pi_; c != 0) return c;
    if (auto c = a.pow_lambda_ <=> b.pow_lambda_; c != 0) return c;
    if (auto c = a.budgets_ <=> b.budgets_; c != 0) return c;
    if (auto c = a.phase_ <=> b.phase_; c != 0) return c;
    return a.factors_ <=> b.factors_;
  }
  friend bool operator==(const ScalarMonomial& a, const ScalarMonomial& b) {
    return a.coeff_ == b.coeff_ && compare_shape(a, b) == 0;
  }
  friend std::strong_ordering operator<=>(const ScalarMonomial& a, const ScalarMonomial& b) {
    if (auto c = compare_shape(a, b); c != 0) return c;
    return compare_coeff(a.coeff_, b.coeff_);
  }

 private:
  static ScalarFactor normalized(const ScalarFactor& f) {
    if (auto* d = std::get_if<DeltaK>(&f))
      return d->left <= d->right ? *d : DeltaK{d->right, d->left};
    if (auto* d = std::get_if<TimeDelta>(&f)) return TimeDelta{d->time.sign_normalized()};
    if (auto* d = std::get_if<EnergyDelta>(&f)) return EnergyDelta{d->energy.sign_normalized()};
    if (auto* m = std::get_if<MFactor>(&f)) {
      if (m->offset != 0 && m->offset != 1) throw std::invalid_argument("MFactor offset must be 0 or 1");
    }
    return f;
  }

  Rational coeff_{1};
  int pow2pi_ = 0;
  int pow_lambda_ = 0;
  Phase phase_;
  std::vector<TimeComb> budgets_;
  std::vector<ScalarFactor> factors_;
};

/// Canonical sum of monomials: sorted by shape, like shapes merged, zero
/// coefficients dropped.
class ScalarSum {
 public:
  ScalarSum() = default;
  ScalarSum(ScalarMonomial m) { add(std::move(m)); }
  ScalarSum(std::initializer_list<ScalarMonomial> ms) {
    for (auto& m : ms) add(m);
  }

  static ScalarSum zero() { return {}; }
  static ScalarSum one() { return ScalarSum(ScalarMonomial::unit()); }

  ScalarSum& add(ScalarMonomial m) {
    if (m.is_zero()) return *this;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const auto& a, const auto& b) {
      return compare_shape(a, b) < 0;
    });
    if (it != terms_.end() && compare_shape(*it, m) == 0) {
      Rational c = it->coeff() + m.coeff();
      if (c == Rational(0)) {
        terms_.erase(it);
      } else {
        it->scale(c / it->coeff());
      }
      return *this;
    }
    terms_.insert(it, std::move(m));
    return *this;
  }
  ScalarSum& add(const ScalarSum& o) {
    for (auto& m : o.terms_) add(m);
    return *this;
  }
  ScalarSum& operator+=(const ScalarSum& o) { return add(o); }
  friend ScalarSum operator+(ScalarSum a, const ScalarSum& b) { return a += b; }

  const std::vector<ScalarMonomial>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  template <typename F>
  ScalarSum transform(F&& f) const {
    ScalarSum r;
    for (auto& m : terms_) r.add(f(m));
    return r;
  }

  friend bool operator==(const ScalarSum&, const ScalarSum&) = default;

 private:
  std::vector<ScalarMonomial> terms_;
};

/// Distributes and returns the canonical product.
inline ScalarSum multiply(const ScalarSum& a, const ScalarSum& b) {
  ScalarSum r;
  for (auto& x : a)
    for (auto& y : b) r.add(x * y);
  return r;
}

inline ScalarSum operator*(const ScalarSum& a, const ScalarSum& b) { return multiply(a, b); }

/// Union-find over DeltaK factors with the smallest label as representative.
/// Every other factor is rewritten onto representatives; DeltaK factors are
/// kept as (representative, member) pairs, a redundant delta as (rep, rep).
inline ScalarMonomial applyMomentumDeltas(const ScalarMonomial& m) {
  std::map<WaveLabel, WaveLabel> parent;  // absent ⇒ root
  auto find = [&](WaveLabel x) {
    for (auto it = parent.find(x); it != parent.end(); it = parent.find(x)) x = it->second;
    return x;
  };

  std::vector<ScalarFactor> others;
  std::vector<DeltaK> deltas;
  for (auto& f : m.factors()) {
    if (auto* d = std::get_if<DeltaK>(&f)) {
      deltas.push_back(*d);
    } else {
      others.push_back(f);
    }
  }
  if (deltas.empty()) return m;

  std::vector<WaveLabel> redundant;
  std::vector<WaveLabel> members;
  for (auto& d : deltas) {
    members.push_back(d.left);
    members.push_back(d.right);
    WaveLabel ra = find(d.left), rb = find(d.right);
    if (ra == rb) {
      redundant.push_back(ra);
      continue;
    }
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  std::map<WaveLabel, WaveLabel> rep;
  for (auto k : members) rep[k] = find(k);
  for (auto& r : redundant) r = rep[r];
  auto f = [&](WaveLabel k) {
    auto it = rep.find(k);
    return it == rep.end() ? k : it->second;
  };

  ScalarMonomial body = m.with_factors(m.phase(), std::move(others)).relabel_waves(f);
  for (auto& [k, r] : rep)
    if (k != r) body.mul(DeltaK{r, k});
  for (auto r : redundant) body.mul(DeltaK{r, r});
  return body;
}

inline ScalarSum applyMomentumDeltas(const ScalarSum& s) {
  return s.transform([](const ScalarMonomial& m) { return applyMomentumDeltas(m); });
}

}  // namespace qfree
