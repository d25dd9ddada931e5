#pragma once

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

#include "qfree/diagrams.hpp"
#include "qfree/render.hpp"
#include "qfree/scalar.hpp"
#include "qfree/word.hpp"

namespace qfree {

enum class Dispersion { Linear, Quadratic };

/// ω(|k|) for the named numeric dispersion.
inline double dispersion_value(Dispersion d, double k_norm) {
  return d == Dispersion::Linear ? k_norm : 0.5 * k_norm * k_norm;
}

struct FockState {};
struct SymbolicGaussianState {};
struct TemperatureState {
  double beta = 1.0;
  Dispersion dispersion = Dispersion::Linear;
};

/// Gaussian state of the field. Temperature behaves like SymbolicGaussian in
/// the symbolic engines; N(k)=1/(e^{βω}-1) is substituted only numerically.
class StateSpec {
 public:
  StateSpec() = default;
  StateSpec(FockState s) : v_(s) {}
  StateSpec(SymbolicGaussianState s) : v_(s) {}
  StateSpec(TemperatureState s) : v_(s) {
    if (!(s.beta > 0)) throw std::invalid_argument("temperature state needs beta > 0");
  }

  static StateSpec fock() { return FockState{}; }
  static StateSpec gaussian() { return SymbolicGaussianState{}; }
  static StateSpec temperature(double beta, Dispersion d = Dispersion::Linear) {
    return TemperatureState{beta, d};
  }

  bool is_fock() const { return std::holds_alternative<FockState>(v_); }
  bool is_temperature() const { return std::holds_alternative<TemperatureState>(v_); }
  const TemperatureState* temperature_params() const { return std::get_if<TemperatureState>(&v_); }

  std::string name() const {
    if (is_fock()) return "fock";
    if (is_temperature()) return "temperature";
    return "gaussian";
  }

 private:
  std::variant<FockState, SymbolicGaussianState, TemperatureState> v_;
};

/// Fock: N(k) → 0, N(k)+1 → 1. Other states keep MFactor symbols.
inline ScalarSum apply_state(const ScalarSum& s, const StateSpec& state) {
  if (!state.is_fock()) return s;
  ScalarSum out;
  for (auto& m : s) {
    std::vector<ScalarFactor> kept;
    bool vanishes = false;
    for (auto& f : m.factors()) {
      if (auto* mf = std::get_if<MFactor>(&f)) {
        if (mf->offset == 0) vanishes = true;
        continue;
      }
      kept.push_back(f);
    }
    if (!vanishes) out.add(m.with_factors(m.phase(), std::move(kept)));
  }
  return out;
}

/// (1/λ²)·exp(i(t_m−t_m')(ω(k_m)+δ½k_m²+k_m·p)/λ²)·M(k_m)·δ(k_m−k_m').
inline ScalarMonomial pairingFactor(const Edge& edge, const OperatorWord& word) {
  if (edge.creation < 1 || edge.annihilation < 1 ||
      edge.creation > static_cast<int>(word.size()) ||
      edge.annihilation > static_cast<int>(word.size()))
    throw std::invalid_argument("edge position outside the word");
  const Letter& cr = word.at_position(edge.creation);
  const Letter& an = word.at_position(edge.annihilation);
  if (!cr.is_creation() || !an.is_annihilation())
    throw std::invalid_argument("edge endpoints must be (creation, annihilation)");
  const int d = edge.delta();
  TimeComb time = TimeComb(cr.time) - TimeComb(an.time);
  ScalarMonomial m = ScalarMonomial::pairing(time, energy::pairing(cr.wave, d));
  m.mul(MFactor{cr.wave, (d + 1) / 2});
  m.mul(DeltaK{cr.wave, an.wave});
  return m;
}

/// Σ_{l contains j} δ_l·k_{m_l}·k_{m_j}.
inline EnergyComb nesting_energy(const Diagram& d, std::size_t j, const OperatorWord& word) {
  EnergyComb e;
  const WaveLabel kj = word.at_position(d[j].creation).wave;
  for (std::size_t l = 0; l < d.size(); ++l) {
    if (l != j && d.relation(l, j) == Relation::Contains)
      e += energy::dot(word.at_position(d[l].creation).wave, kj, d[l].delta());
  }
  return e;
}

/// Finite-λ N-point correlator: the diagram sum with nesting shifts and
/// crossing exponents, momentum deltas applied.
inline ScalarSum finiteLambdaCorrelator(const OperatorWord& word, const StateSpec& state) {
  ScalarSum out;
  if (!word.balanced()) return out;
  for (const Diagram& d : enumeratePairings(word.pattern())) {
    ScalarMonomial term = ScalarMonomial::unit();
    for (std::size_t j = 0; j < d.size(); ++j) {
      const Edge& ej = d[j];
      const WaveLabel kj = word.at_position(ej.creation).wave;
      const int dj = ej.delta();
      term.mul(pairingFactor(ej, word));
      TimeComb tj = TimeComb(word.at_position(ej.creation).time) -
                    TimeComb(word.at_position(ej.annihilation).time);
      term.mul(OscExp{tj, nesting_energy(d, j, word)});
      for (std::size_t l = 0; l < d.size(); ++l) {
        if (l == j) continue;
        auto rel = d.relation(l, j);
        int vertex = 0;
        if (rel == Relation::LeftCross) vertex = d[l].right();
        if (rel == Relation::RightCross) vertex = d[l].left();
        if (vertex == 0) continue;
        const Letter& v = word.at_position(vertex);
        term.mul(OscExp{TimeComb(v.time), energy::dot(v.wave, kj, v.epsilon * dj)});
      }
    }
    out.add(applyMomentumDeltas(term));
  }
  return apply_state(out, state);
}

/// Stochastic limit of a finite-λ sum. Each budget T_j with energy E_j
/// becomes 2π·δ(T_j)·δ(E_j); a monomial whose phase is not exhausted by its
/// budgets vanishes.
inline ScalarSum takeLimit(const ScalarSum& s) {
  ScalarSum out;
  for (auto& m : s) {
    const auto& budgets = m.budgets();
    if (m.pow_lambda() != -2 * static_cast<int>(budgets.size()))
      throw StructuralError("lambda power does not match pairing budgets in term: " + render(m));
    std::set<TimeLabel> seen;
    for (auto& b : budgets)
      for (auto& [t, c] : b)
        if (!seen.insert(t).second)
          throw StructuralError("pairing budgets share a time label in term: " + render(m));

    PhaseSplit split = split_phase(m.phase(), budgets);
    if (!split.residual.is_zero()) continue;

    std::vector<ScalarFactor> factors = m.factors();
    for (auto& g : split.budgeted) {
      if (g.energy.is_zero())
        throw StructuralError("pairing budget without oscillation in term: " + render(m));
      factors.push_back(TimeDelta{g.time});
      factors.push_back(EnergyDelta{g.energy});
    }
    ScalarMonomial r = m.without_budgets().with_factors(Phase{}, std::move(factors));
    r.mul_lambda(-r.pow_lambda());
    r.mul_2pi(static_cast<int>(budgets.size()));
    out.add(applyMomentumDeltas(r));
  }
  return out;
}

/// Stochastic limit built directly: non-crossing diagrams only, each edge a
/// 2π·δ(t_m−t_m')·δ(pairing energy + nesting)·M·δ(k_m−k_m') factor.
inline ScalarSum limitCorrelator(const OperatorWord& word, const StateSpec& state) {
  ScalarSum out;
  if (!word.balanced()) return out;
  for (const Diagram& d : enumeratePairings(word.pattern())) {
    if (!isNonCrossing(d)) continue;
    ScalarMonomial term = ScalarMonomial::unit();
    for (std::size_t j = 0; j < d.size(); ++j) {
      const Letter& cr = word.at_position(d[j].creation);
      const Letter& an = word.at_position(d[j].annihilation);
      const int dj = d[j].delta();
      term.mul_2pi();
      term.mul(TimeDelta{TimeComb(cr.time) - TimeComb(an.time)});
      term.mul(EnergyDelta{energy::pairing(cr.wave, dj) + nesting_energy(d, j, word)});
      term.mul(MFactor{cr.wave, (dj + 1) / 2});
      term.mul(DeltaK{cr.wave, an.wave});
    }
    out.add(applyMomentumDeltas(term));
  }
  return apply_state(out, state);
}

}  // namespace qfree
