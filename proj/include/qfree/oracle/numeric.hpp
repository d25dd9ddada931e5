#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

#include "qfree/correlator.hpp"
#include "qfree/render.hpp"
#include "qfree/scalar.hpp"

namespace qfree::oracle {

class UnassignedSymbol : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric values for a finite-λ expression. Energies are keyed by basis
/// symbol after momentum deltas have been applied.
struct Assignment {
  double lambda = 1.0;
  std::map<TimeLabel, double> times;
  std::map<EnergyKey, double> energies;
  std::map<WaveLabel, double> occupation;
};

/// Evaluates a finite-λ ScalarSum. DeltaK factors count as 1: their labels
/// are already identified (discrete-mode semantics).
inline std::complex<double> numericEval(const ScalarSum& s, const Assignment& a,
                                        const Symbols& sym = {}) {
  if (!(a.lambda > 0)) throw std::invalid_argument("numericEval needs lambda > 0");
  auto time = [&](TimeLabel t) {
    auto it = a.times.find(t);
    if (it == a.times.end()) throw UnassignedSymbol("unassigned time symbol " + sym.name(t));
    return it->second;
  };
  auto energy = [&](const EnergyKey& k) {
    auto it = a.energies.find(k);
    if (it == a.energies.end())
      throw UnassignedSymbol("unassigned energy symbol " + render(k, sym));
    return it->second;
  };
  auto comb = [&](const EnergyComb& e) {
    double v = 0;
    for (auto& [k, c] : e) v += boost::rational_cast<double>(c) * energy(k);
    return v;
  };

  std::complex<double> total = 0;
  for (auto& m : s) {
    double phase = 0;
    for (auto& [t, row] : m.phase().rows()) phase += time(t) * comb(row);
    std::complex<double> v = boost::rational_cast<double>(m.coeff()) *
                             std::pow(2 * std::numbers::pi, m.pow2pi()) *
                             std::pow(a.lambda, m.pow_lambda()) *
                             std::polar(1.0, phase / (a.lambda * a.lambda));
    for (auto& f : m.factors()) {
      if (std::holds_alternative<TimeDelta>(f) || std::holds_alternative<EnergyDelta>(f))
        throw std::invalid_argument("numericEval: limit factor in a finite-lambda expression");
      if (auto* mf = std::get_if<MFactor>(&f)) {
        auto it = a.occupation.find(mf->k);
        if (it == a.occupation.end())
          throw UnassignedSymbol("unassigned occupation N(" + sym.name(mf->k) + ")");
        v *= it->second + mf->offset;
      }
    }
    total += v;
  }
  return total;
}

/// Concrete 3-vectors for every wave label and for p, from which all energy
/// symbols are derived consistently.
struct VectorModel {
  double lambda = 1.0;
  std::map<TimeLabel, double> times;
  std::map<WaveLabel, std::array<double, 3>> waves;
  std::array<double, 3> p{};
  Dispersion dispersion = Dispersion::Linear;

  static double dot(const std::array<double, 3>& x, const std::array<double, 3>& y) {
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
  }

  /// Assignment covering every Omega/Dot/DotP symbol over the model's labels.
  /// Occupations come from the temperature state when given, otherwise from
  /// `fallback_occupation` per label.
  Assignment assignment(const StateSpec& state,
                        const std::map<WaveLabel, double>& fallback_occupation = {}) const {
    Assignment a;
    a.lambda = lambda;
    a.times = times;
    for (auto& [k, v] : waves) {
      double w = dispersion_value(dispersion, std::sqrt(dot(v, v)));
      a.energies[EnergyKey::omega(k)] = w;
      a.energies[EnergyKey::dotp(k)] = dot(v, p);
      for (auto& [k2, v2] : waves) a.energies[EnergyKey::dot(k, k2)] = dot(v, v2);
      if (auto* temp = state.temperature_params()) {
        double wt = dispersion_value(temp->dispersion, std::sqrt(dot(v, v)));
        a.occupation[k] = 1.0 / std::expm1(temp->beta * wt);
      } else if (auto it = fallback_occupation.find(k); it != fallback_occupation.end()) {
        a.occupation[k] = it->second;
      } else {
        a.occupation[k] = state.is_fock() ? 0.0 : 0.5;
      }
    }
    return a;
  }

  /// Random model for labels t_0..t_{n-1}, k_0..k_{n-1}.
  template <typename Rng>
  static VectorModel random(std::size_t n, Rng& rng, double lambda = 0.7) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VectorModel m;
    m.lambda = lambda;
    for (std::size_t i = 0; i < n; ++i) {
      auto id = static_cast<std::uint32_t>(i);
      m.times[TimeLabel{id}] = 2 * u(rng);
      m.waves[WaveLabel{id}] = {u(rng), u(rng), u(rng)};
    }
    m.p = {u(rng), u(rng), u(rng)};
    return m;
  }
};

}  // namespace qfree::oracle
