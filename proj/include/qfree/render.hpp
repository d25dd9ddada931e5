#pragma once

#include <sstream>
#include <string>
#include <variant>

#include "qfree/scalar.hpp"

namespace qfree {

// Canonical text grammar (see README):
//   sum    := "0" | term { "\n+ " term }
//   term   := coeff [" (2pi)^" int] [" lambda^" int] { " * " factor }
//   factor := "e!{" tcomb "; " ecomb "}"     budgeted exp(i·T·E/λ²)
//           | "e{" tcomb "; " ecomb "}"      unbudgeted exp(i·T·E/λ²)
//           | "d(" k "-" k ")" | "dt(" tcomb ")" | "dE(" ecomb ")"
//           | "N(" k ")" | "(N(" k ")+1)"

inline std::string render(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

namespace detail {

template <typename Key, typename Coeff, typename Name>
std::string render_comb(const LinearComb<Key, Coeff>& c, Name&& name) {
  if (c.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (auto& [k, v] : c) {
    Coeff mag = v < Coeff(0) ? -v : v;
    if (first) {
      if (v < Coeff(0)) s += "-";
    } else {
      s += v < Coeff(0) ? "-" : "+";
    }
    first = false;
    if (mag != Coeff(1)) {
      if constexpr (std::is_same_v<Coeff, Rational>) {
        s += render(mag) + " ";
      } else {
        s += std::to_string(mag) + " ";
      }
    }
    s += name(k);
  }
  return s;
}

}  // namespace detail

inline std::string render(const TimeComb& t, const Symbols& sym) {
  return detail::render_comb(t, [&](TimeLabel l) { return sym.name(l); });
}

inline std::string render(const EnergyKey& k, const Symbols& sym) {
  switch (k.kind) {
    case EnergyKey::Kind::Omega: return "w(" + sym.name(k.a) + ")";
    case EnergyKey::Kind::Dot: return sym.name(k.a) + "." + sym.name(k.b);
    case EnergyKey::Kind::DotP: return sym.name(k.a) + ".p";
  }
  return "?";
}

inline std::string render(const EnergyComb& e, const Symbols& sym) {
  return detail::render_comb(e, [&](const EnergyKey& k) { return render(k, sym); });
}

inline std::string render(const ScalarFactor& f, const Symbols& sym) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, OscExp>) {
          return "e{" + render(x.time, sym) + "; " + render(x.energy, sym) + "}";
        } else if constexpr (std::is_same_v<T, DeltaK>) {
          return "d(" + sym.name(x.left) + "-" + sym.name(x.right) + ")";
        } else if constexpr (std::is_same_v<T, TimeDelta>) {
          return "dt(" + render(x.time, sym) + ")";
        } else if constexpr (std::is_same_v<T, EnergyDelta>) {
          return "dE(" + render(x.energy, sym) + ")";
        } else {
          return x.offset == 0 ? "N(" + sym.name(x.k) + ")" : "(N(" + sym.name(x.k) + ")+1)";
        }
      },
      f);
}

inline std::string render(const ScalarMonomial& m, const Symbols& sym = {}) {
  std::ostringstream os;
  os << render(m.coeff());
  if (m.pow2pi() != 0) os << " (2pi)^" << m.pow2pi();
  if (m.pow_lambda() != 0) os << " lambda^" << m.pow_lambda();
  auto split = split_phase(m.phase(), m.budgets());
  for (auto& g : split.budgeted)
    os << " * e!{" << render(g.time, sym) << "; " << render(g.energy, sym) << "}";
  for (auto& g : residual_factors(split.residual)) os << " * " << render(ScalarFactor(g), sym);
  for (auto& f : m.factors()) os << " * " << render(f, sym);
  return os.str();
}

inline std::string render(const ScalarSum& s, const Symbols& sym = {}) {
  if (s.is_zero()) return "0";
  std::string out;
  for (auto& m : s) {
    if (!out.empty()) out += "\n+ ";
    out += render(m, sym);
  }
  return out;
}

}  // namespace qfree
