#pragma once

#include <json.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qfree/scalar.hpp"

namespace qfree {

inline constexpr int kSchemaVersion = 1;

namespace io {

using nlohmann::json;

inline std::string rational_to_string(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

inline Rational rational_from_string(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational '" + s + "'");
  }
}

/// Symbols covering every label id that occurs in `s` (fallback names fill gaps).
inline Symbols covering_symbols(const ScalarSum& s, const Symbols& sym) {
  std::uint32_t tmax = 0, kmax = 0;
  auto see_t = [&](TimeLabel t) { tmax = std::max(tmax, t.id + 1); };
  auto see_k = [&](WaveLabel k) { kmax = std::max(kmax, k.id + 1); };
  auto see_e = [&](const EnergyComb& e) {
    for (auto& [key, c] : e) {
      see_k(key.a);
      see_k(key.b);
    }
  };
  for (auto& m : s) {
    for (auto& b : m.budgets())
      for (auto& [t, c] : b) see_t(t);
    for (auto& [t, row] : m.phase().rows()) {
      see_t(t);
      see_e(row);
    }
    for (auto& f : m.factors()) {
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, DeltaK>) {
              see_k(x.left);
              see_k(x.right);
            } else if constexpr (std::is_same_v<T, TimeDelta>) {
              for (auto& [t, c] : x.time) see_t(t);
            } else if constexpr (std::is_same_v<T, EnergyDelta>) {
              see_e(x.energy);
            } else if constexpr (std::is_same_v<T, MFactor>) {
              see_k(x.k);
            }
          },
          f);
    }
  }
  tmax = std::max<std::uint32_t>(tmax, static_cast<std::uint32_t>(sym.time_names().size()));
  kmax = std::max<std::uint32_t>(kmax, static_cast<std::uint32_t>(sym.wave_names().size()));
  std::vector<std::string> ts, ks;
  for (std::uint32_t i = 0; i < tmax; ++i) ts.push_back(sym.name(TimeLabel{i}));
  for (std::uint32_t i = 0; i < kmax; ++i) ks.push_back(sym.name(WaveLabel{i}));
  return Symbols(std::move(ts), std::move(ks));
}

inline json to_json(const TimeComb& t, const Symbols& sym) {
  json a = json::array();
  for (auto& [l, c] : t) a.push_back({{"t", sym.name(l)}, {"c", c}});
  return a;
}

inline TimeComb time_from_json(const json& j, const Symbols& sym) {
  TimeComb t;
  for (auto& e : j) t.add(sym.time(e.at("t").get<std::string>()), e.at("c").get<std::int64_t>());
  return t;
}

inline json to_json(const EnergyComb& e, const Symbols& sym) {
  json a = json::array();
  for (auto& [key, c] : e) {
    json item;
    switch (key.kind) {
      case EnergyKey::Kind::Omega: item = {{"kind", "omega"}, {"k", {sym.name(key.a)}}}; break;
      case EnergyKey::Kind::Dot:
        item = {{"kind", "dot"}, {"k", {sym.name(key.a), sym.name(key.b)}}};
        break;
      case EnergyKey::Kind::DotP: item = {{"kind", "dotp"}, {"k", {sym.name(key.a)}}}; break;
    }
    item["c"] = rational_to_string(c);
    a.push_back(std::move(item));
  }
  return a;
}

inline EnergyComb energy_from_json(const json& j, const Symbols& sym) {
  EnergyComb e;
  for (auto& item : j) {
    const auto kind = item.at("kind").get<std::string>();
    const auto& ks = item.at("k");
    const Rational c = rational_from_string(item.at("c").get<std::string>());
    if (kind == "omega") {
      e.add(EnergyKey::omega(sym.wave(ks.at(0).get<std::string>())), c);
    } else if (kind == "dot") {
      e.add(EnergyKey::dot(sym.wave(ks.at(0).get<std::string>()),
                           sym.wave(ks.at(1).get<std::string>())),
            c);
    } else if (kind == "dotp") {
      e.add(EnergyKey::dotp(sym.wave(ks.at(0).get<std::string>())), c);
    } else {
      throw std::invalid_argument("unknown energy symbol kind '" + kind + "'");
    }
  }
  return e;
}

inline json to_json(const ScalarMonomial& m, const Symbols& sym) {
  json j;
  j["coeff"] = rational_to_string(m.coeff());
  j["pow2pi"] = m.pow2pi();
  j["powLambda"] = m.pow_lambda();
  j["budgets"] = json::array();
  for (auto& b : m.budgets()) j["budgets"].push_back(to_json(b, sym));
  j["phase"] = json::array();
  for (auto& [t, row] : m.phase().rows())
    j["phase"].push_back({{"t", sym.name(t)}, {"energy", to_json(row, sym)}});
  j["factors"] = json::array();
  for (auto& f : m.factors()) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, DeltaK>) {
            j["factors"].push_back(
                {{"type", "deltaK"}, {"left", sym.name(x.left)}, {"right", sym.name(x.right)}});
          } else if constexpr (std::is_same_v<T, TimeDelta>) {
            j["factors"].push_back({{"type", "timeDelta"}, {"time", to_json(x.time, sym)}});
          } else if constexpr (std::is_same_v<T, EnergyDelta>) {
            j["factors"].push_back({{"type", "energyDelta"}, {"energy", to_json(x.energy, sym)}});
          } else if constexpr (std::is_same_v<T, MFactor>) {
            j["factors"].push_back({{"type", "M"}, {"k", sym.name(x.k)}, {"offset", x.offset}});
          }
        },
        f);
  }
  return j;
}

inline ScalarMonomial monomial_from_json(const json& j, const Symbols& sym) {
  ScalarMonomial m(rational_from_string(j.at("coeff").get<std::string>()));
  m.mul_2pi(j.at("pow2pi").get<int>());
  for (auto& b : j.at("budgets")) m.add_budget(time_from_json(b, sym));
  m.mul_lambda(j.at("powLambda").get<int>() - m.pow_lambda());
  for (auto& row : j.at("phase"))
    m.mul(OscExp{TimeComb(sym.time(row.at("t").get<std::string>())),
                 energy_from_json(row.at("energy"), sym)});
  for (auto& f : j.at("factors")) {
    const auto type = f.at("type").get<std::string>();
    if (type == "deltaK") {
      m.mul(DeltaK{sym.wave(f.at("left").get<std::string>()),
                   sym.wave(f.at("right").get<std::string>())});
    } else if (type == "timeDelta") {
      m.mul(TimeDelta{time_from_json(f.at("time"), sym)});
    } else if (type == "energyDelta") {
      m.mul(EnergyDelta{energy_from_json(f.at("energy"), sym)});
    } else if (type == "M") {
      m.mul(MFactor{sym.wave(f.at("k").get<std::string>()), f.at("offset").get<int>()});
    } else {
      throw std::invalid_argument("unknown factor type '" + type + "'");
    }
  }
  return m;
}

/// {"schemaVersion", "symbols": {"times", "waves"}, "terms": [...]}
inline json to_json(const ScalarSum& s, const Symbols& sym = {}) {
  Symbols full = covering_symbols(s, sym);
  json j;
  j["schemaVersion"] = kSchemaVersion;
  j["symbols"] = {{"times", full.time_names()}, {"waves", full.wave_names()}};
  j["terms"] = json::array();
  for (auto& m : s) j["terms"].push_back(to_json(m, full));
  return j;
}

struct ParsedSum {
  ScalarSum sum;
  Symbols symbols;
};

inline ParsedSum sum_from_json(const json& j) {
  if (j.at("schemaVersion").get<int>() != kSchemaVersion)
    throw std::invalid_argument("unsupported schemaVersion");
  ParsedSum out;
  out.symbols = Symbols(j.at("symbols").at("times").get<std::vector<std::string>>(),
                        j.at("symbols").at("waves").get<std::vector<std::string>>());
  for (auto& t : j.at("terms")) out.sum.add(monomial_from_json(t, out.symbols));
  return out;
}

}  // namespace io
}  // namespace qfree
