#pragma once

#include <json.hpp>

#include <cctype>
#include <complex>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfree/correlator.hpp"
#include "qfree/diagrams.hpp"
#include "qfree/io.hpp"
#include "qfree/masterfield.hpp"
#include "qfree/oracle/doubled.hpp"
#include "qfree/oracle/numeric.hpp"
#include "qfree/oracle/qdef.hpp"
#include "qfree/oracle/quadrature.hpp"
#include "qfree/render.hpp"
#include "qfree/word.hpp"

namespace qfree::cli {

/// Invalid user input. `position` is the 1-based column of the offending
/// token when known, 0 otherwise.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what, std::size_t position = 0)
      : std::invalid_argument(position ? what + " (at column " + std::to_string(position) + ")"
                                       : what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

enum class Mode { Finite, Limit, Free, OracleFock, OracleDouble, CheckTheorem2, Diagrams, Quadrature };

inline const std::vector<std::pair<std::string, Mode>>& mode_names() {
  static const std::vector<std::pair<std::string, Mode>> names{
      {"finite", Mode::Finite},           {"limit", Mode::Limit},
      {"free", Mode::Free},               {"oracle-fock", Mode::OracleFock},
      {"oracle-double", Mode::OracleDouble}, {"check-theorem2", Mode::CheckTheorem2},
      {"diagrams", Mode::Diagrams},       {"quadrature", Mode::Quadrature}};
  return names;
}

inline Mode parse_mode(const std::string& s) {
  for (auto& [n, m] : mode_names())
    if (n == s) return m;
  throw UsageError("unknown mode '" + s + "'");
}

inline std::string mode_name(Mode m) {
  for (auto& [n, mm] : mode_names())
    if (mm == m) return n;
  return "?";
}

inline Dispersion parse_dispersion(const std::string& s) {
  if (s == "linear") return Dispersion::Linear;
  if (s == "quadratic") return Dispersion::Quadratic;
  throw UsageError("unknown dispersion '" + s + "' (expected linear or quadratic)");
}

inline StateSpec parse_state(const std::string& s, double beta, Dispersion d) {
  if (s == "fock") return StateSpec::fock();
  if (s == "gaussian") return StateSpec::gaussian();
  if (s == "temperature") {
    if (!(beta > 0)) throw UsageError("temperature state needs --beta > 0");
    return StateSpec::temperature(beta, d);
  }
  throw UsageError("unknown state '" + s + "' (expected fock, gaussian or temperature)");
}

struct ParsedPattern {
  OperatorWord word;
  Symbols symbols;
};

/// Whitespace-separated "a" / "a+" tokens; labels t1..tN, k1..kN by position.
inline ParsedPattern parse_token_pattern(const std::string& text) {
  std::vector<int> pattern;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::string tok = text.substr(start, i - start);
    if (tok == "a")
      pattern.push_back(-1);
    else if (tok == "a+")
      pattern.push_back(+1);
    else
      throw UsageError("pattern token '" + tok + "' is neither 'a' nor 'a+'", start + 1);
  }
  return {OperatorWord::from_pattern(pattern), Symbols::positional(pattern.size())};
}

/// [{"op": "a"|"a+", "t": name, "k": name}, ...]; ids follow first appearance.
inline ParsedPattern parse_json_pattern(const nlohmann::json& j) {
  if (!j.is_array()) throw UsageError("JSON pattern must be an array of letters");
  ParsedPattern out;
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    std::string where = "pattern letter " + std::to_string(i + 1);
    if (!e.is_object() || !e.contains("op") || !e.contains("t") || !e.contains("k"))
      throw UsageError(where + " needs fields op, t and k");
    std::string op = e["op"].get<std::string>();
    if (op != "a" && op != "a+") throw UsageError(where + ": op must be 'a' or 'a+'");
    letters.push_back({op == "a+" ? 1 : -1, out.symbols.intern_time(e["t"].get<std::string>()),
                       out.symbols.intern_wave(e["k"].get<std::string>())});
  }
  try {
    out.word = OperatorWord(std::move(letters));
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }
  return out;
}

inline ParsedPattern parse_pattern(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("malformed JSON pattern: ") + e.what(), e.byte);
    }
    return parse_json_pattern(j);
  }
  return parse_token_pattern(text);
}

struct JobSpec {
  std::optional<ParsedPattern> pattern;
  StateSpec state = StateSpec::fock();
  Mode mode = Mode::Finite;
  std::size_t max_n = 12;
  std::optional<std::size_t> all_n;  // check-theorem2 over every balanced pattern of this length
  std::optional<oracle::VectorModel> numeric;
  bool json = false;
  std::string test_function = "gaussian";
  std::vector<double> lambdas{0.4, 0.2, 0.1, 0.05};
};

/// Numeric assignment file:
///   {"lambda": 0.7, "times": {"t1": 0.3, ...}, "waves": {"k1": [x, y, z], ...},
///    "p": [x, y, z], "dispersion": "linear"}
inline oracle::VectorModel numeric_from_json(const nlohmann::json& j, const Symbols& sym) {
  oracle::VectorModel m;
  try {
    m.lambda = j.value("lambda", 1.0);
    for (auto& [name, v] : j.at("times").items()) m.times[sym.time(name)] = v.get<double>();
    for (auto& [name, v] : j.at("waves").items())
      m.waves[sym.wave(name)] = v.get<std::array<double, 3>>();
    if (j.contains("p")) m.p = j["p"].get<std::array<double, 3>>();
    m.dispersion = parse_dispersion(j.value("dispersion", std::string("linear")));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid numeric assignment: ") + e.what());
  }
  if (!(m.lambda > 0)) throw UsageError("numeric assignment needs lambda > 0");
  return m;
}

inline oracle::VectorModel load_numeric(const std::string& path, const Symbols& sym) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open numeric assignment file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("malformed numeric assignment file '" + path + "': " + e.what(), e.byte);
  }
  return numeric_from_json(j, sym);
}

inline void validate(const JobSpec& job) {
  const bool needs_word = job.mode != Mode::Quadrature &&
                          !(job.mode == Mode::CheckTheorem2 && job.all_n);
  if (needs_word && !job.pattern) throw UsageError("mode " + mode_name(job.mode) + " needs --pattern");
  if (job.pattern && job.pattern->word.size() > job.max_n)
    throw UsageError("pattern length " + std::to_string(job.pattern->word.size()) +
                     " exceeds the maximum " + std::to_string(job.max_n));
  if (job.all_n && *job.all_n > job.max_n)
    throw UsageError("--all-n exceeds the maximum " + std::to_string(job.max_n));
  if (job.mode == Mode::OracleFock && !job.state.is_fock())
    throw UsageError("mode oracle-fock requires --state fock");
  if (job.numeric && job.mode != Mode::Finite && job.mode != Mode::OracleFock &&
      job.mode != Mode::OracleDouble)
    throw UsageError("numeric evaluation applies to finite, oracle-fock and oracle-double only");
  if (job.mode == Mode::Quadrature && job.lambdas.empty())
    throw UsageError("quadrature needs at least one lambda");
}

struct Report {
  std::string text;
  std::string csv;  // quadrature rows
  int exit_code = 0;
};

inline nlohmann::json state_json(const StateSpec& s) {
  nlohmann::json j{{"name", s.name()}};
  if (auto* t = s.temperature_params()) {
    j["beta"] = t->beta;
    j["dispersion"] = t->dispersion == Dispersion::Linear ? "linear" : "quadratic";
  }
  return j;
}

inline nlohmann::json pattern_json(const ParsedPattern& p) {
  nlohmann::json a = nlohmann::json::array();
  for (auto& l : p.word.letters())
    a.push_back({{"op", l.is_creation() ? "a+" : "a"},
                 {"t", p.symbols.name(l.time)},
                 {"k", p.symbols.name(l.wave)}});
  return a;
}

inline std::string pattern_text(const std::vector<int>& pattern) {
  std::string s;
  for (int e : pattern) s += (s.empty() ? "" : " ") + std::string(e > 0 ? "a+" : "a");
  return s;
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

namespace detail {

inline void emit_sum(std::ostringstream& os, nlohmann::json& j, const std::string& key,
                     const ScalarSum& s, const Symbols& sym) {
  os << key << " terms: " << s.size() << "\n" << render(s, sym) << "\n";
  j[key] = io::to_json(s, sym);
}

inline Report diagrams_report(const JobSpec& job, nlohmann::json& j) {
  std::ostringstream os;
  auto ds = enumeratePairings(job.pattern->word.pattern());
  std::size_t nc = 0, fs = 0;
  nlohmann::json list = nlohmann::json::array();
  for (auto& d : ds) {
    bool a = isNonCrossing(d), b = fockSurviving(d);
    nc += a;
    fs += b;
    list.push_back({{"edges", d.to_string()}, {"nonCrossing", a}, {"fockSurviving", b}});
  }
  os << "total=" << ds.size() << "\nnoncrossing=" << nc << "\nfock_surviving=" << fs << "\n";
  for (auto& d : ds)
    os << d.to_string() << (isNonCrossing(d) ? " noncrossing" : " crossing")
       << (fockSurviving(d) ? " fock" : "") << "\n";
  j["diagrams"] = {{"total", ds.size()}, {"noncrossing", nc}, {"fockSurviving", fs}, {"list", list}};
  return {os.str(), "", 0};
}

inline Report theorem2_report(const JobSpec& job, nlohmann::json& j) {
  std::ostringstream os;
  std::vector<ParsedPattern> words;
  if (job.all_n) {
    for (auto& p : balanced_patterns(*job.all_n))
      words.push_back({OperatorWord::from_pattern(p), Symbols::positional(p.size())});
  } else {
    words.push_back(*job.pattern);
  }
  bool all = true;
  nlohmann::json rows = nlohmann::json::array();
  for (auto& w : words) {
    auto r = theorem2Check(w.word, job.state, w.symbols);
    all = all && r.equal;
    std::string pt = pattern_text(w.word.pattern());
    os << (r.equal ? "PASS " : "FAIL ") << pt << " (" << r.limit.size() << " terms)\n";
    for (auto& t : r.only_in_limit) os << "  only in limit: " << t << "\n";
    for (auto& t : r.only_in_free) os << "  only in free:  " << t << "\n";
    rows.push_back({{"pattern", pt},
                    {"equal", r.equal},
                    {"terms", r.limit.size()},
                    {"onlyInLimit", r.only_in_limit},
                    {"onlyInFree", r.only_in_free}});
  }
  os << (all ? "theorem2: pass" : "theorem2: FAIL") << " (" << words.size() << " patterns)\n";
  j["theorem2"] = {{"passed", all}, {"checks", rows}};
  return {os.str(), "", all ? 0 : 1};
}

inline Report quadrature_report(const JobSpec& job, nlohmann::json& j) {
  auto fn = oracle::test_function(job.test_function);
  auto rows = oracle::quadratureSweep(fn, job.lambdas);
  std::ostringstream csv;
  oracle::write_csv(csv, rows);
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (job.lambdas[i] < job.lambdas[i - 1] && !(rows[i].abs_error < rows[i - 1].abs_error))
      decreasing = false;
  nlohmann::json a = nlohmann::json::array();
  for (auto& r : rows)
    a.push_back({{"lambda", r.lambda},
                 {"realPart", r.value.real()},
                 {"imagPart", r.value.imag()},
                 {"absError", r.abs_error}});
  j["quadrature"] = {{"testFunction", fn.name}, {"rows", a}, {"errorDecreasing", decreasing}};
  std::string text = csv.str() + (decreasing ? "error decreasing: yes\n" : "error decreasing: NO\n");
  return {text, csv.str(), decreasing ? 0 : 1};
}

}  // namespace detail

/// Runs one job. Text goes to Report::text unless job.json, in which case
/// Report::text holds the JSON document. Throws UsageError on invalid input
/// and StructuralError when an engine rejects an intermediate term.
inline Report run(const JobSpec& job) {
  validate(job);
  nlohmann::json j;
  j["schemaVersion"] = kSchemaVersion;
  j["mode"] = mode_name(job.mode);
  j["state"] = state_json(job.state);
  if (job.pattern) j["pattern"] = pattern_json(*job.pattern);

  std::ostringstream os;
  os << "mode: " << mode_name(job.mode) << "\n";
  if (job.mode != Mode::Quadrature) os << "state: " << job.state.name() << "\n";
  if (job.pattern) os << "pattern: " << pattern_text(job.pattern->word.pattern()) << "\n";

  Report r;
  std::optional<ScalarSum> evaluated;
  switch (job.mode) {
    case Mode::Diagrams: r = detail::diagrams_report(job, j); break;
    case Mode::CheckTheorem2: r = detail::theorem2_report(job, j); break;
    case Mode::Quadrature: r = detail::quadrature_report(job, j); break;
    case Mode::Finite:
    case Mode::Limit:
    case Mode::Free: {
      const auto& w = job.pattern->word;
      ScalarSum s = job.mode == Mode::Finite  ? finiteLambdaCorrelator(w, job.state)
                    : job.mode == Mode::Limit ? limitCorrelator(w, job.state)
                                              : freeCorrelator(master_word(w), job.state);
      detail::emit_sum(os, j, "result", s, job.pattern->symbols);
      evaluated = s;
      break;
    }
    case Mode::OracleFock:
    case Mode::OracleDouble: {
      const auto& w = job.pattern->word;
      ScalarSum o = job.mode == Mode::OracleFock ? oracle::qdefNormalOrder(w)
                                                 : oracle::doubledNormalOrder(w, job.state);
      ScalarSum f = finiteLambdaCorrelator(w, job.state);
      detail::emit_sum(os, j, "result", o, job.pattern->symbols);
      bool eq = o == f;
      os << "agrees with finite correlator: " << (eq ? "yes" : "NO") << "\n";
      j["agreesWithFinite"] = eq;
      r.exit_code = eq ? 0 : 1;
      evaluated = o;
      break;
    }
  }

  if (evaluated && job.numeric) {
    auto a = job.numeric->assignment(job.state);
    std::complex<double> v;
    try {
      v = oracle::numericEval(*evaluated, a, job.pattern->symbols);
    } catch (const oracle::UnassignedSymbol& e) {
      throw UsageError(e.what());
    }
    os << "numeric: " << format_double(v.real()) << " " << format_double(v.imag()) << "\n";
    j["numeric"] = {{"re", v.real()}, {"im", v.imag()}};
  }

  j["exitCode"] = r.exit_code;
  Report out;
  out.exit_code = r.exit_code;
  out.csv = r.csv;
  out.text = job.json ? j.dump(2) + "\n" : os.str() + r.text;
  return out;
}

/// Random vector model for the job's word (labels 0..N-1).
inline oracle::VectorModel random_numeric(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::VectorModel::random(n, rng);
}

}  // namespace qfree::cli
