#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfree::oracle {

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : std::runtime_error(what + " (estimated error " + std::to_string(estimate) + ")"),
        estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

/// Smooth, rapidly decaying test function f(t, x).
struct TestFunction {
  std::string name;
  std::function<double(double, double)> f;
};

inline TestFunction test_function(const std::string& name) {
  if (name == "gaussian")
    return {name, [](double t, double x) { return std::exp(-(t * t + x * x) / 2); }};
  if (name == "anisotropic")
    return {name, [](double t, double x) { return std::exp(-(t * t / 2 + x * x)); }};
  if (name == "shifted")
    return {name, [](double t, double x) {
              return std::exp(-((t - 0.3) * (t - 0.3) + (x + 0.2) * (x + 0.2)) / 2);
            }};
  if (name == "zero") return {name, [](double, double) { return 0.0; }};
  throw std::invalid_argument("unknown test function '" + name + "'");
}

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0;
};

/// I(λ) = ∬ f(t,x) λ⁻² e^{-itx/λ²} dt dx, evaluated after u = t/λ² as
/// ∫du ∫dx f(λ²u, x) e^{-iux} by nested adaptive Gauss–Kronrod over a box
/// [−U,U]×[−X,X] that is doubled until the value stops changing.
inline QuadratureResult oscillationQuadrature(const TestFunction& fn, double lambda,
                                              double tol = 1e-10) {
  if (!(lambda > 0)) throw std::invalid_argument("oscillationQuadrature needs lambda > 0");
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr unsigned depth = 12;
  const double l2 = lambda * lambda;

  auto box = [&](double U, double X) {
    double err = 0;
    auto inner = [&](double u, bool imag) {
      double e = 0;
      double v = GK::integrate(
          [&](double x) {
            double w = fn.f(l2 * u, x);
            return imag ? -w * std::sin(u * x) : w * std::cos(u * x);
          },
          -X, X, depth, tol, &e);
      err = std::max(err, e * 2 * U);
      return v;
    };
    double er = 0, ei = 0;
    double re = GK::integrate([&](double u) { return inner(u, false); }, -U, U, depth, tol, &er);
    double im = GK::integrate([&](double u) { return inner(u, true); }, -U, U, depth, tol, &ei);
    return QuadratureResult{{re, im}, std::hypot(er, ei) + err};
  };

  double U = 8, X = 8;
  QuadratureResult prev = box(U, X);
  for (int grow = 0; grow < 6; ++grow) {
    U *= 2;
    X *= 2;
    QuadratureResult cur = box(U, X);
    double change = std::abs(cur.value - prev.value);
    double scale = std::max(1.0, std::abs(cur.value));
    if (!std::isfinite(cur.value.real()) || !std::isfinite(cur.value.imag()))
      throw QuadratureError("oscillation quadrature produced a non-finite value", change);
    if (change <= 1e-9 * scale && cur.error_estimate <= 1e-7 * scale)
      return {cur.value, cur.error_estimate + change};
    prev = cur;
  }
  throw QuadratureError("oscillation quadrature did not converge at lambda=" + std::to_string(lambda),
                        prev.error_estimate);
}

struct SweepRow {
  double lambda;
  std::complex<double> value;
  double abs_error;  // |I(λ) − 2π f(0,0)|
};

inline std::vector<SweepRow> quadratureSweep(const TestFunction& fn,
                                             const std::vector<double>& lambdas) {
  const double target = 2 * std::numbers::pi * fn.f(0, 0);
  std::vector<SweepRow> rows;
  for (double l : lambdas) {
    auto r = oscillationQuadrature(fn, l);
    rows.push_back({l, r.value, std::abs(r.value - target)});
  }
  return rows;
}

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "lambda,realPart,imagPart,absError\n";
  const auto old = os.precision();
  for (auto& r : rows) {
    os.precision(15);
    os << r.lambda << ",";
    os.precision(17);
    os << r.value.real() << "," << r.value.imag() << "," << r.abs_error << "\n";
  }
  os.precision(old);
}

}  // namespace qfree::oracle
