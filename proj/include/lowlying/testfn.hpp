#pragma once

// Even test functions with compactly supported Fourier transform, under the
// convention f̂(u) = ∫ f(x) e^{−2πixu} dx, and the functionals the density
// formulas need.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lowlying/common.hpp"

namespace lowlying {

/// n-point Gauss–Legendre nodes and weights on [−1, 1].
struct GaussLegendre {
  std::vector<double> x, w;

  explicit GaussLegendre(int n) : x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[static_cast<std::size_t>(i)] = z;
      w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  static const GaussLegendre& get(int n) {
    static const GaussLegendre g10(10), g20(20);
    return n <= 10 ? g10 : g20;
  }

  double integrate(const std::function<double(double)>& h, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * h(mid + half * x[i]);
    return s * half;
  }
};

/// ∫_a^b h, split at every breakpoint inside (a, b); exact for piecewise
/// polynomials of degree < 20 whose pieces meet at the breakpoints.
inline double integrate_pieces(const std::function<double(double)>& h, double a, double b, std::vector<double> breaks) {
  if (b <= a) return 0.0;
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const auto& gl = GaussLegendre::get(20);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
    if (hi > lo) s += gl.integrate(h, lo, hi);
  }
  return s;
}

/// ∫_{−X}^{X} h over panels of the given width, summed pairwise.
inline double integrate_panels(const std::function<double(double)>& h, double X, double width) {
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * X / width));
  const double step = 2.0 * X / static_cast<double>(n);
  const auto& gl = GaussLegendre::get(10);
  std::vector<double> parts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = -X + step * static_cast<double>(i);
    parts[i] = gl.integrate(h, lo, lo + step);
  }
  return pairwise_sum(parts);
}

class TestFn {
 public:
  enum class Kind { Zero, Fejer, Bump, Product };

  static TestFn zero() { return TestFn(Kind::Zero, 0.0); }

  static TestFn fejer(double sigma) {
    if (!(sigma > 0)) throw InvalidInput("fejer: sigma must be positive");
    return TestFn(Kind::Fejer, sigma);
  }

  static TestFn bump(double sigma) {
    if (!(sigma > 0)) throw InvalidInput("bump: sigma must be positive");
    return TestFn(Kind::Bump, sigma);
  }

  /// g = f1·f2, ĝ = f̂1 ∗ f̂2. Factors must not themselves be products.
  static TestFn product(const TestFn& f1, const TestFn& f2) {
    if (f1.kind_ == Kind::Product || f2.kind_ == Kind::Product) throw InvalidInput("product: nested products unsupported");
    if (f1.kind_ == Kind::Zero || f2.kind_ == Kind::Zero) return zero();
    TestFn g(Kind::Product, f1.sigma_ + f2.sigma_);
    g.factors_ = std::make_shared<std::pair<TestFn, TestFn>>(f1, f2);
    return g;
  }

  /// "fejer:0.45", "bump:0.5" or "zero".
  static TestFn parse(const std::string& text) {
    if (text == "zero") return zero();
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidInput("test function '" + text + "': expected kind:sigma");
    const std::string kind = text.substr(0, colon);
    double sigma = 0;
    try {
      std::size_t used = 0;
      sigma = std::stod(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) throw InvalidInput("");
    } catch (const std::exception&) {
      throw InvalidInput("test function '" + text + "': bad sigma");
    }
    if (kind == "fejer") return fejer(sigma);
    if (kind == "bump") return bump(sigma);
    throw InvalidInput("test function '" + text + "': unknown kind");
  }

  Kind kind() const { return kind_; }
  /// f̂ vanishes for |u| >= support().
  double support() const { return sigma_; }
  double sigma() const { return sigma_; }
  const TestFn& factor(int i) const { return i == 0 ? factors_->first : factors_->second; }

  std::string name() const {
    std::ostringstream os;
    os.precision(12);
    switch (kind_) {
      case Kind::Zero: return "zero";
      case Kind::Fejer: os << "fejer:" << sigma_; break;
      case Kind::Bump: os << "bump:" << sigma_; break;
      case Kind::Product: os << "(" << factor(0).name() << ")*(" << factor(1).name() << ")"; break;
    }
    return os.str();
  }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::Zero: return 0.0;
      case Kind::Fejer: {
        const double y = std::numbers::pi * sigma_ * x;
        if (std::abs(y) < 1e-8) return sigma_;
        const double s = std::sin(y) / y;
        return sigma_ * s * s;
      }
      case Kind::Bump: return 2.0 * sigma_ * bump_cos_integral(2.0 * std::numbers::pi * sigma_ * x);
      case Kind::Product: return factor(0)(x) * factor(1)(x);
    }
    return 0.0;
  }

  double hat(double u) const {
    u = std::abs(u);
    if (u >= sigma_) return 0.0;
    switch (kind_) {
      case Kind::Zero: return 0.0;
      case Kind::Fejer: return 1.0 - u / sigma_;
      case Kind::Bump: {
        const double v = u / sigma_;
        const double q = 1.0 - v * v;
        return q * q;
      }
      case Kind::Product: {
        const TestFn& a = factor(0);
        const TestFn& b = factor(1);
        const double lo = std::max(-a.sigma_, u - b.sigma_);
        const double hi = std::min(a.sigma_, u + b.sigma_);
        std::vector<double> br;
        for (double k : a.hat_breaks()) br.push_back(k);
        for (double k : b.hat_breaks()) br.push_back(u - k);
        return integrate_pieces([&](double v) { return a.hat(v) * b.hat(u - v); }, lo, hi, br);
      }
    }
    return 0.0;
  }

  double at_zero() const { return (*this)(0.0); }
  double hat_at_zero() const { return kind_ == Kind::Zero ? 0.0 : hat(0.0); }

  /// Points where f̂ fails to be polynomial (symmetric).
  std::vector<double> hat_breaks() const {
    switch (kind_) {
      case Kind::Zero: return {};
      case Kind::Fejer: return {-sigma_, 0.0, sigma_};
      case Kind::Bump: return {-sigma_, sigma_};
      case Kind::Product: {
        const double s1 = factor(0).sigma_, s2 = factor(1).sigma_;
        std::vector<double> out;
        for (double a : {-s1, 0.0, s1})
          for (double b : {-s2, 0.0, s2}) out.push_back(a + b);
        return out;
      }
    }
    return {};
  }

  /// ∫_a^b f̂(u) w(u) du with w polynomial on each side of 0.
  double hat_integral(double a, double b, const std::function<double(double)>& weight = nullptr) const {
    if (kind_ == Kind::Zero) return 0.0;
    a = std::max(a, -sigma_);
    b = std::min(b, sigma_);
    auto br = hat_breaks();
    br.push_back(0.0);
    if (!weight) return integrate_pieces([&](double u) { return hat(u); }, a, b, br);
    return integrate_pieces([&](double u) { return hat(u) * weight(u); }, a, b, br);
  }

  /// Approximate ∫_{|x| > X} f(x) dx; for X a multiple of 1/σ the Fejér
  /// remainder beyond the leading term is O(1/(σ³X³)), the others are O(X⁻³).
  double x_tail(double X) const {
    if (kind_ == Kind::Fejer) return 1.0 / (std::numbers::pi * std::numbers::pi * sigma_ * X);
    return 0.0;
  }

  /// ∫ f(x) dx by x-side quadrature over [−X, X] plus the tail estimate.
  double x_integral(double X = 4000.0) const {
    if (kind_ == Kind::Zero) return 0.0;
    const double width = 0.5 / std::max(1.0, sigma_);
    if (kind_ == Kind::Fejer) X = std::ceil(X * sigma_) / sigma_;
    return integrate_panels([&](double x) { return (*this)(x); }, X, width) + x_tail(X);
  }

 private:
  TestFn(Kind k, double s) : kind_(k), sigma_(s) {}

  /// ∫_0^1 (1−v²)² cos(wv) dv.
  static double bump_cos_integral(double w) {
    w = std::abs(w);
    if (w < 1.0) {
      double term = 1.0, s = 0.0;
      for (int k = 0; k < 16; ++k) {
        if (k > 0) term *= -w * w / ((2.0 * k - 1) * (2.0 * k));
        s += term * (1.0 / (2 * k + 1) - 2.0 / (2 * k + 3) + 1.0 / (2 * k + 5));
      }
      return s;
    }
    const double w2 = w * w;
    return 8.0 * ((3.0 - w2) * std::sin(w) - 3.0 * w * std::cos(w)) / (w2 * w2 * w);
  }

  Kind kind_;
  double sigma_;
  std::shared_ptr<const std::pair<TestFn, TestFn>> factors_;
};

inline TestFn product_fn(const TestFn& f1, const TestFn& f2) { return TestFn::product(f1, f2); }

struct Functionals {
  double f1_0 = 0, f2_0 = 0;
  double f1_hat0 = 0, f2_hat0 = 0;
  /// ∫|u| f̂1 f̂2
  double I_abs = 0;
  /// ∫ f1 f2 dx = ∫ f̂1 f̂2 du
  double P0 = 0;
  /// ∫_{−1}^{1} f̂1
  double I_box1 = 0;
};

inline double integral_abs_u(const TestFn& f1, const TestFn& f2) {
  const double s = std::min(f1.support(), f2.support());
  auto br = f1.hat_breaks();
  for (double b : f2.hat_breaks()) br.push_back(b);
  br.push_back(0.0);
  return integrate_pieces([&](double u) { return std::abs(u) * f1.hat(u) * f2.hat(u); }, -s, s, br);
}

inline double plancherel_product(const TestFn& f1, const TestFn& f2) {
  const double s = std::min(f1.support(), f2.support());
  auto br = f1.hat_breaks();
  for (double b : f2.hat_breaks()) br.push_back(b);
  return integrate_pieces([&](double u) { return f1.hat(u) * f2.hat(u); }, -s, s, br);
}

inline Functionals functionals(const TestFn& f1, const TestFn& f2) {
  Functionals out;
  out.f1_0 = f1.at_zero();
  out.f2_0 = f2.at_zero();
  out.f1_hat0 = f1.hat_at_zero();
  out.f2_hat0 = f2.hat_at_zero();
  out.I_abs = integral_abs_u(f1, f2);
  out.P0 = plancherel_product(f1, f2);
  out.I_box1 = f1.hat_integral(-1.0, 1.0);
  return out;
}

}  // namespace lowlying
