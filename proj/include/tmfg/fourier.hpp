#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace tmfg {

// Points and vectors on the torus / tangent space. For d = 1 the second
// component is always zero.
using Vec = std::array<double, 2>;

inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }
inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1]}; }

// Finite trigonometric series on T^d (d <= 2):
//   f(x) = a0 + sum_k [ a_k cos(2 pi <k,x>) + b_k sin(2 pi <k,x>) ].
// Closed-form gradient; periodic by construction.
struct FourierSeries {
  struct Mode {
    std::array<int, 2> k{0, 0};
    double a = 0.0;
    double b = 0.0;
  };

  double a0 = 0.0;
  std::vector<Mode> modes;

  double eval(const Vec& x) const {
    double s = a0;
    for (const auto& m : modes) {
      const double th = 2.0 * M_PI * (m.k[0] * x[0] + m.k[1] * x[1]);
      s += m.a * std::cos(th) + m.b * std::sin(th);
    }
    return s;
  }

  Vec grad(const Vec& x) const {
    Vec g{0.0, 0.0};
    for (const auto& m : modes) {
      const double th = 2.0 * M_PI * (m.k[0] * x[0] + m.k[1] * x[1]);
      const double d = 2.0 * M_PI * (-m.a * std::sin(th) + m.b * std::cos(th));
      g[0] += d * m.k[0];
      g[1] += d * m.k[1];
    }
    return g;
  }

  bool is_zero() const { return a0 == 0.0 && modes.empty(); }

  static FourierSeries constant(double c) {
    FourierSeries f;
    f.a0 = c;
    return f;
  }

  static FourierSeries cosine(int k, double amp = 1.0) {
    FourierSeries f;
    f.modes.push_back({{k, 0}, amp, 0.0});
    return f;
  }

  static FourierSeries sine(int k, double amp = 1.0) {
    FourierSeries f;
    f.modes.push_back({{k, 0}, 0.0, amp});
    return f;
  }
};

// Real trigonometric test battery: cos and sin of every nonzero mode with
// |k|_inf <= order, one representative per +-k pair.
inline std::vector<FourierSeries> test_modes(int dim, int order) {
  std::vector<FourierSeries> out;
  const int lo1 = dim == 2 ? -order : 0;
  const int hi1 = dim == 2 ? order : 0;
  for (int k0 = 0; k0 <= order; ++k0)
    for (int k1 = lo1; k1 <= hi1; ++k1) {
      if (k0 == 0 && k1 <= 0) continue;
      FourierSeries c, s;
      c.modes.push_back({{k0, k1}, 1.0, 0.0});
      s.modes.push_back({{k0, k1}, 0.0, 1.0});
      out.push_back(c);
      out.push_back(s);
    }
  return out;
}

}  // namespace tmfg
