#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "tmfg/fourier.hpp"
#include "tmfg/measure.hpp"

namespace tmfg {

// Density coupling F(x,m) families. All are Lipschitz in m with respect to
// d1; declared bounds f_inf and lip_f are spot-checked by tests, not derived.
//
//   Zero:         F = 0
//   Separable:    F(x,m) = f(x) * G(int phi dm), G identity or clamped affine
//   Convolution:  F(x,m) = kappa * (rho * m)(x), rho a periodic kernel
struct CouplingSpec {
  enum class Family { Zero, Separable, Convolution };

  struct ScalarMap {
    enum class Kind { Identity, ClampAffine };
    Kind kind = Kind::Identity;
    double alpha = 1.0, beta = 0.0;  // s -> alpha*s + beta
    double lo = 0.0, hi = 1.0;

    double eval(double s) const {
      if (kind == Kind::Identity) return s;
      return std::clamp(alpha * s + beta, lo, hi);
    }
  };

  Family family = Family::Zero;
  FourierSeries f;        // Separable spatial factor
  FourierSeries moment;   // Separable phi
  ScalarMap g;
  FourierSeries kernel;   // Convolution rho
  double kappa = 0.0;
  double f_inf = 0.0;     // declared sup bound on |F| and |D_x F|
  double lip_f = 0.0;     // declared Lipschitz constant in d1

  double moment_of(const GridMeasure& m) const {
    double s = 0.0;
    for (std::int64_t i = 0; i < m.grid.num_nodes(); ++i)
      s += m.w[i] * moment.eval(m.grid.node(i));
    return s;
  }

  double eval(const Vec& x, const GridMeasure& m) const {
    switch (family) {
      case Family::Zero:
        return 0.0;
      case Family::Separable:
        return f.eval(x) * g.eval(moment_of(m));
      case Family::Convolution: {
        double s = 0.0;
        for (std::int64_t i = 0; i < m.grid.num_nodes(); ++i) {
          if (m.w[i] == 0.0) continue;
          s += m.w[i] * kernel.eval(x - m.grid.node(i));
        }
        return kappa * s;
      }
    }
    throw std::logic_error("CouplingSpec: bad family");
  }

  Vec grad_x(const Vec& x, const GridMeasure& m) const {
    switch (family) {
      case Family::Zero:
        return {0.0, 0.0};
      case Family::Separable:
        return g.eval(moment_of(m)) * f.grad(x);
      case Family::Convolution: {
        Vec s{0.0, 0.0};
        for (std::int64_t i = 0; i < m.grid.num_nodes(); ++i) {
          if (m.w[i] == 0.0) continue;
          s = s + m.w[i] * kernel.grad(x - m.grid.node(i));
        }
        return kappa * s;
      }
    }
    throw std::logic_error("CouplingSpec: bad family");
  }

  bool depends_on_measure() const { return family != Family::Zero; }

  // F at every grid node; the per-node cache used by action table assembly.
  std::vector<double> eval_all(const TorusGrid& grid, const GridMeasure& m) const;

  static CouplingSpec zero() { return CouplingSpec{}; }

  static CouplingSpec separable(FourierSeries f_, FourierSeries phi, ScalarMap g_,
                                double f_inf_, double lip_f_) {
    CouplingSpec c;
    c.family = Family::Separable;
    c.f = std::move(f_);
    c.moment = std::move(phi);
    c.g = g_;
    c.f_inf = f_inf_;
    c.lip_f = lip_f_;
    return c;
  }

  static CouplingSpec convolution(FourierSeries rho, double kappa_, double f_inf_,
                                  double lip_f_) {
    CouplingSpec c;
    c.family = Family::Convolution;
    c.kernel = std::move(rho);
    c.kappa = kappa_;
    c.f_inf = f_inf_;
    c.lip_f = lip_f_;
    return c;
  }
};

}  // namespace tmfg
