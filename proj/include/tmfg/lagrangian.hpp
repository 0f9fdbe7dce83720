#pragma once

#include <array>
#include <stdexcept>

#include "tmfg/fourier.hpp"

namespace tmfg {

// Tonelli Lagrangian families with closed-form Legendre duals. The Hessian in
// v is the identity for both, so strict convexity and superlinearity hold by
// construction.
//
//   Mechanical:      L(x,v) = |v|^2/2 - V(x)        H(x,p) = |p|^2/2 + V(x)
//   QuadraticDrift:  L(x,v) = |v - b(x)|^2/2        H(x,p) = |p|^2/2 + <p,b(x)>
struct LagrangianSpec {
  enum class Family { Mechanical, QuadraticDrift };

  Family family = Family::Mechanical;
  FourierSeries potential;                 // V, Mechanical only
  std::array<FourierSeries, 2> drift{};    // b, QuadraticDrift only

  Vec drift_at(const Vec& x) const { return {drift[0].eval(x), drift[1].eval(x)}; }

  double lagrangian(const Vec& x, const Vec& v) const {
    switch (family) {
      case Family::Mechanical:
        return 0.5 * dot(v, v) - potential.eval(x);
      case Family::QuadraticDrift: {
        const Vec r = v - drift_at(x);
        return 0.5 * dot(r, r);
      }
    }
    throw std::logic_error("LagrangianSpec: bad family");
  }

  // dL/dv
  Vec velocity_gradient(const Vec& x, const Vec& v) const {
    switch (family) {
      case Family::Mechanical:
        return v;
      case Family::QuadraticDrift:
        return v - drift_at(x);
    }
    throw std::logic_error("LagrangianSpec: bad family");
  }

  double hamiltonian(const Vec& x, const Vec& p) const {
    switch (family) {
      case Family::Mechanical:
        return 0.5 * dot(p, p) + potential.eval(x);
      case Family::QuadraticDrift:
        return 0.5 * dot(p, p) + dot(p, drift_at(x));
    }
    throw std::logic_error("LagrangianSpec: bad family");
  }

  // dH/dp, the optimal velocity at momentum p.
  Vec hamiltonian_gradient(const Vec& x, const Vec& p) const {
    switch (family) {
      case Family::Mechanical:
        return p;
      case Family::QuadraticDrift:
        return p + drift_at(x);
    }
    throw std::logic_error("LagrangianSpec: bad family");
  }

  static LagrangianSpec mechanical(FourierSeries V) {
    LagrangianSpec s;
    s.family = Family::Mechanical;
    s.potential = std::move(V);
    return s;
  }

  static LagrangianSpec quadratic_drift(FourierSeries b0, FourierSeries b1 = {}) {
    LagrangianSpec s;
    s.family = Family::QuadraticDrift;
    s.drift = {std::move(b0), std::move(b1)};
    return s;
  }
};

}  // namespace tmfg
