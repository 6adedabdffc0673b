#pragma once

// The isothermal no-slip drift flux system in Riemann invariants:
//   r^i_t + V^i r^i_x = 0,  V = (r1+r2+1, r1+r2-1, r1+r2),
// the physical <-> Riemann variable maps, the point transformation to the
// Klein-Gordon side and its inverse, the pulled-back operators Dy~, Dz~, J~
// and the semi-Hamiltonian (Tsarev) integrability check.

#include <array>

#include "dfx/jet.hpp"

namespace dfx {

std::array<Expr, 3> characteristic_velocities();

struct RiemannPoint {
  double r1, r2, r3;
};

// r1 = (u + ln(rho1+rho2))/2, r2 = (u - ln(rho1+rho2))/2, r3 = rho2/rho1
RiemannPoint riemann_from_physical(double u, double rho1, double rho2);
// returns (u, rho1, rho2)
std::array<double, 3> physical_from_riemann(const RiemannPoint& p);

// Tsarev condition for a velocity triple over the dependent variables
bool semi_hamiltonian_check(const std::array<Expr, 3>& V);
bool semi_hamiltonian_check();

// point transformation to Klein-Gordon variables:
//   y = r1/2, z = -r2/2, p = t, q = e^{(r1-r2)/2}(x - (r1+r2+1)t), s = r3
// and its inverse over parameters y,z,p,q,s
struct PointMap {
  std::array<Expr, 5> forward;  // (y,z,p,q,s) as functions of (t,x,r1,r2,r3)
  std::array<Expr, 5> inverse;  // (t,x,r1,r2,r3) as functions of ($y,$z,$p,$q,$s)
};

PointMap transform_T();
std::array<double, 5> apply_T(double t, double x, double r1, double r2, double r3);
std::array<double, 5> apply_T_inverse(double y, double z, double p, double q, double s);

// q~ = e^{(r1-r2)/2}(x - (r1+r2+1)t)
Expr q_tilde();
// Dy~ = -(1/r1_x)(Dt + V^2 Dx),  Dz~ = -(1/r2_x)(Dt + V^1 Dx),
// J~ = (r1/2) Dy~ + (r2/2) Dz~
Expr tilde_dy(const Expr& e);
Expr tilde_dz(const Expr& e);
Expr tilde_j(const Expr& e);

// operator words over the tilde operators, e.g. Dz^2 then (J + c)^kappa
enum class TildeOp { J, Dy, Dz };

struct QSpec {
  int kappa = 0;       // power of (J + cshift)
  Rational cshift = 0;
  TildeOp inner = TildeOp::J;  // innermost repeated operator
  int iota = 0;                // its power (0 = none)

  static QSpec j_power(int kappa) { return {kappa, 0, TildeOp::J, 0}; }
  static QSpec d_power(TildeOp d, int iota) { return {0, 0, d, iota}; }
};

// applies (J + c)^kappa ∘ inner^iota to e
Expr apply_qspec(const QSpec& q, Expr e);
Expr apply_tilde(TildeOp op, const Expr& e);

}  // namespace dfx
