#include "dfx/model.hpp"

#include <cmath>

namespace dfx {

namespace {

Expr r(int i) { return Expr::atom(Atom::jet(i, 0)); }
Expr rx(int i) { return Expr::atom(Atom::jet(i, 1)); }

}  // namespace

std::array<Expr, 3> characteristic_velocities() {
  return {velocity(1), velocity(2), velocity(3)};
}

RiemannPoint riemann_from_physical(double u, double rho1, double rho2) {
  if (rho1 + rho2 <= 0) fail(ErrorKind::DomainError, "total density must be positive");
  if (rho1 == 0) fail(ErrorKind::DomainError, "rho1 must be nonzero for r3");
  double s = std::log(rho1 + rho2);
  return {(u + s) / 2.0, (u - s) / 2.0, rho2 / rho1};
}

std::array<double, 3> physical_from_riemann(const RiemannPoint& p) {
  double u = p.r1 + p.r2;
  double total = std::exp(p.r1 - p.r2);
  double rho1 = total / (1.0 + p.r3);
  return {u, rho1, total - rho1};
}

bool semi_hamiltonian_check(const std::array<Expr, 3>& V) {
  auto dv = [&](int k, int i) { return diff(V[static_cast<size_t>(k - 1)], Atom::jet(i, 0)); };
  auto v = [&](int k) { return V[static_cast<size_t>(k - 1)]; };
  for (int k = 1; k <= 3; ++k) {
    for (int i = 1; i <= 3; ++i) {
      for (int j = i + 1; j <= 3; ++j) {
        if (i == k || j == k) continue;
        // cleared-denominator form of
        //   d_i (V^k_j / (V^j - V^k)) = d_j (V^k_i / (V^i - V^k))
        Expr dji = v(j) - v(k);
        Expr dik = v(i) - v(k);
        if (dji.is_zero() || dik.is_zero())
          fail(ErrorKind::DomainError, "coinciding characteristic velocities");
        Expr lhs = (diff(dv(k, j), Atom::jet(i, 0)) * dji - dv(k, j) * (dv(j, i) - dv(k, i))) *
                   dik * dik;
        Expr rhs = (diff(dv(k, i), Atom::jet(j, 0)) * dik - dv(k, i) * (dv(i, j) - dv(k, j))) *
                   dji * dji;
        if (!(lhs - rhs).is_zero()) return false;
      }
    }
  }
  return true;
}

bool semi_hamiltonian_check() { return semi_hamiltonian_check(characteristic_velocities()); }

Expr q_tilde() {
  Expr half = Expr::num(rat(1, 2));
  return Expr::exp_of(half * r(1) - half * r(2)) *
         (Expr::atom(Atom::x()) - velocity(1) * Expr::atom(Atom::t()));
}

PointMap transform_T() {
  PointMap m;
  Expr half = Expr::num(rat(1, 2));
  m.forward[0] = half * r(1);
  m.forward[1] = -half * r(2);
  m.forward[2] = Expr::atom(Atom::t());
  m.forward[3] = q_tilde();
  m.forward[4] = r(3);

  Expr y = Expr::atom(Atom::param("y"));
  Expr z = Expr::atom(Atom::param("z"));
  Expr p = Expr::atom(Atom::param("p"));
  Expr q = Expr::atom(Atom::param("q"));
  Expr s = Expr::atom(Atom::param("s"));
  m.inverse[0] = p;
  m.inverse[1] = Expr::exp_of(-y - z) * q + (2 * y - 2 * z + Expr::one()) * p;
  m.inverse[2] = 2 * y;
  m.inverse[3] = Expr::num(-2) * z;
  m.inverse[4] = s;
  return m;
}

std::array<double, 5> apply_T(double t, double x, double r1, double r2, double r3) {
  double q = std::exp((r1 - r2) / 2.0) * (x - (r1 + r2 + 1.0) * t);
  return {r1 / 2.0, -r2 / 2.0, t, q, r3};
}

std::array<double, 5> apply_T_inverse(double y, double z, double p, double q, double s) {
  double x = std::exp(-y - z) * q + (2.0 * y - 2.0 * z + 1.0) * p;
  return {p, x, 2.0 * y, -2.0 * z, s};
}

Expr tilde_dy(const Expr& e) {
  return -rx(1).pow(-1) * (total_dt(e) + velocity(2) * total_dx(e));
}

Expr tilde_dz(const Expr& e) {
  return -rx(2).pow(-1) * (total_dt(e) + velocity(1) * total_dx(e));
}

Expr tilde_j(const Expr& e) {
  Expr half = Expr::num(rat(1, 2));
  return half * r(1) * tilde_dy(e) + half * r(2) * tilde_dz(e);
}

Expr apply_tilde(TildeOp op, const Expr& e) {
  switch (op) {
    case TildeOp::J: return tilde_j(e);
    case TildeOp::Dy: return tilde_dy(e);
    case TildeOp::Dz: return tilde_dz(e);
  }
  fail(ErrorKind::DomainError, "bad tilde operator");
}

Expr apply_qspec(const QSpec& q, Expr e) {
  for (int i = 0; i < q.iota; ++i) e = apply_tilde(q.inner, e);
  if (q.kappa > 0) {
    if (q.cshift == 0) {
      for (int i = 0; i < q.kappa; ++i) e = tilde_j(e);
    } else {
      // (J + c)^kappa expanded binomially
      Expr acc;
      Expr jk = e;
      for (int j = 0; j <= q.kappa; ++j) {
        acc += Expr::num(binomial(q.kappa, j) * [&] {
          Rational p = 1;
          for (int m = 0; m < q.kappa - j; ++m) p *= q.cshift;
          return p;
        }()) * jk;
        if (j < q.kappa) jk = tilde_j(jk);
      }
      e = acc;
    }
  }
  return e;
}

}  // namespace dfx
