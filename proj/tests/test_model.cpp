#include <doctest.h>

#include <cmath>
#include <random>

#include "dfx/model.hpp"

using namespace dfx;

namespace {
Expr r(int i) { return Expr::atom(Atom::jet(i, 0)); }
Expr rx(int i) { return Expr::atom(Atom::jet(i, 1)); }
}  // namespace

TEST_CASE("characteristic velocities") {
  auto V = characteristic_velocities();
  EvalEnv env;
  env.values[Atom::jet(1, 0)] = 0.0;
  env.values[Atom::jet(2, 0)] = 0.0;
  CHECK(eval(V[0], env) == 1.0);
  CHECK(eval(V[1], env) == -1.0);
  CHECK(eval(V[2], env) == 0.0);
  CHECK(V[0] - V[1] == Expr::num(2));
  CHECK(V[0] - V[2] == Expr::one());
  CHECK(V[2] - V[1] == Expr::one());
  CHECK(diff(V[2], Atom::jet(3, 0)).is_zero());  // not genuinely nonlinear in r3
}

TEST_CASE("physical and Riemann variables") {
  auto p = riemann_from_physical(0.0, 0.5, 0.5);
  CHECK(p.r1 == doctest::Approx(0.0));
  CHECK(p.r2 == doctest::Approx(0.0));
  CHECK(p.r3 == doctest::Approx(1.0));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.5, 1.5), P(0.2, 2.2);
  for (int i = 0; i < 100; ++i) {
    double u = U(rng), rho1 = P(rng), rho2 = P(rng);
    auto q = riemann_from_physical(u, rho1, rho2);
    auto back = physical_from_riemann(q);
    CHECK(back[0] == doctest::Approx(u).epsilon(1e-12));
    CHECK(back[1] == doctest::Approx(rho1).epsilon(1e-12));
    CHECK(back[2] == doctest::Approx(rho2).epsilon(1e-12));
  }

  // single-phase reduction rho2 = 0 -> r3 = 0
  CHECK(riemann_from_physical(0.3, 0.7, 0.0).r3 == 0.0);
  CHECK_THROWS_AS((void)riemann_from_physical(0.0, -1.0, 0.5), Error);
  CHECK_THROWS_AS((void)riemann_from_physical(0.0, 0.0, 1.0), Error);
}

TEST_CASE("semi-Hamiltonian condition") {
  CHECK(semi_hamiltonian_check());
  CHECK(semi_hamiltonian_check({r(1), r(2), r(3)}));  // decoupled: both sides vanish
  // synthetic triple evaluated by the same cleared-denominator formula
  CHECK(semi_hamiltonian_check({r(2), r(1), Expr::zero()}));
  CHECK_THROWS_AS((void)semi_hamiltonian_check({r(1), r(1), r(3)}), Error);
}

TEST_CASE("transformation to Klein-Gordon variables") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    double t = U(rng), x = U(rng), a = U(rng), b = U(rng), c = U(rng);
    auto fw = apply_T(t, x, a, b, c);
    auto bk = apply_T_inverse(fw[0], fw[1], fw[2], fw[3], fw[4]);
    CHECK(bk[0] == doctest::Approx(t).epsilon(1e-12));
    CHECK(bk[1] == doctest::Approx(x).epsilon(1e-12));
    CHECK(bk[2] == doctest::Approx(a).epsilon(1e-12));
    CHECK(bk[3] == doctest::Approx(b).epsilon(1e-12));
    CHECK(bk[4] == doctest::Approx(c).epsilon(1e-12));
  }

  PointMap m = transform_T();
  // x-component of the inverse at q = 0 is (2y - 2z + 1) p
  Expr at_q0 = subst(m.inverse[1], [](const Atom& a) -> std::optional<Expr> {
    if (a.kind == AtomKind::Param && a == Atom::param("q")) return Expr::zero();
    return std::nullopt;
  });
  Expr want = (2 * Expr::atom(Atom::param("y")) - 2 * Expr::atom(Atom::param("z")) + 1) *
              Expr::atom(Atom::param("p"));
  CHECK(at_q0 == want);
  // q at t = 0 is e^{(r1-r2)/2} x
  Expr q_t0 = subst(m.forward[3], [](const Atom& a) -> std::optional<Expr> {
    if (a.kind == AtomKind::T) return Expr::zero();
    return std::nullopt;
  });
  CHECK(q_t0 == Expr::exp_of(Expr::num(rat(1, 2)) * (r(1) - r(2))) * Expr::atom(Atom::x()));
}

TEST_CASE("tilde operators and q~") {
  Expr t = Expr::atom(Atom::t()), x = Expr::atom(Atom::x());
  Expr e = Expr::exp_of(Expr::num(rat(1, 2)) * (r(1) - r(2)));
  // collected derivative identities
  CHECK(tilde_dy(q_tilde()) == e * (2 * rx(1).pow(-1) + x - velocity(1) * t - 2 * t));
  CHECK(tilde_dz(q_tilde()) == e * (x - velocity(2) * t));
  // q~ solves the pulled-back Klein-Gordon equation
  CHECK((tilde_dy(tilde_dz(q_tilde())) - q_tilde()).is_zero());
  CHECK((tilde_dz(tilde_dy(q_tilde())) - q_tilde()).is_zero());
  // commutation on sampled expressions
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    Expr f = to_standard(r(1) * r(2) + Expr::num(static_cast<long>(rng() % 5)) * rx(1) * q_tilde());
    CHECK(equals(tilde_dy(tilde_dz(f)), tilde_dz(tilde_dy(f))).equal);
  }
  // on functions of (r1, r2) only: Dy~ f = 2 f_{r1}, Dz~ f = -2 f_{r2}
  Expr f = r(1) * r(1) * r(2);
  CHECK(tilde_dy(f) == 2 * diff(f, Atom::jet(1, 0)));
  CHECK(tilde_dz(f) == Expr::num(-2) * diff(f, Atom::jet(2, 0)));
}

TEST_CASE("affine J-powers expand binomially") {
  // (J - 1) Dz^2 via QSpec equals J(Dz^2 q~) - Dz^2 q~
  QSpec q{1, rat(-1), TildeOp::Dz, 2};
  Expr direct = apply_qspec(q, q_tilde());
  Expr dz2 = tilde_dz(tilde_dz(q_tilde()));
  CHECK(direct == tilde_j(dz2) - dz2);
}
