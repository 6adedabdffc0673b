#include <doctest.h>

#include <cmath>

#include "dfx/jet.hpp"
#include "dfx/parse.hpp"
#include "dfx/suites.hpp"

using namespace dfx;

namespace {
Expr r(int i) { return Expr::atom(Atom::jet(i, 0)); }
Expr w(int k) { return Expr::atom(Atom::omega(k)); }
Expr ehalf() {
  return Expr::exp_of(Expr::num(rat(1, 2)) * r(1) - Expr::num(rat(1, 2)) * r(2));
}
}  // namespace

TEST_CASE("normalization examples") {
  CHECK(((r(1) + r(2)) - (r(2) + r(1))).is_zero());
  CHECK(ehalf() * ehalf() == Expr::exp_of(r(1) - r(2)));
  CHECK(2 * w(1) * w(1) * w(1).pow(-1) == 2 * w(1));
}

TEST_CASE("normalize is idempotent on random expressions") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    Expr e = random_expression(rng, 8);
    CHECK(normalize(e) == e);
  }
}

TEST_CASE("rational denominators stay canonical") {
  // w0/(w0+1): the shifted denominator keeps the class closed
  Expr om = w(0) * (w(0) + 1).pow(-1);
  CHECK(om * (w(0) + 1) == w(0));
  Expr d = diff(om, Atom::omega(0));
  CHECK(d == (w(0) + 1).pow(-2));
  // the two representations of the same rational function coincide
  Expr alt = Expr::one() - (w(0) + 1).pow(-1);
  CHECK(om == alt);
}

TEST_CASE("unsupported forms are rejected") {
  CHECK_THROWS_AS((void)Expr::exp_of(r(1) * r(2)), Error);
  CHECK_THROWS_AS((void)(r(1) + r(2) * r(2)).pow(-1), Error);
  CHECK_THROWS_AS((void)Expr::zero().pow(-1), Error);
}

TEST_CASE("partial derivatives") {
  // d/dr1 e^{(r1-r2)/2} = 1/2 e^{(r1-r2)/2}
  CHECK(diff(ehalf(), Atom::jet(1, 0)) == Expr::num(rat(1, 2)) * ehalf());
  // Klein-Gordon rewrite: d/dr2 Phi_{(1,0)} = -Phi/4
  Expr d = diff(Expr::symbol(sym::Phi(), {1, 0}), Atom::jet(2, 0));
  CHECK(d == Expr::num(rat(-1, 4)) * Expr::symbol(sym::Phi()));
  // d/dw1 Omega(w0,w1) = Omega_{(0,1)}
  CHECK(diff(Expr::symbol(sym::OmegaFn(2)), Atom::omega(1)) ==
        Expr::symbol(sym::OmegaFn(2), {0, 1}));
}

TEST_CASE("mixed partials commute") {
  std::mt19937_64 rng(11);
  std::vector<Atom> pool = {Atom::jet(1, 0), Atom::jet(2, 1), Atom::omega(0), Atom::x()};
  for (int i = 0; i < 200; ++i) {
    Expr e = random_expression(rng, 6);
    const Atom& u = pool[rng() % pool.size()];
    const Atom& v = pool[rng() % pool.size()];
    if (u == v) continue;
    CHECK(diff(diff(e, u), v) == diff(diff(e, v), u));
  }
}

TEST_CASE("diff is exactly linear over rationals") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    Expr e1 = random_expression(rng, 5), e2 = random_expression(rng, 5);
    Rational a = rat(3, 2), b = rat(-5, 7);
    Atom v = Atom::jet(1, 1);
    CHECK(diff(Expr::num(a) * e1 + Expr::num(b) * e2, v) ==
          Expr::num(a) * diff(e1, v) + Expr::num(b) * diff(e2, v));
  }
}

TEST_CASE("numeric evaluation") {
  EvalEnv env;
  env.values[Atom::omega(1)] = 2.0;
  CHECK(eval(w(1), env) == doctest::Approx(2.0).epsilon(1e-15));

  env.values[Atom::jet(1, 0)] = 1.0;
  env.values[Atom::jet(2, 0)] = 0.0;
  CHECK(eval(Expr::exp_of(r(1) - r(2)), env) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));

  // Phi + 2 Phi_{(1,0)} with Phi = e^{r1 - r2/4}
  env.instantiations[sym::Phi()] = Expr::exp_of(r(1) - Expr::num(rat(1, 4)) * r(2));
  double got = eval(Expr::symbol(sym::Phi()) + 2 * Expr::symbol(sym::Phi(), {1, 0}), env);
  CHECK(got == doctest::Approx(3.0 * std::exp(1.0)).epsilon(1e-12));

  SUBCASE("near-zero denominators raise SingularEvaluation") {
    env.values[Atom::omega(1)] = 1e-9;
    CHECK_THROWS_AS((void)eval(w(1).pow(-1), env), Error);
  }
  SUBCASE("unassigned atoms raise DomainError") {
    EvalEnv empty;
    CHECK_THROWS_AS((void)eval(w(1), empty), Error);
  }
}

TEST_CASE("eval agrees with normalize within 1e-10") {
  std::mt19937_64 rng(17);
  int done = 0;
  while (done < 300) {
    Expr e = random_expression(rng, 6);
    EvalEnv env;
    for (const Atom& a : atoms_of(e)) env.values[a] = draw_coordinate_value(rng);
    try {
      double v1 = eval(e, env), v2 = eval(normalize(e), env);
      CHECK(std::fabs(v1 - v2) <= 1e-10 * std::max({1.0, std::fabs(v1), std::fabs(v2)}));
      ++done;
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::SingularEvaluation) throw;
    }
  }
}

TEST_CASE("equality decisions") {
  CHECK(equals(Expr::exp_of(r(1) - r(2)) * Expr::exp_of(r(2) - r(1)), Expr::one()).equal);
  // cross-chart: w1 = e^{r2-r1} r3_x
  EqualsResult eq = equals(w(1), Expr::exp_of(r(2) - r(1)) * Expr::atom(Atom::jet(3, 1)));
  CHECK(eq.equal);
  CHECK(eq.exact);
  // perturbed pair decided unequal by the numeric fallback
  Expr a = w(1) * Expr::symbol(sym::OmegaFn(2));
  EqualsResult neq = equals(a, a + Expr::num(rat(1, 1000)) * Expr::atom(Atom::jet(1, 1)));
  CHECK(!neq.equal);
  CHECK(!neq.exact);
  // a symbol with no instantiation family makes the fallback inconclusive
  const FunctionSymbol* opaque =
      register_symbol("OpaqueTest", {Atom::jet(1, 0)}, std::nullopt, InstantiationFamily::None);
  CHECK_THROWS_AS((void)equals(Expr::symbol(opaque) * w(1), w(0)), Error);
}

TEST_CASE("serialization round-trips") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    Expr e = random_expression(rng, 6, true);
    CHECK(parse(to_string(e)) == e);
  }
  // infix forms accepted
  CHECK(parse("w0^2/2 + exp((r1-r2)/2)*r3_1") ==
        Expr::num(rat(1, 2)) * w(0) * w(0) + ehalf() * Expr::atom(Atom::jet(3, 1)));
  CHECK(parse("Phi{1,0} - Phi/4") ==
        Expr::symbol(sym::Phi(), {1, 0}) - Expr::num(rat(1, 4)) * Expr::symbol(sym::Phi()));
  CHECK_THROWS_AS((void)parse("nosuchname(w0)"), Error);
  // omegaK is accepted as an alias for wK in the text grammar
  CHECK(parse("omega0^2") == w(0) * w(0));
}
