#include <doctest.h>

#include "dfx/symmetry.hpp"

using namespace dfx;

namespace {
Expr r(int i) { return Expr::atom(Atom::jet(i, 0)); }
Expr w(int k) { return Expr::atom(Atom::omega(k)); }
Expr ehalf(int sign) {
  Expr h = Expr::num(rat(sign, 2));
  return Expr::exp_of(h * r(1) - h * r(2));
}
}  // namespace

TEST_CASE("determining equations accept the four families") {
  CHECK(is_symmetry(make_W(Expr::one())).pass);
  CHECK(is_symmetry(make_W(w(0) * w(1))).pass);
  CHECK(is_symmetry(make_W(Expr::symbol(sym::OmegaFn(2)))).pass);
  CHECK(is_symmetry(make_P(Expr::symbol(sym::Phi()))).pass);
  CHECK(is_symmetry(make_P((r(1) + r(2)) * ehalf(1))).pass);
  CHECK(is_symmetry(make_D()).pass);
  CHECK(is_symmetry(make_R(GammaSpec::j_power(1))).pass);
  CHECK(is_symmetry(make_R(GammaSpec::dz(2, 1))).pass);
  CHECK(is_symmetry(make_G1()).pass);
  CHECK(is_symmetry(make_G2()).pass);
}

TEST_CASE("determining equations reject non-symmetries") {
  EvolutionaryField bad = {Expr::atom(Atom::jet(3, 1)), Expr::zero(), Expr::zero()};
  auto rep = is_symmetry(bad);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.residuals[0].is_zero());
}

TEST_CASE("constructed P with concrete Klein-Gordon parameters") {
  // Phi = e^{(r2-r1)/2}: first two components vanish, third is 2 e^{r2-r1} r3_x
  auto field = make_P(ehalf(-1));
  CHECK(field[0].is_zero());
  CHECK(field[1].is_zero());
  CHECK(fields_equal(field, scale(rat(2), make_W(w(1)))).equal);
  // make_W(w1) in the standard chart
  CHECK(equals(make_W(w(1))[2], Expr::exp_of(r(2) - r(1)) * Expr::atom(Atom::jet(3, 1))).equal);
}

TEST_CASE("first-order algebra identities") {
  CHECK(fields_equal(make_R(GammaSpec::j_power(0)),
                     add(scale(rat(2), make_D()), scale(rat(-2), make_G1())))
            .equal);
  CHECK(fields_equal(make_R(GammaSpec::dz(1, 0)),
                     scale(rat(2), add(make_D(), add(make_G1(), make_G2()))))
            .equal);
}

TEST_CASE("verified symmetries have omega-free first components") {
  std::vector<EvolutionaryField> sample = {make_W(Expr::symbol(sym::OmegaFn(2))),
                                           make_P(Expr::symbol(sym::Phi())), make_D(),
                                           make_R(GammaSpec::dy(1, 1)), make_G1(), make_G2()};
  for (const auto& f : sample) {
    for (int i = 0; i < 2; ++i)
      for (const Atom& a : atoms_of(to_modified(f[static_cast<size_t>(i)])))
        CHECK(a.kind != AtomKind::Omega);
  }
}

TEST_CASE("Lie bracket") {
  // the Klein-Gordon ideal is commutative
  CHECK(field_is_zero(lie_bracket(make_P(Expr::symbol(sym::Phi())),
                                  make_P(Expr::exp_of(r(1) - Expr::num(rat(1, 4)) * r(2))))));
  // the omega-bracket formula cross-check on I2
  CHECK(fields_equal(lie_bracket(make_W(w(0)), make_W(Expr::one())), make_W(Expr::num(-1)))
            .equal);
  // generic members close under the bracket
  std::vector<EvolutionaryField> sample = {make_D(), make_W(w(0)), make_P(ehalf(1)),
                                           make_R(GammaSpec::j_power(0)), make_G2()};
  for (size_t i = 0; i < sample.size(); ++i)
    for (size_t j = i + 1; j < sample.size(); ++j) {
      auto br = lie_bracket(sample[i], sample[j]);
      if (!field_is_zero(br)) CHECK(is_symmetry(br).pass);
    }
}

TEST_CASE("Jacobi identity on a fixed triple") {
  auto a = make_D(), b = make_W(w(0)), c = make_P(Expr::symbol(sym::Phi()));
  auto j = add(lie_bracket(lie_bracket(a, b), c),
               add(lie_bracket(lie_bracket(b, c), a), lie_bracket(lie_bracket(c, a), b)));
  for (const Expr& comp : j) CHECK(equals(comp, Expr::zero()).equal);
}

TEST_CASE("ideal classification") {
  CHECK(classify(make_W(w(0))) == SymmetryClass::InI2);
  EvolutionaryField common = {Expr::zero(), Expr::zero(),
                              Expr::exp_of(r(2) - r(1)) * Expr::atom(Atom::jet(3, 1))};
  CHECK(classify(common) == SymmetryClass::InIntersection);
  CHECK(classify(make_D()) == SymmetryClass::Outside);
  CHECK(classify(make_P(Expr::symbol(sym::Phi()))) == SymmetryClass::InI1);
  CHECK(classify(make_G2()) == SymmetryClass::Outside);
}

TEST_CASE("expansion budget") {
  CHECK_THROWS_AS((void)gamma_of(GammaSpec::dy(3, 3), 5), Error);
  CHECK_NOTHROW((void)gamma_of(GammaSpec::dy(1, 2), 5));
}
