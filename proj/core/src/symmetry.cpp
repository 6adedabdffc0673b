#include "dfx/symmetry.hpp"

namespace dfx {

namespace {

Expr r(int i) { return Expr::atom(Atom::jet(i, 0)); }
Expr rx(int i) { return Expr::atom(Atom::jet(i, 1)); }
Expr half_exp(int sign) {
  // e^{sign*(r1-r2)/2}
  Expr h = Expr::num(rat(sign, 2));
  return Expr::exp_of(h * r(1) - h * r(2));
}

}  // namespace

CheckReport is_symmetry(const EvolutionaryField& eta, uint64_t seed) {
  std::array<Expr, 3> comp;
  for (int i = 0; i < 3; ++i) comp[static_cast<size_t>(i)] = to_modified(eta[static_cast<size_t>(i)]);
  Expr sum12 = comp[0] + comp[1];
  CheckReport rep;
  rep.pass = true;
  for (int i = 1; i <= 3; ++i) {
    Expr rix = i == 3 ? Expr::exp_of(r(1) - r(2)) * Expr::atom(Atom::omega(1)) : rx(i);
    Expr res = total_dt(comp[static_cast<size_t>(i - 1)]) +
               velocity(i) * total_dx(comp[static_cast<size_t>(i - 1)]) + rix * sum12;
    if (!res.is_zero()) {
      EqualsResult eq = equals(res, Expr::zero(), seed + static_cast<uint64_t>(i));
      if (!eq.equal) rep.pass = false;
      if (!eq.exact) rep.exact = false;
      if (eq.equal) res = Expr::zero();
    }
    rep.residuals[static_cast<size_t>(i - 1)] = res;
  }
  return rep;
}

Expr gamma_of(const GammaSpec& spec, int budget) {
  if (spec.kappa < 0 || spec.iota < 0 || spec.kappa + spec.iota > budget)
    fail(ErrorKind::BudgetExceeded, "GammaSpec expansion order exceeds budget");
  Expr g = q_tilde();
  for (int i = 0; i < spec.kappa; ++i) g = tilde_j(g);
  if (spec.kind == GammaSpec::Kind::DyThenJ)
    for (int i = 0; i < spec.iota; ++i) g = tilde_dy(g);
  if (spec.kind == GammaSpec::Kind::DzThenJ)
    for (int i = 0; i < spec.iota; ++i) g = tilde_dz(g);
  return g;
}

EvolutionaryField make_W(const Expr& omega) { return {Expr::zero(), Expr::zero(), omega}; }

EvolutionaryField make_P(const Expr& phi) {
  Expr e = half_exp(-1);  // e^{(r2-r1)/2}
  Expr phi_r1 = diff(phi, Atom::jet(1, 0));
  Expr phi_r2 = diff(phi, Atom::jet(2, 0));
  return {e * (phi + 2 * phi_r1) * rx(1), e * (phi - 2 * phi_r2) * rx(2),
          2 * e * phi * Expr::atom(Atom::jet(3, 1))};
}

EvolutionaryField make_D() {
  Expr t = Expr::atom(Atom::t());
  Expr x = Expr::atom(Atom::x());
  return {(x - velocity(1) * t) * rx(1), (x - velocity(2) * t) * rx(2),
          (x - velocity(3) * t) * Expr::atom(Atom::jet(3, 1))};
}

EvolutionaryField field_R_of_gamma(const Expr& gamma) {
  Expr e = half_exp(-1);
  return {e * (tilde_dy(gamma) + gamma) * rx(1), e * (tilde_dz(gamma) + gamma) * rx(2),
          2 * e * gamma * Expr::atom(Atom::jet(3, 1))};
}

EvolutionaryField make_R(const GammaSpec& spec, int budget) {
  return field_R_of_gamma(gamma_of(spec, budget));
}

EvolutionaryField make_G1() {
  Expr t = Expr::atom(Atom::t());
  return {t * rx(1) - Expr::one(), t * rx(2), t * Expr::atom(Atom::jet(3, 1))};
}

EvolutionaryField make_G2() { return {Expr::one(), -Expr::one(), Expr::zero()}; }

EvolutionaryField make_translation_x() {
  return {rx(1), rx(2), Expr::atom(Atom::jet(3, 1))};
}

EvolutionaryField make_translation_t() {
  return {velocity(1) * rx(1), velocity(2) * rx(2), velocity(3) * Expr::atom(Atom::jet(3, 1))};
}

EvolutionaryField zero_field() { return {Expr::zero(), Expr::zero(), Expr::zero()}; }

EvolutionaryField add(const EvolutionaryField& a, const EvolutionaryField& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

EvolutionaryField scale(const Rational& c, const EvolutionaryField& a) {
  Expr e = Expr::num(c);
  return {e * a[0], e * a[1], e * a[2]};
}

bool field_is_zero(const EvolutionaryField& a) {
  for (const Expr& c : a)
    if (!to_standard(c).is_zero()) return false;
  return true;
}

EqualsResult fields_equal(const EvolutionaryField& a, const EvolutionaryField& b, uint64_t seed) {
  EqualsResult out{true, true};
  for (int i = 0; i < 3; ++i) {
    EqualsResult eq = equals(a[static_cast<size_t>(i)], b[static_cast<size_t>(i)],
                             seed + static_cast<uint64_t>(i));
    out.equal = out.equal && eq.equal;
    out.exact = out.exact && eq.exact;
  }
  return out;
}

EvolutionaryField lie_bracket(const EvolutionaryField& a, const EvolutionaryField& b) {
  std::array<Expr, 3> as, bs;
  for (int i = 0; i < 3; ++i) {
    as[static_cast<size_t>(i)] = to_standard(a[static_cast<size_t>(i)]);
    bs[static_cast<size_t>(i)] = to_standard(b[static_cast<size_t>(i)]);
  }
  EvolutionaryField out;
  for (int i = 0; i < 3; ++i)
    out[static_cast<size_t>(i)] =
        prolong_apply(as, bs[static_cast<size_t>(i)]) - prolong_apply(bs, as[static_cast<size_t>(i)]);
  return out;
}

namespace {

bool omega_function_only(const Expr& e) {
  for (const Atom& a : atoms_of(e))
    if (a.kind != AtomKind::Omega) return false;
  return true;
}

bool depends_only_on_r0(const Expr& e) {
  for (const Atom& a : atoms_of(e)) {
    if (a.kind == AtomKind::Jet && a.dt == 0 && a.dx == 0 && (a.comp == 1 || a.comp == 2))
      continue;
    return false;
  }
  return true;
}

}  // namespace

SymmetryClass classify(const EvolutionaryField& eta) {
  std::array<Expr, 3> m;
  for (int i = 0; i < 3; ++i) m[static_cast<size_t>(i)] = to_modified(eta[static_cast<size_t>(i)]);

  bool in_i2 = m[0].is_zero() && m[1].is_zero() && omega_function_only(m[2]);

  bool in_i1 = false;
  // P-shape: eta3 = 2 Phi e^{(r1-r2)/2} w1 with Phi = Phi(r1,r2) solving the
  // Klein-Gordon constraint, and eta1, eta2 matching the displayed components.
  if (!m[2].is_zero()) {
    Expr cand = Expr::num(rat(1, 2)) * half_exp(-1) * Expr::atom(Atom::omega(1)).pow(-1) * m[2];
    if (depends_only_on_r0(cand)) {
      Expr kg = diff(diff(cand, Atom::jet(1, 0)), Atom::jet(2, 0)) + Expr::num(rat(1, 4)) * cand;
      if (equals(kg, Expr::zero()).equal) {
        EvolutionaryField p = make_P(cand);
        in_i1 = fields_equal(p, eta).equal;
      }
    }
  } else if (field_is_zero(eta)) {
    return SymmetryClass::InIntersection;
  }

  if (in_i1 && in_i2) return SymmetryClass::InIntersection;
  if (in_i1) return SymmetryClass::InI1;
  if (in_i2) return SymmetryClass::InI2;
  return SymmetryClass::Outside;
}

const char* to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::InI1: return "in_I1";
    case SymmetryClass::InI2: return "in_I2";
    case SymmetryClass::InIntersection: return "in_intersection";
    case SymmetryClass::Outside: return "outside";
  }
  return "?";
}

}  // namespace dfx
