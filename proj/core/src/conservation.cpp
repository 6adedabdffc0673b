#include "dfx/conservation.hpp"

namespace dfx {

namespace {

Expr r(int i) { return Expr::atom(Atom::jet(i, 0)); }
Expr rx(int i) { return Expr::atom(Atom::jet(i, 1)); }
Expr rxx(int i) { return Expr::atom(Atom::jet(i, 2)); }
Expr exp_s() { return Expr::exp_of(r(1) - r(2)); }  // e^{r1-r2}
Expr exp_half_s() {
  Expr h = Expr::num(rat(1, 2));
  return Expr::exp_of(h * r(1) - h * r(2));
}
Expr omega(int k) { return Expr::atom(Atom::omega(k)); }

Expr check_residual(Expr res, CheckReport& rep, uint64_t seed) {
  if (!res.is_zero()) {
    EqualsResult eq = equals(res, Expr::zero(), seed);
    if (!eq.equal) rep.pass = false;
    if (!eq.exact) rep.exact = false;
    if (eq.equal) res = Expr::zero();
  }
  return res;
}

}  // namespace

CheckReport is_cosymmetry(const Cosymmetry& lambda, uint64_t seed) {
  std::array<Expr, 3> l;
  for (int i = 0; i < 3; ++i) l[static_cast<size_t>(i)] = to_modified(lambda[static_cast<size_t>(i)]);
  Expr r3x = Expr::exp_of(r(1) - r(2)) * omega(1);
  CheckReport rep;
  rep.pass = true;
  rep.residuals[0] = check_residual(
      total_dt(l[0]) + velocity(1) * total_dx(l[0]) - rx(2) * (l[1] - l[0]) - r3x * l[2], rep,
      seed + 1);
  rep.residuals[1] = check_residual(
      total_dt(l[1]) + velocity(2) * total_dx(l[1]) - rx(1) * (l[0] - l[1]) - r3x * l[2], rep,
      seed + 2);
  rep.residuals[2] = check_residual(
      total_dt(l[2]) + velocity(3) * total_dx(l[2]) + (rx(1) + rx(2)) * l[2], rep, seed + 3);
  return rep;
}

CheckReport is_conserved_current(const ConservedCurrent& c, uint64_t seed) {
  CheckReport rep;
  rep.pass = true;
  rep.residuals[0] =
      check_residual(total_dt(to_modified(c.rho)) + total_dx(to_modified(c.sigma)), rep, seed);
  return rep;
}

ConservedCurrent make_current_family1(const Expr& om) {
  Expr rho = exp_s() * om;
  return {rho, (r(1) + r(2)) * rho};
}

ConservedCurrent make_current_family2(const Expr& phi) {
  Expr phi_r1 = diff(phi, Atom::jet(1, 0));
  Expr e = exp_half_s();
  return {e * (2 * phi_r1 + phi),
          e * (2 * (r(1) + r(2) + 1) * phi_r1 + (r(1) + r(2) - 1) * phi)};
}

ConservedCurrent make_current_family3(const QSpec& q) {
  Expr qt = q_tilde();
  Expr qq = apply_qspec(q, qt);
  Expr rho_t = -qt * tilde_dz(qq);
  Expr sigma_t = tilde_dy(qt) * qq;
  return {rx(2) * rho_t + rx(1) * sigma_t,
          velocity(2) * rx(2) * rho_t + velocity(1) * rx(1) * sigma_t};
}

Cosymmetry make_cosymmetry_family1(const Expr& om) {
  Expr e = exp_s();
  return {e * om, -(e * om), e * op_Ahat(om) * omega(1).pow(-1)};
}

Cosymmetry make_cosymmetry_family2(const Expr& phi) {
  Expr e = exp_half_s();
  return {Expr::num(-2) * e * diff(phi, Atom::jet(1, 0)), e * phi, Expr::zero()};
}

Cosymmetry make_cosymmetry_family3(const QSpec& q) { return make_characteristic_family3(q); }

Cosymmetry make_characteristic_family1(const Expr& om) {
  // e^{r1-r2} ( Omega - S, -Omega + S, E' ) with
  // S  = sum_{k>=1} sum_{k'<k} w^{k-k'} (-Ahat)^{k'} Omega_{w^k}
  // E' = sum_{k>=0} (-Ahat)^k Omega_{w^k}
  int top = ord(om, OrdFamily::Omega);
  Expr S, Ep;
  for (int k = 0; top != kOrdNone && k <= top; ++k) {
    Expr dk = diff(om, Atom::omega(k));
    if (dk.is_zero()) continue;
    Expr power = dk;
    for (int kp = 0; kp < k; ++kp) {
      S += omega(k - kp) * power;
      power = -op_Ahat(power);
    }
    // after k applications of (-Ahat): the E' contribution
    Expr ep = dk;
    for (int kp = 0; kp < k; ++kp) ep = -op_Ahat(ep);
    Ep += ep;
  }
  Expr e = exp_s();
  return {e * (om - S), e * (S - om), e * Ep};
}

Cosymmetry make_characteristic_family2(const Expr& phi) {
  Expr phi_r1 = diff(phi, Atom::jet(1, 0));
  Expr phi_r2 = diff(phi, Atom::jet(2, 0));
  Expr phi_r1r1 = diff(phi_r1, Atom::jet(1, 0));
  Expr e = exp_half_s();
  return {e * (2 * phi_r1r1 + 2 * phi_r1 + Expr::num(rat(1, 2)) * phi),
          e * (phi_r2 - phi_r1 - phi), Expr::zero()};
}

Cosymmetry make_characteristic_family3(const QSpec& q) {
  Expr qq = apply_qspec(q, q_tilde());
  Expr e = exp_half_s();
  return {-e * tilde_dy(qq), e * qq, Expr::zero()};
}

CheckReport verify_characteristic_identity(const ConservedCurrent& c, const Cosymmetry& lambda,
                                           uint64_t seed) {
  // (a) off-shell identity: the full Euler operator annihilates
  //     full_dt rho + full_dx sigma - sum_i lambda^i E^i
  Expr div = full_dt(to_standard(c.rho)) + full_dx(to_standard(c.sigma));
  auto lhs = system_lhs_offshell();
  for (int i = 0; i < 3; ++i)
    div -= to_standard(lambda[static_cast<size_t>(i)]) * lhs[static_cast<size_t>(i)];
  auto euler = euler_operator_full(div);
  CheckReport rep;
  rep.pass = true;
  for (int i = 0; i < 3; ++i)
    rep.residuals[static_cast<size_t>(i)] =
        check_residual(euler[static_cast<size_t>(i)], rep, seed + static_cast<uint64_t>(i));
  // (b) the reduced characteristic of this current is the variational
  //     derivative of its density; this is what ties lambda to (rho, sigma)
  auto canonical = euler_operator(c.rho);
  bool bound = true;
  for (int i = 0; i < 3; ++i) {
    EqualsResult eq = equals(canonical[static_cast<size_t>(i)],
                             lambda[static_cast<size_t>(i)], seed + 10 + static_cast<uint64_t>(i));
    bound = bound && eq.equal;
    if (!eq.exact) rep.exact = false;
  }
  if (!bound) {
    rep.pass = false;
    rep.note = "characteristic differs from the variational derivative of the density";
  }
  return rep;
}

ConservedCurrent act_symmetry_on_current(const EvolutionaryField& eta, const ConservedCurrent& c) {
  std::array<Expr, 3> es;
  for (int i = 0; i < 3; ++i) es[static_cast<size_t>(i)] = to_standard(eta[static_cast<size_t>(i)]);
  return {prolong_apply(es, to_standard(c.rho)), prolong_apply(es, to_standard(c.sigma))};
}

bool is_tx_invariant(const Expr& e) {
  for (const Atom& a : atoms_of(e))
    if (a.kind == AtomKind::T || a.kind == AtomKind::X) return false;
  return true;
}

bool is_tx_invariant(const Cosymmetry& lambda) {
  return is_tx_invariant(lambda[0]) && is_tx_invariant(lambda[1]) && is_tx_invariant(lambda[2]);
}

bool is_tx_invariant(const ConservedCurrent& c) {
  return is_tx_invariant(c.rho) && is_tx_invariant(c.sigma);
}

namespace {

int order_of_expr(const Expr& e) {
  int best = kOrdNone;
  Expr s = to_standard(e);
  for (OrdFamily f : {OrdFamily::R1, OrdFamily::R2, OrdFamily::R3})
    best = std::max(best, ord(s, f));
  return best;
}

}  // namespace

int order_of(const Cosymmetry& lambda) {
  int best = kOrdNone;
  for (const Expr& l : lambda) best = std::max(best, order_of_expr(l));
  return best;
}

int order_of(const ConservedCurrent& c) {
  return std::max(order_of_expr(c.rho), order_of_expr(c.sigma));
}

ConservedCurrent generating_current_r3() {
  Expr rho = exp_s() * r(3);
  return {rho, (r(1) + r(2)) * rho};
}

ConservedCurrent generating_current_kg() {
  Expr t = Expr::atom(Atom::t());
  Expr x = Expr::atom(Atom::x());
  Expr v3 = velocity(3);
  Expr e = exp_s();
  return {e * (x - v3 * t), e * (v3 * (x - v3 * t) - t)};
}

ConservedCurrent physical_mass_phase1() {
  // Omega = 1/(r3+1)
  return make_current_family1((omega(0) + Expr::one()).pow(-1));
}

ConservedCurrent physical_mass_phase2() {
  // Omega = r3/(r3+1)
  return make_current_family1(omega(0) * (omega(0) + Expr::one()).pow(-1));
}

ConservedCurrent physical_mass_mixture() { return make_current_family1(Expr::one()); }

ConservedCurrent physical_momentum() {
  // Phi = e^{(r1-r2)/2} (r1+r2-1)
  return make_current_family2(exp_half_s() * (r(1) + r(2) - 1));
}

ConservedCurrent physical_energy() {
  // Phi = (1/8) e^{(r1-r2)/2} ((r1+r2)^2 - 4 r2)
  Expr u = r(1) + r(2);
  return make_current_family2(Expr::num(rat(1, 8)) * exp_half_s() * (u * u - 4 * r(2)));
}

std::vector<ConservedCurrent> invariant_second_order_currents() {
  Expr e = exp_s();
  Expr v1 = velocity(1), v2 = velocity(2);
  std::vector<ConservedCurrent> out;

  // 2 e^{r1-r2} ( 1/r2_x - 1/r1_x, V2/r2_x - V1/r1_x )
  out.push_back({2 * e * (rx(2).pow(-1) - rx(1).pow(-1)),
                 2 * e * (v2 * rx(2).pow(-1) - v1 * rx(1).pow(-1))});

  // (2/(r1_x)^5) e^{r1-r2} ( (2 r1_xx + r1_x r2_x)^2 - r2_x r1_x^3,
  //                          V1 (2 r1_xx + r1_x r2_x)^2 - V2 r2_x r1_x^3 )
  {
    Expr a = 2 * rxx(1) + rx(1) * rx(2);
    Expr pref = 2 * e * rx(1).pow(-5);
    out.push_back({pref * (a * a - rx(2) * rx(1).pow(3)),
                   pref * (v1 * a * a - v2 * rx(2) * rx(1).pow(3))});
  }

  // (-2/(r2_x)^5) e^{r1-r2} ( (2 r2_xx - r1_x r2_x)^2 - r1_x r2_x^3,
  //                           V2 (2 r2_xx - r1_x r2_x)^2 - V1 r1_x r2_x^3 )
  {
    Expr b = 2 * rxx(2) - rx(1) * rx(2);
    Expr pref = Expr::num(-2) * e * rx(2).pow(-5);
    out.push_back({pref * (b * b - rx(1) * rx(2).pow(3)),
                   pref * (v2 * b * b - v1 * rx(1) * rx(2).pow(3))});
  }

  // -e^{r1-r2} ( z1 + z2, V1 z1 + V2 z2 ) with
  // z1 = r1/r1_x - r2 r1_x / r2_x^2
  // z2 = (r2/(r2_x)^5)(2 r2_xx - r1_x r2_x)^2 - r1/r2_x
  {
    Expr b = 2 * rxx(2) - rx(1) * rx(2);
    Expr z1 = r(1) * rx(1).pow(-1) - r(2) * rx(1) * rx(2).pow(-2);
    Expr z2 = r(2) * rx(2).pow(-5) * b * b - r(1) * rx(2).pow(-1);
    out.push_back({-e * (z1 + z2), -e * (v1 * z1 + v2 * z2)});
  }
  return out;
}

}  // namespace dfx
