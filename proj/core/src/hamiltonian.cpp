#include "dfx/hamiltonian.hpp"

namespace dfx {

namespace {

Expr r(int i) { return Expr::atom(Atom::jet(i, 0)); }
Expr rx(int i) { return Expr::atom(Atom::jet(i, 1)); }
Expr omega(int k) { return Expr::atom(Atom::omega(k)); }
Expr exp_ba(int mult) {
  // e^{mult (r2 - r1)}
  return Expr::exp_of(Expr::num(mult) * (r(2) - r(1)));
}

Expr check_res(Expr res, CheckReport& rep, uint64_t seed) {
  if (!res.is_zero()) {
    EqualsResult eq = equals(res, Expr::zero(), seed);
    if (!eq.equal) rep.pass = false;
    if (!eq.exact) rep.exact = false;
    if (eq.equal) res = Expr::zero();
  }
  return res;
}

}  // namespace

HamiltonianOperator make_H(const Expr& theta) {
  // modified chart: r3_x = e^{r1-r2} w1
  Expr r3x = Expr::exp_of(r(1) - r(2)) * omega(1);
  Expr theta_w = diff(theta, Atom::omega(0));
  Expr e1 = exp_ba(1);
  // f33 = (1/2) Dx(Theta e^{2(r2-r1)}), the unique choice that is both in the
  // Noether family and formally skew-adjoint
  Expr f33 = exp_ba(2) * ((rx(2) - rx(1)) * theta + Expr::num(rat(1, 2)) * r3x * theta_w);

  MatrixDiffOperator M(false);
  Expr half = Expr::num(rat(1, 2));
  M.at(1, 1) = OpEntry::of(-e1, 0, 1) + OpEntry::of(-half * e1 * (rx(2) - rx(1)));
  M.at(1, 2) = OpEntry::of(-half * e1 * (rx(1) - rx(2)));
  M.at(1, 3) = OpEntry::of(e1 * r3x);
  M.at(2, 1) = OpEntry::of(-half * e1 * (rx(2) - rx(1)));
  M.at(2, 2) = OpEntry::of(e1, 0, 1) + OpEntry::of(-half * e1 * (rx(1) - rx(2)));
  M.at(2, 3) = OpEntry::of(e1 * r3x);
  M.at(3, 1) = OpEntry::of(-e1 * r3x);
  M.at(3, 2) = OpEntry::of(-e1 * r3x);
  M.at(3, 3) = OpEntry::of(theta * exp_ba(2), 0, 1) + OpEntry::of(f33);
  return {M, theta};
}

bool is_skew_adjoint(const MatrixDiffOperator& M) { return formal_adjoint(M) == -M; }

std::array<Expr, 3> apply_H(const HamiltonianOperator& H, const Cosymmetry& lambda) {
  std::array<Expr, 3> l;
  for (int i = 0; i < 3; ++i) l[static_cast<size_t>(i)] = to_modified(lambda[static_cast<size_t>(i)]);
  return apply_op(H.op, l);
}

NoetherReport noether_check(const HamiltonianOperator& H, const std::vector<Cosymmetry>& samples,
                            uint64_t seed) {
  NoetherReport rep;
  uint64_t s = seed;
  for (const Cosymmetry& lambda : samples) {
    EvolutionaryField eta = apply_H(H, lambda);
    rep.images.push_back(eta);
    if (field_is_zero(eta)) continue;  // Casimir kernel
    CheckReport cr = is_symmetry(eta, ++s);
    rep.pass = rep.pass && cr.pass;
    rep.exact = rep.exact && cr.exact;
  }
  return rep;
}

Metric metric_of(const HamiltonianOperator& H) {
  if (to_standard(H.theta).is_zero())
    fail(ErrorKind::DegenerateMetric, "Theta = 0 has no associated metric");
  // reparameterize Theta to the dependent variable r3
  Expr theta_r3 = subst(H.theta, [](const Atom& a) -> std::optional<Expr> {
    if (a.kind == AtomKind::Omega && a.comp == 0) return Expr::atom(Atom::jet(3, 0));
    return std::nullopt;
  });
  return {{-exp_ba(1), exp_ba(1), theta_r3 * exp_ba(2)}};
}

std::array<std::array<std::array<Expr, 3>, 3>, 3> christoffel(const Metric& g) {
  std::array<Atom, 3> u = {Atom::jet(1, 0), Atom::jet(2, 0), Atom::jet(3, 0)};
  std::array<std::array<std::array<Expr, 3>, 3>, 3> G;
  for (int i = 0; i < 3; ++i) {
    Expr ginv = g.diag[static_cast<size_t>(i)].pow(-1);
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        // diagonal metric: G^i_{jk} = g^{ii}(d_j g_{ik} + d_k g_{ij} - d_i g_{jk})/2
        Expr v;
        if (i == j) v += diff(g.diag[static_cast<size_t>(i)], u[static_cast<size_t>(k)]);
        if (i == k) v += diff(g.diag[static_cast<size_t>(i)], u[static_cast<size_t>(j)]);
        if (j == k) v -= diff(g.diag[static_cast<size_t>(j)], u[static_cast<size_t>(i)]);
        G[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)] =
            Expr::num(rat(1, 2)) * ginv * v;
      }
    }
  }
  return G;
}

Expr curvature_component(const Metric& g, int i, int j) {
  // R^i_{jij} = d_i G^i_{jj} - d_j G^i_{ij} + G^i_{im} G^m_{jj} - G^i_{jm} G^m_{ij}
  auto G = christoffel(g);
  std::array<Atom, 3> u = {Atom::jet(1, 0), Atom::jet(2, 0), Atom::jet(3, 0)};
  size_t I = static_cast<size_t>(i), J = static_cast<size_t>(j);
  Expr R = diff(G[I][J][J], u[I]) - diff(G[I][I][J], u[J]);
  for (size_t m = 0; m < 3; ++m) R += G[I][I][m] * G[m][J][J] - G[I][J][m] * G[m][I][J];
  return R;
}

bool is_flat(const Metric& g) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      Expr R = curvature_component(g, i, j);
      if (!R.is_zero() && !equals(R, Expr::zero()).equal) return false;
    }
  return true;
}

CheckReport compatibility_check(const Expr& theta1, const Expr& theta2, uint64_t seed) {
  CheckReport rep;
  rep.pass = true;
  if (to_standard(theta1).is_zero())
    fail(ErrorKind::DegenerateMetric, "theta1 must be nonvanishing");
  std::array<Atom, 3> u = {Atom::jet(1, 0), Atom::jet(2, 0), Atom::jet(3, 0)};
  auto to_r3 = [](const Expr& th) {
    return subst(th, [](const Atom& a) -> std::optional<Expr> {
      if (a.kind == AtomKind::Omega && a.comp == 0) return Expr::atom(Atom::jet(3, 0));
      return std::nullopt;
    });
  };
  Expr th1 = to_r3(theta1), th2 = to_r3(theta2);

  // (a) Nijenhuis tensor of s = diag(1, 1, theta2/theta1); for diagonal s
  // N^i_{jk} = d_{ik} s_j d_j s_i - d_{ij} s_k d_k s_i
  //            - s_i (d_{ik} d_j s_i - d_{ij} d_k s_i)
  std::array<Expr, 3> s = {Expr::one(), Expr::one(), th2 * th1.pow(-1)};
  Expr nij_worst;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        Expr v;
        Expr dsi_j = diff(s[static_cast<size_t>(i)], u[static_cast<size_t>(j)]);
        Expr dsi_k = diff(s[static_cast<size_t>(i)], u[static_cast<size_t>(k)]);
        if (i == k) v += s[static_cast<size_t>(j)] * dsi_j - s[static_cast<size_t>(i)] * dsi_j;
        if (i == j) v -= s[static_cast<size_t>(k)] * dsi_k - s[static_cast<size_t>(i)] * dsi_k;
        if (!v.is_zero()) {
          EqualsResult eq = equals(v, Expr::zero(), seed + 11);
          if (!eq.equal) {
            rep.pass = false;
            nij_worst = v;
          }
          if (!eq.exact) rep.exact = false;
        }
      }
  rep.residuals[0] = nij_worst;

  // (b) covariant compatibility of the two metrics
  std::array<Expr, 3> g = {-exp_ba(1).pow(-1), exp_ba(1).pow(-1),
                           th1.pow(-1) * exp_ba(2).pow(-1)};  // covariant metric of theta1
  std::array<Expr, 3> gu;                                     // contravariant
  for (int i = 0; i < 3; ++i) gu[static_cast<size_t>(i)] = g[static_cast<size_t>(i)].pow(-1);
  std::array<Expr, 3> gt = {-exp_ba(1), exp_ba(1), th2 * exp_ba(2)};  // contravariant of theta2
  Metric gm{g};
  auto G = christoffel(gm);

  // S1[m][k][l] = nabla_m gt^{kl} (gt diagonal)
  Expr S1[3][3][3];
  for (int m = 0; m < 3; ++m)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        Expr v = (k == l) ? diff(gt[static_cast<size_t>(k)], u[static_cast<size_t>(m)])
                          : Expr::zero();
        // + G^k_{mp} gt^{pl} + G^l_{mp} gt^{kp}, gt diagonal
        v += G[static_cast<size_t>(k)][static_cast<size_t>(m)][static_cast<size_t>(l)] *
             gt[static_cast<size_t>(l)];
        v += G[static_cast<size_t>(l)][static_cast<size_t>(m)][static_cast<size_t>(k)] *
             gt[static_cast<size_t>(k)];
        S1[m][k][l] = v;
      }
  // S2[n][m][k][l] = nabla_n S1[m][k][l]
  Expr S2[3][3][3][3];
  for (int n = 0; n < 3; ++n)
    for (int m = 0; m < 3; ++m)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          Expr v = diff(S1[m][k][l], u[static_cast<size_t>(n)]);
          for (int p = 0; p < 3; ++p) {
            v += G[static_cast<size_t>(k)][static_cast<size_t>(n)][static_cast<size_t>(p)] *
                 S1[m][p][l];
            v += G[static_cast<size_t>(l)][static_cast<size_t>(n)][static_cast<size_t>(p)] *
                 S1[m][k][p];
            v -= G[static_cast<size_t>(p)][static_cast<size_t>(n)][static_cast<size_t>(m)] *
                 S1[p][k][l];
          }
          S2[n][m][k][l] = v;
        }
  auto nn = [&](int i, int j, int k, int l) {
    return gu[static_cast<size_t>(i)] * gu[static_cast<size_t>(j)] * S2[i][j][k][l];
  };
  Expr compat_worst;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          Expr v = nn(i, j, k, l) + nn(k, l, i, j) - nn(i, k, j, l) - nn(j, l, i, k);
          if (!v.is_zero()) {
            EqualsResult eq = equals(v, Expr::zero(), seed + 13);
            if (!eq.equal) {
              rep.pass = false;
              compat_worst = v;
            }
            if (!eq.exact) rep.exact = false;
          }
        }
  rep.residuals[1] = compat_worst;
  return rep;
}

Expr hamiltonian_density(const Rational& c0, const Expr& xi) {
  // (1/4)[ (r1+r2)^2 e^{r1-r2} + c0 (r1+r2) + 2 (r1-r2 + Xi(r3)) e^{r1-r2} ],
  // normalized so that H_Theta grad(H) = -(V1 r1_x, V2 r2_x, V3 r3_x)
  Expr u = r(1) + r(2);
  Expr b = r(1) - r(2);
  Expr xi_r3 = subst(xi, [](const Atom& a) -> std::optional<Expr> {
    if (a.kind == AtomKind::Omega && a.comp == 0) return Expr::atom(Atom::jet(3, 0));
    return std::nullopt;
  });
  return Expr::num(rat(1, 4)) * (u * u * Expr::exp_of(b) + Expr::num(c0) * u +
                                 2 * (b + xi_r3) * Expr::exp_of(b));
}

namespace {

// square root of a concrete expression within the class (single term with even
// powers and square rational coefficient), used for the Theta>0 branch
std::optional<Expr> sqrt_in_class(const Expr& e) {
  if (e.terms().size() != 1) return std::nullopt;
  const Term& t = e.terms()[0];
  if (t.coeff < 0) return std::nullopt;
  mpz_class num = t.coeff.get_num(), den = t.coeff.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class ns, ds;
  mpz_sqrt(ns.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(ds.get_mpz_t(), den.get_mpz_t());
  std::vector<Term> raw(1);
  raw[0].coeff = Rational(ns) / Rational(ds);
  for (const auto& [atom, k] : t.mono) {
    if (k % 2 != 0) return std::nullopt;
    raw[0].mono.push_back({atom, k / 2});
  }
  for (const auto& [atom, c] : t.expo) raw[0].expo.push_back({atom, c / 2});
  return Expr::from_raw_terms(std::move(raw));
}

}  // namespace

CheckReport hamiltonian_form_check(const Expr& theta, const Rational& c0, const Expr& xi,
                                   uint64_t seed) {
  CheckReport rep;
  rep.pass = true;

  // (a) sqrt(Theta) Xi'' + Theta' Xi'/2 = c0
  Atom w0 = Atom::omega(0);
  Expr xi1 = diff(xi, w0), xi2 = diff(diff(xi, w0), w0);
  Expr th1 = diff(theta, w0);
  auto root = sqrt_in_class(theta);
  if (!root)
    fail(ErrorKind::UnsupportedForm,
         "Theta has no square root in the expression class; Theta>0 branch only");
  Expr cond = *root * xi2 + Expr::num(rat(1, 2)) * th1 * xi1 - Expr::num(c0);
  rep.residuals[0] = check_res(cond, rep, seed + 1);
  bool constraint_ok = rep.pass;

  // (b) H_Theta grad H = -(V1 r1_x, V2 r2_x, V3 r3_x)
  HamiltonianOperator H = make_H(theta);
  Expr density = hamiltonian_density(c0, xi);
  Cosymmetry grad = {diff(density, Atom::jet(1, 0)), diff(density, Atom::jet(2, 0)),
                     diff(density, Atom::jet(3, 0))};
  auto image = apply_H(H, grad);
  Expr r3x = Expr::exp_of(r(1) - r(2)) * omega(1);
  std::array<Expr, 3> target = {-velocity(1) * rx(1), -velocity(2) * rx(2), -velocity(3) * r3x};
  Expr worst;
  bool b_ok = true;
  for (int i = 0; i < 3; ++i) {
    Expr res = image[static_cast<size_t>(i)] - target[static_cast<size_t>(i)];
    if (!res.is_zero()) {
      EqualsResult eq = equals(res, Expr::zero(), seed + 2 + static_cast<uint64_t>(i));
      if (!eq.equal) {
        b_ok = false;
        worst = res;
      }
      if (!eq.exact) rep.exact = false;
    }
  }
  rep.residuals[1] = worst;
  rep.pass = constraint_ok && b_ok;
  if (!constraint_ok) {
    rep.note = std::string("auxiliary condition failed; evolution check ") +
               (b_ok ? "passed" : "failed");
    throw Error(ErrorKind::ConstraintViolated, rep.note);
  }
  return rep;
}

CheckReport casimir_check(const Expr& theta, const Expr& theta_bar, uint64_t seed) {
  CheckReport rep;
  rep.pass = true;
  HamiltonianOperator H = make_H(theta);
  Expr c1_density = Expr::exp_of(r(1) - r(2));
  Expr c2_density = c1_density * subst(theta_bar, [](const Atom& a) -> std::optional<Expr> {
    if (a.kind == AtomKind::Omega && a.comp == 0) return Expr::atom(Atom::jet(3, 0));
    return std::nullopt;
  });
  int idx = 0;
  for (const Expr& density : {c1_density, c2_density}) {
    auto grad = euler_operator(density);
    auto image = apply_H(H, {grad[0], grad[1], grad[2]});
    Expr worst;
    for (int i = 0; i < 3; ++i) {
      Expr res = check_res(image[static_cast<size_t>(i)], rep, seed + static_cast<uint64_t>(idx * 3 + i));
      if (!res.is_zero()) worst = res;
    }
    rep.residuals[static_cast<size_t>(idx++)] = worst;
  }
  return rep;
}

Cosymmetry cosym_bracket(const Cosymmetry& g1, const Cosymmetry& g2,
                         const HamiltonianOperator& H) {
  auto to_std3 = [](const std::array<Expr, 3>& v) {
    std::array<Expr, 3> out;
    for (int i = 0; i < 3; ++i) out[static_cast<size_t>(i)] = to_standard(v[static_cast<size_t>(i)]);
    return out;
  };
  std::array<Expr, 3> Hg1 = to_std3(apply_H(H, g1));
  std::array<Expr, 3> Hg2 = to_std3(apply_H(H, g2));
  std::array<Expr, 3> g1s = to_std3(g1), g2s = to_std3(g2);

  MatrixDiffOperator l_g2 = frechet(g2s);
  MatrixDiffOperator l_g1 = frechet(g1s);
  MatrixDiffOperator l_Hg1 = frechet(Hg1);

  auto term1 = apply_op(l_g2, Hg1);
  auto term2 = apply_op(formal_adjoint(l_Hg1), g2s);
  auto term3a = apply_op(l_g1, Hg2);
  auto term3b = apply_op(formal_adjoint(l_g1), Hg2);

  Cosymmetry out;
  for (int i = 0; i < 3; ++i)
    out[static_cast<size_t>(i)] = term1[static_cast<size_t>(i)] + term2[static_cast<size_t>(i)] +
                                  term3a[static_cast<size_t>(i)] - term3b[static_cast<size_t>(i)];
  return out;
}

CheckReport homomorphism_check(const Cosymmetry& g1, const Cosymmetry& g2,
                               const HamiltonianOperator& H, uint64_t seed) {
  Cosymmetry br = cosym_bracket(g1, g2, H);
  auto lhs = apply_H(H, br);
  EvolutionaryField rhs = lie_bracket(apply_H(H, g1), apply_H(H, g2));
  CheckReport rep;
  rep.pass = true;
  for (int i = 0; i < 3; ++i)
    rep.residuals[static_cast<size_t>(i)] =
        check_res(lhs[static_cast<size_t>(i)] - rhs[static_cast<size_t>(i)], rep,
                  seed + static_cast<uint64_t>(i));
  return rep;
}

EvolutionaryField make_hamiltonian_symmetry_W(const Expr& theta, const Expr& om) {
  int top = ord(om, OrdFamily::Omega);
  Expr sum;
  for (int k = 0; top != kOrdNone && k <= top; ++k) {
    Expr dk = diff(om, Atom::omega(k));
    if (dk.is_zero()) continue;
    for (int j = 0; j < k; ++j) dk = -op_Ahat(dk);
    sum += dk;
  }
  return make_W(op_Ahat(theta * sum));
}

}  // namespace dfx
