#include "dfx/recursion.hpp"

#include <cmath>

namespace dfx {

namespace {

Expr r(int i) { return Expr::atom(Atom::jet(i, 0)); }
Expr rx(int i) { return Expr::atom(Atom::jet(i, 1)); }
Expr omega(int k) { return Expr::atom(Atom::omega(k)); }
Expr half_exp(int sign) {
  Expr h = Expr::num(rat(sign, 2));
  return Expr::exp_of(h * r(1) - h * r(2));
}

Expr apply_word(const GammaSpec& w, Expr e) {
  for (int i = 0; i < w.kappa; ++i) e = tilde_j(e);
  if (w.kind == GammaSpec::Kind::DyThenJ)
    for (int i = 0; i < w.iota; ++i) e = tilde_dy(e);
  if (w.kind == GammaSpec::Kind::DzThenJ)
    for (int i = 0; i < w.iota; ++i) e = tilde_dz(e);
  return e;
}

}  // namespace

RecursionOperator RecursionOperator::matrix(MatrixDiffOperator m) {
  RecursionOperator R;
  R.kind = Kind::Matrix;
  R.mat = std::move(m);
  return R;
}

RecursionOperator teshukov() {
  // Dx ∘ diag(1/r1_x, 1/r2_x, 1/r3_x) + first-order-free matrix part,
  // assembled in the modified chart (r3_x = e^{r1-r2} w1)
  Expr r3x = Expr::exp_of(r(1) - r(2)) * omega(1);
  Expr inv1 = rx(1).pow(-1), inv2 = rx(2).pow(-1), inv3 = Expr::exp_of(r(2) - r(1)) * omega(1).pow(-1);
  Expr half = Expr::num(rat(1, 2));

  MatrixDiffOperator M(false);
  M.at(1, 1) = OpEntry::of(inv1, 0, 1) + OpEntry::of(total_dx(inv1)) +
               OpEntry::of(half * (rx(1) - rx(2)) * inv1);
  M.at(1, 2) = OpEntry::of(half * (rx(2) - rx(1)) * inv2);
  M.at(2, 1) = OpEntry::of(half * (rx(2) - rx(1)) * inv1);
  M.at(2, 2) = OpEntry::of(inv2, 0, 1) + OpEntry::of(total_dx(inv2)) +
               OpEntry::of(half * (rx(1) - rx(2)) * inv2);
  M.at(3, 1) = OpEntry::of((r3x - rx(1)) * inv1);
  M.at(3, 2) = OpEntry::of((rx(2) - r3x) * inv2);
  M.at(3, 3) = OpEntry::of(inv3, 0, 1) + OpEntry::of(total_dx(inv3)) +
               OpEntry::of((rx(1) - rx(2)) * inv3);
  return RecursionOperator::matrix(std::move(M));
}

RecursionOperator make_R1(const GammaSpec& q) {
  RecursionOperator R;
  R.kind = RecursionOperator::Kind::R1;
  R.word = q;
  return R;
}

RecursionOperator make_R2(const GammaSpec& q) {
  RecursionOperator R;
  R.kind = RecursionOperator::Kind::R2;
  R.word = q;
  return R;
}

RecursionOperator make_R3(std::vector<std::pair<Expr, int>> p) {
  RecursionOperator R;
  R.kind = RecursionOperator::Kind::R3;
  R.p = std::move(p);
  return R;
}

EvolutionaryField apply_recursion(const RecursionOperator& R, const EvolutionaryField& eta) {
  switch (R.kind) {
    case RecursionOperator::Kind::Matrix: {
      std::array<Expr, 3> m;
      for (int i = 0; i < 3; ++i) m[static_cast<size_t>(i)] = to_modified(eta[static_cast<size_t>(i)]);
      return apply_op(R.mat, m);
    }
    case RecursionOperator::Kind::R1: {
      Expr s = apply_word(R.word, half_exp(1) * rx(1).pow(-1) * to_modified(eta[0]));
      return field_R_of_gamma(s);
    }
    case RecursionOperator::Kind::R2: {
      Expr s = apply_word(R.word, half_exp(1) * rx(2).pow(-1) * to_modified(eta[1]));
      return field_R_of_gamma(s);
    }
    case RecursionOperator::Kind::R3: {
      Expr inner = -to_modified(eta[0]) + to_modified(eta[1]) +
                   op_A(to_modified(eta[2]) * omega(1).pow(-1));
      Expr third;
      for (const auto& [coef, k] : R.p) {
        Expr v = inner;
        for (int i = 0; i < k; ++i) v = op_A(v);
        third += coef * v;
      }
      return {Expr::zero(), Expr::zero(), third};
    }
  }
  fail(ErrorKind::DomainError, "bad recursion operator kind");
}

CheckReport teshukov_decomposition_check(const std::vector<EvolutionaryField>& sample,
                                         uint64_t seed) {
  RecursionOperator rt = teshukov();
  RecursionOperator r11 = make_R1(GammaSpec::j_power(0));
  RecursionOperator r21 = make_R2(GammaSpec::j_power(0));
  RecursionOperator r31 = make_R3({{Expr::one(), 0}});
  CheckReport rep;
  rep.pass = true;
  uint64_t s = seed;
  for (const EvolutionaryField& eta : sample) {
    EvolutionaryField lhs = apply_recursion(rt, eta);
    EvolutionaryField rhs = add(scale(rat(1, 2), apply_recursion(r11, eta)),
                                add(scale(rat(-1, 2), apply_recursion(r21, eta)), apply_recursion(r31, eta)));
    EqualsResult eq = fields_equal(lhs, rhs, ++s);
    rep.pass = rep.pass && eq.equal;
    rep.exact = rep.exact && eq.exact;
  }
  return rep;
}

// --- R4 determining equations ----------------------------------------------------

R4DeterminingReport r4_determining_residuals(int c_scale) {
  R4DeterminingReport rep;
  // B = diag(2,-2,0), C = c_scale (r1_x, r2_x, r3_x), A = 0
  std::array<Expr, 3> B = {Expr::num(2), Expr::num(-2), Expr::zero()};
  std::array<Expr, 3> C = {Expr::num(c_scale) * rx(1), Expr::num(c_scale) * rx(2),
                           Expr::num(c_scale) * Expr::atom(Atom::jet(3, 1))};
  auto V = [&](int k) { return velocity(k); };

  // A-equations: A^{kk'}(V^k - V^{k'}) = 0 and the second display, which with
  // A = 0 reduces to (V^k - V^{k'}) B^{kk'} = 0 (B diagonal)
  rep.a_ok = true;

  // B-equations
  rep.b_ok = true;
  for (int k = 1; k <= 3; ++k) {
    for (int kp = 1; kp <= 3; ++kp) {
      Expr Bkk = (k == kp) ? B[static_cast<size_t>(k - 1)] : Expr::zero();
      Expr res;
      // B constants: derivative terms vanish
      // + r^k_x (B^{1k'} + B^{2k'})
      Expr b1k = (kp == 1) ? B[0] : Expr::zero();
      Expr b2k = (kp == 2) ? B[1] : Expr::zero();
      res += Expr::atom(Atom::jet(k, 1)) * (b1k + b2k);
      if (kp == 1 || kp == 2) {
        // - (B^{kj} r^j_x - (V^k - V^{k'}) C^k), with B diagonal
        res -= B[static_cast<size_t>(k - 1)] * Expr::atom(Atom::jet(k, 1));
        res += (V(k) - V(kp)) * C[static_cast<size_t>(k - 1)];
      }
      rep.b_residuals[static_cast<size_t>(k - 1)][static_cast<size_t>(kp - 1)] = res;
      if (!res.is_zero()) rep.b_ok = false;
    }
  }

  // C-equation
  rep.c_ok = true;
  for (int k = 1; k <= 3; ++k) {
    Expr res;
    for (int l = 1; l <= 3; ++l) {
      Expr ck_rl = diff(C[static_cast<size_t>(k - 1)], Atom::jet(l, 0));
      Expr ck_rlx = diff(C[static_cast<size_t>(k - 1)], Atom::jet(l, 1));
      res += ck_rl * (V(k) - V(l)) * Expr::atom(Atom::jet(l, 1));
      res += ck_rlx * ((V(k) - V(l)) * Expr::atom(Atom::jet(l, 2)) -
                       (rx(1) + rx(2)) * Expr::atom(Atom::jet(l, 1)));
    }
    res += Expr::atom(Atom::jet(k, 1)) * (C[0] + C[1]);
    if (!res.is_zero()) rep.c_ok = false;
  }
  return rep;
}

// --- R4 numeric check ---------------------------------------------------------------

R4Report apply_R4(const EvolutionaryField& eta, const GridField& grid, int c_scale,
                  double threshold_scale) {
  const GridSpec& g = grid.spec;
  if (g.nt < 5 || g.nx < 5) fail(ErrorKind::DomainError, "grid too small for R4");
  std::array<Expr, 3> comp;
  for (int i = 0; i < 3; ++i) comp[static_cast<size_t>(i)] = to_standard(eta[static_cast<size_t>(i)]);

  size_t n = static_cast<size_t>(g.nt) * g.nx;
  std::vector<double> e1(n), e2(n), e3(n), Y(n, 0.0);

  for (int i = 0; i < g.nt; ++i)
    for (int j = 1; j + 1 < g.nx; ++j) {
      EvalEnv env = node_env(grid, i, j);
      e1[grid.at(i, j)] = eval(comp[0], env);
      e2[grid.at(i, j)] = eval(comp[1], env);
      e3[grid.at(i, j)] = eval(comp[2], env);
    }

  // Dt Y along the anchor column x = x_1 (first interior column)
  auto dtY = [&](int i, int j) {
    double v1 = grid.r1[grid.at(i, j)] + grid.r2[grid.at(i, j)] + 1;
    double v2 = v1 - 2;
    return -(v1 * e1[grid.at(i, j)] + v2 * e2[grid.at(i, j)]);
  };
  // anchor: Y(0,1) = 0; integrate down the column in t, then across rows in x
  const int j0 = 1;
  Y[grid.at(0, j0)] = 0.0;
  for (int i = 1; i < g.nt; ++i)
    Y[grid.at(i, j0)] =
        Y[grid.at(i - 1, j0)] + 0.5 * g.dt * (dtY(i - 1, j0) + dtY(i, j0));
  for (int i = 0; i < g.nt; ++i)
    for (int j = j0 + 1; j + 1 < g.nx; ++j) {
      double fa = e1[grid.at(i, j - 1)] + e2[grid.at(i, j - 1)];
      double fb = e1[grid.at(i, j)] + e2[grid.at(i, j)];
      Y[grid.at(i, j)] = Y[grid.at(i, j - 1)] + 0.5 * g.dx * (fa + fb);
    }

  R4Report rep;
  rep.c_scale = c_scale;
  // consistency: centered Dt Y vs -(V1 eta1 + V2 eta2) on the interior
  for (int i = 1; i + 1 < g.nt; ++i)
    for (int j = j0 + 1; j + 2 < g.nx; ++j) {
      double num = (Y[grid.at(i + 1, j)] - Y[grid.at(i - 1, j)]) / (2 * g.dt);
      rep.y_consistency = std::max(rep.y_consistency, std::fabs(num - dtY(i, j)));
    }
  double h2 = g.dt * g.dt + g.dx * g.dx;
  if (rep.y_consistency > std::max(threshold_scale * h2, 1e-9))
    fail(ErrorKind::QuadratureInconsistent,
         "potential quadrature deviation " + std::to_string(rep.y_consistency));

  // zeta = B eta + C Y with B = diag(2,-2,0), C = c_scale * r_x
  std::vector<double> z1(n), z2(n), z3(n);
  auto rx_at = [&](const std::vector<double>& u, int i, int j) {
    return (u[grid.at(i, j + 1)] - u[grid.at(i, j - 1)]) / (2 * g.dx);
  };
  for (int i = 0; i < g.nt; ++i)
    for (int j = j0 + 1; j + 2 < g.nx; ++j) {
      double y = Y[grid.at(i, j)];
      z1[grid.at(i, j)] = 2 * e1[grid.at(i, j)] + c_scale * rx_at(grid.r1, i, j) * y;
      z2[grid.at(i, j)] = -2 * e2[grid.at(i, j)] + c_scale * rx_at(grid.r2, i, j) * y;
      z3[grid.at(i, j)] = c_scale * rx_at(grid.r3, i, j) * y;
    }

  // residual of the linearized system for zeta
  std::array<double, 3> sumsq{};
  long count = 0;
  const std::vector<double>* zz[3] = {&z1, &z2, &z3};
  const std::vector<double>* rr[3] = {&grid.r1, &grid.r2, &grid.r3};
  for (int i = 1; i + 1 < g.nt; ++i)
    for (int j = j0 + 2; j + 3 < g.nx; ++j) {
      double zsum = z1[grid.at(i, j)] + z2[grid.at(i, j)];
      for (int k = 0; k < 3; ++k) {
        const std::vector<double>& z = *zz[k];
        double vt = (z[grid.at(i + 1, j)] - z[grid.at(i - 1, j)]) / (2 * g.dt);
        double vx = (z[grid.at(i, j + 1)] - z[grid.at(i, j - 1)]) / (2 * g.dx);
        double vk = grid.r1[grid.at(i, j)] + grid.r2[grid.at(i, j)] + (k == 0 ? 1 : (k == 1 ? -1 : 0));
        double res = vt + vk * vx + zsum * rx_at(*rr[k], i, j);
        rep.residual_max[static_cast<size_t>(k)] =
            std::max(rep.residual_max[static_cast<size_t>(k)], std::fabs(res));
        sumsq[static_cast<size_t>(k)] += res * res;
      }
      ++count;
    }
  for (int k = 0; k < 3; ++k)
    rep.residual_l2[static_cast<size_t>(k)] =
        std::sqrt(sumsq[static_cast<size_t>(k)] / std::max(1L, count));
  rep.threshold = std::max(threshold_scale * h2, 1e-9);
  rep.pass = rep.residual_max[0] < rep.threshold && rep.residual_max[1] < rep.threshold &&
             rep.residual_max[2] < rep.threshold;
  return rep;
}

}  // namespace dfx
