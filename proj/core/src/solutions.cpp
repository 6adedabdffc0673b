#include "dfx/solutions.hpp"

#include <cmath>
#include <fstream>

namespace dfx {

namespace {

Expr r(int i) { return Expr::atom(Atom::jet(i, 0)); }

}  // namespace

ClosedForm ClosedForm::tanh_form() {
  // derivatives via the chain t' = 1 - t^2
  auto dk = [](int k, double x) -> double {
    double t = std::tanh(x);
    switch (k) {
      case 0: return t;
      case 1: return 1 - t * t;
      case 2: return -2 * t * (1 - t * t);
      case 3: return (1 - t * t) * (6 * t * t - 2);
      case 4: return (1 - t * t) * (16 * t - 24 * t * t * t);
      default: fail(ErrorKind::UnsupportedForm, "tanh derivative order > 4");
    }
  };
  return {dk, "tanh"};
}

ClosedForm ClosedForm::exp_form() {
  return {[](int, double x) { return std::exp(x); }, "exp"};
}

ClosedForm ClosedForm::poly(std::vector<double> coeffs) {
  std::string repr = "poly:";
  for (size_t i = 0; i < coeffs.size(); ++i)
    repr += (i ? "," : "") + std::to_string(coeffs[i]);
  auto dk = [coeffs](int k, double x) -> double {
    double acc = 0.0;
    for (size_t i = 0; i < coeffs.size(); ++i) {
      int n = static_cast<int>(i);
      if (n < k) continue;
      double fall = 1.0;
      for (int m = 0; m < k; ++m) fall *= (n - m);
      acc += coeffs[i] * fall * std::pow(x, n - k);
    }
    return acc;
  };
  return {dk, repr};
}

ClosedForm ClosedForm::parse(const std::string& text) {
  if (text == "tanh") return tanh_form();
  if (text == "exp") return exp_form();
  if (text.rfind("poly:", 0) == 0) {
    std::vector<double> c;
    std::string rest = text.substr(5);
    size_t pos = 0;
    while (pos < rest.size()) {
      size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      c.push_back(std::stod(rest.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    if (c.empty() || c.size() > 4)
      fail(ErrorKind::ConfigError, "poly closed form needs 1..4 coefficients");
    return poly(std::move(c));
  }
  fail(ErrorKind::ConfigError, "unknown closed form '" + text + "' (tanh|exp|poly:c0,c1,..)");
}

KGSolution KGSolution::make(const Expr& psi) {
  Expr residual = diff(diff(psi, Atom::jet(1, 0)), Atom::jet(2, 0)) + Expr::num(rat(1, 4)) * psi;
  if (!residual.is_zero())
    fail(ErrorKind::ConstructionFailed, "expression does not satisfy the Klein-Gordon constraint");

  // membership in span{ e^{(r2-r1)/2}, e^{(r1-r2)/2}, (r1+r2) e^{(r1-r2)/2} }:
  // subtract the admissible parts term by term
  bool degenerate = true;
  Rational half = rat(1, 2);
  Rational r1coef, r2coef;  // coefficients of r1, r2 in the (1/2,-1/2) exponential block
  bool have_r1 = false, have_r2 = false;
  for (const Term& t : psi.terms()) {
    Rational c1 = 0, c2 = 0;
    for (const auto& [atom, c] : t.expo) {
      if (atom.kind == AtomKind::Jet && atom.comp == 1 && atom.dx == 0) c1 = c;
      if (atom.kind == AtomKind::Jet && atom.comp == 2 && atom.dx == 0) c2 = c;
    }
    if (c1 == -half && c2 == half && t.mono.empty()) continue;  // e^{(r2-r1)/2}
    if (c1 == half && c2 == -half) {
      if (t.mono.empty()) continue;                             // e^{(r1-r2)/2}
      if (t.mono.size() == 1 && t.mono[0].second == 1 && t.mono[0].first.kind == AtomKind::Jet &&
          t.mono[0].first.dx == 0) {
        if (t.mono[0].first.comp == 1) {
          r1coef = t.coeff;
          have_r1 = true;
          continue;
        }
        if (t.mono[0].first.comp == 2) {
          r2coef = t.coeff;
          have_r2 = true;
          continue;
        }
      }
    }
    degenerate = false;  // a term outside the excluded span
  }
  if (degenerate && (have_r1 != have_r2 || (have_r1 && r1coef != r2coef)))
    degenerate = false;  // r1, r2 coefficients must combine to c (r1+r2)

  KGSolution out;
  out.psi = psi;
  out.nondegenerate = !degenerate;
  return out;
}

KGSolution KGSolution::exponential(const std::vector<std::pair<Rational, Rational>>& terms) {
  Expr psi;
  for (const auto& [coef, a] : terms) {
    if (a == 0) fail(ErrorKind::ConstructionFailed, "exponent a must be nonzero");
    Rational b = rat(-1, 4) / a;
    psi += Expr::num(coef) * Expr::exp_of(Expr::num(a) * r(1) + Expr::num(b) * r(2));
  }
  return make(psi);
}

ImplicitSolution make_regular(const KGSolution& psi, ClosedForm w) {
  if (!psi.nondegenerate)
    fail(ErrorKind::DegenerateSeed, "Klein-Gordon seed lies in the excluded span");
  Expr half = Expr::num(rat(1, 2));
  Expr em = Expr::exp_of(half * r(2) - half * r(1));  // e^{(r2-r1)/2}
  Expr ep = Expr::exp_of(half * r(1) - half * r(2));  // e^{(r1-r2)/2}
  Expr p1 = diff(psi.psi, Atom::jet(1, 0));
  Expr p2 = diff(psi.psi, Atom::jet(2, 0));
  ImplicitSolution sol;
  sol.family = ImplicitSolution::Family::Regular;
  sol.psi = psi;
  sol.t_map = -em * (p1 + p2);
  sol.x_map = em * ((2 * p1 + psi.psi) - (r(1) + r(2) + 1) * (p1 + p2));
  sol.warg_map = ep * (p1 - p2 - psi.psi);
  sol.w = std::move(w);
  return sol;
}

ImplicitSolution make_singular(SingularSide side, double c, ClosedForm theta, ClosedForm w) {
  ImplicitSolution sol;
  sol.family = side == SingularSide::R1 ? ImplicitSolution::Family::SingularR1
                                        : ImplicitSolution::Family::SingularR2;
  sol.c = c;
  sol.theta = std::move(theta);
  sol.w = std::move(w);
  return sol;
}

ImplicitSolution make_ultra(double c1, double c2, ClosedForm w) {
  ImplicitSolution sol;
  sol.family = ImplicitSolution::Family::Ultra;
  sol.c1 = c1;
  sol.c2 = c2;
  sol.w = std::move(w);
  return sol;
}

namespace {

struct Maps2D {
  EvalEnv env;
  const Expr *tm, *xm;
  Expr dtd1, dtd2, dxd1, dxd2;

  explicit Maps2D(const ImplicitSolution& sol) : tm(&sol.t_map), xm(&sol.x_map) {
    dtd1 = diff(sol.t_map, Atom::jet(1, 0));
    dtd2 = diff(sol.t_map, Atom::jet(2, 0));
    dxd1 = diff(sol.x_map, Atom::jet(1, 0));
    dxd2 = diff(sol.x_map, Atom::jet(2, 0));
  }

  void set(double a, double b) {
    env.values[Atom::jet(1, 0)] = a;
    env.values[Atom::jet(2, 0)] = b;
  }
  double tv() { return eval(*tm, env); }
  double xv() { return eval(*xm, env); }
};

}  // namespace

GridField sample_on_grid(const ImplicitSolution& sol, const GridSpec& spec) {
  GridField f;
  f.spec = spec;
  size_t n = static_cast<size_t>(spec.nt) * static_cast<size_t>(spec.nx);
  f.r1.resize(n);
  f.r2.resize(n);
  f.r3.resize(n);
  f.min_jacobian_abs = HUGE_VAL;

  using Family = ImplicitSolution::Family;
  if (sol.family == Family::Ultra) {
    for (int i = 0; i < spec.nt; ++i)
      for (int j = 0; j < spec.nx; ++j) {
        double t = f.t_at(i), x = f.x_at(j);
        f.r1[f.at(i, j)] = sol.c1;
        f.r2[f.at(i, j)] = sol.c2;
        f.r3[f.at(i, j)] = sol.w(x - (sol.c1 + sol.c2) * t);
      }
    f.min_jacobian_abs = 1.0;
    return f;
  }

  if (sol.family == Family::SingularR1 || sol.family == Family::SingularR2) {
    bool side1 = sol.family == Family::SingularR1;
    double guess = 0.0;
    for (int i = 0; i < spec.nt; ++i) {
      double col_guess = guess;
      for (int j = 0; j < spec.nx; ++j) {
        double t = f.t_at(i), x = f.x_at(j);
        double b = (j == 0) ? col_guess : f.r2[f.at(i, j - 1)];
        if (!side1) b = (j == 0) ? col_guess : f.r1[f.at(i, j - 1)];
        // solve x = (b + c -+ 1) t + e^{+-b} Theta'(b) for the free invariant
        int it = 0;
        for (; it < 50; ++it) {
          double eb = side1 ? std::exp(b) : std::exp(-b);
          double fv, fp;
          if (side1) {
            fv = (b + sol.c - 1) * t + eb * sol.theta.dk(1, b) - x;
            fp = t + eb * (sol.theta.dk(1, b) + sol.theta.dk(2, b));
          } else {
            fv = (b + sol.c + 1) * t + eb * sol.theta.dk(1, b) - x;
            fp = t + eb * (sol.theta.dk(2, b) - sol.theta.dk(1, b));
          }
          if (std::fabs(fp) < 1e-13) fail(ErrorKind::JacobianSingular, "singular-family slope");
          double step = fv / fp;
          b -= step;
          f.max_newton_iters = std::max(f.max_newton_iters, it + 1);
          if (std::fabs(step) < 1e-12) break;
        }
        if (it >= 50)
          fail(ErrorKind::NewtonDiverged,
               "node (" + std::to_string(i) + "," + std::to_string(j) + ")");
        double warg;
        if (side1) {
          f.r1[f.at(i, j)] = sol.c;
          f.r2[f.at(i, j)] = b;
          warg = std::exp(-b) * t - sol.theta.dk(1, b) - sol.theta.dk(0, b);
        } else {
          f.r1[f.at(i, j)] = b;
          f.r2[f.at(i, j)] = sol.c;
          warg = std::exp(b) * t + sol.theta.dk(1, b) - sol.theta.dk(0, b);
        }
        f.r3[f.at(i, j)] = sol.w(warg);
        if (j == 0) guess = b;
      }
    }
    f.min_jacobian_abs = 1.0;
    return f;
  }

  // regular family: 2D damped Newton, column-major continuation from the seed
  Maps2D maps(sol);
  EvalEnv wenv;
  std::vector<char> solved(n, 0);
  auto solve_node = [&](int i, int j, double a0, double b0) {
    double t = f.t_at(i), x = f.x_at(j);
    double a = a0, b = b0;
    maps.set(a, b);
    double ft = maps.tv() - t, fx = maps.xv() - x;
    double fn = std::hypot(ft, fx);
    int it = 0;
    for (; it < 50; ++it) {
      double j11 = eval(maps.dtd1, maps.env), j12 = eval(maps.dtd2, maps.env);
      double j21 = eval(maps.dxd1, maps.env), j22 = eval(maps.dxd2, maps.env);
      double det = j11 * j22 - j12 * j21;
      f.min_jacobian_abs = std::min(f.min_jacobian_abs, std::fabs(det));
      if (std::fabs(det) < 1e-14)
        fail(ErrorKind::JacobianSingular,
             "node (" + std::to_string(i) + "," + std::to_string(j) + ")");
      double da = (j22 * ft - j12 * fx) / det;
      double db = (j11 * fx - j21 * ft) / det;
      // damping: halve until the residual does not grow
      double scale = 1.0;
      double na = a, nb = b, nft = 0, nfx = 0, nfn = 0;
      for (int h = 0; h < 12; ++h) {
        na = a - scale * da;
        nb = b - scale * db;
        maps.set(na, nb);
        nft = maps.tv() - t;
        nfx = maps.xv() - x;
        nfn = std::hypot(nft, nfx);
        if (nfn <= fn || fn < 1e-14) break;
        scale /= 2;
      }
      a = na;
      b = nb;
      ft = nft;
      fx = nfx;
      fn = nfn;
      f.max_newton_iters = std::max(f.max_newton_iters, it + 1);
      if (std::hypot(scale * da, scale * db) < 1e-12) break;
    }
    if (it >= 50)
      fail(ErrorKind::NewtonDiverged,
           "node (" + std::to_string(i) + "," + std::to_string(j) + ")");
    f.max_newton_residual = std::max(f.max_newton_residual, fn);
    f.r1[f.at(i, j)] = a;
    f.r2[f.at(i, j)] = b;
    maps.set(a, b);
    wenv.values = maps.env.values;
    f.r3[f.at(i, j)] = sol.w(eval(sol.warg_map, wenv));
    solved[f.at(i, j)] = 1;
  };

  int ic = spec.nt / 2, jc = spec.nx / 2;
  auto guess_for = [&](int i, int j) -> std::pair<double, double> {
    const int di[4] = {0, 0, 1, -1};
    const int dj[4] = {1, -1, 0, 0};
    for (int d = 0; d < 4; ++d) {
      int ii = i + di[d], jj = j + dj[d];
      if (ii >= 0 && ii < spec.nt && jj >= 0 && jj < spec.nx && solved[f.at(ii, jj)])
        return {f.r1[f.at(ii, jj)], f.r2[f.at(ii, jj)]};
    }
    return {spec.seed_r1, spec.seed_r2};
  };
  // center column first, expanding rows; then neighbouring columns
  std::vector<int> jorder;
  jorder.push_back(jc);
  for (int d = 1; d < spec.nx; ++d) {
    if (jc + d < spec.nx) jorder.push_back(jc + d);
    if (jc - d >= 0) jorder.push_back(jc - d);
  }
  for (int j : jorder) {
    for (int d = 0; d < spec.nt; ++d) {
      int up = ic + d, dn = ic - d - 1;
      if (up < spec.nt) {
        auto [a0, b0] = guess_for(up, j);
        solve_node(up, j, a0, b0);
      }
      if (dn >= 0) {
        auto [a0, b0] = guess_for(dn, j);
        solve_node(dn, j, a0, b0);
      }
    }
  }

  // branch-continuity monitor
  for (int i = 0; i < spec.nt; ++i)
    for (int j = 0; j + 1 < spec.nx; ++j) {
      double jump = std::max(std::fabs(f.r1[f.at(i, j + 1)] - f.r1[f.at(i, j)]),
                             std::fabs(f.r2[f.at(i, j + 1)] - f.r2[f.at(i, j)]));
      f.max_neighbor_jump = std::max(f.max_neighbor_jump, jump);
    }
  // nondegeneracy monitor: r1_x r2_x away from zero (interior differences)
  f.min_r1x_r2x_abs = HUGE_VAL;
  for (int i = 0; i < spec.nt; ++i)
    for (int j = 1; j + 1 < spec.nx; ++j) {
      double r1x = (f.r1[f.at(i, j + 1)] - f.r1[f.at(i, j - 1)]) / (2 * spec.dx);
      double r2x = (f.r2[f.at(i, j + 1)] - f.r2[f.at(i, j - 1)]) / (2 * spec.dx);
      f.min_r1x_r2x_abs = std::min(f.min_r1x_r2x_abs, std::fabs(r1x * r2x));
    }
  return f;
}

std::array<ResidualNorms, 3> pde_residual(const GridField& f) {
  const GridSpec& g = f.spec;
  if (g.nt < 5 || g.nx < 5) fail(ErrorKind::DomainError, "grid too small for residuals");
  std::array<ResidualNorms, 3> out{};
  std::array<double, 3> sumsq{};
  std::array<long, 3> count{};
  const std::vector<double>* comp[3] = {&f.r1, &f.r2, &f.r3};
  for (int i = 1; i + 1 < g.nt; ++i)
    for (int j = 1; j + 1 < g.nx; ++j) {
      double v[4] = {0, f.r1[f.at(i, j)] + f.r2[f.at(i, j)] + 1,
                     f.r1[f.at(i, j)] + f.r2[f.at(i, j)] - 1,
                     f.r1[f.at(i, j)] + f.r2[f.at(i, j)]};
      for (int k = 1; k <= 3; ++k) {
        const std::vector<double>& u = *comp[k - 1];
        double ut = (u[f.at(i + 1, j)] - u[f.at(i - 1, j)]) / (2 * g.dt);
        double ux = (u[f.at(i, j + 1)] - u[f.at(i, j - 1)]) / (2 * g.dx);
        double res = ut + v[k] * ux;
        out[static_cast<size_t>(k - 1)].max_norm =
            std::max(out[static_cast<size_t>(k - 1)].max_norm, std::fabs(res));
        sumsq[static_cast<size_t>(k - 1)] += res * res;
        count[static_cast<size_t>(k - 1)]++;
      }
    }
  for (int k = 0; k < 3; ++k)
    out[static_cast<size_t>(k)].l2_norm =
        std::sqrt(sumsq[static_cast<size_t>(k)] / std::max(1L, count[static_cast<size_t>(k)]));
  return out;
}

EvalEnv node_env(const GridField& f, int i, int j) {
  const GridSpec& g = f.spec;
  if (j < 1 || j + 1 >= g.nx) fail(ErrorKind::DomainError, "node too close to the boundary");
  EvalEnv env;
  env.values[Atom::t()] = f.t_at(i);
  env.values[Atom::x()] = f.x_at(j);
  const std::vector<double>* comp[3] = {&f.r1, &f.r2, &f.r3};
  for (int k = 1; k <= 3; ++k) {
    const std::vector<double>& u = *comp[k - 1];
    env.values[Atom::jet(k, 0)] = u[f.at(i, j)];
    env.values[Atom::jet(k, 1)] = (u[f.at(i, j + 1)] - u[f.at(i, j - 1)]) / (2 * g.dx);
    env.values[Atom::jet(k, 2)] =
        (u[f.at(i, j + 1)] - 2 * u[f.at(i, j)] + u[f.at(i, j - 1)]) / (g.dx * g.dx);
  }
  return env;
}

ResidualNorms conservation_residual(const GridField& f, const ConservedCurrent& c) {
  const GridSpec& g = f.spec;
  Expr rho = to_standard(c.rho), sigma = to_standard(c.sigma);
  int need = std::max(order_of(c), 0);
  if (need > 2) fail(ErrorKind::UnsupportedForm, "conservation residual needs jet order <= 2");
  // evaluate density/flux on all interior nodes, then difference
  std::vector<double> rv(static_cast<size_t>(g.nt) * g.nx, 0.0),
      sv(static_cast<size_t>(g.nt) * g.nx, 0.0);
  for (int i = 0; i < g.nt; ++i)
    for (int j = 1; j + 1 < g.nx; ++j) {
      EvalEnv env = node_env(f, i, j);
      rv[f.at(i, j)] = eval(rho, env);
      sv[f.at(i, j)] = eval(sigma, env);
    }
  ResidualNorms out;
  double sumsq = 0;
  long count = 0;
  for (int i = 1; i + 1 < g.nt; ++i)
    for (int j = 2; j + 2 < g.nx; ++j) {
      double dt_rho = (rv[f.at(i + 1, j)] - rv[f.at(i - 1, j)]) / (2 * g.dt);
      double dx_sigma = (sv[f.at(i, j + 1)] - sv[f.at(i, j - 1)]) / (2 * g.dx);
      double res = dt_rho + dx_sigma;
      out.max_norm = std::max(out.max_norm, std::fabs(res));
      sumsq += res * res;
      ++count;
    }
  out.l2_norm = std::sqrt(sumsq / std::max(1L, count));
  return out;
}

double observed_order(double coarse, double fine) {
  if (fine <= 0 || coarse <= 0) return HUGE_VAL;
  return std::log2(coarse / fine);
}

void write_csv(const GridField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::ConfigError, "cannot open " + path);
  os << "t,x,r1,r2,r3\n";
  os.precision(17);
  for (int i = 0; i < f.spec.nt; ++i)
    for (int j = 0; j < f.spec.nx; ++j)
      os << f.t_at(i) << "," << f.x_at(j) << "," << f.r1[f.at(i, j)] << ","
         << f.r2[f.at(i, j)] << "," << f.r3[f.at(i, j)] << "\n";
}

}  // namespace dfx
