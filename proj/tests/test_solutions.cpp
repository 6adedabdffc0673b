#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "dfx/solutions.hpp"

using namespace dfx;

namespace {
Expr r(int i) { return Expr::atom(Atom::jet(i, 0)); }
Expr ehalf(int sign) {
  Expr h = Expr::num(rat(sign, 2));
  return Expr::exp_of(h * r(1) - h * r(2));
}
}  // namespace

TEST_CASE("Klein-Gordon seeds") {
  auto p1 = KGSolution::exponential({{rat(1), rat(1)}});
  CHECK(p1.nondegenerate);
  auto p2 = KGSolution::exponential({{rat(1), rat(1)}, {rat(1), rat(-1, 4)}});
  CHECK(p2.nondegenerate);
  CHECK((diff(diff(p2.psi, Atom::jet(1, 0)), Atom::jet(2, 0)) +
         Expr::num(rat(1, 4)) * p2.psi)
            .is_zero());
  // members of the excluded span are flagged
  CHECK_FALSE(KGSolution::make(ehalf(-1)).nondegenerate);
  CHECK_FALSE(KGSolution::make((r(1) + r(2)) * ehalf(1)).nondegenerate);
  CHECK_FALSE(KGSolution::make(ehalf(1) * (r(1) + r(2) + 3)).nondegenerate);
  // r1-only coefficient escapes the span
  CHECK(KGSolution::make(p2.psi + ehalf(1)).nondegenerate);
  CHECK_THROWS_AS((void)KGSolution::make(Expr::exp_of(r(1) + r(2))), Error);
  CHECK_THROWS_AS((void)make_regular(KGSolution::make(ehalf(1)), ClosedForm::tanh_form()),
                  Error);
}

TEST_CASE("closed forms") {
  auto t = ClosedForm::tanh_form();
  CHECK(t(0.3) == doctest::Approx(std::tanh(0.3)));
  double h = 1e-6;
  CHECK(t.dk(1, 0.3) == doctest::Approx((t(0.3 + h) - t(0.3 - h)) / (2 * h)).epsilon(1e-8));
  auto p = ClosedForm::parse("poly:1,0,2");
  CHECK(p(0.5) == doctest::Approx(1.5));
  CHECK(p.dk(1, 0.5) == doctest::Approx(2.0));
  CHECK(p.dk(2, 0.5) == doctest::Approx(4.0));
  CHECK_THROWS_AS((void)ClosedForm::parse("sin"), Error);
}

TEST_CASE("ultra family samples exactly") {
  auto sol = make_ultra(0.0, 0.0, ClosedForm::tanh_form());
  GridSpec g;
  g.t0 = 0.3;
  g.x0 = -1;
  g.dt = 0.02;
  g.dx = 0.04;
  g.nt = 11;
  g.nx = 11;
  auto f = sample_on_grid(sol, g);
  for (int j = 0; j < g.nx; ++j)
    CHECK(f.r3[f.at(5, j)] == doctest::Approx(std::tanh(f.x_at(j))).epsilon(1e-15));

  // r3 is constant along x - (c1+c2) t = const; binary-exact steps make the
  // characteristics hit grid nodes exactly
  auto sol2 = make_ultra(0.25, -0.5, ClosedForm::tanh_form());
  GridSpec g2;
  g2.t0 = 0;
  g2.x0 = -1;
  g2.dt = 0.0625;
  g2.dx = 0.015625;
  g2.nt = 15;
  g2.nx = 61;
  auto f2 = sample_on_grid(sol2, g2);
  for (int i = 0; i + 1 < g2.nt; ++i)
    for (int j = 1; j < g2.nx; ++j)
      CHECK(f2.r3[f2.at(i, j)] == f2.r3[f2.at(i + 1, j - 1)]);
}

TEST_CASE("regular family Newton inversion") {
  auto sol = make_regular(KGSolution::exponential({{rat(1), rat(1)}}), ClosedForm::tanh_form());
  GridSpec g;
  g.t0 = -2.0;
  g.x0 = 0.5;
  g.dt = 0.012;
  g.dx = 0.016;
  g.nt = 51;
  g.nx = 51;
  g.seed_r1 = 0.2;
  g.seed_r2 = 0.5;
  auto f = sample_on_grid(sol, g);
  CHECK(f.max_newton_residual < 1e-10);
  CHECK(f.max_newton_iters <= 50);
  CHECK(f.min_jacobian_abs > 1e-6);
  CHECK(f.max_neighbor_jump < 10 * g.dx);
  CHECK(f.min_r1x_r2x_abs > 1e-4);

  // this seed admits a closed-form inversion: r1 = 4 ln(-4t/3) - 3 - x/t
  for (int i : {0, g.nt / 2})
    for (int j : {1, g.nx / 2}) {
      double t = f.t_at(i), x = f.x_at(j);
      double L = std::log(-4 * t / 3.0), S = 3 + x / t;
      CHECK(f.r1[f.at(i, j)] == doctest::Approx(4 * L - S).epsilon(1e-9));
      CHECK(f.r2[f.at(i, j)] == doctest::Approx(2 * S - 4 * L).epsilon(1e-9));
    }
}

TEST_CASE("singular family sampling") {
  auto sol = make_singular(SingularSide::R2, 0.25, ClosedForm::exp_form(),
                           ClosedForm::poly({0.0, 1.0}));
  GridSpec g;
  g.t0 = 0.5;
  g.x0 = 1.5;
  g.dt = 0.01;
  g.dx = 0.02;
  g.nt = 21;
  g.nx = 21;
  auto f = sample_on_grid(sol, g);
  // r2 = c throughout; x = (r1 + c + 1) t + e^{-r1} Theta1'(r1)
  for (int i = 0; i < g.nt; ++i)
    for (int j = 0; j < g.nx; ++j) {
      CHECK(f.r2[f.at(i, j)] == 0.25);
      double a = f.r1[f.at(i, j)];
      double x = (a + 0.25 + 1) * f.t_at(i) + std::exp(-a) * std::exp(a);
      CHECK(x == doctest::Approx(f.x_at(j)).epsilon(1e-10));
    }
}

TEST_CASE("residual convergence at second order") {
  auto sol = make_regular(KGSolution::exponential({{rat(1), rat(1)}}), ClosedForm::tanh_form());
  GridSpec base;
  base.t0 = -2.0;
  base.x0 = 0.5;
  base.dt = 0.012;
  base.dx = 0.016;
  base.nt = 51;
  base.nx = 51;
  base.seed_r1 = 0.2;
  base.seed_r2 = 0.5;
  std::vector<double> pde3, cons;
  for (int n : {51, 101}) {
    GridSpec g = base;
    g.nt = n;
    g.nx = n;
    g.dt = base.dt * (base.nt - 1) / (n - 1);
    g.dx = base.dx * (base.nx - 1) / (n - 1);
    auto f = sample_on_grid(sol, g);
    auto res = pde_residual(f);
    pde3.push_back(res[2].max_norm);
    cons.push_back(conservation_residual(f, make_current_family1(Expr::one())).max_norm);
  }
  CHECK(observed_order(pde3[0], pde3[1]) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(observed_order(cons[0], cons[1]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("corrupted fields are detected") {
  auto sol = make_ultra(0.1, 0.2, ClosedForm::tanh_form());
  GridSpec g;
  g.t0 = 0;
  g.x0 = -1;
  g.dt = 0.01;
  g.dx = 0.02;
  g.nt = 51;
  g.nx = 51;
  auto f = sample_on_grid(sol, g);
  double clean = pde_residual(f)[2].max_norm;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1e-3, 1e-3);
  for (auto& v : f.r3) v += U(rng);
  CHECK(pde_residual(f)[2].max_norm > 100 * clean);
  // non-current has O(1) residual on any sample
  auto bad = conservation_residual(f, ConservedCurrent{r(3), Expr::zero()});
  CHECK(bad.max_norm > 1e-3);
}

TEST_CASE("csv export") {
  auto sol = make_ultra(0.0, 0.0, ClosedForm::poly({0.0, 1.0}));
  GridSpec g;
  g.nt = 5;
  g.nx = 5;
  g.dt = 0.1;
  g.dx = 0.1;
  auto f = sample_on_grid(sol, g);
  write_csv(f, "test_grid.csv");
  std::ifstream is("test_grid.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "t,x,r1,r2,r3");
  int rows = 0;
  std::string line;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 25);
}
