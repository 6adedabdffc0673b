#include <benchmark/benchmark.h>

#include "dfx/recursion.hpp"
#include "dfx/suites.hpp"

using namespace dfx;

namespace {

Expr sample_expr() {
  std::mt19937_64 rng(1234);
  Expr e;
  for (int i = 0; i < 6; ++i) e += random_expression(rng, 6);
  return e;
}

void BM_normalize(benchmark::State& state) {
  Expr e = sample_expr();
  for (auto _ : state) benchmark::DoNotOptimize(normalize(e));
}
BENCHMARK(BM_normalize);

void BM_total_dx(benchmark::State& state) {
  Expr e = sample_expr();
  for (auto _ : state) benchmark::DoNotOptimize(total_dx(e));
}
BENCHMARK(BM_total_dx);

void BM_total_dt(benchmark::State& state) {
  Expr e = sample_expr();
  for (auto _ : state) benchmark::DoNotOptimize(total_dt(e));
}
BENCHMARK(BM_total_dt);

void BM_is_symmetry_R(benchmark::State& state) {
  auto field = make_R(GammaSpec::j_power(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(is_symmetry(field));
}
BENCHMARK(BM_is_symmetry_R)->Arg(1)->Arg(2)->Arg(3);

void BM_euler_operator(benchmark::State& state) {
  Expr rho = make_current_family3(QSpec::j_power(1)).rho;
  for (auto _ : state) benchmark::DoNotOptimize(euler_operator(rho));
}
BENCHMARK(BM_euler_operator);

void BM_newton_grid(benchmark::State& state) {
  auto sol = make_regular(KGSolution::exponential({{rat(1), rat(1)}}), ClosedForm::tanh_form());
  GridSpec g;
  g.t0 = -2.0;
  g.x0 = 0.5;
  g.dt = 0.012;
  g.dx = 0.016;
  g.nt = static_cast<int>(state.range(0));
  g.nx = g.nt;
  g.seed_r1 = 0.2;
  g.seed_r2 = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(sample_on_grid(sol, g));
}
BENCHMARK(BM_newton_grid)->Arg(31)->Arg(51);

}  // namespace

BENCHMARK_MAIN();
