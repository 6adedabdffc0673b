// Acceptance gate: every criterion prints one PASS/FAIL line; the binary
// exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <string>

#include "dfx/jet.hpp"
#include "dfx/suites.hpp"

using namespace dfx;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void line(int criterion, bool pass, const std::string& what, const std::string& detail = "") {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++failures;
}

size_t count_prefix(const VerificationReport& rep, const std::string& prefix, bool& all_pass,
                    bool& all_exact) {
  size_t n = 0;
  for (const auto& r : rep.records) {
    if (r.id.rfind(prefix, 0) != 0) continue;
    ++n;
    if (r.status != "pass") all_pass = false;
    if (!r.exact) all_exact = false;
  }
  return n;
}

std::string first_failure(const VerificationReport& rep) {
  for (const auto& r : rep.records)
    if (r.status != "pass") return r.id + ": " + r.residual;
  return "";
}

}  // namespace

int main() {
  SuiteConfig cfg;
  cfg.seed = 0;

  // 1. symmetry suite: >= 15 family instances (incl. symbolic parameters)
  //    satisfy the determining equations exactly, under 60 s
  {
    Timer t;
    auto rep = run_suite("symmetry", cfg);
    bool pass = true, exact = true;
    size_t n = count_prefix(rep, "symmetry.determining.", pass, exact);
    // the deliberate counterexample reports "determining" too; it must fail,
    // so it is excluded from the exactness count
    bool cx = false;
    for (auto& r : rep.records)
      if (r.id == "symmetry.determining.counterexample") cx = (r.status == "pass");
    // recount without the counterexample
    pass = true;
    exact = true;
    n = 0;
    for (const auto& r : rep.records) {
      if (r.id.rfind("symmetry.determining.", 0) != 0 ||
          r.id == "symmetry.determining.counterexample")
        continue;
      ++n;
      if (r.status != "pass") pass = false;
      if (!r.exact) exact = false;
    }
    double secs = t.seconds();
    bool ok = pass && exact && cx && n >= 15 && rep.all_pass() && secs < 60.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu fields exact, %.1fs", n, secs);
    line(1, ok, "symmetry determining equations", ok ? buf : first_failure(rep));
  }

  // 2. cosymmetry suite: >= 9 instances across the three families
  {
    auto rep = run_suite("cosymmetry", cfg);
    bool pass = true, exact = true;
    size_t n = count_prefix(rep, "cosymmetry.adjoint.family", pass, exact);
    bool ok = pass && exact && n >= 9 && rep.all_pass();
    line(2, ok, "cosymmetry adjoint system",
         ok ? std::to_string(n) + " instances exact" : first_failure(rep));
  }

  // 3 & 4. conservation suite: >= 12 currents incl. the physical laws and the
  //        four invariant second-order currents; paired characteristics pass
  //        the off-shell Euler identity; the generating action reproduces
  //        family 1
  {
    auto rep = run_suite("conservation", cfg);
    bool dpass = true, dexact = true;
    size_t nd = count_prefix(rep, "conservation.divergence.", dpass, dexact);
    bool cpass = true, cexact = true;
    size_t nc = count_prefix(rep, "conservation.characteristic.", cpass, cexact);
    bool ok3 = dpass && dexact && cpass && nd >= 12 && nc == nd;
    line(3, ok3, "conserved currents and paired characteristics",
         ok3 ? std::to_string(nd) + " currents exact"
             : first_failure(rep));
    bool gen_ok = false;
    for (const auto& r : rep.records)
      if (r.id == "conservation.generating.family1") gen_ok = (r.status == "pass" && r.exact);
    line(4, gen_ok, "generating-set reproduction of family 1",
         gen_ok ? "Omega in {1, w0, w0^2, w1} exact" : first_failure(rep));
    if (!rep.all_pass()) line(3, false, "conservation suite remainder", first_failure(rep));
  }

  // 5. hamiltonian suite, under 120 s
  {
    Timer t;
    auto rep = run_suite("hamiltonian", cfg);
    double secs = t.seconds();
    bool ok = rep.all_pass() && secs < 120.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu checks, %.1fs", rep.records.size(), secs);
    line(5, ok, "hamiltonian structures (skew, Noether, flat, compatible, Casimir, form)",
         ok ? buf : first_failure(rep));
  }

  // 6. recursion suite: action tables and decomposition exact; R4 A/C exact,
  //    B and the numeric oracle pass under the resolved convention
  {
    auto rep = run_suite("recursion", cfg);
    bool ok = rep.all_pass();
    std::string b_note;
    for (const auto& r : rep.records)
      if (r.id == "recursion.r4.determining.printed") b_note = r.residual;
    line(6, ok, "recursion operators (tables, decomposition, R4 with C = 2 r_x)",
         ok ? "printed-pairing B-residuals reported: " + b_note.substr(0, 60) + "..."
            : first_failure(rep));
  }

  // 7. solutions suite: Newton converges everywhere, observed order 2.0 +- 0.3
  //    over 51^2, 101^2, 201^2, under 120 s
  {
    Timer t;
    auto rep = run_suite("solutions", cfg);
    double secs = t.seconds();
    bool ok = rep.all_pass() && secs < 120.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "three families, %.1fs", secs);
    line(7, ok, "solution sampling and residual convergence", ok ? buf : first_failure(rep));
  }

  // 8. image-of-Ahat membership on the three listed examples
  {
    bool p1 = in_image_of_Ahat(Expr::atom(Atom::omega(1)));
    bool p2 = !in_image_of_Ahat(Expr::one());
    bool p3 = in_image_of_Ahat(Expr::atom(Atom::omega(0)) * Expr::atom(Atom::omega(2)) +
                               Expr::atom(Atom::omega(1)) * Expr::atom(Atom::omega(1)));
    line(8, p1 && p2 && p3, "im-Ahat membership (w1 true, 1 false, w0 w2 + w1^2 true)");
  }

  // 9. expression-kernel properties on 1000 random expressions, zero failures
  {
    SuiteConfig kcfg = cfg;
    kcfg.kernel_samples = 1000;
    auto rep = run_suite("kernel", kcfg);
    bool ok = rep.all_pass();
    line(9, ok, "expression-kernel properties (idempotence, commutation, eval consistency)",
         ok ? "1000 samples" : first_failure(rep));
  }

  if (failures == 0) std::printf("acceptance: all criteria passed\n");
  else std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
