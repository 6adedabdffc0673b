#include "dfx/jet.hpp"

#include <functional>
#include <mutex>
#include <vector>

namespace dfx {

namespace {

const Atom kT = Atom::t();
const Atom kX = Atom::x();

Expr r(int i) { return Expr::atom(Atom::jet(i, 0)); }

// sum over coordinate atoms of (de/da) * image(a), plus explicit t/x part
Expr derive(const Expr& e, const std::function<Expr(const Atom&)>& image) {
  Expr out;
  for (const Atom& a : atoms_of(e)) {
    Expr img = image(a);
    if (img.is_zero()) continue;
    Expr de = diff(e, a);
    if (de.is_zero()) continue;
    out += de * img;
  }
  return out;
}

Expr exp_r1_minus_r2() { return Expr::exp_of(r(1) - r(2)); }
Expr exp_r2_minus_r1() { return Expr::exp_of(r(2) - r(1)); }

}  // namespace

Expr velocity(int i) {
  switch (i) {
    case 1: return r(1) + r(2) + Expr::one();
    case 2: return r(1) + r(2) - Expr::one();
    case 3: return r(1) + r(2);
  }
  fail(ErrorKind::DomainError, "velocity index out of range");
}

Expr total_dx(const Expr& e) {
  return derive(e, [](const Atom& a) -> Expr {
    switch (a.kind) {
      case AtomKind::X:
        return Expr::one();
      case AtomKind::T:
      case AtomKind::Param:
        return Expr::zero();
      case AtomKind::Jet:
        if (a.dt != 0) fail(ErrorKind::OffShellMode, "restricted Dx on mixed jet");
        return Expr::atom(Atom::jet(a.comp, a.dx + 1));
      case AtomKind::Omega:
        return exp_r1_minus_r2() * Expr::atom(Atom::omega(a.comp + 1));
      default:
        fail(ErrorKind::UnsupportedForm, "unexpected atom in Dx");
    }
  });
}

namespace {

// Dx^k (V^i r^i_1), the substituted t-derivative of r^i_k
Expr dt_image_of_jet(int comp, int k) {
  Expr base = velocity(comp) * Expr::atom(Atom::jet(comp, 1));
  for (int j = 0; j < k; ++j) base = total_dx(base);
  return -base;
}

}  // namespace

Expr total_dt(const Expr& e) {
  return derive(e, [](const Atom& a) -> Expr {
    switch (a.kind) {
      case AtomKind::T:
        return Expr::one();
      case AtomKind::X:
      case AtomKind::Param:
        return Expr::zero();
      case AtomKind::Jet:
        if (a.dt != 0) fail(ErrorKind::OffShellMode, "restricted Dt on mixed jet");
        return dt_image_of_jet(a.comp, a.dx);
      case AtomKind::Omega:
        return -(r(1) + r(2)) * exp_r1_minus_r2() * Expr::atom(Atom::omega(a.comp + 1));
      default:
        fail(ErrorKind::UnsupportedForm, "unexpected atom in Dt");
    }
  });
}

Expr full_dx(const Expr& e) {
  return derive(e, [](const Atom& a) -> Expr {
    switch (a.kind) {
      case AtomKind::X:
        return Expr::one();
      case AtomKind::T:
      case AtomKind::Param:
        return Expr::zero();
      case AtomKind::Jet:
        return Expr::atom(Atom::jet_mixed(a.comp, a.dt, a.dx + 1));
      case AtomKind::Omega:
        fail(ErrorKind::OffShellMode, "full Dx on omega coordinate; convert to standard first");
      default:
        fail(ErrorKind::UnsupportedForm, "unexpected atom in full Dx");
    }
  });
}

Expr full_dt(const Expr& e) {
  return derive(e, [](const Atom& a) -> Expr {
    switch (a.kind) {
      case AtomKind::T:
        return Expr::one();
      case AtomKind::X:
      case AtomKind::Param:
        return Expr::zero();
      case AtomKind::Jet:
        return Expr::atom(Atom::jet_mixed(a.comp, a.dt + 1, a.dx));
      case AtomKind::Omega:
        fail(ErrorKind::OffShellMode, "full Dt on omega coordinate; convert to standard first");
      default:
        fail(ErrorKind::UnsupportedForm, "unexpected atom in full Dt");
    }
  });
}

Expr op_A(const Expr& e) { return exp_r2_minus_r1() * total_dx(e); }

Expr op_B(const Expr& e) { return total_dt(e) + (r(1) + r(2)) * total_dx(e); }

Expr op_Ahat(const Expr& e) {
  return derive(e, [](const Atom& a) -> Expr {
    if (a.kind == AtomKind::Omega) return Expr::atom(Atom::omega(a.comp + 1));
    return Expr::zero();
  });
}

// --- chart conversion ----------------------------------------------------------

namespace {

// omega^k expanded in standard jets: A^k r3
const Expr& omega_in_standard(int k) {
  static std::mutex mu;
  static std::vector<Expr> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (cache.empty()) cache.push_back(Expr::atom(Atom::jet(3, 0)));
  while (static_cast<int>(cache.size()) <= k) {
    // A = e^{r2-r1} Dx on a pure r-jet expression
    cache.push_back(exp_r2_minus_r1() * total_dx(cache.back()));
  }
  return cache[static_cast<size_t>(k)];
}

// r3_k expanded in modified coordinates
const Expr& r3jet_in_modified(int k) {
  static std::mutex mu;
  static std::vector<Expr> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (cache.empty()) cache.push_back(Expr::atom(Atom::omega(0)));
  while (static_cast<int>(cache.size()) <= k) {
    cache.push_back(total_dx(cache.back()));
  }
  return cache[static_cast<size_t>(k)];
}

}  // namespace

Expr to_standard(const Expr& e) {
  return subst(e, [](const Atom& a) -> std::optional<Expr> {
    if (a.kind == AtomKind::Omega) return omega_in_standard(a.comp);
    return std::nullopt;
  });
}

Expr to_modified(const Expr& e) {
  return subst(e, [](const Atom& a) -> std::optional<Expr> {
    if (a.kind == AtomKind::Jet && a.comp == 3) {
      if (a.dt != 0) fail(ErrorKind::OffShellMode, "to_modified on mixed jet");
      return r3jet_in_modified(a.dx);
    }
    return std::nullopt;
  });
}

// --- Euler operators -------------------------------------------------------------

std::array<Expr, 3> euler_operator(const Expr& density) {
  Expr rho = to_standard(density);
  std::array<Expr, 3> out;
  for (int i = 1; i <= 3; ++i) {
    Expr acc;
    int top = ord(rho, i == 1 ? OrdFamily::R1 : (i == 2 ? OrdFamily::R2 : OrdFamily::R3));
    for (int k = 0; top != kOrdNone && k <= top; ++k) {
      Expr d = diff(rho, Atom::jet(i, k));
      if (d.is_zero()) continue;
      for (int j = 0; j < k; ++j) d = total_dx(d);
      acc += (k % 2 == 0) ? d : -d;
    }
    out[static_cast<size_t>(i - 1)] = acc;
  }
  return out;
}

std::array<Expr, 3> euler_operator_full(const Expr& density) {
  Expr rho = to_standard(density);
  std::array<Expr, 3> out;
  for (int i = 1; i <= 3; ++i) {
    Expr acc;
    for (const Atom& a : atoms_of(rho)) {
      if (a.kind != AtomKind::Jet || a.comp != i) continue;
      Expr d = diff(rho, a);
      if (d.is_zero()) continue;
      for (int j = 0; j < a.dt; ++j) d = full_dt(d);
      for (int j = 0; j < a.dx; ++j) d = full_dx(d);
      acc += ((a.dt + a.dx) % 2 == 0) ? d : -d;
    }
    out[static_cast<size_t>(i - 1)] = acc;
  }
  return out;
}

// --- im Ahat membership ------------------------------------------------------------

bool in_image_of_Ahat(const Expr& omega_expr) {
  for (const Atom& a : atoms_of(omega_expr))
    if (a.kind != AtomKind::Omega)
      fail(ErrorKind::UnsupportedForm, "im-Ahat test expects a pure omega function");
  Expr acc = -omega_expr;
  int top = ord(omega_expr, OrdFamily::Omega);
  for (int k = 1; top != kOrdNone && k <= top; ++k) {
    Expr dk = diff(omega_expr, Atom::omega(k));
    if (dk.is_zero()) continue;
    Expr power = dk;  // (-Ahat)^{k'} d/dw^k, k' = 0..k-1
    for (int kp = 0; kp < k; ++kp) {
      acc += Expr::atom(Atom::omega(k - kp)) * power;
      power = -op_Ahat(power);
    }
  }
  return acc.is_zero();
}

// --- order functions ----------------------------------------------------------------

int ord(const Expr& e, OrdFamily family) {
  int best = kOrdNone;
  for (const Atom& a : atoms_of(e)) {
    switch (family) {
      case OrdFamily::R1:
        if (a.kind == AtomKind::Jet && a.comp == 1) best = std::max(best, a.dx);
        break;
      case OrdFamily::R2:
        if (a.kind == AtomKind::Jet && a.comp == 2) best = std::max(best, a.dx);
        break;
      case OrdFamily::R3:
        if (a.kind == AtomKind::Jet && a.comp == 3) best = std::max(best, a.dx);
        if (a.kind == AtomKind::Omega) best = std::max(best, a.comp);
        break;
      case OrdFamily::Omega:
        if (a.kind == AtomKind::Omega) best = std::max(best, a.comp);
        break;
    }
  }
  return best;
}

// --- prolongation and equality ---------------------------------------------------------

Expr prolong_apply(const std::array<Expr, 3>& eta_std, const Expr& e) {
  return derive(e, [&](const Atom& a) -> Expr {
    if (a.kind != AtomKind::Jet) return Expr::zero();
    if (a.dt != 0) fail(ErrorKind::OffShellMode, "prolongation over mixed jets");
    Expr img = eta_std[static_cast<size_t>(a.comp - 1)];
    for (int j = 0; j < a.dx; ++j) img = total_dx(img);
    return img;
  });
}

EqualsResult equals(const Expr& a, const Expr& b, uint64_t seed) {
  Expr d = a - b;
  if (d.is_zero()) return {true, true};
  bool has_omega = false, has_r3jet = false;
  for (const Atom& at : atoms_of(d)) {
    if (at.kind == AtomKind::Omega) has_omega = true;
    if (at.kind == AtomKind::Jet && at.comp == 3) has_r3jet = true;
  }
  if (has_omega && has_r3jet) d = to_standard(d);
  if (d.is_zero()) return {true, true};
  return equals_syntactic(d, Expr::zero(), seed);
}

}  // namespace dfx
