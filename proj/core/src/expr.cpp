#include "dfx/expr.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <sstream>

namespace dfx {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnsupportedForm: return "UnsupportedForm";
    case ErrorKind::SingularEvaluation: return "SingularEvaluation";
    case ErrorKind::Inconclusive: return "Inconclusive";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateJet: return "DegenerateJet";
    case ErrorKind::OffShellMode: return "OffShellMode";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ConstructionFailed: return "ConstructionFailed";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::JacobianSingular: return "JacobianSingular";
    case ErrorKind::QuadratureInconsistent: return "QuadratureInconsistent";
    case ErrorKind::DegenerateSeed: return "DegenerateSeed";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Error";
}

Rational rat(long num, long den) {
  if (den == 0) fail(ErrorKind::UnsupportedForm, "rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational rat_of_string(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) fail(ErrorKind::ConfigError, "bad rational literal '" + s + "'");
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

int cmp3(const Rational& a, const Rational& b) {
  int c = mpq_cmp(a.get_mpq_t(), b.get_mpq_t());
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class z;
  mpz_bin_uiui(z.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(z);
}

// --- atoms -------------------------------------------------------------------

namespace {

struct ParamRegistry {
  std::mutex mu;
  std::vector<std::string> names;
  std::map<std::string, int> ids;
};

ParamRegistry& params() {
  static ParamRegistry* r = new ParamRegistry();
  return *r;
}

}  // namespace

Atom Atom::t() {
  Atom a;
  a.kind = AtomKind::T;
  return a;
}

Atom Atom::x() {
  Atom a;
  a.kind = AtomKind::X;
  return a;
}

Atom Atom::jet(int comp, int xorder) { return jet_mixed(comp, 0, xorder); }

Atom Atom::jet_mixed(int comp, int dt, int dx) {
  if (comp < 1 || comp > 3 || dt < 0 || dx < 0)
    fail(ErrorKind::UnsupportedForm, "bad jet index");
  Atom a;
  a.kind = AtomKind::Jet;
  a.comp = comp;
  a.dt = dt;
  a.dx = dx;
  return a;
}

Atom Atom::omega(int kappa) {
  if (kappa < 0) fail(ErrorKind::UnsupportedForm, "bad omega index");
  Atom a;
  a.kind = AtomKind::Omega;
  a.comp = kappa;
  return a;
}

Atom Atom::param(const std::string& name) {
  auto& r = params();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.ids.find(name);
  int id;
  if (it == r.ids.end()) {
    id = static_cast<int>(r.names.size());
    r.names.push_back(name);
    r.ids.emplace(name, id);
  } else {
    id = it->second;
  }
  Atom a;
  a.kind = AtomKind::Param;
  a.comp = id;
  return a;
}

const std::string& param_name(int id) {
  auto& r = params();
  std::lock_guard<std::mutex> lock(r.mu);
  return r.names.at(static_cast<size_t>(id));
}

Atom Atom::shifted(const Atom& base, const Rational& shift) {
  if (!base.is_coordinate())
    fail(ErrorKind::UnsupportedForm, "shifted atom over non-coordinate base");
  if (shift == 0) return base;
  Atom a;
  a.kind = AtomKind::Shifted;
  a.base = std::make_shared<Atom>(base);
  a.shift = shift;
  return a;
}

int cmp3(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case AtomKind::T:
    case AtomKind::X:
      return 0;
    case AtomKind::Jet:
      if (a.comp != b.comp) return a.comp < b.comp ? -1 : 1;
      if (a.dt != b.dt) return a.dt < b.dt ? -1 : 1;
      if (a.dx != b.dx) return a.dx < b.dx ? -1 : 1;
      return 0;
    case AtomKind::Omega:
    case AtomKind::Param:
      if (a.comp != b.comp) return a.comp < b.comp ? -1 : 1;
      return 0;
    case AtomKind::Shifted: {
      int c = cmp3(*a.base, *b.base);
      if (c != 0) return c;
      return cmp3(a.shift, b.shift);
    }
    case AtomKind::SymDeriv: {
      if (a.sym->id != b.sym->id) return a.sym->id < b.sym->id ? -1 : 1;
      if (a.didx != b.didx) return a.didx < b.didx ? -1 : 1;
      size_t n = a.args ? a.args->size() : 0;
      size_t m = b.args ? b.args->size() : 0;
      if (n != m) return n < m ? -1 : 1;
      for (size_t i = 0; i < n; ++i) {
        int c = cmp3((*a.args)[i], (*b.args)[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
  return 0;
}

// --- function symbols ---------------------------------------------------------

namespace {

struct SymbolRegistry {
  std::mutex mu;
  std::deque<FunctionSymbol> storage;
  std::map<std::string, const FunctionSymbol*> by_name;
};

SymbolRegistry& symbols() {
  static SymbolRegistry* r = new SymbolRegistry();
  return *r;
}

}  // namespace

const FunctionSymbol* register_symbol(const std::string& name, std::vector<Atom> canonical_args,
                                      std::optional<MixedDerivativeRule> mixed_rule,
                                      InstantiationFamily family) {
  auto& r = symbols();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.by_name.find(name);
  if (it != r.by_name.end()) return it->second;
  FunctionSymbol s;
  s.name = name;
  s.canonical_args = std::move(canonical_args);
  s.mixed_rule = mixed_rule;
  s.family = family;
  s.id = static_cast<int>(r.storage.size());
  r.storage.push_back(std::move(s));
  const FunctionSymbol* p = &r.storage.back();
  r.by_name.emplace(name, p);
  return p;
}

const FunctionSymbol* find_symbol(const std::string& name) {
  auto& r = symbols();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.by_name.find(name);
  return it == r.by_name.end() ? nullptr : it->second;
}

namespace sym {

const FunctionSymbol* Phi() {
  static const FunctionSymbol* s = register_symbol(
      "Phi", {Atom::jet(1, 0), Atom::jet(2, 0)}, MixedDerivativeRule{0, 1, rat(-1, 4)},
      InstantiationFamily::KleinGordon);
  return s;
}

const FunctionSymbol* Psi() {
  static const FunctionSymbol* s = register_symbol(
      "Psi", {Atom::jet(1, 0), Atom::jet(2, 0)}, MixedDerivativeRule{0, 1, rat(-1, 4)},
      InstantiationFamily::KleinGordon);
  return s;
}

const FunctionSymbol* Theta() {
  static const FunctionSymbol* s =
      register_symbol("Theta", {Atom::omega(0)}, std::nullopt, InstantiationFamily::Polynomial);
  return s;
}

const FunctionSymbol* Xi() {
  static const FunctionSymbol* s =
      register_symbol("Xi", {Atom::omega(0)}, std::nullopt, InstantiationFamily::Polynomial);
  return s;
}

const FunctionSymbol* OmegaFn(int arity) {
  if (arity < 1 || arity > 8) fail(ErrorKind::UnsupportedForm, "Omega arity out of range");
  static std::mutex mu;
  static std::map<int, const FunctionSymbol*> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(arity);
  if (it != cache.end()) return it->second;
  std::vector<Atom> args;
  for (int k = 0; k < arity; ++k) args.push_back(Atom::omega(k));
  std::string name = arity == 2 ? "Omega" : ("Omega" + std::to_string(arity));
  const FunctionSymbol* s =
      register_symbol(name, std::move(args), std::nullopt, InstantiationFamily::Polynomial);
  cache.emplace(arity, s);
  return s;
}

const FunctionSymbol* W() {
  static const FunctionSymbol* s = register_symbol("W", {Atom::param("w.slot")}, std::nullopt,
                                                   InstantiationFamily::Polynomial);
  return s;
}

const FunctionSymbol* Theta1() {
  static const FunctionSymbol* s =
      register_symbol("Theta1", {Atom::jet(1, 0)}, std::nullopt, InstantiationFamily::Polynomial);
  return s;
}

const FunctionSymbol* Theta2() {
  static const FunctionSymbol* s =
      register_symbol("Theta2", {Atom::jet(2, 0)}, std::nullopt, InstantiationFamily::Polynomial);
  return s;
}

}  // namespace sym

// --- term machinery -----------------------------------------------------------

namespace {

int cmp_mono(const std::vector<std::pair<Atom, int>>& a,
             const std::vector<std::pair<Atom, int>>& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    int c = cmp3(a[i].first, b[i].first);
    if (c != 0) return c;
    if (a[i].second != b[i].second) return a[i].second < b[i].second ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int cmp_expo(const std::vector<std::pair<Atom, Rational>>& a,
             const std::vector<std::pair<Atom, Rational>>& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    int c = cmp3(a[i].first, b[i].first);
    if (c != 0) return c;
    c = cmp3(a[i].second, b[i].second);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

// insert (atom, delta-exponent) into a sorted mono vector
void mono_add(std::vector<std::pair<Atom, int>>& mono, const Atom& a, int delta) {
  if (delta == 0) return;
  auto it = std::lower_bound(mono.begin(), mono.end(), a,
                             [](const auto& p, const Atom& key) { return cmp3(p.first, key) < 0; });
  if (it != mono.end() && cmp3(it->first, a) == 0) {
    it->second += delta;
    if (it->second == 0) mono.erase(it);
  } else {
    mono.insert(it, {a, delta});
  }
}

void expo_add(std::vector<std::pair<Atom, Rational>>& expo, const Atom& a, const Rational& delta) {
  if (delta == 0) return;
  auto it = std::lower_bound(expo.begin(), expo.end(), a,
                             [](const auto& p, const Atom& key) { return cmp3(p.first, key) < 0; });
  if (it != expo.end() && cmp3(it->first, a) == 0) {
    it->second += delta;
    if (it->second == 0) expo.erase(it);
  } else {
    expo.insert(it, {a, delta});
  }
}

Rational rat_pow(const Rational& q, int k) {
  Rational acc = 1;
  Rational base = q;
  int n = k < 0 ? -k : k;
  for (int i = 0; i < n; ++i) acc *= base;
  if (k < 0) {
    if (acc == 0) fail(ErrorKind::UnsupportedForm, "division by zero rational");
    acc = 1 / acc;
  }
  return acc;
}

// Emits a raw monomial into `out`, expanding positive powers of shifted atoms
// and rewriting plain bases against a unique negative-power shifted
// denominator so the normal form stays canonical.
void emit_term(Rational coeff, std::vector<std::pair<Atom, int>> mono,
               std::vector<std::pair<Atom, Rational>> expo, std::vector<Term>& out) {
  if (coeff == 0) return;

  // positive powers of shifted atoms expand binomially
  for (size_t i = 0; i < mono.size(); ++i) {
    if (mono[i].first.kind == AtomKind::Shifted && mono[i].second > 0) {
      Atom s = mono[i].first;
      int k = mono[i].second;
      mono.erase(mono.begin() + static_cast<long>(i));
      for (int j = 0; j <= k; ++j) {
        auto m2 = mono;
        if (j > 0) mono_add(m2, *s.base, j);
        emit_term(coeff * binomial(k, j) * rat_pow(s.shift, k - j), std::move(m2), expo, out);
      }
      return;
    }
  }

  // plain base against a single negative-power shifted denominator
  for (size_t i = 0; i < mono.size(); ++i) {
    const Atom& a = mono[i].first;
    if (!a.is_coordinate() || mono[i].second <= 0) continue;
    const Atom* unique_shift = nullptr;
    int shift_count = 0;
    for (const auto& [other, exp] : mono) {
      if (other.kind == AtomKind::Shifted && cmp3(*other.base, a) == 0) {
        ++shift_count;
        unique_shift = &other;
      }
    }
    if (shift_count == 1) {
      // u^m = ((u+c) - c)^m
      Atom s = *unique_shift;
      int m = mono[i].second;
      auto m2 = mono;
      m2.erase(m2.begin() + static_cast<long>(i));
      for (int j = 0; j <= m; ++j) {
        auto m3 = m2;
        if (j > 0) mono_add(m3, s, j);  // may cancel against the negative power
        emit_term(coeff * binomial(m, j) * rat_pow(-s.shift, m - j), std::move(m3), expo, out);
      }
      return;
    }
  }

  out.push_back(Term{std::move(coeff), std::move(mono), std::move(expo)});
}

void sort_and_merge(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return cmp_key(a, b) < 0;
  });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (auto& t : terms) {
    if (!merged.empty() && cmp_key(merged.back(), t) == 0) {
      merged.back().coeff += t.coeff;
      if (merged.back().coeff == 0) merged.pop_back();
    } else {
      if (t.coeff != 0) merged.push_back(std::move(t));
    }
  }
  terms = std::move(merged);
}

}  // namespace

int cmp_key(const Term& a, const Term& b) {
  int c = cmp_expo(a.expo, b.expo);
  if (c != 0) return c;
  return cmp_mono(a.mono, b.mono);
}

Expr Expr::from_raw_terms(std::vector<Term> raw) {
  std::vector<Term> out;
  out.reserve(raw.size());
  for (auto& t : raw) emit_term(std::move(t.coeff), std::move(t.mono), std::move(t.expo), out);
  sort_and_merge(out);
  Expr e;
  e.terms_ = std::move(out);
  return e;
}

Expr Expr::num(const Rational& q) {
  Expr e;
  if (q != 0) e.terms_.push_back(Term{q, {}, {}});
  return e;
}

Expr Expr::atom(const Atom& a) {
  return from_raw_terms({Term{1, {{a, 1}}, {}}});
}

Expr Expr::symbol(const FunctionSymbol* s) { return symbol(s, std::vector<int>(s->arity(), 0)); }

Expr Expr::symbol(const FunctionSymbol* s, std::vector<int> didx) {
  std::vector<Expr> args;
  args.reserve(s->canonical_args.size());
  for (const Atom& a : s->canonical_args) args.push_back(Expr::atom(a));
  return symbol(s, std::move(didx), std::move(args));
}

Expr Expr::symbol(const FunctionSymbol* s, std::vector<int> didx, std::vector<Expr> args) {
  if (!s) fail(ErrorKind::UnsupportedForm, "null function symbol");
  if (static_cast<int>(didx.size()) != s->arity() ||
      static_cast<int>(args.size()) != s->arity())
    fail(ErrorKind::UnsupportedForm, "arity mismatch for symbol " + s->name);
  for (int k : didx)
    if (k < 0) fail(ErrorKind::UnsupportedForm, "negative derivative index");
  Rational factor = 1;
  if (s->mixed_rule) {
    const auto& r = *s->mixed_rule;
    while (didx[static_cast<size_t>(r.slot_a)] >= 1 && didx[static_cast<size_t>(r.slot_b)] >= 1) {
      didx[static_cast<size_t>(r.slot_a)]--;
      didx[static_cast<size_t>(r.slot_b)]--;
      factor *= r.factor;
    }
  }
  Atom a;
  a.kind = AtomKind::SymDeriv;
  a.sym = s;
  a.didx = std::move(didx);
  a.args = std::make_shared<const std::vector<Expr>>(std::move(args));
  return from_raw_terms({Term{factor, {{a, 1}}, {}}});
}

Expr Expr::exp_of(const Expr& linear) {
  std::vector<std::pair<Atom, Rational>> expo;
  for (const Term& t : linear.terms()) {
    if (!t.expo.empty() || t.mono.size() != 1 || t.mono[0].second != 1 ||
        !t.mono[0].first.is_coordinate())
      fail(ErrorKind::UnsupportedForm,
           "exponent must be a rational-linear form in coordinate atoms");
    expo_add(expo, t.mono[0].first, t.coeff);
  }
  Expr e;
  e.terms_.push_back(Term{1, {}, std::move(expo)});
  return e;
}

bool Expr::is_one() const {
  return terms_.size() == 1 && terms_[0].mono.empty() && terms_[0].expo.empty() &&
         terms_[0].coeff == 1;
}

std::optional<Rational> Expr::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_[0].mono.empty() && terms_[0].expo.empty())
    return terms_[0].coeff;
  return std::nullopt;
}

Expr operator+(const Expr& a, const Expr& b) {
  std::vector<Term> all = a.terms_;
  all.insert(all.end(), b.terms_.begin(), b.terms_.end());
  sort_and_merge(all);
  Expr e;
  e.terms_ = std::move(all);
  return e;
}

Expr operator-(const Expr& a) {
  Expr e = a;
  for (auto& t : e.terms_) t.coeff = -t.coeff;
  return e;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  std::vector<Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const Term& ta : a.terms_) {
    for (const Term& tb : b.terms_) {
      Rational coeff = ta.coeff * tb.coeff;
      auto mono = ta.mono;
      for (const auto& [atom, k] : tb.mono) mono_add(mono, atom, k);
      auto expo = ta.expo;
      for (const auto& [atom, c] : tb.expo) expo_add(expo, atom, c);
      emit_term(std::move(coeff), std::move(mono), std::move(expo), out);
    }
  }
  sort_and_merge(out);
  Expr e;
  e.terms_ = std::move(out);
  return e;
}

Expr Expr::pow(int k) const {
  if (k == 0) return Expr::one();
  if (is_zero()) {
    if (k < 0) fail(ErrorKind::UnsupportedForm, "inverse of zero expression");
    return Expr::zero();
  }
  Expr base;
  int n;
  if (k > 0) {
    base = *this;
    n = k;
  } else {
    n = -k;
    // invert: single term, or (c1*atom + c0) as a shifted denominator
    if (terms_.size() == 1) {
      const Term& t = terms_[0];
      Term inv;
      inv.coeff = 1 / t.coeff;
      for (const auto& [atom, e] : t.mono) inv.mono.push_back({atom, -e});
      for (const auto& [atom, c] : t.expo) inv.expo.push_back({atom, -c});
      base = from_raw_terms({inv});
    } else if (terms_.size() == 2) {
      const Term* lin = nullptr;
      const Term* cst = nullptr;
      for (const Term& t : terms_) {
        if (t.mono.empty() && t.expo.empty()) cst = &t;
        else if (t.mono.size() == 1 && t.mono[0].second == 1 && t.expo.empty() &&
                 t.mono[0].first.is_coordinate())
          lin = &t;
      }
      if (!lin || !cst)
        fail(ErrorKind::UnsupportedForm, "inverse of a non-linear multi-term expression");
      // (c1*u + c0)^-1 = c1^-1 (u + c0/c1)^-1
      Atom s = Atom::shifted(lin->mono[0].first, cst->coeff / lin->coeff);
      Term inv;
      inv.coeff = 1 / lin->coeff;
      inv.mono.push_back({s, -1});
      base = from_raw_terms({inv});
    } else {
      fail(ErrorKind::UnsupportedForm, "inverse of a multi-term expression");
    }
  }
  Expr acc = Expr::one();
  for (int i = 0; i < n; ++i) acc = acc * base;
  return acc;
}

int cmp3(const Expr& a, const Expr& b) {
  size_t n = std::min(a.terms().size(), b.terms().size());
  for (size_t i = 0; i < n; ++i) {
    int c = cmp_key(a.terms()[i], b.terms()[i]);
    if (c != 0) return c;
    c = cmp3(a.terms()[i].coeff, b.terms()[i].coeff);
    if (c != 0) return c;
  }
  if (a.terms().size() != b.terms().size())
    return a.terms().size() < b.terms().size() ? -1 : 1;
  return 0;
}

// --- differentiation ----------------------------------------------------------

namespace {

// derivative of a bare atom (exponent 1) with respect to coordinate atom v
Expr diff_atom(const Atom& a, const Atom& v) {
  switch (a.kind) {
    case AtomKind::Shifted:
      return cmp3(*a.base, v) == 0 ? Expr::one() : Expr::zero();
    case AtomKind::SymDeriv: {
      Expr out;
      const auto& args = *a.args;
      for (size_t slot = 0; slot < args.size(); ++slot) {
        Expr da = diff(args[slot], v);
        if (da.is_zero()) continue;
        auto didx = a.didx;
        didx[slot]++;
        out += da * Expr::symbol(a.sym, std::move(didx), args);
      }
      return out;
    }
    default:
      return cmp3(a, v) == 0 ? Expr::one() : Expr::zero();
  }
}

}  // namespace

Expr diff(const Expr& e, const Atom& v) {
  if (!v.is_coordinate()) fail(ErrorKind::UnsupportedForm, "diff w.r.t. non-coordinate atom");
  std::vector<Term> linear_part;  // contributions with unchanged monomial
  Expr out;
  for (const Term& t : e.terms()) {
    // exponential factor
    for (const auto& [atom, c] : t.expo) {
      if (cmp3(atom, v) == 0) {
        linear_part.push_back(Term{t.coeff * c, t.mono, t.expo});
        break;
      }
    }
    // monomial factors
    for (size_t i = 0; i < t.mono.size(); ++i) {
      const auto& [atom, k] = t.mono[i];
      Expr da = diff_atom(atom, v);
      if (da.is_zero()) continue;
      auto mono = t.mono;
      mono[i].second -= 1;
      if (mono[i].second == 0) mono.erase(mono.begin() + static_cast<long>(i));
      Expr factor = Expr::from_raw_terms({Term{t.coeff * rat(k), std::move(mono), t.expo}});
      if (da.is_one())
        out += factor;
      else
        out += factor * da;
    }
  }
  if (!linear_part.empty()) out += Expr::from_raw_terms(std::move(linear_part));
  return out;
}

// --- substitution ---------------------------------------------------------------

namespace {

Expr subst_atom(const Atom& a, const std::function<std::optional<Expr>(const Atom&)>& map) {
  switch (a.kind) {
    case AtomKind::Shifted: {
      Expr b = subst_atom(*a.base, map);
      if (b == Expr::atom(*a.base)) return Expr::atom(a);
      return (b + Expr::num(a.shift)).pow(1);
    }
    case AtomKind::SymDeriv: {
      std::vector<Expr> args;
      bool changed = false;
      for (const Expr& arg : *a.args) {
        Expr s = subst(arg, map);
        if (s != arg) changed = true;
        args.push_back(std::move(s));
      }
      if (!changed) return Expr::atom(a);
      Expr out = Expr::symbol(a.sym, a.didx, std::move(args));
      return out;
    }
    default: {
      auto img = map(a);
      return img ? *img : Expr::atom(a);
    }
  }
}

}  // namespace

Expr subst(const Expr& e, const std::function<std::optional<Expr>(const Atom&)>& map) {
  Expr out;
  for (const Term& t : e.terms()) {
    Expr acc = Expr::num(t.coeff);
    for (const auto& [atom, k] : t.mono) acc = acc * subst_atom(atom, map).pow(k);
    for (const auto& [atom, c] : t.expo) {
      Expr img = subst_atom(atom, map);
      acc = acc * Expr::exp_of(Expr::num(c) * img);
    }
    out += acc;
  }
  return out;
}

Expr normalize(const Expr& e) {
  return subst(e, [](const Atom&) { return std::nullopt; });
}

// --- atom collection --------------------------------------------------------------

namespace {

void collect_atoms_of_atom(const Atom& a, std::set<Atom>& out) {
  switch (a.kind) {
    case AtomKind::Shifted:
      collect_atoms_of_atom(*a.base, out);
      break;
    case AtomKind::SymDeriv:
      for (const Expr& arg : *a.args) collect_atoms(arg, out);
      break;
    default:
      out.insert(a);
  }
}

}  // namespace

void collect_atoms(const Expr& e, std::set<Atom>& out) {
  for (const Term& t : e.terms()) {
    for (const auto& [atom, k] : t.mono) collect_atoms_of_atom(atom, out);
    for (const auto& [atom, c] : t.expo) collect_atoms_of_atom(atom, out);
  }
}

std::set<Atom> atoms_of(const Expr& e) {
  std::set<Atom> s;
  collect_atoms(e, s);
  return s;
}

bool depends_on(const Expr& e, const Atom& v) { return atoms_of(e).count(v) > 0; }

bool has_symbols(const Expr& e) {
  for (const Term& t : e.terms())
    for (const auto& [atom, k] : t.mono) {
      if (atom.kind == AtomKind::SymDeriv) return true;
      if (atom.kind == AtomKind::Shifted) continue;
    }
  return false;
}

// --- evaluation ----------------------------------------------------------------

namespace {

struct EvalCtx {
  const EvalEnv* env;
  // memoized derivatives of instantiations
  std::map<std::pair<const FunctionSymbol*, std::vector<int>>, Expr>* deriv_cache;
};

double eval_rec(const Expr& e, const EvalCtx& ctx, const std::map<Atom, double>& values);

double eval_atom_num(const Atom& a, const EvalCtx& ctx, const std::map<Atom, double>& values) {
  switch (a.kind) {
    case AtomKind::Shifted:
      return eval_atom_num(*a.base, ctx, values) + to_double(a.shift);
    case AtomKind::SymDeriv: {
      const FunctionSymbol* s = a.sym;
      auto nat = ctx.env->natives.find(s);
      if (nat != ctx.env->natives.end()) {
        if (s->arity() != 1)
          fail(ErrorKind::UnsupportedForm, "native closed form must be univariate");
        double arg = eval_rec((*a.args)[0], ctx, values);
        return nat->second.dk(a.didx[0], arg);
      }
      auto inst = ctx.env->instantiations.find(s);
      if (inst == ctx.env->instantiations.end())
        fail(ErrorKind::Inconclusive, "no instantiation for symbol " + s->name);
      auto key = std::make_pair(s, a.didx);
      auto it = ctx.deriv_cache->find(key);
      if (it == ctx.deriv_cache->end()) {
        Expr d = inst->second;
        for (size_t slot = 0; slot < a.didx.size(); ++slot)
          for (int k = 0; k < a.didx[slot]; ++k) d = diff(d, s->canonical_args[slot]);
        it = ctx.deriv_cache->emplace(key, std::move(d)).first;
      }
      std::map<Atom, double> inner = values;
      for (size_t slot = 0; slot < a.didx.size(); ++slot)
        inner[s->canonical_args[slot]] = eval_rec((*a.args)[slot], ctx, values);
      return eval_rec(it->second, ctx, inner);
    }
    default: {
      auto it = values.find(a);
      if (it == values.end())
        fail(ErrorKind::DomainError, "unassigned atom " + to_string(a));
      return it->second;
    }
  }
}

double int_pow(double v, int k) {
  double acc = 1.0;
  int n = k < 0 ? -k : k;
  for (int i = 0; i < n; ++i) acc *= v;
  return k < 0 ? 1.0 / acc : acc;
}

double eval_rec(const Expr& e, const EvalCtx& ctx, const std::map<Atom, double>& values) {
  double sum = 0.0;
  for (const Term& t : e.terms()) {
    double prod = to_double(t.coeff);
    for (const auto& [atom, k] : t.mono) {
      double v = eval_atom_num(atom, ctx, values);
      if (k < 0 && std::fabs(v) < ctx.env->singular_eps)
        fail(ErrorKind::SingularEvaluation, "denominator " + to_string(atom) + " near zero");
      prod *= int_pow(v, k);
    }
    double arg = 0.0;
    for (const auto& [atom, c] : t.expo) arg += to_double(c) * eval_atom_num(atom, ctx, values);
    if (arg != 0.0) prod *= std::exp(arg);
    sum += prod;
  }
  return sum;
}

}  // namespace

double eval(const Expr& e, const EvalEnv& env) {
  std::map<std::pair<const FunctionSymbol*, std::vector<int>>, Expr> cache;
  EvalCtx ctx{&env, &cache};
  return eval_rec(e, ctx, env.values);
}

// --- randomized equality fallback ------------------------------------------------

double draw_coordinate_value(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  double v = mag(rng);
  if (rng() & 1) v = -v;
  return v;
}

Expr draw_instantiation(const FunctionSymbol* s, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(-3, 3);
  auto nonzero_small = [&]() {
    int v = 0;
    while (v == 0) v = small(rng);
    return v;
  };
  switch (s->family) {
    case InstantiationFamily::KleinGordon: {
      // finite sum of exponentials e^{a r1 + b r2}, ab = -1/4
      Expr out;
      int nterms = 1 + static_cast<int>(rng() % 2);
      for (int i = 0; i < nterms; ++i) {
        Rational a = rat(nonzero_small(), 2);
        Rational b = rat(-1, 4) / a;
        Expr linear = Expr::num(a) * Expr::atom(s->canonical_args[0]) +
                      Expr::num(b) * Expr::atom(s->canonical_args[1]);
        out += Expr::num(nonzero_small()) * Expr::exp_of(linear);
      }
      return out;
    }
    case InstantiationFamily::Polynomial: {
      Expr out = Expr::num(small(rng));
      for (const Atom& a : s->canonical_args) {
        Expr v = Expr::atom(a);
        out += Expr::num(nonzero_small()) * v + Expr::num(small(rng)) * v * v;
      }
      if (s->canonical_args.size() >= 2) {
        out += Expr::num(small(rng)) * Expr::atom(s->canonical_args[0]) *
               Expr::atom(s->canonical_args[1]);
      }
      return out;
    }
    case InstantiationFamily::None:
      fail(ErrorKind::Inconclusive, "no instantiation family for symbol " + s->name);
  }
  return Expr::zero();
}

namespace {

void collect_symbols(const Expr& e, std::set<const FunctionSymbol*>& out) {
  for (const Term& t : e.terms())
    for (const auto& [atom, k] : t.mono) {
      if (atom.kind == AtomKind::SymDeriv) {
        out.insert(atom.sym);
        for (const Expr& arg : *atom.args) collect_symbols(arg, out);
      }
    }
}

}  // namespace

EqualsResult equals_syntactic(const Expr& a, const Expr& b, uint64_t seed, int points) {
  Expr d = a - b;
  if (d.is_zero()) return {true, true};

  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  std::set<const FunctionSymbol*> syms;
  collect_symbols(d, syms);

  EvalEnv env;
  for (const FunctionSymbol* s : syms) env.instantiations[s] = draw_instantiation(s, rng);

  std::set<Atom> coords = atoms_of(d);
  for (const auto& [sptr, inst] : env.instantiations) {
    std::set<Atom> inner = atoms_of(inst);
    coords.insert(inner.begin(), inner.end());
  }

  double max_abs = 0.0;
  int done = 0;
  int attempts = 0;
  while (done < points && attempts < points * 20) {
    ++attempts;
    env.values.clear();
    for (const Atom& c : coords) env.values[c] = draw_coordinate_value(rng);
    try {
      double v = eval(d, env);
      max_abs = std::max(max_abs, std::fabs(v));
      ++done;
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::SingularEvaluation) continue;  // resample
      throw;
    }
  }
  if (done < points)
    fail(ErrorKind::Inconclusive, "could not sample enough admissible points");
  return {max_abs < 1e-9, false};
}

// --- printing --------------------------------------------------------------------

namespace {

void print_atom(std::ostream& os, const Atom& a) {
  switch (a.kind) {
    case AtomKind::T: os << "t"; break;
    case AtomKind::X: os << "x"; break;
    case AtomKind::Jet:
      if (a.dt == 0) {
        os << "r" << a.comp;
        if (a.dx > 0) os << "_" << a.dx;
      } else {
        os << "(jet " << a.comp << " " << a.dt << " " << a.dx << ")";
      }
      break;
    case AtomKind::Omega: os << "w" << a.comp; break;
    case AtomKind::Param: os << "$" << param_name(a.comp); break;
    case AtomKind::Shifted:
      os << "(shift ";
      print_atom(os, *a.base);
      os << " " << a.shift.get_str() << ")";
      break;
    case AtomKind::SymDeriv: {
      os << "(sym " << a.sym->name;
      os << " (d";
      for (int k : a.didx) os << " " << k;
      os << ")";
      bool canonical = true;
      for (size_t i = 0; i < a.args->size(); ++i)
        if ((*a.args)[i] != Expr::atom(a.sym->canonical_args[i])) canonical = false;
      if (!canonical)
        for (const Expr& arg : *a.args) os << " " << to_string(arg);
      os << ")";
      break;
    }
  }
}

void print_term(std::ostream& os, const Term& t) {
  size_t nfactors = t.mono.size() + (t.expo.empty() ? 0 : 1) + 1;
  if (nfactors > 1) os << "(* ";
  os << t.coeff.get_str();
  for (const auto& [atom, k] : t.mono) {
    os << " ";
    if (k == 1) {
      print_atom(os, atom);
    } else {
      os << "(^ ";
      print_atom(os, atom);
      os << " " << k << ")";
    }
  }
  if (!t.expo.empty()) {
    os << " (exp (+";
    for (const auto& [atom, c] : t.expo) {
      os << " (* " << c.get_str() << " ";
      print_atom(os, atom);
      os << ")";
    }
    os << "))";
  }
  if (nfactors > 1) os << ")";
}

}  // namespace

std::string to_string(const Atom& a) {
  std::ostringstream os;
  print_atom(os, a);
  return os.str();
}

std::string to_string(const Expr& e) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  if (e.terms().size() > 1) {
    os << "(+";
    for (const Term& t : e.terms()) {
      os << " ";
      print_term(os, t);
    }
    os << ")";
  } else {
    print_term(os, e.terms()[0]);
  }
  return os.str();
}

std::string to_infix_string(const Expr& e) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term& t : e.terms()) {
    Rational c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool printed = false;
    if (c != 1 || (t.mono.empty() && t.expo.empty())) {
      os << c.get_str();
      printed = true;
    }
    for (const auto& [atom, k] : t.mono) {
      if (printed) os << "*";
      print_atom(os, atom);
      if (k != 1) os << "^" << k;
      printed = true;
    }
    if (!t.expo.empty()) {
      if (printed) os << "*";
      os << "exp(";
      bool f2 = true;
      for (const auto& [atom, ec] : t.expo) {
        Rational cc = ec;
        bool n2 = cc < 0;
        if (n2) cc = -cc;
        if (f2) {
          if (n2) os << "-";
        } else {
          os << (n2 ? " - " : " + ");
        }
        f2 = false;
        if (cc != 1) os << cc.get_str() << "*";
        print_atom(os, atom);
      }
      os << ")";
    }
  }
  return os.str();
}

}  // namespace dfx
