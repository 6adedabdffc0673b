// Batch entry point: verification suites, family constructors addressable by
// name, solution generation, recursion-operator application.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dfx/parse.hpp"
#include "dfx/recursion.hpp"
#include "dfx/suites.hpp"

using json = nlohmann::json;
using namespace dfx;

namespace {

// field spec grammar: D | G1 | G2 | Tx | Tt | W:<expr> | P:<expr> | R:<word>
// word: J^k | Dy^i | Dz^i | Dy^iJ^k | Dz^iJ^k | 1
GammaSpec parse_word(const std::string& w) {
  if (w == "1" || w.empty()) return GammaSpec::j_power(0);
  size_t pos = 0;
  auto read_power = [&](const std::string& head) -> int {
    if (w.compare(pos, head.size(), head) != 0) return -1;
    pos += head.size();
    int k = 1;
    if (pos < w.size() && w[pos] == '^') {
      ++pos;
      size_t end = pos;
      while (end < w.size() && isdigit(static_cast<unsigned char>(w[end]))) ++end;
      k = std::stoi(w.substr(pos, end - pos));
      pos = end;
    }
    return k;
  };
  int iy = read_power("Dy");
  int iz = iy < 0 ? read_power("Dz") : -1;
  int k = 0;
  if (pos < w.size()) {
    int kk = read_power("J");
    if (kk < 0) fail(ErrorKind::ConfigError, "bad operator word '" + w + "'");
    k = kk;
  }
  if (pos != w.size()) fail(ErrorKind::ConfigError, "bad operator word '" + w + "'");
  if (iy > 0) return GammaSpec::dy(iy, k);
  if (iz > 0) return GammaSpec::dz(iz, k);
  return GammaSpec::j_power(k);
}

EvolutionaryField parse_field(const std::string& spec) {
  if (spec == "D") return make_D();
  if (spec == "G1") return make_G1();
  if (spec == "G2") return make_G2();
  if (spec == "Tx") return make_translation_x();
  if (spec == "Tt") return make_translation_t();
  if (spec == "0") return zero_field();
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    fail(ErrorKind::ConfigError, "bad field spec '" + spec + "' (try W:<expr>, P:<expr>, R:<word>)");
  std::string head = spec.substr(0, colon), rest = spec.substr(colon + 1);
  if (head == "W") return make_W(parse(rest));
  if (head == "P") return make_P(parse(rest));
  if (head == "R") return make_R(parse_word(rest));
  fail(ErrorKind::ConfigError, "unknown field family '" + head + "'");
}

RecursionOperator parse_operator(const std::string& spec) {
  if (spec == "RT" || spec == "T") return teshukov();
  auto colon = spec.find(':');
  std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "R1") return make_R1(parse_word(rest));
  if (head == "R2") return make_R2(parse_word(rest));
  if (head == "R3") {
    // coef,power pairs separated by ';', e.g. R3:w0,0;w1,1
    std::vector<std::pair<Expr, int>> p;
    size_t pos = 0;
    while (pos < rest.size()) {
      size_t semi = rest.find(';', pos);
      if (semi == std::string::npos) semi = rest.size();
      std::string item = rest.substr(pos, semi - pos);
      auto comma = item.rfind(',');
      if (comma == std::string::npos)
        fail(ErrorKind::ConfigError, "R3 spec items are <coef-expr>,<power>");
      p.push_back({parse(item.substr(0, comma)), std::stoi(item.substr(comma + 1))});
      pos = semi + 1;
    }
    if (p.empty()) p.push_back({Expr::one(), 0});
    return make_R3(std::move(p));
  }
  fail(ErrorKind::ConfigError, "unknown recursion operator '" + spec + "' (RT, R1:<word>, R2:<word>, R3:<pairs>)");
}

SuiteConfig load_config(const std::string& path) {
  SuiteConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream is(path);
  if (!is) fail(ErrorKind::ConfigError, "cannot open config file " + path);
  json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    fail(ErrorKind::ConfigError, std::string("bad config JSON: ") + e.what());
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("theta")) cfg.theta = j["theta"].get<std::string>();
  if (j.contains("xi")) cfg.xi = j["xi"].get<std::string>();
  if (j.contains("c0")) cfg.c0 = rat_of_string(j["c0"].get<std::string>());
  if (j.contains("include_r4")) cfg.include_r4 = j["include_r4"].get<bool>();
  if (j.contains("grid_sizes")) cfg.grid_sizes = j["grid_sizes"].get<std::vector<int>>();
  if (j.contains("kernel_samples")) cfg.kernel_samples = j["kernel_samples"].get<int>();
  return cfg;
}

int cmd_run(const std::string& suite, const SuiteConfig& cfg, const std::string& out,
            const std::string& format) {
  VerificationReport rep = run_suite(suite, cfg);
  std::string text = format == "json" ? report_to_json(rep) : report_to_text(rep);
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream os(out);
    if (!os) fail(ErrorKind::ConfigError, "cannot open " + out);
    os << text << "\n";
    std::cout << (rep.all_pass() ? "all checks passed" : "FAILURES present") << "; report written to "
              << out << "\n";
  }
  return rep.all_pass() ? 0 : 1;
}

int cmd_generate(const std::string& family, const std::string& wform, const std::string& thetaform,
                 const std::string& psispec, double c, double c1, double c2, int nt, int nx,
                 double t0, double x0, double dt, double dx, double seed_r1, double seed_r2,
                 const std::string& out) {
  ImplicitSolution sol;
  if (family == "ultra") {
    sol = make_ultra(c1, c2, ClosedForm::parse(wform));
  } else if (family == "regular") {
    std::vector<std::pair<Rational, Rational>> terms;
    size_t pos = 0;
    while (pos < psispec.size()) {
      size_t semi = psispec.find(';', pos);
      if (semi == std::string::npos) semi = psispec.size();
      std::string item = psispec.substr(pos, semi - pos);
      auto comma = item.find(',');
      if (comma == std::string::npos)
        fail(ErrorKind::ConfigError, "psi spec items are <coef>,<a> with a*b = -1/4");
      terms.push_back({rat_of_string(item.substr(0, comma)), rat_of_string(item.substr(comma + 1))});
      pos = semi + 1;
    }
    sol = make_regular(KGSolution::exponential(terms), ClosedForm::parse(wform));
  } else if (family == "singular-r1" || family == "singular-r2") {
    sol = make_singular(family == "singular-r1" ? SingularSide::R1 : SingularSide::R2, c,
                        ClosedForm::parse(thetaform), ClosedForm::parse(wform));
  } else {
    fail(ErrorKind::ConfigError, "unknown family '" + family + "'");
  }

  GridSpec g;
  g.t0 = t0;
  g.x0 = x0;
  g.dt = dt;
  g.dx = dx;
  g.nt = nt;
  g.nx = nx;
  g.seed_r1 = seed_r1;
  g.seed_r2 = seed_r2;
  GridField f = sample_on_grid(sol, g);
  write_csv(f, out + ".csv");

  json side;
  side["family"] = family;
  side["grid"] = {{"nt", nt}, {"nx", nx}, {"t0", t0}, {"x0", x0}, {"dt", dt}, {"dx", dx}};
  side["newton"] = {{"max_residual", f.max_newton_residual},
                    {"max_iterations", f.max_newton_iters},
                    {"min_jacobian_abs", f.min_jacobian_abs},
                    {"max_neighbor_jump", f.max_neighbor_jump},
                    {"min_r1x_r2x_abs", f.min_r1x_r2x_abs}};
  auto res = pde_residual(f);
  side["pde_residual"] = json::array();
  for (int k = 0; k < 3; ++k)
    side["pde_residual"].push_back(
        {{"max", res[static_cast<size_t>(k)].max_norm}, {"l2", res[static_cast<size_t>(k)].l2_norm}});
  auto cr1 = conservation_residual(f, make_current_family1(Expr::one()));
  auto cr2 = conservation_residual(f, physical_momentum());
  side["conservation_residual"] = {{"mixture_mass", {{"max", cr1.max_norm}, {"l2", cr1.l2_norm}}},
                                   {"momentum", {{"max", cr2.max_norm}, {"l2", cr2.l2_norm}}}};

  // one refinement step for the observed order
  GridSpec g2 = g;
  g2.nt = 2 * nt - 1;
  g2.nx = 2 * nx - 1;
  g2.dt = dt / 2;
  g2.dx = dx / 2;
  GridField f2 = sample_on_grid(sol, g2);
  auto res2 = pde_residual(f2);
  json conv = json::array();
  for (int k = 0; k < 3; ++k) {
    double coarse = res[static_cast<size_t>(k)].max_norm;
    double fine = res2[static_cast<size_t>(k)].max_norm;
    json row;
    row["equation"] = k + 1;
    row["coarse"] = coarse;
    row["fine"] = fine;
    if (coarse > 1e-12 && fine > 1e-12) row["observed_order"] = observed_order(coarse, fine);
    conv.push_back(std::move(row));
  }
  side["convergence"] = std::move(conv);

  std::ofstream os(out + ".json");
  os << side.dump(2) << "\n";
  std::cout << "wrote " << out << ".csv and " << out << ".json\n";
  return 0;
}

int cmd_apply_recursion(const std::string& opspec, const std::string& fieldspec,
                        const std::string& out, uint64_t seed) {
  RecursionOperator R = parse_operator(opspec);
  EvolutionaryField eta = parse_field(fieldspec);
  EvolutionaryField img = apply_recursion(R, eta);
  json j;
  j["operator"] = opspec;
  j["field"] = fieldspec;
  j["image"] = {to_string(img[0]), to_string(img[1]), to_string(img[2])};
  bool zero = field_is_zero(img);
  j["image_is_zero"] = zero;
  if (!zero) {
    auto rep = is_symmetry(img, seed);
    j["image_is_symmetry"] = rep.pass;
    j["exact"] = rep.exact;
    if (!rep.pass) {
      j["residuals"] = {to_string(rep.residuals[0]), to_string(rep.residuals[1]),
                        to_string(rep.residuals[2])};
    }
  }
  std::string text = j.dump(2);
  if (out.empty())
    std::cout << text << "\n";
  else {
    std::ofstream os(out);
    os << text << "\n";
  }
  bool okay = zero || j["image_is_symmetry"].get<bool>();
  return okay ? 0 : 1;
}

int cmd_check(const std::string& what, const std::string& spec, uint64_t seed) {
  json j;
  j["what"] = what;
  j["spec"] = spec;
  CheckReport rep;
  if (what == "symmetry") {
    rep = is_symmetry(parse_field(spec), seed);
  } else if (what == "cosymmetry" || what == "current") {
    auto colon = spec.find(':');
    if (colon == std::string::npos) fail(ErrorKind::ConfigError, "spec must be <family>:<param>");
    std::string head = spec.substr(0, colon), rest = spec.substr(colon + 1);
    if (what == "cosymmetry") {
      Cosymmetry lambda;
      if (head == "1") lambda = make_cosymmetry_family1(parse(rest));
      else if (head == "2") lambda = make_cosymmetry_family2(parse(rest));
      else if (head == "3") {
        GammaSpec wspec = parse_word(rest);
        QSpec q{wspec.kappa, 0,
                wspec.kind == GammaSpec::Kind::DyThenJ
                    ? TildeOp::Dy
                    : (wspec.kind == GammaSpec::Kind::DzThenJ ? TildeOp::Dz : TildeOp::J),
                wspec.iota};
        lambda = make_cosymmetry_family3(q);
      } else fail(ErrorKind::ConfigError, "cosymmetry family must be 1, 2 or 3");
      rep = is_cosymmetry(lambda, seed);
    } else {
      ConservedCurrent c;
      if (head == "1") c = make_current_family1(parse(rest));
      else if (head == "2") c = make_current_family2(parse(rest));
      else if (head == "3") {
        GammaSpec wspec = parse_word(rest);
        QSpec q{wspec.kappa, 0,
                wspec.kind == GammaSpec::Kind::DyThenJ
                    ? TildeOp::Dy
                    : (wspec.kind == GammaSpec::Kind::DzThenJ ? TildeOp::Dz : TildeOp::J),
                wspec.iota};
        c = make_current_family3(q);
      } else fail(ErrorKind::ConfigError, "current family must be 1, 2 or 3");
      rep = is_conserved_current(c, seed);
      j["current"] = {to_string(c.rho), to_string(c.sigma)};
    }
  } else {
    fail(ErrorKind::ConfigError, "--what must be symmetry, cosymmetry or current");
  }
  j["pass"] = rep.pass;
  j["exact"] = rep.exact;
  if (!rep.pass)
    j["residuals"] = {to_string(rep.residuals[0]), to_string(rep.residuals[1]),
                      to_string(rep.residuals[2])};
  std::cout << j.dump(2) << "\n";
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic jet-calculus verification engine for the isothermal no-slip drift flux system"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a named verification suite");
  std::string suite = "all", config_path, out_path, format = "text";
  uint64_t seed = 0;
  bool seed_given = false;
  std::string theta, xi, c0str;
  int threads = -1;
  bool no_r4 = false;
  run->add_option("--suite", suite, "suite name")->check(CLI::IsMember(suite_names()));
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--seed", seed, "random seed")->each([&](const std::string&) { seed_given = true; });
  run->add_option("--out", out_path, "write the report to a file");
  run->add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));
  run->add_option("--theta", theta, "Theta expression for the hamiltonian suite");
  run->add_option("--xi", xi, "Xi expression for the hamiltonian suite");
  run->add_option("--c0", c0str, "c0 rational for the hamiltonian suite");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");
  run->add_flag("--no-r4", no_r4, "skip the numeric R4 check");

  // generate
  auto* gen = app.add_subcommand("generate", "sample an exact solution on a grid");
  std::string family = "ultra", wform = "tanh", thetaform = "poly:0,0.5,0.25", psispec = "1,1";
  std::string gridspec = "101x101", gen_out = "solution";
  double gc = 0.0, gc1 = 0.1, gc2 = 0.2, gt0 = 0.0, gx0 = -1.0, gdt = 0.01, gdx = 0.02;
  double gsr1 = 0.2, gsr2 = 0.5;
  gen->add_option("--family", family, "ultra|regular|singular-r1|singular-r2")
      ->check(CLI::IsMember({"ultra", "regular", "singular-r1", "singular-r2"}));
  gen->add_option("--W", wform, "closed form for W (tanh|exp|poly:c0,c1,..)");
  gen->add_option("--Theta", thetaform, "closed form for the singular families");
  gen->add_option("--psi", psispec, "Klein-Gordon seed: <coef>,<a>[;<coef>,<a>..], b = -1/(4a)");
  gen->add_option("--c", gc, "constant invariant for the singular families");
  gen->add_option("--c1", gc1, "r1 constant for the ultra family");
  gen->add_option("--c2", gc2, "r2 constant for the ultra family");
  gen->add_option("--grid", gridspec, "NTxNX");
  gen->add_option("--t0", gt0);
  gen->add_option("--x0", gx0);
  gen->add_option("--dt", gdt);
  gen->add_option("--dx", gdx);
  gen->add_option("--seed-r1", gsr1, "Newton seed (regular family)");
  gen->add_option("--seed-r2", gsr2, "Newton seed (regular family)");
  gen->add_option("--out", gen_out, "output prefix for .csv and .json");

  // apply-recursion
  auto* ar = app.add_subcommand("apply-recursion", "apply a recursion operator to a field");
  std::string opspec = "RT", fieldspec = "D", ar_out;
  ar->add_option("--op", opspec, "RT | R1:<word> | R2:<word> | R3:<coef,power;..>");
  ar->add_option("--field", fieldspec, "D | G1 | G2 | Tx | Tt | W:<expr> | P:<expr> | R:<word>");
  ar->add_option("--out", ar_out, "write the JSON result to a file");

  // check
  auto* chk = app.add_subcommand("check", "verify a named field, cosymmetry or current");
  std::string what = "symmetry", spec = "D";
  chk->add_option("--what", what, "symmetry|cosymmetry|current");
  chk->add_option("--spec", spec,
                  "symmetry: field spec; cosymmetry/current: <family>:<param>, e.g. 1:w0 or 3:Dz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      SuiteConfig cfg = load_config(config_path);
      if (seed_given) cfg.seed = seed;
      if (!theta.empty()) cfg.theta = theta;
      if (!xi.empty()) cfg.xi = xi;
      if (!c0str.empty()) cfg.c0 = rat_of_string(c0str);
      if (threads >= 0) cfg.threads = threads;
      if (no_r4) cfg.include_r4 = false;
      return cmd_run(suite, cfg, out_path, format);
    }
    if (gen->parsed()) {
      auto xpos = gridspec.find('x');
      if (xpos == std::string::npos) fail(ErrorKind::ConfigError, "--grid must be NTxNX");
      int nt = std::stoi(gridspec.substr(0, xpos));
      int nx = std::stoi(gridspec.substr(xpos + 1));
      return cmd_generate(family, wform, thetaform, psispec, gc, gc1, gc2, nt, nx, gt0, gx0, gdt,
                          gdx, gsr1, gsr2, gen_out);
    }
    if (ar->parsed()) return cmd_apply_recursion(opspec, fieldspec, ar_out, seed);
    if (chk->parsed()) return cmd_check(what, spec, seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
