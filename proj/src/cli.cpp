#include "hamspray/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include "hamspray/dynamics.hpp"
#include "hamspray/model_io.hpp"
#include "hamspray/prolongation.hpp"

namespace hamspray {

using nlohmann::json;

namespace {

constexpr int kPass = 0, kFail = 1, kInput = 2;

struct Settings {
  std::string box;
  std::vector<std::string> box_vars;
  std::optional<int> trials;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

struct Context {
  Model model;
  Box box;
  SampleOptions opt;
  bool strict = false;
};

std::pair<double, double> parse_range(const std::string& text, const std::string& what) {
  auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    std::size_t u1 = 0, u2 = 0;
    std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    double lo = std::stod(a, &u1), hi = std::stod(b, &u2);
    if (u1 != a.size() || u2 != b.size() || !(lo < hi)) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::exception&) {
    throw SchemaError(what, "expected a,b with a < b, got '" + text + "'");
  }
}

Context load(const std::string& path, const Settings& s) {
  Context c{read_model_file(path), {}, {}, s.strict};
  c.box = c.model.box;
  if (!s.box.empty()) std::tie(c.box.lo, c.box.hi) = parse_range(s.box, "--box");
  for (const auto& bv : s.box_vars) {
    auto eq = bv.find('=');
    std::string name = bv.substr(0, eq);
    if (eq == std::string::npos) throw SchemaError("--box-var", "expected name=a,b, got '" + bv + "'");
    auto coords = c.model.chart.coords();
    auto it = std::find_if(coords.begin(), coords.end(), [&](Symbol v) { return v.name() == name; });
    if (it == coords.end()) throw SchemaError("--box-var", "unknown symbol '" + name + "'");
    auto [lo, hi] = parse_range(bv.substr(eq + 1), "--box-var");
    c.box.set(*it, lo, hi);
  }
  c.opt.trials = s.trials.value_or(c.model.tolerances.trials.value_or(c.opt.trials));
  c.opt.tol = s.tol.value_or(c.model.tolerances.tol.value_or(c.opt.tol));
  c.opt.seed = s.seed.value_or(c.model.seed.value_or(c.opt.seed));
  if (c.opt.trials < 1) throw SchemaError("--trials", "must be positive");
  if (!(c.opt.tol > 0)) throw SchemaError("--tol", "must be positive");
  return c;
}

const Expr& require_L(const Context& c) {
  if (!c.model.L) throw SchemaError("/L", "missing field");
  return *c.model.L;
}

json report_json(const ValidationReport& rep) {
  json j;
  j["check"] = rep.check;
  j["status"] = std::string(status_name(rep.status()));
  j["residual_max"] = rep.residual_max();
  j["seed"] = rep.seed;
  if (const auto* fail = rep.first_failure()) {
    json point = json::object();
    for (const auto& [name, value] : fail->result.witness) point[name] = value;
    j["witness"] = {{"entry", fail->label}, {"point", point}};
  }
  return j;
}

int emit(const ValidationReport& rep, std::ostream& out) {
  out << report_json(rep).dump(2) << "\n";
  return rep.passed() ? kPass : kFail;
}

Witness name_point(const AlgebroidChart& A, const std::vector<double>& values) {
  Witness w;
  auto coords = A.coords();
  for (std::size_t i = 0; i < values.size() && i < coords.size(); ++i) w.emplace_back(coords[i].name(), values[i]);
  return w;
}

LagrangianData lagrangian(const Context& c, bool strict) {
  const auto& A = c.model.chart;
  InverseMode mode = A.r() <= 4 ? InverseMode::Symbolic : InverseMode::Pointwise;
  return build(require_L(c), A, mode, {c.box, c.opt, strict});
}

ValidationReport validate(const Context& c) {
  const auto& A = c.model.chart;
  ValidationReport rep;
  rep.check = "validate";
  rep.seed = c.opt.seed;
  rep.append(validate_structure(A, c.box, c.opt));
  if (c.model.L) {
    ZeroResult reg;
    try {
      auto D = lagrangian(c, c.strict);
      if (!D.regular) {
        reg.status = ZeroStatus::NonZero;
        reg.witness = name_point(A, D.singular_witness);
      } else if (!(D.detM && D.detM->is_const())) {
        reg.status = ZeroStatus::LikelyZero;
      }
    } catch (const SingularHessian& e) {
      reg.status = ZeroStatus::NonZero;
      reg.witness = name_point(A, e.witness());
    }
    rep.add("hessian_regular", reg);
  }
  if (c.model.theta) rep.append(check_closed(*c.model.theta, A, c.box, c.opt));
  return rep;
}

// Advisory validation unless --strict, where a failure stops the command.
std::optional<int> gate(const Context& c, std::ostream& out) {
  if (!c.strict) return std::nullopt;
  auto rep = validate(c);
  if (rep.passed()) return std::nullopt;
  return emit(rep, out);
}

Expr energy(const Context& c, const LagrangianData& D, const std::string& G) {
  if (!G.empty()) return parse_expr(c.model, G, "--G");
  return c.model.f ? D.EL + *c.model.f : D.EL;
}

PoissonBivector poisson(const Context& c, const LagrangianData& D) {
  if (!D.Minv) throw DomainError("the bracket needs a symbolic inverse Hessian (rank <= 4)");
  return build_bracket(c.model.chart, D, assemble_N(D, c.model.chart, c.model.theta_or_zero()));
}

json strings(const ExprMatrix& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    out.push_back(row);
  }
  return out;
}

json strings(const ExprVector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(to_string(v(i)));
  return out;
}

std::string basis_name(int r, int a) { return (a < r ? "E" : "U") + std::to_string(a % r + 1); }

json form_json(const ProlongForm& F, int r) {
  json out = json::object();
  for (std::size_t s = 0; s < F.size(); ++s) {
    if (F[s].is_literal_zero()) continue;
    std::string key;
    for (int a : F.tuple(s)) key += (key.empty() ? "" : ",") + basis_name(r, a);
    out[key] = to_string(F[s]);
  }
  return out;
}

json section_json(const ProlongSection& S) { return {{"E", strings(S.a)}, {"U", strings(S.b)}}; }

ValidationReport check_homotopy(const Context& c, const LagrangianData& D, const Expr& G) {
  const auto& y = c.model.chart.y();
  const int r = static_cast<int>(y.size());
  ValidationReport rep;
  rep.check = "homotopy";
  rep.seed = c.opt.seed;
  VerticalForm w0(r, 0);
  w0.set({}, G);
  VerticalForm w1(r, 1);
  for (int k = 0; k < r; ++k) w1.set({k}, D.thetaL(k));
  rep.append(homotopy_identity_check(w0, y, c.box, c.opt));
  rep.append(homotopy_identity_check(w1, y, c.box, c.opt));
  if (r >= 2) {
    VerticalForm w2(r, 2);
    for (int k = 0; k < r; ++k)
      for (int l = k + 1; l < r; ++l) w2.set({k, l}, D.thetaL(k) * Expr(y[l]) - D.thetaL(l) * Expr(y[k]));
    rep.append(homotopy_identity_check(w2, y, c.box, c.opt));
  }
  return rep;
}

ValidationReport check_prolongation(const Context& c, const LagrangianData& D) {
  const auto& A = c.model.chart;
  const int r = A.r();
  ValidationReport rep;
  rep.check = "prolongation";
  rep.seed = c.opt.seed;
  auto cs = cartan_sections(D, A);

  auto ref = cartan_block_formula(D, A);
  auto diff = cs.omega - ref;
  for (std::size_t s = 0; s < diff.size(); ++s) {
    // structural identity: anything short of literal zero fails
    ZeroResult z;
    if (!diff[s].is_literal_zero()) {
      z = is_zero(diff[s], c.box, c.opt);
      z.status = ZeroStatus::NonZero;
    }
    std::string label = "cartan[";
    for (int a : diff.tuple(s)) label += (label.back() == '[' ? "" : ",") + basis_name(r, a);
    rep.add(label + "]", z);
  }

  auto sigma = hamiltonian_section(A, cs.omega, D.EL);
  rep.append(is_SODE(A, sigma, c.box, c.opt));
  auto P0 = build_bracket(A, D, assemble_N(D, A, AForm(r, 2)));
  auto X0 = hamiltonian_field(P0, D.EL);
  auto V0 = anchor(A, sigma);
  std::vector<std::pair<std::string, Expr>> oracle;
  for (int i = 0; i < A.n(); ++i) oracle.emplace_back("oracle[" + A.x()[i].name() + "]", V0.Vx(i) - X0.Vx(i));
  for (int k = 0; k < r; ++k) oracle.emplace_back("oracle[" + A.y()[k].name() + "]", V0.Vy(k) - X0.Vy(k));

  auto Theta_p = pullback_hor(A, c.model.theta_or_zero());
  Expr f = c.model.f.value_or(Expr(0));
  if (!Theta_p.is_literal_zero() || !f.is_literal_zero()) {
    auto tz = theorem_Z(D, A, Theta_p, f, c.box, c.opt);
    rep.append(tz.report);
    ProlongSection total = tz.sigma;
    for (int i = 0; i < r; ++i) {
      total.a(i) = tz.Z.a(i) + tz.sigma.a(i);
      total.b(i) = tz.Z.b(i) + tz.sigma.b(i);
    }
    auto X = hamiltonian_field(poisson(c, D), D.EL + f);
    auto V = anchor(A, total);
    for (int i = 0; i < A.n(); ++i) oracle.emplace_back("theorem[" + A.x()[i].name() + "]", V.Vx(i) - X.Vx(i));
    for (int k = 0; k < r; ++k) oracle.emplace_back("theorem[" + A.y()[k].name() + "]", V.Vy(k) - X.Vy(k));
  }
  rep.append(check_all("oracle", oracle, c.box, c.opt));

  ProlongForm Omega = cs.omega + Theta_p;
  rep.append(decompose_symplectic(A, Omega, EhresmannConn::zero(r), c.box, c.opt).report);
  rep.append(check_all("J_dual", labelled(J_dual(Omega), "J_dual"), c.box, c.opt));
  return rep;
}

Fixture catalog(const std::string& name, int n) {
  if (name == "tangent") return tangent(n);
  if (name == "metric") {
    ExprMatrix g = identity(2);
    g(1, 1) = Expr(1) + pow(Expr(Symbol("x1")), 2);
    return tangent(2, g);
  }
  if (name == "so3") return action_so3();
  if (name == "cotangent") {
    ExprMatrix Pi = zeros(2, 2);
    Pi(0, 1) = Expr(1);
    Pi(1, 0) = Expr(-1);
    return cotangent_poisson(Pi, identity(2));
  }
  if (name == "lie-poisson") {
    ExprMatrix Pi = zeros(3, 3);
    auto x = make_symbols("x", 3);
    for (int i = 0; i < 3; ++i) {
      int j = (i + 1) % 3, k = (i + 2) % 3;
      Pi(i, j) = Expr(x[k]);
      Pi(j, i) = -Expr(x[k]);
    }
    return cotangent_poisson(Pi, identity(3));
  }
  throw InvalidFixtureParam("unknown catalog entry '" + name + "'");
}

bool is_input_error(const Error& e) {
  return dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const SyntaxError*>(&e) ||
         dynamic_cast<const UnknownSymbol*>(&e) || dynamic_cast<const InvalidFixtureParam*>(&e) ||
         dynamic_cast<const DomainError*>(&e) || dynamic_cast<const DegreeError*>(&e);
}

ChartPoint parse_point(const AlgebroidChart& A, const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw SchemaError("--p0", "malformed number '" + part + "'");
    }
  }
  if (static_cast<int>(v.size()) != A.n() + A.r())
    throw SchemaError("--p0", "expected " + std::to_string(A.n() + A.r()) + " values");
  ChartPoint p{Eigen::VectorXd(A.n()), Eigen::VectorXd(A.r())};
  for (int i = 0; i < A.n(); ++i) p.x(i) = v[i];
  for (int k = 0; k < A.r(); ++k) p.y(k) = v[A.n() + k];
  return p;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poisson brackets and semisprays on Lie algebroids", "hamspray"};
  app.require_subcommand(1);
  Settings s;
  std::string model_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("model", model_path, "JSON model document")->required();
    sub->add_option("--box", s.box, "sampling range a,b for every variable");
    sub->add_option("--box-var", s.box_vars, "per-variable range name=a,b");
    sub->add_option("--trials", s.trials, "sample points per residual (default 64)");
    sub->add_option("--tol", s.tol, "zero tolerance (default 1e-9)");
    sub->add_option("--seed", s.seed, "sampling seed");
    sub->add_flag("--strict", s.strict, "stop on failed structure validation");
  };

  auto* validate_cmd = app.add_subcommand("validate", "structure equations, Hessian regularity, closedness");
  common(validate_cmd);
  auto* bracket_cmd = app.add_subcommand("bracket", "coefficient matrices of the Poisson bivector");
  common(bracket_cmd);
  std::string G;
  auto* ham_cmd = app.add_subcommand("hamiltonian", "Hamiltonian vector field of G (default E_L + f)");
  common(ham_cmd);
  ham_cmd->add_option("--G", G, "function on A");
  std::string which;
  auto* check_cmd = app.add_subcommand("check", "run a validation suite");
  check_cmd->add_option("suite", which, "jacobi|semispray|spray|homotopy|prolongation")
      ->required()
      ->check(CLI::IsMember({"jacobi", "semispray", "spray", "homotopy", "prolongation"}));
  common(check_cmd);
  check_cmd->add_option("--G", G, "function on A");
  std::string p0, method = "rk4", format = "csv";
  double T = 1.0, h = 1e-3;
  auto* int_cmd = app.add_subcommand("integrate", "integrate the Hamiltonian field");
  common(int_cmd);
  int_cmd->add_option("--G", G, "function on A");
  int_cmd->add_option("--p0", p0, "initial point x...,y...")->required();
  int_cmd->add_option("--T", T, "final time")->check(CLI::PositiveNumber);
  int_cmd->add_option("--step", h, "step size")->check(CLI::PositiveNumber);
  int_cmd->add_option("--method", method)->check(CLI::IsMember({"rk4", "rk45"}));
  int_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  auto* prolong_cmd = app.add_subcommand("prolong", "Cartan sections, sigma_{E_L} and the decomposition");
  common(prolong_cmd);
  std::string entry;
  int dim = 2;
  auto* cat_cmd = app.add_subcommand("catalog", "print a catalog model");
  cat_cmd->add_option("name", entry, "tangent|metric|so3|cotangent|lie-poisson")->required();
  cat_cmd->add_option("--n", dim, "base dimension for tangent")->check(CLI::PositiveNumber);
  bool bare = false;
  cat_cmd->add_flag("--bare", bare, "omit the catalog 2-section");

  std::vector<std::string> argv_store{"hamspray"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInput;
  }

  try {
    if (cat_cmd->parsed()) {
      Model m = model_from_fixture(catalog(entry, dim));
      if (bare) m.theta.reset();
      out << dump_model(m);
      return kPass;
    }
    Context c = load(model_path, s);
    if (validate_cmd->parsed()) return emit(validate(c), out);
    if (auto stop = gate(c, out)) return *stop;
    const auto& A = c.model.chart;

    if (check_cmd->parsed() && which == "homotopy" && !c.model.L) {
      VerticalForm w0(A.r(), 0);
      w0.set({}, G.empty() ? c.model.f.value_or(Expr(0)) : parse_expr(c.model, G, "--G"));
      auto rep = homotopy_identity_check(w0, A.y(), c.box, c.opt);
      rep.check = "homotopy";
      rep.seed = c.opt.seed;
      return emit(rep, out);
    }

    auto D = lagrangian(c, false);
    if (bracket_cmd->parsed()) {
      auto P = poisson(c, D);
      json j;
      j["coords"] = json::array();
      for (auto v : P.coords) j["coords"].push_back(v.name());
      j["Pxx"] = strings(ExprMatrix(P.Pxx()));
      j["Pxy"] = strings(ExprMatrix(P.Pxy()));
      j["Pyy"] = strings(ExprMatrix(P.Pyy()));
      out << j.dump(2) << "\n";
      return kPass;
    }
    if (ham_cmd->parsed()) {
      Expr g = energy(c, D, G);
      auto V = hamiltonian_field(poisson(c, D), g);
      json j{{"G", to_string(g)}, {"Vx", strings(V.Vx)}, {"Vy", strings(V.Vy)}};
      out << j.dump(2) << "\n";
      return kPass;
    }
    if (check_cmd->parsed()) {
      ValidationReport rep;
      if (which == "jacobi") {
        rep = check_jacobi(poisson(c, D), c.box, c.opt);
      } else if (which == "semispray" || which == "spray") {
        auto V = hamiltonian_field(poisson(c, D), energy(c, D, G));
        rep = which == "spray" ? is_spray(A, V, c.box, c.opt) : is_semispray(A, V, c.box, c.opt);
      } else if (which == "homotopy") {
        rep = check_homotopy(c, D, energy(c, D, G));
      } else {
        rep = check_prolongation(c, D);
      }
      rep.check = which;
      rep.seed = c.opt.seed;
      return emit(rep, out);
    }
    if (int_cmd->parsed()) {
      Expr g = energy(c, D, G);
      auto V = hamiltonian_field(poisson(c, D), g);
      IntegrateOptions io;
      io.method = method == "rk45" ? Method::RK45 : Method::RK4;
      io.h = h;
      auto traj = integrate(A, V, parse_point(A, p0), T, io, g);
      out << (format == "json" ? to_json(A, traj) + "\n" : to_csv(A, traj));
      return kPass;
    }
    if (prolong_cmd->parsed()) {
      const int r = A.r();
      auto cs = cartan_sections(D, A);
      auto sigma = hamiltonian_section(A, cs.omega, D.EL);
      ProlongForm Omega = cs.omega + pullback_hor(A, c.model.theta_or_zero());
      auto dec = decompose_symplectic(A, Omega, EhresmannConn::zero(r), c.box, c.opt);
      json j;
      j["theta_L"] = form_json(cs.theta, r);
      j["omega_L"] = form_json(cs.omega, r);
      j["sigma_EL"] = section_json(sigma);
      j["decomposition"] = {{"Theta", form_json(dec.Theta, r)}, {"zeta", form_json(dec.zeta, r)},
                            {"report", report_json(dec.report)}};
      out << j.dump(2) << "\n";
      return dec.report.passed() ? kPass : kFail;
    }
  } catch (const Error& e) {
    if (is_input_error(e)) {
      err << "input error: " << e.what() << "\n";
      return kInput;
    }
    err << "check failed: " << e.what() << "\n";
    return kFail;
  }
  return kInput;
}

}  // namespace hamspray
