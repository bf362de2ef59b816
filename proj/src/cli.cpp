#include "gridnls/cli.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridnls/function_io.hpp"
#include "gridnls/functionals.hpp"
#include "gridnls/minimize.hpp"
#include "gridnls/norms.hpp"
#include "gridnls/rearrange.hpp"
#include "gridnls/sweep.hpp"
#include "gridnls/testfuncs.hpp"

namespace gridnls {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat JSON object with fields in insertion order and 17-digit numbers.
class FlatJson {
 public:
  FlatJson& num(std::string key, double v) {
    fields_.emplace_back(std::move(key), std::isfinite(v) ? format_double(v) : "null");
    return *this;
  }
  FlatJson& integer(std::string key, long long v) {
    fields_.emplace_back(std::move(key), std::to_string(v));
    return *this;
  }
  FlatJson& str(std::string key, std::string_view v) {
    fields_.emplace_back(std::move(key), nlohmann::json(std::string(v)).dump());
    return *this;
  }
  FlatJson& boolean(std::string key, bool v) {
    fields_.emplace_back(std::move(key), v ? "true" : "false");
    return *this;
  }
  std::string dump() const {
    std::string s = "{\n";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      s += "  " + nlohmann::json(fields_[i].first).dump() + ": " + fields_[i].second;
      s += i + 1 < fields_.size() ? ",\n" : "\n";
    }
    return s + "}\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  out << text;
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

bool flag_given(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Expand --config FILE into explicit flags placed right after the
// subcommand, skipping every flag that is already on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.size() < 2) return args;

  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& ex) {
    throw UsageError("config file " + path + ": " + ex.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");

  std::vector<std::string> extra;
  for (const auto& [raw_key, value] : cfg.items()) {
    std::string key = raw_key;
    for (auto& c : key) {
      if (c == '_') c = '-';
    }
    if (key == "config") throw UsageError("config files cannot nest");
    const std::string flag = "--" + key;
    if (flag_given(args, flag)) continue;
    auto scalar = [&](const nlohmann::json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number()) return v.dump();
      throw UsageError("config key '" + raw_key + "' has an unsupported value");
    };
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else if (value.is_array()) {
      extra.push_back(flag);
      for (const auto& v : value) extra.push_back(scalar(v));
    } else {
      extra.push_back(flag);
      extra.push_back(scalar(value));
    }
  }
  args.insert(args.begin() + 2, extra.begin(), extra.end());
  return args;
}

struct GridOpts {
  int half_width;
  int mesh;
};

void add_grid(CLI::App* sub, GridOpts& g) {
  sub->add_option("--half-width", g.half_width, "window half-width L")->capture_default_str();
  sub->add_option("--mesh", g.mesh, "subintervals per edge m")->capture_default_str();
}

// ---- minimize -------------------------------------------------------------

struct MinimizeOpts {
  double p{3.0};
  double mass{1.0};
  GridOpts grid{20, 16};
  std::string init{"exp"};
  std::string init_state;
  double eps{0.5};
  double soliton_scale{0.1};
  int max_iters{20000};
  double grad_tol{1e-6};
  double perturbation{0.0};
  std::uint64_t seed{0};
  std::string out;
  std::string state;
};

InitSpec parse_init(const std::string& name, double eps, double scale, const std::string& init_state, const GridPtr& graph) {
  InitSpec init;
  init.eps = eps;
  init.soliton_scale = scale;
  if (!init_state.empty()) {
    init.kind = InitKind::Provided;
    auto f = load_function(init_state);
    init.provided = GraphFunction(graph, std::vector<double>(f.values().begin(), f.values().end()));
    if (f.graph().half_width() != graph->half_width() || f.graph().mesh() != graph->mesh()) {
      throw std::invalid_argument("--init-state was dumped on a different grid");
    }
    return init;
  }
  const auto kind = init_kind_from_string(name);
  if (!kind || *kind == InitKind::Provided) throw std::invalid_argument("--init must be exp or edge-soliton (use --init-state for a file)");
  init.kind = *kind;
  return init;
}

int run_minimize(const MinimizeOpts& o, std::ostream& out) {
  const auto graph = build_grid({o.grid.half_width, o.grid.mesh});
  MinimizeConfig cfg;
  cfg.p = o.p;
  cfg.mu = o.mass;
  cfg.max_iters = o.max_iters;
  cfg.grad_tol = o.grad_tol;
  cfg.perturbation = o.perturbation;
  cfg.seed = o.seed;
  cfg.init = parse_init(o.init, o.eps, o.soliton_scale, o.init_state, graph);
  const auto res = minimize_energy(graph, cfg);

  FlatJson j;
  j.num("p", o.p)
      .num("mu", o.mass)
      .str("status", to_string(res.status))
      .num("energy", res.energy)
      .integer("iters", res.iterations)
      .num("grad_norm", res.grad_norm)
      .integer("L", o.grid.half_width)
      .integer("m", o.grid.mesh)
      .str("init", to_string(cfg.init.kind))
      .integer("seed", static_cast<long long>(o.seed));
  if (res.open_regime) j.boolean("open_regime", true);
  emit(j.dump(), o.out, out);
  if (!o.state.empty()) dump_function(res.state, o.state);
  return kExitOk;
}

// ---- kp -------------------------------------------------------------------

struct KpOpts {
  double p{6.0};
  GridOpts grid{2, 64};
  int samples{200};
  int max_iters{4000};
  double grad_tol{1e-7};
  std::uint64_t seed{0};
  std::string out;
  std::string state;
};

int run_kp(const KpOpts& o, std::ostream& out) {
  const auto graph = build_grid({o.grid.half_width, o.grid.mesh});
  QuotientConfig cfg;
  cfg.certification_samples = o.samples;
  cfg.max_iters = o.max_iters;
  cfg.grad_tol = o.grad_tol;
  cfg.seed = o.seed;
  const auto est = maximize_quotient(graph, o.p, cfg);
  FlatJson j;
  j.num("p", o.p)
      .num("estimate", est.value)
      .num("lo", est.lo)
      .num("hi", est.hi)
      .str("method", to_string(est.method))
      .num("best_sample_quotient", est.best_sample_quotient)
      .integer("certified_samples", est.certified_samples)
      .integer("iterations", est.iterations)
      .num("compactness_bound", est.compactness_bound)
      .num("nondegeneracy_bound", est.nondegeneracy_bound)
      .integer("L", o.grid.half_width)
      .integer("m", o.grid.mesh)
      .integer("seed", static_cast<long long>(o.seed));
  emit(j.dump(), o.out, out);
  if (!o.state.empty() && est.best_state) dump_function(*est.best_state, o.state);
  return kExitOk;
}

// ---- critical-mass --------------------------------------------------------

struct CriticalOpts {
  double p{5.0};
  std::string method{"formula"};
  std::optional<double> kp;
  GridOpts grid{6, 16};
  int samples{200};
  int max_iters{20000};
  double grad_tol{1e-6};
  double width{1e-2};
  std::uint64_t seed{0};
  std::string out;
};

int run_critical(const CriticalOpts& o, std::ostream& out) {
  const auto graph = build_grid({o.grid.half_width, o.grid.mesh});
  EstimateMethod method;
  if (o.method == "formula") {
    method = EstimateMethod::Formula;
  } else if (o.method == "bisection") {
    method = EstimateMethod::EnergyBisection;
  } else {
    throw std::invalid_argument("--method must be formula or bisection");
  }
  CriticalMassConfig cfg;
  cfg.quotient.certification_samples = o.samples;
  cfg.quotient.seed = o.seed;
  cfg.probe.max_iters = o.max_iters;
  cfg.probe.grad_tol = o.grad_tol;
  cfg.probe.seed = o.seed;
  cfg.bracket_width = o.width;
  cfg.kp_override = o.kp;
  const auto est = estimate_critical_mass(graph, o.p, method, cfg);
  FlatJson j;
  j.num("p", o.p)
      .num("estimate", est.value)
      .num("lo", est.lo)
      .num("hi", est.hi)
      .str("method", to_string(est.method))
      .integer("probes", est.probes)
      .integer("L", o.grid.half_width)
      .integer("m", o.grid.mesh)
      .integer("seed", static_cast<long long>(o.seed));
  emit(j.dump(), o.out, out);
  return kExitOk;
}

// ---- sweep ----------------------------------------------------------------

struct SweepOpts {
  std::vector<double> p_range;
  std::vector<double> mu_range;
  bool relative{false};
  GridOpts grid{20, 16};
  std::string init{"exp"};
  double eps{0.5};
  double soliton_scale{0.1};
  int max_iters{20000};
  double grad_tol{1e-6};
  std::uint64_t seed{0};
  int threads{0};
  std::string out;
};

Range to_range(const std::vector<double>& v, const char* flag) {
  if (v.size() != 3) throw UsageError(std::string(flag) + " takes LO HI STEP");
  return {v[0], v[1], v[2]};
}

int run_sweep_cmd(const SweepOpts& o, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  spec.p_range = to_range(o.p_range, "--p-range");
  spec.mu_range = to_range(o.mu_range, "--mu-range");
  spec.grid = {o.grid.half_width, o.grid.mesh};
  spec.relative_to_critical = o.relative;
  spec.seed = o.seed;
  spec.threads = o.threads;
  spec.overrides.max_iters = o.max_iters;
  spec.overrides.grad_tol = o.grad_tol;
  spec.overrides.init = parse_init(o.init, o.eps, o.soliton_scale, "", nullptr);
  // Validate ranges and the grid up front so bad input is a usage error.
  (void)spec.p_range.values();
  (void)spec.mu_range.values();
  (void)build_grid(spec.grid);

  const auto rows = run_sweep(spec);
  std::ostringstream csv;
  write_sweep_csv(rows, csv);
  emit(csv.str(), o.out, out);
  for (const auto& r : rows) {
    if (!r.error.empty()) err << "sweep: p=" << format_double(r.p) << " mu=" << format_double(r.mu) << ": " << r.error << '\n';
    if (r.mu_p_estimate_used) {
      err << "sweep: p=" << format_double(r.p) << " used mu_p=" << format_double(*r.mu_p_estimate_used) << '\n';
    }
  }
  return kExitOk;
}

// ---- check ----------------------------------------------------------------

struct CheckOpts {
  int samples{1000};
  std::uint64_t seed{0};
  GridOpts grid{3, 4};
  int alphas{5};
  std::string out;
};

int run_check(const CheckOpts& o, std::ostream& out, std::ostream& err) {
  if (o.samples < 1) throw std::invalid_argument("--samples must be positive");
  if (o.alphas < 2) throw std::invalid_argument("--alphas must be at least 2");
  const auto graph = build_grid({o.grid.half_width, o.grid.mesh});
  std::mt19937_64 rng(o.seed);
  std::ostringstream csv;
  csv << "sample_id,name,p,alpha,lhs,rhs,slack\n";
  long violations = 0;
  auto row = [&](int id, std::string_view name, double p, double alpha, double lhs, double rhs) {
    csv << id << ',' << name << ',' << format_double(p) << ',' << format_double(alpha) << ',' << format_double(lhs)
        << ',' << format_double(rhs) << ',' << format_double(rhs - lhs) << '\n';
  };
  auto report = [&](int id, const InequalityReport& r) {
    row(id, to_string(r.name), r.p, r.alpha, r.lhs, r.rhs);
    if (r.violated()) ++violations;
  };

  auto with_p = [](double p, double alpha = 0.0) {
    InequalityParams params;
    params.p = p;
    params.alpha = alpha;
    return params;
  };
  const double ps[] = {4.0, 5.0, 6.0};
  for (int id = 0; id < o.samples; ++id) {
    auto u = random_function(graph, rng);
    if (u.is_zero() || kinetic(u) == 0.0) continue;
    for (double p : ps) report(id, check_inequality(u, InequalityKind::GN1D, with_p(p)));
    report(id, check_inequality(u, InequalityKind::GNInfty));
    report(id, check_inequality(u, InequalityKind::Sobolev2D));
    for (double p : ps) report(id, check_inequality(u, InequalityKind::GN2D, with_p(p)));
    for (double p : ps) {
      const auto [lo, hi] = interdimensional_alpha_range(p);
      for (int k = 0; k < o.alphas; ++k) {
        const double a = lo + (hi - lo) * k / (o.alphas - 1);
        report(id, check_inequality(u, InequalityKind::Interdimensional, with_p(p, a)));
      }
    }
    for (double p : ps) report(id, check_inequality(u, InequalityKind::GNCritical, with_p(p)));

    // Rearrangement comparisons for |u|, judged with a relative tolerance.
    GraphFunction a = u;
    for (auto& v : a.values()) v = std::abs(v);
    const auto r = symmetric_rearrangement(a);
    const double d_hat = std::sqrt(r.kinetic());
    const double d = std::sqrt(kinetic(a));
    row(id, "PolyaSzego", 2.0, 1.0, d_hat, d);
    if (d_hat > d * (1.0 + 1e-6)) ++violations;
    const double e_hat = 0.5 * r.kinetic() - r.lp_power(6.0) / 6.0;
    const double e = 0.5 * kinetic(a) - lp_power(a, 6.0) / 6.0;
    row(id, "RearrangedEnergy", 6.0, 1.0, e_hat, e);
    if (e_hat > e + 1e-6 * (1.0 + std::abs(e))) ++violations;
  }
  emit(csv.str(), o.out, out);
  if (violations > 0) {
    err << "check: " << violations << " violated reports\n";
    return kExitComputation;
  }
  return kExitOk;
}

// ---- testfn ---------------------------------------------------------------

struct TestfnOpts {
  std::string family{"exp"};
  double eps{0.5};
  double mass{1.0};
  double p{4.0};
  double soliton_scale{0.1};
  double trunc_tol{1e-12};
  GridOpts grid{30, 16};
  std::string out{"testfn"};
};

int run_testfn(const TestfnOpts& o, std::ostream& out) {
  const auto graph = build_grid({o.grid.half_width, o.grid.mesh});
  if (!(o.p >= 1.0)) throw std::invalid_argument("--p must be >= 1");
  FlatJson j;
  j.str("family", o.family);
  std::optional<GraphFunction> u;
  if (o.family == "exp") {
    const auto params = make_exp_family(o.eps, o.mass);
    u = u_eps(graph, params, o.trunc_tol);
    const auto cf = u_eps_closed_forms(params, o.p);
    j.num("eps", o.eps).num("mu", o.mass).num("kappa", params.kappa).num("p", o.p);
    j.num("closed_mass", cf.mass).num("discrete_mass", mass(*u));
    j.num("closed_kinetic", cf.kinetic).num("discrete_kinetic", kinetic(*u));
    j.num("closed_lp_power", cf.lp_power).num("discrete_lp_power", lp_power(*u, o.p));
  } else if (o.family == "edge-soliton") {
    u = compact_edge_soliton(graph, o.soliton_scale);
    const auto sc = soliton_constants();
    const double lambda = 1.0 / (o.soliton_scale * o.soliton_scale);
    const double kin1 = soliton_lp_power(1.0, 6.0) / (sc.mu_R * sc.mu_R * sc.K_R);
    j.num("eps_scale", o.soliton_scale).num("p", o.p);
    j.num("closed_mass", sc.mu_R).num("discrete_mass", mass(*u));
    j.num("closed_kinetic", lambda * lambda * kin1).num("discrete_kinetic", kinetic(*u));
    j.num("closed_lp_power", soliton_lp_power(lambda, o.p)).num("discrete_lp_power", lp_power(*u, o.p));
    j.num("closed_q6", sc.K_R).num("discrete_q6", quotient_unchecked(*u, 6.0));
  } else {
    throw std::invalid_argument("--family must be exp or edge-soliton");
  }
  j.integer("L", o.grid.half_width).integer("m", o.grid.mesh);
  dump_function(*u, o.out);
  emit(j.dump(), o.out + ".compare.json", out);
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground states and Gagliardo-Nirenberg constants on the square grid graph", "gridnls"};
  app.require_subcommand(1);
  std::string config_path;
  auto config_flag = [&](CLI::App* sub) { sub->add_option("--config", config_path, "JSON file of flag defaults"); };

  MinimizeOpts mo;
  auto* mn = app.add_subcommand("minimize", "mass-constrained energy minimization");
  mn->add_option("--p", mo.p, "nonlinearity exponent in (2, 6]")->capture_default_str();
  mn->add_option("--mass", mo.mass, "target mass mu")->capture_default_str();
  add_grid(mn, mo.grid);
  mn->add_option("--init", mo.init, "exp | edge-soliton")->capture_default_str();
  mn->add_option("--init-state", mo.init_state, "start from a dumped function STEM");
  mn->add_option("--eps", mo.eps, "decay rate of the exp start")->capture_default_str();
  mn->add_option("--soliton-scale", mo.soliton_scale, "squeeze of the edge-soliton start")->capture_default_str();
  mn->add_option("--max-iters", mo.max_iters)->capture_default_str();
  mn->add_option("--grad-tol", mo.grad_tol)->capture_default_str();
  mn->add_option("--perturbation", mo.perturbation, "relative seeded noise on the start")->capture_default_str();
  mn->add_option("--seed", mo.seed)->capture_default_str();
  mn->add_option("--out", mo.out, "result JSON path");
  mn->add_option("--state", mo.state, "dump the final state to STEM.csv/STEM.json");
  config_flag(mn);

  KpOpts ko;
  auto* kp = app.add_subcommand("kp", "estimate the optimal constant K_p by quotient ascent");
  kp->add_option("--p", ko.p, "exponent in [4, 6]")->capture_default_str();
  add_grid(kp, ko.grid);
  kp->add_option("--samples", ko.samples, "random certification samples")->capture_default_str();
  kp->add_option("--max-iters", ko.max_iters, "ascent iterations per start")->capture_default_str();
  kp->add_option("--grad-tol", ko.grad_tol)->capture_default_str();
  kp->add_option("--seed", ko.seed)->capture_default_str();
  kp->add_option("--out", ko.out, "result JSON path");
  kp->add_option("--state", ko.state, "dump the maximizer to STEM.csv/STEM.json");
  config_flag(kp);

  CriticalOpts co;
  auto* cm = app.add_subcommand("critical-mass", "estimate the critical mass mu_p");
  cm->add_option("--p", co.p, "exponent in [4, 6]")->capture_default_str();
  cm->add_option("--method", co.method, "formula | bisection")->capture_default_str();
  cm->add_option("--kp", co.kp, "use this K_p in the formula instead of estimating it");
  add_grid(cm, co.grid);
  cm->add_option("--samples", co.samples, "certification samples for the K_p estimate")->capture_default_str();
  cm->add_option("--max-iters", co.max_iters, "iterations per bisection probe")->capture_default_str();
  cm->add_option("--grad-tol", co.grad_tol)->capture_default_str();
  cm->add_option("--width", co.width, "final bisection bracket width")->capture_default_str();
  cm->add_option("--seed", co.seed)->capture_default_str();
  cm->add_option("--out", co.out, "result JSON path");
  config_flag(cm);

  SweepOpts so;
  auto* sw = app.add_subcommand("sweep", "(p, mu) phase diagram");
  sw->add_option("--p-range", so.p_range, "LO HI STEP")->expected(3)->required();
  sw->add_option("--mu-range", so.mu_range, "LO HI STEP")->expected(3)->required();
  sw->add_flag("--relative", so.relative, "mu values are multiples of the estimated mu_p");
  add_grid(sw, so.grid);
  sw->add_option("--init", so.init, "exp | edge-soliton")->capture_default_str();
  sw->add_option("--eps", so.eps)->capture_default_str();
  sw->add_option("--soliton-scale", so.soliton_scale)->capture_default_str();
  sw->add_option("--max-iters", so.max_iters)->capture_default_str();
  sw->add_option("--grad-tol", so.grad_tol)->capture_default_str();
  sw->add_option("--seed", so.seed)->capture_default_str();
  sw->add_option("--threads", so.threads, "worker count (0: GRIDNLS_THREADS or all cores)")->capture_default_str();
  sw->add_option("--out", so.out, "CSV path");
  config_flag(sw);

  CheckOpts ch;
  auto* ck = app.add_subcommand("check", "inequality reports over random functions");
  ck->add_option("--samples", ch.samples)->capture_default_str();
  ck->add_option("--seed", ch.seed)->capture_default_str();
  add_grid(ck, ch.grid);
  ck->add_option("--alphas", ch.alphas, "interdimensional exponents per p")->capture_default_str();
  ck->add_option("--out", ch.out, "CSV path");
  config_flag(ck);

  TestfnOpts to;
  auto* tf = app.add_subcommand("testfn", "dump a test function with closed-form comparison");
  tf->add_option("--family", to.family, "exp | edge-soliton")->capture_default_str();
  tf->add_option("--eps", to.eps)->capture_default_str();
  tf->add_option("--mass", to.mass)->capture_default_str();
  tf->add_option("--p", to.p, "exponent of the L^p comparison")->capture_default_str();
  tf->add_option("--soliton-scale", to.soliton_scale)->capture_default_str();
  tf->add_option("--trunc-tol", to.trunc_tol, "required bound on exp(-2 eps L)")->capture_default_str();
  add_grid(tf, to.grid);
  tf->add_option("--out", to.out, "output STEM")->capture_default_str();
  config_flag(tf);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = merge_config(std::move(args));
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "gridnls: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (mn->parsed()) return run_minimize(mo, out);
    if (kp->parsed()) return run_kp(ko, out);
    if (cm->parsed()) return run_critical(co, out);
    if (sw->parsed()) return run_sweep_cmd(so, out, err);
    if (ck->parsed()) return run_check(ch, out, err);
    if (tf->parsed()) return run_testfn(to, out);
  } catch (const UsageError& e) {
    err << "gridnls: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "gridnls: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "gridnls: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}

}  // namespace gridnls
