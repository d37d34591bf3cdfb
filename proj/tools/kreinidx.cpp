// kreinidx: command-line front end for the Krein-index toolkit.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "krein/errors.hpp"
#include "krein/io.hpp"
#include "krein/operators.hpp"
#include "krein/spectra.hpp"
#include "krein/verdicts.hpp"
#include "krein/waves.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace krein;

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kWarning = 2;
constexpr int kTheory = 3;
constexpr int kUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model = "fkdv";
  double s = 2.0;
  double p = 0.0;
  double c = 0.0;
  int n = 0;
  double half_length = 0.0;
  double tol = 0.0;
  std::string out = ".";
  std::string format = "csv";
  std::string config;
  // sweep
  std::string axis = "p";
  double from = 0.0, to = 0.0;
  int steps = 11;
  // dump-operator
  std::string op = "L";
  double eps = 0.0;
  // self-check
  std::string case_name;
  // optional tolerance overrides
  std::map<std::string, double> tolerances;
};

// Options whose value may also come from the --config file.
struct Bound {
  CLI::Option* opt;
  std::function<void(const json&)> set;
};

class Options {
 public:
  explicit Options(RunConfig& cfg) : cfg_(cfg) {}

  void common(CLI::App* sub, bool needs_wave) {
    auto& m = bound_[sub];
    m["model"] = {sub->add_option("--model", cfg_.model, "fkdv, fbbm, normalized or schrodinger"),
                  [this](const json& j) { cfg_.model = j.get<std::string>(); }};
    m["s"] = {sub->add_option("--s", cfg_.s, "dispersion order in (0, 2]"),
              [this](const json& j) { cfg_.s = j.get<double>(); }};
    m["p"] = {sub->add_option("--p", cfg_.p, "nonlinearity exponent"),
              [this](const json& j) { cfg_.p = j.get<double>(); }};
    m["c"] = {sub->add_option("--c", cfg_.c, "wave speed (Schrodinger shift)"),
              [this](const json& j) { cfg_.c = j.get<double>(); }};
    m["n"] = {sub->add_option("--n", cfg_.n, "grid points (even, >= 8)"),
              [this](const json& j) { cfg_.n = j.get<int>(); }};
    m["half_length"] = {sub->add_option("--half-length", cfg_.half_length, "domain is [-l, l)"),
                        [this](const json& j) { cfg_.half_length = j.get<double>(); }};
    m["tol"] = {sub->add_option("--tol", cfg_.tol, "wave solver residual target"),
                [this](const json& j) { cfg_.tol = j.get<double>(); }};
    m["out"] = {sub->add_option("--out", cfg_.out, "output directory"),
                [this](const json& j) { cfg_.out = j.get<std::string>(); }};
    m["format"] = {sub->add_option("--format", cfg_.format, "csv or json"),
                   [this](const json& j) { cfg_.format = j.get<std::string>(); }};
    sub->add_option("--config", cfg_.config, "JSON config file (flags take precedence)");
    needs_wave_[sub] = needs_wave;
  }

  void add(CLI::App* sub, const std::string& key, CLI::Option* opt,
           std::function<void(const json&)> set) {
    bound_[sub][key] = {opt, std::move(set)};
  }

  // Fills options not given on the command line from the config file, then validates.
  void finish(CLI::App* sub) {
    if (!cfg_.config.empty()) {
      std::ifstream in(cfg_.config);
      if (!in) throw UsageError("cannot read config file " + cfg_.config);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError(std::string("bad config file: ") + e.what());
      }
      for (auto& [key, b] : bound_[sub]) {
        if (b.opt->count() > 0 || !j.contains(key)) continue;
        try {
          b.set(j.at(key));
        } catch (const json::exception&) {
          throw UsageError("config key '" + key + "' has the wrong type");
        }
        given_.insert(key);
      }
      if (j.contains("tolerances")) {
        for (auto& [k, v] : j.at("tolerances").items()) cfg_.tolerances[k] = v.get<double>();
      }
    }
    for (auto& [key, b] : bound_[sub])
      if (b.opt->count() > 0) given_.insert(key);
    validate(sub);
  }

  bool given(const std::string& key) const { return given_.count(key) > 0; }

 private:
  void validate(CLI::App* sub) {
    static const std::set<std::string> models = {"fkdv", "fbbm", "normalized", "schrodinger"};
    if (!models.count(cfg_.model)) throw UsageError("unknown model '" + cfg_.model + "'");
    if (cfg_.format != "csv" && cfg_.format != "json")
      throw UsageError("format must be csv or json");
    if (!needs_wave_[sub]) return;
    if (cfg_.model != "schrodinger") {
      if (!given("p")) throw UsageError("--p is required");
      if (!(cfg_.s > 0.0 && cfg_.s <= 2.0)) throw UsageError("--s must lie in (0, 2]");
    }
    if (!given("c")) cfg_.c = cfg_.model == "fbbm" ? 2.0 : cfg_.model == "schrodinger" ? 0.5 : 1.0;
    if (given("n") && (cfg_.n < 8 || cfg_.n % 2 != 0))
      throw UsageError("--n must be even and at least 8");
    if (given("half_length") && !(cfg_.half_length > 0.0))
      throw UsageError("--half-length must be positive");
    if (given("tol") && !(cfg_.tol > 0.0)) throw UsageError("--tol must be positive");
  }

  RunConfig& cfg_;
  std::map<CLI::App*, std::map<std::string, Bound>> bound_;
  std::map<CLI::App*, bool> needs_wave_;
  std::set<std::string> given_;
};

Numerics numerics_for(const RunConfig& cfg, const Options& o, double s) {
  Numerics nm = default_numerics(s);
  if (o.given("n")) nm.n = cfg.n;
  if (o.given("half_length")) nm.half_length = cfg.half_length;
  if (o.given("tol")) nm.solver.tol = cfg.tol;
  for (const auto& [k, v] : cfg.tolerances) {
    if (k == "zero_rel") nm.zero_rel = v;
    else if (k == "degeneracy_rel") nm.degeneracy_rel = v;
    else if (k == "bbm_dc") nm.bbm_dc = v;
    else throw UsageError("unknown tolerance '" + k + "'");
  }
  nm.strict = false;
  return nm;
}

void write(const RunConfig& cfg, const std::string& name, const std::string& content) {
  io::write_atomic(fs::path(cfg.out) / name, content);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int result_code(const KreinIndexResult& r) {
  if (r.theory_violation) return kTheory;
  if (r.accuracy_warning) return kWarning;
  return kOk;
}

void print_diagnostics(const KreinIndexResult& r) {
  for (const auto& d : r.diagnostics) std::cerr << "note: " << d << "\n";
}

KreinIndexResult run_verdict(const RunConfig& cfg, const Options& o, bool keep) {
  Numerics nm = numerics_for(cfg, o, cfg.s);
  nm.keep_spectrum = keep;
  if (cfg.model == "fkdv") return kdv_verdict(cfg.s, cfg.p, cfg.c, nm);
  if (cfg.model == "fbbm") return bbm_verdict(cfg.s, cfg.p, cfg.c, nm);
  throw UsageError("this command needs --model fkdv or fbbm");
}

int cmd_solve_wave(const RunConfig& cfg, const Options& o) {
  if (cfg.model == "schrodinger") throw UsageError("solve-wave needs a wave model");
  const Numerics nm = numerics_for(cfg, o, cfg.s);
  const GridPtr g = make_grid(nm.n, nm.half_length);
  SolverOptions opts = nm.solver;
  const WaveProfile U = cfg.model == "fkdv"   ? kdv_wave_on(g, cfg.s, cfg.p, cfg.c, opts)
                        : cfg.model == "fbbm" ? bbm_wave_on(g, cfg.s, cfg.p, cfg.c, opts)
                                              : solve_ground_state(cfg.s, cfg.p, g, opts);
  json meta = io::profile_metadata(U, opts.tol);
  if (cfg.format == "json") {
    meta["x"] = json::array();
    meta["U"] = json::array();
    for (int j = 0; j < g->n(); ++j) {
      meta["x"].push_back(g->point(j));
      meta["U"].push_back(U.values()[j]);
    }
    write(cfg, "profile.json", dump(meta));
  } else {
    write(cfg, "profile.csv", io::profile_csv(U));
    write(cfg, "profile.meta.json", dump(meta));
  }
  std::cout << "residual=" << io::format_double(U.residual_norm)
            << " peak=" << io::format_double(U.peak()) << " iterations=" << U.iterations << "\n";
  for (const auto& w : U.warnings) std::cerr << "note: " << w << "\n";
  const bool ok = U.residual_norm <= 10.0 * opts.tol && !U.truncation_warning;
  return ok ? kOk : kWarning;
}

int cmd_index(const RunConfig& cfg, const Options& o) {
  const KreinIndexResult r = run_verdict(cfg, o, false);
  if (cfg.format == "json") {
    write(cfg, "index.json", dump(io::result_json(r)));
  } else {
    SweepResult one;
    one.points.push_back({cfg.p, r.theory_violation ? "theory_violation" : "ok", r});
    write(cfg, "index.csv", io::sweep_csv(one, cfg.s, cfg.p, cfg.c, SweepAxis::P, r.model));
    write(cfg, "index.json", dump(io::result_json(r)));
  }
  std::cout << "K_Ham=" << r.K_direct << " verdict=" << to_string(r.verdict)
            << " n_L=" << r.n_L << " K_formula=" << r.K_formula
            << " slope=" << io::format_double(r.slope) << "\n";
  print_diagnostics(r);
  return result_code(r);
}

int cmd_spectrum(const RunConfig& cfg, const Options& o) {
  KreinIndexResult r;
  if (cfg.model == "schrodinger") {
    const Numerics nm = numerics_for(cfg, o, 2.0);
    const GridPtr g = make_grid(nm.n, nm.half_length);
    const RealField V = RealField::sample(g, [](double x) { return 2.0 / std::pow(std::cosh(x), 2); });
    const DenseMatrix A = assemble(schrodinger_operator(V, cfg.c));
    const HamiltonianSpectrum H = hamiltonian_spectrum(A, HamKind::KDV);
    const SymmetricEigen e = symmetric_eigen(H.restricted_form, 0, false);
    const KreinClassification kc = classify_krein(H, default_krein_tolerances(H, e.scale), 0);
    r.eigenvalues.assign(H.eigenvalues.data(), H.eigenvalues.data() + H.eigenvalues.size());
    r.classes = kc.classes;
    r.form_values.assign(kc.form_values.data(), kc.form_values.data() + kc.form_values.size());
    r.k_r = kc.k_r;
    r.k_c = kc.k_c;
    r.k_i_minus = kc.k_i_minus;
    r.K_direct = kc.k_ham();
  } else {
    r = run_verdict(cfg, o, true);
  }
  if (cfg.format == "json")
    write(cfg, "spectrum.json", dump(io::spectrum_json(r)));
  else
    write(cfg, "spectrum.csv", io::spectrum_csv(r));
  std::cout << "eigenvalues=" << r.eigenvalues.size() << " k_r=" << r.k_r << " k_c=" << r.k_c
            << " k_i_minus=" << r.k_i_minus << "\n";
  if (cfg.model == "schrodinger") return kOk;
  print_diagnostics(r);
  return result_code(r);
}

int cmd_dump_operator(const RunConfig& cfg, const Options& o) {
  const Numerics nm = numerics_for(cfg, o, cfg.model == "schrodinger" ? 2.0 : cfg.s);
  const GridPtr g = make_grid(nm.n, nm.half_length);
  std::optional<LinOperator> L;
  if (cfg.model == "schrodinger") {
    const RealField V = RealField::sample(g, [](double x) { return 2.0 / std::pow(std::cosh(x), 2); });
    L = schrodinger_operator(V, cfg.c);
  } else if (cfg.model == "fbbm") {
    L = bbm_linearization(bbm_wave_on(g, cfg.s, cfg.p, cfg.c, nm.solver));
  } else if (cfg.model == "fkdv") {
    L = kdv_linearization(kdv_wave_on(g, cfg.s, cfg.p, cfg.c, nm.solver));
  } else {
    L = kdv_linearization(solve_ground_state(cfg.s, cfg.p, g, nm.solver));
  }
  DenseMatrix A;
  if (cfg.op == "L") {
    A = assemble(*L);
  } else if (cfg.op == "sandwich") {
    A = sandwich(*L, cfg.eps);
  } else if (cfg.op == "symmetrized") {
    if (cfg.model != "fbbm") throw UsageError("--operator symmetrized needs --model fbbm");
    A = bbm_symmetrize(*L);
  } else {
    throw UsageError("--operator must be L, sandwich or symmetrized");
  }
  write(cfg, "operator.bin", io::operator_bytes(A));
  write(cfg, "operator.json", dump(io::operator_header(A)));
  std::cout << "order=" << A.order() << " label=" << A.label << "\n";
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, const Options& o) {
  if (cfg.model != "fkdv" && cfg.model != "fbbm") throw UsageError("sweep needs --model fkdv or fbbm");
  if (!o.given("from") || !o.given("to")) throw UsageError("sweep needs --from and --to");
  if (cfg.steps < 0) throw UsageError("--steps must be non-negative");
  const SweepAxis axis = cfg.axis == "p" ? SweepAxis::P
                         : cfg.axis == "c" ? SweepAxis::C
                         : cfg.axis == "s" ? SweepAxis::S
                                           : throw UsageError("--axis must be p, c or s");
  if (axis != SweepAxis::P && !o.given("p")) throw UsageError("--p is required");
  std::optional<Numerics> nm;
  if (o.given("n") || o.given("half_length") || o.given("tol") || !cfg.tolerances.empty())
    nm = numerics_for(cfg, o, cfg.s);
  const WaveModel model = cfg.model == "fbbm" ? WaveModel::FBBM : WaveModel::FKDV;
  const SweepResult sw = sweep(axis, cfg.from, cfg.to, cfg.steps, cfg.s, cfg.p, cfg.c, model, nm);
  if (cfg.format == "json")
    write(cfg, "sweep.json", dump(io::sweep_json(sw)));
  else
    write(cfg, "sweep.csv", io::sweep_csv(sw, cfg.s, cfg.p, cfg.c, axis, model));
  const std::string summary = io::flip_summary(sw);
  write(cfg, "sweep_bracket.txt", summary);
  std::cout << summary;
  int code = kOk;
  for (const auto& pt : sw.points) {
    if (!pt.result) {
      std::cerr << "point " << io::format_double(pt.value) << " failed: " << pt.status << "\n";
      code = std::max(code, kNumerical);
    } else if (pt.result->theory_violation) {
      code = kTheory;
    } else if (pt.result->accuracy_warning && code == kOk) {
      code = kWarning;
    }
  }
  return code;
}

int cmd_self_check(const RunConfig& cfg) {
  std::vector<std::string> cases;
  if (cfg.case_name == "all") {
    cases = self_check_cases();
  } else {
    const auto known = self_check_cases();
    if (std::find(known.begin(), known.end(), cfg.case_name) == known.end())
      throw UsageError("unknown self-check case '" + cfg.case_name + "'");
    cases = {cfg.case_name};
  }
  bool ok = true;
  for (const auto& name : cases) {
    const SelfCheckReport rep = self_check(name);
    for (const auto& a : rep.assertions)
      std::printf("%-4s  %-18s  %-48s  %s\n", a.passed ? "PASS" : "FAIL", name.c_str(),
                  a.name.c_str(), a.detail.c_str());
    ok = ok && rep.all_passed();
  }
  return ok ? kOk : kTheory;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian-Krein index toolkit for fractional KdV and BBM solitary waves"};
  app.require_subcommand(1);
  RunConfig cfg;
  Options opts(cfg);

  auto* solve = app.add_subcommand("solve-wave", "solve for a solitary-wave profile");
  opts.common(solve, true);
  auto* index = app.add_subcommand("index", "compute the index and the stability verdict");
  opts.common(index, true);
  auto* spectrum = app.add_subcommand("spectrum", "export the classified Hamiltonian spectrum");
  opts.common(spectrum, true);
  auto* dumpop = app.add_subcommand("dump-operator", "write an assembled operator matrix");
  opts.common(dumpop, true);
  opts.add(dumpop, "operator", dumpop->add_option("--operator", cfg.op, "L, sandwich or symmetrized"),
           [&](const json& j) { cfg.op = j.get<std::string>(); });
  opts.add(dumpop, "eps", dumpop->add_option("--eps", cfg.eps, "sandwich regularization"),
           [&](const json& j) { cfg.eps = j.get<double>(); });
  auto* sw = app.add_subcommand("sweep", "sweep one parameter and locate verdict flips");
  opts.common(sw, false);
  opts.add(sw, "axis", sw->add_option("--axis", cfg.axis, "p, c or s"),
           [&](const json& j) { cfg.axis = j.get<std::string>(); });
  opts.add(sw, "from", sw->add_option("--from", cfg.from, "first value"),
           [&](const json& j) { cfg.from = j.get<double>(); });
  opts.add(sw, "to", sw->add_option("--to", cfg.to, "last value"),
           [&](const json& j) { cfg.to = j.get<double>(); });
  opts.add(sw, "steps", sw->add_option("--steps", cfg.steps, "number of points"),
           [&](const json& j) { cfg.steps = j.get<int>(); });
  auto* check = app.add_subcommand("self-check", "run a named theory-consistency case");
  check->add_option("case", cfg.case_name, "gkdv-p2, gkdv-p5, schrodinger-sech2, bo or all")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (check->parsed()) return cmd_self_check(cfg);
    CLI::App* sub = app.get_subcommands().front();
    opts.finish(sub);
    if (sub == sw) {
      if (cfg.axis == "p" && !opts.given("p")) cfg.p = cfg.from;
      if (!opts.given("c")) cfg.c = cfg.model == "fbbm" ? 2.0 : 1.0;
      return cmd_sweep(cfg, opts);
    }
    if (sub == solve) return cmd_solve_wave(cfg, opts);
    if (sub == index) return cmd_index(cfg, opts);
    if (sub == spectrum) return cmd_spectrum(cfg, opts);
    if (sub == dumpop) return cmd_dump_operator(cfg, opts);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const TheoryViolation& e) {
    std::cerr << "theory violation: " << e.what() << "\n";
    return kTheory;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
