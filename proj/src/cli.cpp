#include "lieint/cli.hpp"

#include "lieint/config.hpp"
#include "lieint/csv.hpp"
#include "lieint/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>

namespace lieint {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string out;
  int steps = 0;
  long long seed = -1;
  int jobs = 1;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string vec(const Eigen::VectorXd& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v(i));
  return s + ")";
}

std::string complex_text(std::complex<double> z) {
  return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) + "i";
}

RunConfig load(const Options& opt, bool required = true) {
  RunConfig cfg;
  if (opt.config.empty()) {
    if (required) throw ValidationError("a config file is required (positional or --config)");
    cfg = milne_pinney_config();
  } else {
    cfg = load_config(opt.config);
  }
  if (opt.steps != 0) {
    if (opt.steps < 16) throw ValidationError("--steps must be at least 16");
    cfg.numerics.steps_per_period = opt.steps;
  }
  if (opt.seed >= 0) cfg.numerics.seed = static_cast<std::uint64_t>(opt.seed);
  return cfg;
}

fs::path out_dir(const Options& opt, const RunConfig& cfg) {
  if (!opt.out.empty()) return opt.out;
  return cfg.output_dir.value_or(".");
}

int horizon_steps(const RunConfig& cfg, int per_period) {
  return std::max(1, static_cast<int>(std::lround(per_period * cfg.numerics.horizon_periods)));
}

void write(std::ostream& out, const fs::path& path, const std::string& content) {
  write_text_file(path, content);
  out << "wrote " << path.string() << "\n";
}

void print_classification(std::ostream& out, const FloquetClassification& c) {
  out << "multipliers:\n";
  for (const auto& e : c.eigenpairs) {
    out << "  " << complex_text(e.value) << "  |lambda| = " << num(std::abs(e.value)) << "  admissibility "
        << num(e.admissibility) << "  " << to_string(e.tag) << "\n";
  }
  out << "max ||lambda| - 1| = " << num(c.max_modulus_deviation()) << "\n";
}

void print_generators(std::ostream& out, const GeneratorSearch& s) {
  out << "periodic generators: " << s.generators.size() << "\n";
  for (const auto& g : s.generators) {
    out << "  " << vec(g.vector) << "  period " << g.period_multiple << "T  " << to_string(g.provenance)
        << "  residual " << num(g.residual) << "\n";
  }
  for (const auto& k : s.skipped) out << "  skipped eigenpair " << k.source + 1 << ": " << k.reason << "\n";
}

std::vector<TimedVector> xi_over_horizon(const FirstIntegral& integral, double t_end, int steps) {
  std::vector<TimedVector> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) {
    const double t = k == steps ? t_end : t_end * k / steps;
    out.push_back({t, integral.xi(t)});
  }
  return out;
}

int algebra_check(const Options& opt, std::ostream& out) {
  const RunConfig cfg = load(opt);
  const LieAlgebra alg = build_algebra(cfg);
  const int n = alg.dim();
  out << "dimension: " << n << "\n";
  out << "antisymmetry: ok\n";
  out << "jacobi residual: " << num(alg.jacobi_residual()) << "\n";
  out << "killing gram:\n";
  for (int i = 0; i < n; ++i) out << "  " << vec(alg.killing_gram().row(i).transpose()) << "\n";
  const CenterBasis z = center(alg);
  out << "center dimension: " << z.size() << "\n";
  for (int i = 0; i < z.size(); ++i) out << "  " << vec(z.vector(i)) << "\n";
  out << "semisimple: " << (is_semisimple(alg) ? "yes" : "no") << "\n";
  return kExitOk;
}

int euler_run(const Options& opt, std::ostream& out) {
  const RunConfig cfg = load(opt);
  const LieAlgebra alg = build_algebra(cfg);
  const CoefficientCurve curve = build_curve(cfg);
  AlgebraVector xi0 = alg.basis_vector(0);
  if (cfg.numerics.xi0) {
    const auto& v = *cfg.numerics.xi0;
    if (static_cast<int>(v.size()) != alg.dim()) {
      throw DimensionMismatch("numerics.xi0", static_cast<std::size_t>(alg.dim()), v.size());
    }
    xi0 = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  const double t_end = cfg.numerics.horizon_periods * curve.period();
  const auto nodes = integrate_euler(alg, curve, xi0, t_end, horizon_steps(cfg, cfg.numerics.steps_per_period));
  double drift = 0.0;
  const double k0 = alg.killing(xi0, xi0);
  for (const auto& node : nodes) drift = std::max(drift, std::abs(alg.killing(node.value, node.value) - k0));
  out << "xi(" << num(t_end) << ") = " << vec(nodes.back().value) << "\n";
  out << "max Killing-norm drift: " << num(drift) << "\n";
  write(out, out_dir(opt, cfg) / "xi.csv", xi_csv(nodes));
  return kExitOk;
}

int floquet_analyze(const Options& opt, std::ostream& out) {
  const RunConfig cfg = load(opt);
  const LieAlgebra alg = build_algebra(cfg);
  const FloquetAnalysis a = analyze_floquet(alg, build_curve(cfg), cfg.numerics.steps_per_period);
  out << "monodromy:\n";
  const AlgebraOperator& M = a.fund.monodromy();
  for (Eigen::Index i = 0; i < M.rows(); ++i) out << "  " << vec(M.row(i).transpose()) << "\n";
  print_classification(out, a.classification);
  out << "center dimension: " << a.center.size() << "\n";
  print_generators(out, a.search);
  const fs::path dir = out_dir(opt, cfg);
  write(out, dir / "classification.csv", classification_csv(a.classification));
  write(out, dir / "generators.csv", generators_csv(a.search.generators, alg.dim()));
  return kExitOk;
}

int integral_find(const Options& opt, std::ostream& out) {
  const RunConfig cfg = load(opt);
  const LieHamiltonianSystem sys = build_system(cfg);
  out << "closure residual: " << num(sys.closure_residual()) << "\n";
  const PeriodicIntegral r = find_periodic_integral(sys, cfg.numerics.steps_per_period);
  print_classification(out, r.analysis.classification);
  print_generators(out, r.analysis.search);
  out << "selected generator: " << vec(r.generator.vector) << " (" << to_string(r.generator.provenance)
      << ", period " << r.generator.period_multiple << "T)\n";
  const int steps = cfg.numerics.steps_per_period * r.generator.period_multiple;
  const fs::path dir = out_dir(opt, cfg);
  write(out, dir / "xi.csv", xi_csv(xi_over_horizon(r.integral, sys.curve().period() * r.generator.period_multiple, steps)));
  write(out, dir / "generators.csv", generators_csv(r.analysis.search.generators, sys.algebra().dim()));
  write(out, dir / "classification.csv", classification_csv(r.analysis.classification));
  return kExitOk;
}

struct Verified {
  ConservationReport report;
  double t_end;
  int steps;
};

Verified verify_along_flow(const RunConfig& cfg, const LieHamiltonianSystem& sys, const FirstIntegral& integral,
                           const fs::path& trajectory_path, std::ostream& out) {
  const double t_end = cfg.numerics.horizon_periods * sys.curve().period();
  const int steps = horizon_steps(cfg, cfg.numerics.flow_steps());
  const PhasePoint x0 = initial_point(cfg, sys.space());
  const PhaseTrajectory traj = integrate_flow(sys, x0, t_end, steps);
  const ConservationReport rep = conservation_report(integral, traj);
  write(out, trajectory_path,
        trajectory_csv(traj, sys.space().degrees(),
                       {[&](double t, const PhasePoint& x) { return integral.value(t, x); }}));
  return {rep, t_end, steps};
}

void print_conservation(std::ostream& out, const Verified& v) {
  out << "conservation: I(0) = " << num(v.report.initial_value) << ", max |I(t) - I(0)| = "
      << num(v.report.max_abs_drift) << ", relative drift = " << num(v.report.relative_drift) << " over [0, "
      << num(v.t_end) << "] with " << v.steps << " steps\n";
}

int integral_verify(const Options& opt, std::ostream& out) {
  const RunConfig cfg = load(opt);
  const LieHamiltonianSystem sys = build_system(cfg);
  std::optional<FirstIntegral> integral;
  if (cfg.numerics.alpha) {
    const auto& v = *cfg.numerics.alpha;
    const FundamentalSolution fund = fundamental_solution(sys.algebra(), sys.curve(), cfg.numerics.steps_per_period);
    integral.emplace(fund, sys.basis(), Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  } else {
    integral.emplace(find_periodic_integral(sys, cfg.numerics.steps_per_period).integral);
  }
  out << "generator: " << vec(integral->alpha()) << "\n";
  const Verified v = verify_along_flow(cfg, sys, *integral, out_dir(opt, cfg) / "trajectory.csv", out);
  print_conservation(out, v);
  return kExitOk;
}

int mp_demo(const Options& opt, std::ostream& out) {
  const RunConfig cfg = load(opt, false);
  if (cfg.preset != "milne_pinney") throw ValidationError("mp demo needs a milne_pinney config");
  const LieHamiltonianSystem sys = build_system(cfg);
  out << "Milne-Pinney: c = " << num(cfg.c) << ", omega(t) = " << cfg.omega << "\n";
  out << "closure residual: " << num(sys.closure_residual()) << "\n";
  const PeriodicIntegral r = find_periodic_integral(sys, cfg.numerics.steps_per_period);
  print_classification(out, r.analysis.classification);
  out << "selected generator: " << vec(r.generator.vector) << " (" << to_string(r.generator.provenance)
      << ", period " << r.generator.period_multiple << "T)\n";
  const fs::path dir = out_dir(opt, cfg);
  write(out, dir / "mp_classification.csv", classification_csv(r.analysis.classification));
  const double t_end = cfg.numerics.horizon_periods * sys.curve().period();
  write(out, dir / "mp_xi.csv", xi_csv(xi_over_horizon(r.integral, t_end, horizon_steps(cfg, cfg.numerics.steps_per_period))));
  print_conservation(out, verify_along_flow(cfg, sys, r.integral, dir / "mp_trajectory.csv", out));
  return kExitOk;
}

int sweep_command(const Options& opt, std::ostream& out) {
  const RunConfig cfg = load(opt);
  if (!cfg.sweep) throw ValidationError("config has no \"sweep\" section");
  const auto cells = run_sweep(cfg, *cfg.sweep, opt.jobs);
  const auto failed = std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return !c.error.empty(); });
  out << "sweep: " << cells.size() << " cells, " << failed << " failed\n";
  write(out, out_dir(opt, cfg) / "sweep.csv", sweep_csv(cfg, *cfg.sweep, cells));
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Periodic first integrals of Lie-Hamiltonian systems", "lieint"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("path,--config", opt.config, "Run configuration (JSON)");
    cmd->add_option("--out", opt.out, "Output directory");
    cmd->add_option("--steps", opt.steps, "RK4 steps per period");
    cmd->add_option("--seed", opt.seed, "Seed for sample points")->check(CLI::NonNegativeNumber);
  };

  std::function<int()> action;
  auto group = [&](const std::string& name, const std::string& help) {
    auto* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, int (*fn)(const Options&, std::ostream&)) {
    auto* cmd = parent->add_subcommand(name, help);
    add_common(cmd);
    cmd->callback([&action, &opt, &out, fn] { action = [&opt, &out, fn] { return fn(opt, out); }; });
    return cmd;
  };

  auto* algebra = group("algebra", "Algebra validation");
  leaf(algebra, "check", "Validate constants; report Killing form, center, semisimplicity", algebra_check);
  auto* euler = group("euler", "Euler system");
  leaf(euler, "run", "Integrate xi' = -[phi(t), xi] and write xi.csv", euler_run);
  auto* floquet = group("floquet", "Monodromy analysis");
  leaf(floquet, "analyze", "Monodromy, multiplier classification and periodic generators", floquet_analyze);
  auto* integral = group("integral", "Periodic first integrals");
  leaf(integral, "find", "Full pipeline; writes xi.csv and generators.csv", integral_find);
  leaf(integral, "verify", "Integrate the flow and report conservation of the integral", integral_verify);
  auto* mp = group("mp", "Bundled Milne-Pinney run");
  leaf(mp, "demo", "Run the Milne-Pinney pipeline (optional config overrides the defaults)", mp_demo);
  auto* sweep = leaf(&app, "sweep", "Parameter sweep of the multiplier classification", sweep_command);
  sweep->add_option("--jobs", opt.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  static const std::vector<std::string> known = {"algebra", "euler", "floquet", "integral", "mp", "sweep",
                                                 "-h", "--help", "--help-all"};
  if (!args.empty() && std::find(known.begin(), known.end(), args.front()) == known.end()) {
    err << "error: unknown subcommand '" << args.front() << "'\n\n" << app.help();
    return kExitValidation;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    return action ? action() : kExitValidation;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace lieint
