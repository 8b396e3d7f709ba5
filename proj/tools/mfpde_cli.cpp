// Experiment runner: every module is reachable through a subcommand, all
// randomness is surfaced through seeds, and runs with identical config+seed
// produce byte-identical CSV/SVG artifacts.
//
// Exit codes: 0 pass, 1 tolerance failure, 2 config/parse error,
//             3 shape error, 4 runtime solver error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mfpde/config.hpp"
#include "mfpde/csv.hpp"
#include "mfpde/gaussian.hpp"
#include "mfpde/hjb_grid.hpp"
#include "mfpde/lab.hpp"
#include "mfpde/lq.hpp"
#include "mfpde/presets.hpp"
#include "mfpde/semijet.hpp"
#include "mfpde/svg.hpp"
#include "mfpde/version.hpp"
#include "mfpde/wasserstein.hpp"

namespace fs = std::filesystem;
using namespace mfpde;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitConfig = 2;
constexpr int kExitShape = 3;
constexpr int kExitSolver = 4;

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + (dir / name).string() + "'");
  return out;
}

// ---------------------------------------------------------------- w2 ----

int cmd_w2(const std::string& file_a, const std::string& file_b, const std::string& plan_path) {
  Eigen::MatrixXd a, b;
  try {
    a = read_cloud_csv_file(file_a);
    b = read_cloud_csv_file(file_b);
  } catch (const CsvParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    const EmpiricalMeasure mu(a), nu(b);
    const auto res = wasserstein2(mu, nu);
    std::cout << fmt_double(res.distance) << "\n";
    if (!plan_path.empty()) {
      std::ofstream out(plan_path, std::ios::binary);
      if (!out) throw ConfigError("cannot open plan file '" + plan_path + "'");
      out << "# mfpde " << kVersion << "\n";
      out << "nu_atom,mu_atom\n";
      for (std::size_t i = 0; i < res.plan.permutation.size(); ++i)
        out << i << ',' << res.plan.permutation[i] << '\n';
    }
    return kExitPass;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitShape;
  }
}

// --------------------------------------------------------- lift-check ----

struct LiftCheckSettings {
  std::uint64_t seed = 0;
  int instances = 200;
  double identity_tol = 1e-12;
  double derivative_tol = 1e-5;
  double fd_step = 1e-4;
  std::string preset = "hjb_random";
  fs::path out_dir = ".";
};

int cmd_lift_check(const LiftCheckSettings& s) {
  if (s.preset != "hjb_random" && s.preset != "hjb_lq" && s.preset != "hjb_bounded") {
    std::cerr << "error: unknown operator preset '" << s.preset << "'\n";
    return kExitConfig;
  }
  std::vector<std::vector<std::string>> rows;
  bool failed = false;

  // operator lift identity suite
  Xoshiro256 rng(substream_seed(s.seed, 0x11f7ULL));
  for (int inst = 0; inst < s.instances; ++inst) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.next() % 2);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.next() % 4);
    const Eigen::Index na = 2 + static_cast<Eigen::Index>(rng.next() % 8);
    HJBSpec spec;
    if (s.preset == "hjb_lq") {
      spec = hjb_lq_operator();
    } else if (s.preset == "hjb_bounded") {
      spec = hjb_bounded_operator();
    } else {
      spec = random_hjb_spec(rng.next(), d, na);
    }
    const Eigen::Index dd = s.preset == "hjb_random" ? d : 1;
    Eigen::MatrixXd x(dd, n), z(dd, n);
    std::vector<Eigen::MatrixXd> gamma;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < dd; ++k) {
        x(k, j) = 4.0 * rng.uniform() - 2.0;
        z(k, j) = 2.0 * rng.uniform() - 1.0;
      }
      Eigen::MatrixXd g(dd, dd);
      for (Eigen::Index r = 0; r < dd; ++r)
        for (Eigen::Index c = 0; c < dd; ++c) g(r, c) = 2.0 * rng.uniform() - 1.0;
      gamma.push_back(((g + g.transpose()) / 2.0).eval());
    }
    const LiftedOperator lifted = lift_operator(make_hjb_operator(spec), n);
    const double via_lift = lifted(0.3, x, 0.0, z, gamma);
    const double via_closed = hjb_lift_closed_form(spec, 0.3, x, z, gamma);
    const double err = std::abs(via_lift - via_closed);
    const double tol = s.identity_tol * (1.0 + std::abs(via_closed));
    const bool ok = err <= tol;
    if (!ok) {
      failed = true;
      std::cerr << "lift identity breach: instance=" << inst << " N=" << n << " d=" << dd
                << " err=" << fmt_double(err) << " tol=" << fmt_double(tol)
                << " lift=" << fmt_double(via_lift) << " closed=" << fmt_double(via_closed)
                << "\n";
    }
    rows.push_back({"lift_identity", std::to_string(inst), fmt_double(err), fmt_double(tol),
                    ok ? "pass" : "fail"});
  }

  // projected-test-function derivative suite
  const char* names[] = {"quadratic", "gauss_bump", "cos", "linear"};
  Xoshiro256 rng2(substream_seed(s.seed, 0xde51ULL));
  for (int inst = 0; inst < s.instances; ++inst) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng2.next() % 3);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng2.next() % 8);
    Semijet psi;
    psi.v = 2.0 * rng2.uniform() - 1.0;
    psi.a = 2.0 * rng2.uniform() - 1.0;
    psi.f = field_by_name(names[rng2.next() % 4]);
    psi.anchor_t = 0.25;
    Eigen::MatrixXd anchor(d, 3), x(d, n);
    for (Eigen::Index k = 0; k < d; ++k) {
      for (Eigen::Index j = 0; j < 3; ++j) anchor(k, j) = 2.0 * rng2.uniform() - 1.0;
      for (Eigen::Index j = 0; j < n; ++j) x(k, j) = 3.0 * rng2.uniform() - 1.5;
    }
    psi.anchor_mu = EmpiricalMeasure(anchor);
    const LiftedTestFunction phi{psi, n};
    const auto exact = lift_partials(phi, 0.5, x);
    const auto fd = finite_diff_partials(phi, 0.5, x, s.fd_step);
    double err = std::abs(exact.dt - fd.dt);
    err = std::max(err, (exact.grad - fd.grad).cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < n; ++j)
      err = std::max(err, (exact.hess_diag[j] - fd.hess_diag[j]).cwiseAbs().maxCoeff());
    const bool ok = err <= s.derivative_tol;
    if (!ok) {
      failed = true;
      std::cerr << "derivative identity breach: instance=" << inst << " N=" << n << " d=" << d
                << " err=" << fmt_double(err) << " tol=" << fmt_double(s.derivative_tol) << "\n";
    }
    rows.push_back({"derivative_identity", std::to_string(inst), fmt_double(err),
                    fmt_double(s.derivative_tol), ok ? "pass" : "fail"});
  }

  HeaderKV header{{"command", "lift-check"},
                  {"preset", s.preset},
                  {"seed", std::to_string(s.seed)},
                  {"instances", std::to_string(s.instances)},
                  {"identity_tol", fmt_double(s.identity_tol)},
                  {"derivative_tol", fmt_double(s.derivative_tol)},
                  {"fd_step", fmt_double(s.fd_step)}};
  auto out = open_output(s.out_dir, "lift_check.csv");
  write_csv_table(out, header, {"suite", "instance", "error", "tolerance", "verdict"}, rows);
  std::cout << (failed ? "lift-check: FAIL" : "lift-check: pass") << " (" << rows.size()
            << " instances, report " << (s.out_dir / "lift_check.csv").string() << ")\n";
  return failed ? kExitTolerance : kExitPass;
}

// ------------------------------------------------------------ converge ----

InitialDataSchedule schedule_from_config(const Config& cfg, const std::string& section) {
  InitialDataSchedule sched;
  sched.target = target_by_name(cfg.get_or(section, "target", "gaussian:0.3,0.7"));
  sched.method = cfg.get_or(section, "method", "quantile");
  sched.Ns = cfg.require_index_list(section, "Ns");
  sched.seed = cfg.require_seed(section);
  return sched;
}

HeaderKV header_from_config(const Config& cfg) {
  HeaderKV out;
  for (const auto& [k, v] : cfg.flatten()) out.emplace_back(k, v);
  return out;
}

int cmd_converge(const Config& cfg_in) {
  Config cfg = cfg_in;
  const std::string sec = "converge";
  const std::string preset_name = cfg.get_or(sec, "preset", "lq");
  ConvergenceOptions opt;
  opt.solver = cfg.get_or(sec, "solver", "riccati");
  opt.g_name = cfg.get_or(sec, "g", "cos");
  opt.reps = cfg.get_int_or(sec, "reps", 200);
  opt.jobs = static_cast<int>(cfg.get_int_or(sec, "jobs", 1));
  opt.seed = cfg.require_seed(sec);
  if (opt.reps < 1) throw ConfigError("converge: reps must be positive");
  const double final_rel_tol = cfg.get_double_or(sec, "final_rel_tol", 0.01);
  const bool require_decreasing = cfg.get_bool_or(sec, "require_decreasing", true);
  const fs::path out_dir = cfg.get_or(sec, "out_dir", ".");
  const bool svg = cfg.get_bool_or(sec, "svg", false);

  // resolved configuration, embedded into the artifacts
  cfg.set(sec, "preset", preset_name);
  cfg.set(sec, "solver", opt.solver);
  cfg.set(sec, "g", opt.g_name);
  cfg.set(sec, "reps", std::to_string(opt.reps));
  cfg.set(sec, "final_rel_tol", fmt_double(final_rel_tol));
  cfg.set(sec, "require_decreasing", require_decreasing ? "true" : "false");

  const ExperimentPreset preset = experiment_preset(preset_name);
  const InitialDataSchedule sched = schedule_from_config(cfg, sec);
  const ConvergenceReport report = run_value_convergence(preset, sched, opt);

  auto out = open_output(out_dir, "converge.csv");
  write_convergence_csv(out, report, header_from_config(cfg));
  if (svg) {
    std::vector<double> xs, ys;
    for (const auto& r : report.rows) {
      xs.push_back(static_cast<double>(r.N));
      ys.push_back(r.gap);
    }
    auto img = open_output(out_dir, "converge_gap.svg");
    write_line_chart_svg(img, "value gap vs N", xs, ys, "N", "|V^N/N - V|", true, true);
  }

  bool pass = true;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    std::cout << "N=" << r.N << " value=" << fmt_double(r.value) << " gap=" << fmt_double(r.gap)
              << " w2=" << fmt_double(r.w2_proxy) << " (" << r.runtime_sec << " s)\n";
    if (require_decreasing && i > 0 && r.gap >= report.rows[i - 1].gap) pass = false;
  }
  const double final_gap = report.rows.back().gap;
  if (final_gap > final_rel_tol * std::abs(report.limit_value) + 1e-12) pass = false;
  std::cout << "limit=" << fmt_double(report.limit_value) << " final_gap=" << fmt_double(final_gap)
            << (pass ? " -> pass" : " -> FAIL") << "\n";
  return pass ? kExitPass : kExitTolerance;
}

// --------------------------------------------------------------- chaos ----

int cmd_chaos(const Config& cfg_in) {
  Config cfg = cfg_in;
  const std::string sec = "chaos";
  const std::string preset_name = cfg.get_or(sec, "preset", "ou");
  ChaosOptions opt;
  opt.g_name = cfg.get_or(sec, "g", "cos");
  opt.reps = cfg.get_int_or(sec, "reps", 200);
  opt.jobs = static_cast<int>(cfg.get_int_or(sec, "jobs", 1));
  opt.seed = cfg.require_seed(sec);
  opt.pilot_N = cfg.get_int_or(sec, "pilot_N", 8);
  opt.pilot_reps = cfg.get_int_or(sec, "pilot_reps", 200);
  if (opt.reps < 2) throw ConfigError("chaos: reps must be at least 2");
  const fs::path out_dir = cfg.get_or(sec, "out_dir", ".");
  const bool svg = cfg.get_bool_or(sec, "svg", false);

  cfg.set(sec, "preset", preset_name);
  cfg.set(sec, "g", opt.g_name);
  cfg.set(sec, "reps", std::to_string(opt.reps));
  cfg.set(sec, "pilot_N", std::to_string(opt.pilot_N));
  cfg.set(sec, "pilot_reps", std::to_string(opt.pilot_reps));

  const ExperimentPreset preset = experiment_preset(preset_name);
  InitialDataSchedule sched = schedule_from_config(cfg, sec);
  const ChaosReport report = run_chaos_experiment(preset, sched, opt);

  auto out = open_output(out_dir, "chaos.csv");
  write_chaos_csv(out, report, header_from_config(cfg));
  if (svg) {
    std::vector<double> xs, ys;
    for (const auto& r : report.rows) {
      xs.push_back(static_cast<double>(r.N));
      ys.push_back(std::abs(r.bias));
    }
    auto img = open_output(out_dir, "chaos_bias.svg");
    write_line_chart_svg(img, "|bias| vs N", xs, ys, "N", "|estimate - target|", true, true);
  }

  bool pass = true;
  for (const auto& r : report.rows) {
    std::cout << "N=" << r.N << " estimate=" << fmt_double(r.estimate)
              << " bias=" << fmt_double(r.bias) << " 3SE+budget="
              << fmt_double(3 * r.std_error + r.budget) << (r.pass ? " pass" : " FAIL") << " ("
              << r.runtime_sec << " s)\n";
    pass = pass && r.pass;
  }
  std::cout << "target=" << fmt_double(report.target_value)
            << " C=" << fmt_double(report.budget_coefficient) << (pass ? " -> pass" : " -> FAIL")
            << "\n";
  return pass ? kExitPass : kExitTolerance;
}

// ------------------------------------------------------------ hjb-grid ----

int cmd_hjb_grid(const Config& cfg_in) {
  Config cfg = cfg_in;
  const std::string sec = "hjb_grid";
  const std::string preset_name = cfg.get_or(sec, "preset", "heat");
  const Eigen::Index n = cfg.get_int_or(sec, "N", 1);
  GridConfig gc;
  gc.box_radius = cfg.get_double_or(sec, "box_radius", 4.0);
  gc.nodes_per_axis = cfg.get_int_or(sec, "nodes", 201);
  gc.dt = cfg.get_double_or(sec, "dt", 0.0);
  const fs::path out_dir = cfg.get_or(sec, "out_dir", ".");
  cfg.require_seed(sec);  // uniform contract: every run is seeded
  cfg.set(sec, "preset", preset_name);
  cfg.set(sec, "N", std::to_string(n));

  const ExperimentPreset preset = experiment_preset(preset_name);
  const GridSolution sol = solve_hjb_grid(preset.problem, n, gc);

  auto out = open_output(out_dir, "hjb_grid.csv");
  HeaderKV header = header_from_config(cfg);
  std::vector<std::vector<std::string>> rows;
  if (n == 1) {
    for (Eigen::Index j = 0; j < sol.axis().size(); ++j)
      rows.push_back({fmt_double(sol.axis()(j)), fmt_double(sol.at(j))});
    write_csv_table(out, header, {"x", "u0"}, rows);
  } else {
    for (Eigen::Index j1 = 0; j1 < sol.axis().size(); ++j1)
      for (Eigen::Index j2 = 0; j2 < sol.axis().size(); ++j2)
        rows.push_back({fmt_double(sol.axis()(j1)), fmt_double(sol.axis()(j2)),
                        fmt_double(sol.at(j1, j2))});
    write_csv_table(out, header, {"x1", "x2", "u0"}, rows);
  }
  std::cout << "hjb-grid: " << rows.size() << " nodes written to "
            << (out_dir / "hjb_grid.csv").string() << "\n";
  return kExitPass;
}

// ------------------------------------------------------------ simulate ----

int cmd_simulate(const Config& cfg_in) {
  Config cfg = cfg_in;
  const std::string sec = "simulate";
  const std::string preset_name = cfg.get_or(sec, "preset", "ou");
  const Eigen::Index n = cfg.get_int_or(sec, "N", 64);
  const std::uint64_t seed = cfg.require_seed(sec);
  const std::string policy_name = cfg.get_or(sec, "policy", "zero");
  const bool export_paths = cfg.get_bool_or(sec, "paths", false);
  const fs::path out_dir = cfg.get_or(sec, "out_dir", ".");
  cfg.set(sec, "preset", preset_name);
  cfg.set(sec, "N", std::to_string(n));
  cfg.set(sec, "policy", policy_name);

  ExperimentPreset preset = experiment_preset(preset_name);
  if (cfg.has(sec, "dt")) preset.problem.dt = cfg.require_double(sec, "dt");

  InitialDataSchedule sched;
  sched.target = target_by_name(cfg.get_or(sec, "target", "point:0"));
  sched.method = cfg.get_or(sec, "method", "quantile");
  sched.Ns = {n};
  sched.seed = seed;
  const auto data = build_initial_data(sched);

  ControlPolicy policy = zero_policy(preset.problem.actions.front().size());
  if (policy_name == "riccati") {
    if (!preset.lq) throw ConfigError("simulate: policy 'riccati' needs the lq preset");
    const RiccatiSolution sol = solve_lq_meanfield(*preset.lq);
    policy = lq_riccati_policy(sol, preset.problem);
  } else if (policy_name != "zero") {
    throw ConfigError("simulate: unknown policy '" + policy_name + "'");
  }

  const PathBundle bundle = simulate_nparticle(preset.problem, policy, data[0].points, seed);
  const auto chars = check_characteristics(bundle, preset.problem.L);
  const EmpiricalMeasure terminal(bundle.states.back());
  std::cout << "terminal mean=" << fmt_double(terminal.mean()(0))
            << " variance=" << fmt_double(variance(terminal))
            << " max_drift=" << fmt_double(chars.max_drift)
            << " max_diff=" << fmt_double(chars.max_diff)
            << (chars.within_bound ? " (bounds ok)" : " (BOUND VIOLATION)") << "\n";

  if (export_paths) {
    auto out = open_output(out_dir, "paths.csv");
    HeaderKV header = header_from_config(cfg);
    out << "# mfpde " << kVersion << '\n';
    for (const auto& [k, v] : header) out << "# " << k << " = " << v << '\n';
    out << "step,particle";
    for (Eigen::Index k = 0; k < data[0].points.rows(); ++k) out << ",x" << k;
    out << '\n';
    for (std::size_t s = 0; s < bundle.states.size(); ++s)
      for (Eigen::Index i = 0; i < bundle.states[s].cols(); ++i) {
        out << s << ',' << i;
        for (Eigen::Index k = 0; k < bundle.states[s].rows(); ++k)
          out << ',' << fmt_double(bundle.states[s](k, i));
        out << '\n';
      }
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-dimensional approximation lab for PDEs on Wasserstein space"};
  app.set_version_flag("--version", std::string("mfpde ") + kVersion);
  app.require_subcommand(1);

  // w2
  std::string w2_a, w2_b, w2_plan;
  auto* w2 = app.add_subcommand("w2", "exact W2 distance between two equal-size CSV clouds");
  w2->add_option("file_a", w2_a, "first cloud (one row per particle)")->required();
  w2->add_option("file_b", w2_b, "second cloud")->required();
  w2->add_option("--plan", w2_plan, "write the optimal matching to this CSV");

  // lift-check
  LiftCheckSettings ls;
  std::string lc_config;
  auto* lc = app.add_subcommand("lift-check",
                                "operator lift and projected-derivative identity suites");
  lc->add_option("--config", lc_config, "config file with a [lift_check] section");
  lc->add_option("--seed", ls.seed, "master seed (required here or in the config)");
  lc->add_option("--instances", ls.instances, "instances per suite");
  lc->add_option("--identity-tol", ls.identity_tol, "relative tolerance of the lift identity");
  lc->add_option("--derivative-tol", ls.derivative_tol, "tolerance of the derivative identity");
  lc->add_option("--preset", ls.preset, "hjb_random | hjb_lq | hjb_bounded");
  std::string lc_out = ".";
  lc->add_option("--out-dir", lc_out, "output directory");

  // config-driven commands
  std::string cfg_path;
  auto* conv = app.add_subcommand("converge", "value convergence report (CSV schema: N,value,std_error,w2_proxy,gap)");
  conv->add_option("--config", cfg_path, "config file with a [converge] section")->required();
  auto* chaos = app.add_subcommand("chaos", "terminal-law experiment (CSV schema: N,estimate,std_error,bias,budget,verdict)");
  chaos->add_option("--config", cfg_path, "config file with a [chaos] section")->required();
  auto* grid = app.add_subcommand("hjb-grid", "finite-difference value on a grid (CSV schema: x[,x2],u0)");
  grid->add_option("--config", cfg_path, "config file with a [hjb_grid] section")->required();
  auto* sim = app.add_subcommand("simulate", "one particle-system trajectory (optional paths.csv: step,particle,coordinates)");
  sim->add_option("--config", cfg_path, "config file with a [simulate] section")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (w2->parsed()) return cmd_w2(w2_a, w2_b, w2_plan);
    if (lc->parsed()) {
      if (!lc_config.empty()) {
        const Config cfg = Config::parse_file(lc_config);
        ls.seed = cfg.require_seed("lift_check");
        ls.instances = static_cast<int>(cfg.get_int_or("lift_check", "instances", ls.instances));
        ls.identity_tol = cfg.get_double_or("lift_check", "identity_tol", ls.identity_tol);
        ls.derivative_tol = cfg.get_double_or("lift_check", "derivative_tol", ls.derivative_tol);
        ls.preset = cfg.get_or("lift_check", "preset", ls.preset);
        lc_out = cfg.get_or("lift_check", "out_dir", lc_out);
      } else if (lc->count("--seed") == 0) {
        std::cerr << "error: lift-check needs --seed or a config file with one\n";
        return kExitConfig;
      }
      ls.out_dir = lc_out;
      return cmd_lift_check(ls);
    }
    const Config cfg = Config::parse_file(cfg_path);
    if (conv->parsed()) return cmd_converge(cfg);
    if (chaos->parsed()) return cmd_chaos(cfg);
    if (grid->parsed()) return cmd_hjb_grid(cfg);
    if (sim->parsed()) return cmd_simulate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CsvParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitConfig;
}
