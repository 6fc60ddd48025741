#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <nsbesov/nsbesov.hpp>

namespace {

using namespace nsbesov;

/// Applies flag overrides on top of the loaded config file. Flags win.
Config assemble_config(const std::string& config_path, const std::string& grid_opt,
                       const std::string& spec_opt, bool seed_set, unsigned long long seed,
                       const std::vector<std::string>& sets) {
  Config cfg = config_path.empty() ? Config{} : load_config(config_path);
  if (!grid_opt.empty()) {
    const Grid g = parse_grid_triplet(grid_opt);  // validates
    cfg.set("grid.d", std::to_string(g.d));
    cfg.set("grid.n", std::to_string(g.n));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", g.box);
    cfg.set("grid.L", buf);
  }
  if (!spec_opt.empty()) {
    parse_spec_triplet(spec_opt);  // validates, including r = "inf"
    const std::size_t c1 = spec_opt.find(',');
    const std::size_t c2 = spec_opt.find(',', c1 + 1);
    cfg.set("spec.s", detail::trim(spec_opt.substr(0, c1)));
    cfg.set("spec.p", detail::trim(spec_opt.substr(c1 + 1, c2 - c1 - 1)));
    cfg.set("spec.r", detail::trim(spec_opt.substr(c2 + 1)));
  }
  if (seed_set) cfg.set("datum.seed", std::to_string(seed));
  for (const std::string& kv : sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    cfg.set(detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
  }
  return cfg;
}

/// Smoothing constant for the single-datum subcommands: fixed 48 unless the
/// config requests a measured estimate or another fixed value.
double resolve_simple_C1(const Config& cfg, const BesovSpec& spec) {
  Config c = cfg;
  detail::default_key(c, "constants.C1_source", "fixed");
  detail::default_key(c, "constants.C1", "48");
  return resolve_C1(c, spec).C1;
}

struct Datum {
  Grid grid;
  SpectralField field;
};

Datum load_datum(const Config& cfg, const std::string& in_path) {
  if (!in_path.empty()) {
    SpectralField u = load_snapshot(in_path);
    return {u.grid, std::move(u)};
  }
  Config c = cfg;
  detail::default_key(c, "datum.generator", "taylor_green");
  const Grid grid = config_grid(c, 64);
  const BesovSpec spec = config_spec(c, grid, "2");
  const DyadicPartition part = build_partition(grid);
  const double C1 = c.get_string("datum.generator") == "profile"
                        ? resolve_simple_C1(c, spec)
                        : c.get_double("constants.C1", 48.0);
  return {grid, make_datum(c, "datum.", grid, part, spec, C1)};
}

int report_result(const std::string& name, bool pass) {
  std::cout << (pass ? "PASS " : "FAIL ") << name << "\n";
  return pass ? 0 : 2;
}

int cmd_norms(const Config& cfg, const std::string& in_path, const std::string& out_dir) {
  Datum d = load_datum(cfg, in_path);
  const BesovSpec spec = config_spec(cfg, d.grid, "2");
  const DyadicPartition part = build_partition(d.grid);
  detail::write_provenance(out_dir, cfg);

  const std::vector<double> blocks = block_lp_norms(d.field, part, spec.p);
  CsvWriter csv({"j", "block_Lp_norm", "weighted_value"});
  std::vector<std::pair<double, double>> plot;
  for (int j = part.j_min; j <= part.j_max; ++j) {
    const double b = blocks[static_cast<std::size_t>(j - part.j_min)];
    const double w = dyadic_weight(spec.s, j) * b;
    csv.row({std::to_string(j), format_sci17(b), format_sci17(w)});
    plot.emplace_back(static_cast<double>(j), w);
  }
  const double total = besov_norm(d.field, part, spec);
  csv.row({"summary", "", format_sci17(total)});
  csv.write(out_dir + "/norms.csv");
  write_plot_data(out_dir + "/plot_blocks.dat", plot);

  // Chemin-Lerner norms of the free evolution over a short horizon.
  const double T = cfg.get_double("norms.T", 0.1);
  const int M = cfg.get_int("norms.M", 32);
  const BlockNormTable table = build_block_table_streaming(
      part, T, M + 1, spec.p, [&](int i) {
        return heat_propagate(d.field, T * static_cast<double>(i) / static_cast<double>(M));
      });
  ordered_json cl;
  const double qs[5] = {1.0, 4.0 / 3.0, 2.0, 4.0, inf};
  const char* q_names[5] = {"1", "4/3", "2", "4", "inf"};
  for (int i = 0; i < 5; ++i) cl[q_names[i]] = chemin_lerner_norm(table, qs[i], spec);

  ordered_json j;
  j["grid"] = {{"d", d.grid.d}, {"n", d.grid.n}, {"L", d.grid.box}};
  j["spec"] = {{"s", spec.s}, {"p", spec.p},
               {"r", std::isinf(spec.r) ? ordered_json("inf") : ordered_json(spec.r)}};
  j["j_min"] = part.j_min;
  j["j_max"] = part.j_max;
  j["besov_norm"] = total;
  j["l2_norm"] = l2_norm_spectral(d.field);
  j["divergence_defect"] = divergence_defect(d.field);
  j["free_flow_horizon"] = T;
  j["chemin_lerner_free"] = cl;
  write_json_file(out_dir + "/summary.json", j);
  return report_result("norms", true);
}

int cmd_lifespan(const Config& cfg, const std::string& in_path, const std::string& out_dir) {
  Datum d = load_datum(cfg, in_path);
  const BesovSpec spec = config_spec(cfg, d.grid, "2");
  const DyadicPartition part = build_partition(d.grid);
  detail::write_provenance(out_dir, cfg);
  const double C1 = resolve_simple_C1(cfg, spec);

  LifespanOptions options;
  options.check_M = cfg.get_int("lifespan.check_M", 64);
  options.global_probe_T = cfg.get_double("lifespan.probe_T", 10.0);
  options.global_probe_M = cfg.get_int("lifespan.probe_M", 1024);
  const LifespanReport rep = lifespan_T(d.field, part, spec, C1, options);

  ordered_json j;
  j["E0"] = rep.E0;
  j["C1"] = rep.C1;
  j["a"] = rep.a;
  j["branch"] = rep.global_branch ? "global" : "local";
  if (rep.global_branch) {
    j["T"] = "inf";
  } else {
    j["j0"] = rep.j0;
    j["T0"] = rep.T0;
    j["T1"] = rep.T1;
    j["T"] = rep.T;
  }
  j["unresolved_tail_warning"] = rep.unresolved_tail_warning;
  j["free_A_norm"] = rep.free_A_norm;
  j["free_check_horizon"] = rep.free_check_horizon;
  j["free_check_ok"] = rep.free_check_ok;
  write_json_file(out_dir + "/lifespan.json", j);

  std::vector<std::pair<double, double>> plot;
  for (int jj = 0; jj <= part.j_max + 1; ++jj)
    plot.emplace_back(static_cast<double>(jj), tail_norm(d.field, part, spec, jj));
  write_plot_data(out_dir + "/plot_tails.dat", plot);
  return report_result("lifespan", rep.free_check_ok);
}

int cmd_solve(const Config& cfg, const std::string& in_path, const std::string& out_dir) {
  Datum d = load_datum(cfg, in_path);
  const BesovSpec spec = config_spec(cfg, d.grid, "2");
  const DyadicPartition part = build_partition(d.grid);
  detail::write_provenance(out_dir, cfg);
  const double C1 = resolve_simple_C1(cfg, spec);

  const double E0 = besov_norm(d.field, part, spec);
  const double a = small_constant_a(E0, C1).a;
  double T = cfg.get_double("solver.T", 0.0);
  if (T <= 0.0) {
    const LifespanReport rep = lifespan_T(d.field, part, spec, C1);
    if (rep.global_branch)
      throw std::invalid_argument("solve: global-branch datum needs an explicit solver.T");
    T = rep.T;
  }
  const int M = cfg.get_int("solver.M", 64);
  const PicardResult result =
      picard_solve(d.field, T, M, cfg.get_int("solver.max_iter", 40),
                   cfg.get_double("solver.tol", 1e-8), PicardConstants{E0, a, C1}, spec,
                   config_mode(cfg));

  CsvWriter csv({"iter", "h1_norm", "a_norm", "diff_43", "diff_4", "diff_total", "ratio",
                 "h1_ok", "h2_ok"});
  std::vector<std::pair<double, double>> plot;
  for (const IterationRow& row : result.diagnostics.rows) {
    csv.row({std::to_string(row.iter), format_sci17(row.h1_norm), format_sci17(row.a_norm_value),
             format_sci17(row.diff_43), format_sci17(row.diff_4), format_sci17(row.diff_total),
             format_sci17(row.ratio), row.h1_ok ? "1" : "0", row.h2_ok ? "1" : "0"});
    plot.emplace_back(static_cast<double>(row.iter), row.diff_total);
  }
  csv.write(out_dir + "/iterations.csv");
  write_plot_data(out_dir + "/plot_contraction.dat", plot);

  const int stride = cfg.get_int("solver.snapshot_stride", 0);
  if (stride > 0) {
    for (int i = 0; i <= M; i += stride) {
      char name[32];
      std::snprintf(name, sizeof name, "/node_%05d.nsbf", i);
      save_snapshot(out_dir + name, result.solution.nodes[static_cast<std::size_t>(i)]);
    }
  }

  const double tol = cfg.get_double("solver.tol", 1e-8);
  const bool pass = result.diagnostics.converged && result.diagnostics.residual_rel < 5.0 * tol;
  ordered_json j;
  j["E0"] = E0;
  j["a"] = a;
  j["C1"] = C1;
  j["T"] = T;
  j["M"] = M;
  j["converged"] = result.diagnostics.converged;
  j["iterations"] = result.diagnostics.iterations;
  j["residual_rel"] = result.diagnostics.residual_rel;
  j["final_h1"] = result.diagnostics.final_h1;
  j["final_a_norm"] = result.diagnostics.final_a_norm;
  j["pass"] = pass;
  write_json_file(out_dir + "/summary.json", j);
  return report_result("solve", pass);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsbesov: dyadic Besov analysis and mild Navier-Stokes experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, grid_opt, spec_opt, in_path;
  unsigned long long seed = 0;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "Config file (key = value lines)");
  app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Datum seed override");
  app.add_option("--grid", grid_opt, "Grid as d,n,L");
  app.add_option("--spec", spec_opt, "Besov indices as s,p,r (r may be inf)");
  app.add_option("--in", in_path, "Input NSBF snapshot (norms/lifespan/solve)");
  app.add_option("--set", sets, "Extra config override key=value (repeatable)");

  app.add_subcommand("norms", "Besov/Chemin-Lerner norm report for a snapshot or generator");
  app.add_subcommand("lifespan", "Lifespan lower-bound report for a snapshot or generator");
  app.add_subcommand("solve", "Picard mild-solution run with diagnostics");
  app.add_subcommand("cdep", "Continuous-dependence experiment");
  app.add_subcommand("lifespan-seq", "Lifespan-convergence experiment");
  app.add_subcommand("l2dep", "L2 weak-strong uniformity experiment");
  app.add_subcommand("heat-constant", "Heat smoothing-constant estimation sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << "\n";
    return 1;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  if (out_dir.empty()) out_dir = "out_" + sub;

  try {
    const nsbesov::Config cfg =
        assemble_config(config_path, grid_opt, spec_opt, seed_opt->count() > 0, seed, sets);
    if (sub == "norms") return cmd_norms(cfg, in_path, out_dir);
    if (sub == "lifespan") return cmd_lifespan(cfg, in_path, out_dir);
    if (sub == "solve") return cmd_solve(cfg, in_path, out_dir);
    if (sub == "cdep")
      return report_result("cdep", nsbesov::run_cdep_experiment(cfg, out_dir).pass);
    if (sub == "lifespan-seq")
      return report_result("lifespan-seq", nsbesov::run_lifespan_convergence(cfg, out_dir).pass);
    if (sub == "l2dep")
      return report_result("l2dep", nsbesov::run_l2_experiment(cfg, out_dir).pass);
    if (sub == "heat-constant")
      return report_result("heat-constant", nsbesov::run_heat_constant(cfg, out_dir).pass);
    std::cerr << "error: unknown subcommand '" << sub << "'\n\n" << app.help() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
