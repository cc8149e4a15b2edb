#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fracsim/analysis.hpp"
#include "fracsim/config.hpp"
#include "fracsim/csv.hpp"
#include "fracsim/scenarios.hpp"
#include "fracsim/units.hpp"

namespace fs = std::filesystem;
using namespace fracsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitAnalysis = 4;

fs::path resolve_output(const std::string& dir) {
  if (const char* root = std::getenv("FRACSIM_OUTPUT_ROOT")) {
    return fs::path(root) / dir;
  }
  return fs::path(dir);
}

// Curves in the nondimensional plotting units of the flux-surface and
// curve-table tools: pressures in psi, mobilities kr/mu with mu in cP.
RockRegion plot_units_matrix(int relperm_exponent, double pe_psi, double theta,
                             double pc_max_psi, double pc_min_psi) {
  RockRegion r;
  r.id = RegionId::matrix;
  r.krw = {relperm_exponent};
  r.krn = {relperm_exponent};
  r.pc = CapillaryCurve(fit_pc_bounds(pe_psi, theta, pc_max_psi, pc_min_psi));
  r.porosity = 0.2;
  r.permeability = 1.0;
  return r;
}

RockRegion plot_units_fracture(double p_max_psi) {
  RockRegion r;
  r.id = RegionId::fracture;
  r.krw = {1};
  r.krn = {1};
  r.pc = CapillaryCurve(FractureCapillaryCurve{p_max_psi});
  r.porosity = 0.2;
  r.permeability = 1.0;
  return r;
}

int cmd_run(const std::string& config_path, const std::string& scheme_opt,
            int n_opt, const std::string& out_opt) {
  ScenarioConfig cfg = load_config(config_path);
  if (!scheme_opt.empty()) cfg.scheme = parse_scheme(scheme_opt);
  if (n_opt > 0) {
    cfg.n_matrix = n_opt;
    if (cfg.kind == ScenarioConfig::Kind::spontaneous) cfg.n_fracture = n_opt;
  }
  if (!out_opt.empty()) cfg.output_dir = out_opt;
  validate_config(cfg);

  const RunResult rr = run_scenario(cfg);
  const fs::path dir = resolve_output(cfg.output_dir);
  write_run_outputs(rr, dir);
  if (!rr.record.completed) {
    std::cerr << "run aborted: " << rr.record.failure << "\n";
    return kExitSolver;
  }
  std::cout << "run complete: " << rr.record.time.size() - 1 << " steps, "
            << rr.record.total_newton << " Newton iterations, outputs in "
            << dir.string() << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, std::vector<int> n_list,
              std::vector<std::string> scheme_names, int reference_n,
              int threads, const std::string& out_opt) {
  ScenarioConfig cfg = load_config(config_path);
  if (cfg.kind != ScenarioConfig::Kind::spontaneous) {
    throw ConfigError("sweep expects a spontaneous-imbibition config");
  }
  if (!out_opt.empty()) cfg.output_dir = out_opt;
  if (n_list.empty()) n_list = {1, 2, 4, 8, 16, 32, 64};
  std::vector<Scheme> schemes;
  if (scheme_names.empty()) scheme_names = {"ppu", "ppu-c", "ihu-c"};
  for (const auto& s : scheme_names) schemes.push_back(parse_scheme(s));

  const SweepResult sw = refinement_sweep(cfg, n_list, schemes, reference_n, threads);

  const fs::path dir = resolve_output(cfg.output_dir);
  fs::create_directories(dir);
  CsvTable t;
  std::vector<double> col_scheme, col_n, col_e2, col_t80, col_ok;
  for (const auto& e : sw.entries) {
    col_scheme.push_back(static_cast<double>(e.scheme));
    col_n.push_back(e.n);
    col_e2.push_back(e.e2);
    col_t80.push_back(e.t80);
    col_ok.push_back(e.ok ? 1.0 : 0.0);
    if (!e.ok) {
      std::cerr << "member " << scheme_name(e.scheme) << " N=" << e.n
                << " failed: " << e.error << "\n";
    }
  }
  t.add_column("scheme_id", col_scheme);
  t.add_column("n_matrix", col_n);
  t.add_column("e2_pct", col_e2);
  t.add_column("t80_td", col_t80);
  t.add_column("completed", col_ok);
  t.write(dir / "e2_table.csv");

  CsvTable ref;
  ref.add_column("t_d", sw.reference.t_d);
  ref.add_column("recovery_pct", sw.reference.pct);
  ref.write(dir / "reference_recovery.csv");

  std::cout << "sweep complete: " << sw.entries.size()
            << " members, reference t80=" << sw.reference_t80
            << ", outputs in " << dir.string() << "\n";
  for (const auto& e : sw.entries) {
    std::cout << "  " << scheme_name(e.scheme) << " N=" << e.n;
    if (e.ok) {
      std::cout << "  E2=" << e.e2 << "  t80=" << e.t80 << "\n";
    } else {
      std::cout << "  FAILED\n";
    }
  }
  return kExitOk;
}

int cmd_fluxsurface(const std::string& scheme_str, double u_t, double trans,
                    int n, int relperm_exponent, const std::string& out) {
  const RockRegion region =
      plot_units_matrix(relperm_exponent, 3.0, 4.0, 15.0, -15.0);
  const Fluid fluid{1.0, 1.0, 0.0, 0.0};  // cP units; gravity terms unused
  const DiffusionMaxCache cache(region, fluid);
  Scheme scheme = Scheme::ppu;
  if (scheme_str == "ihu") {
    scheme = Scheme::ihu_c;
  } else if (scheme_str != "ppu") {
    throw ConfigError("flux-surface scheme must be ppu or ihu");
  }
  const CsvTable t = flux_surface(scheme, u_t, trans, region, fluid, cache, n);
  t.write(resolve_output(out));
  std::cout << "flux surface (" << scheme_str << ", u_T=" << u_t << ") with "
            << n * n << " samples written to " << out << "\n";
  return kExitOk;
}

int cmd_truncation(const std::string& run_dir, double xd_lo, double xd_hi,
                   const std::string& out) {
  const fs::path dir(run_dir);
  std::ifstream mf(dir / "manifest.json");
  if (!mf) throw ConfigError("no manifest.json under " + run_dir);
  nlohmann::json manifest;
  mf >> manifest;
  const ScenarioConfig cfg = config_from_json(manifest.at("config"));
  const BuiltScenario sc = build_scenario(cfg);
  const Grid1D& g = sc.problem.grid;

  const CsvTable profiles = read_csv(dir / "profiles.csv");
  const auto col = [&](const std::string& name) -> const std::vector<double>& {
    for (std::size_t c = 0; c < profiles.header.size(); ++c) {
      if (profiles.header[c] == name) return profiles.columns[c];
    }
    throw AnalysisError("profiles.csv misses column " + name);
  };
  const std::vector<double>& times = col("time_dimless");
  const std::vector<double>& xd = col("x_d");
  const std::vector<double>& sw = col("s_w");
  const std::vector<double>& region_col = col("region");
  if (times.empty()) throw AnalysisError("profiles.csv is empty");
  const double last_time = times.back();

  std::vector<double> xs, ss;
  for (std::size_t r = 0; r < times.size(); ++r) {
    if (times[r] == last_time && region_col[r] == 0.0 && xd[r] >= xd_lo &&
        xd[r] <= xd_hi) {
      xs.push_back(xd[r]);
      ss.push_back(sw[r]);
    }
  }
  const double u_t = cfg.injection_rate_m3_per_s / cfg.area_m2;
  const TruncationProfile tp = truncation_terms(
      xs, ss, g.dx[g.first_cell_of(RegionId::matrix)], u_t,
      sc.problem.matrix.permeability, sc.problem.matrix, sc.problem.fluid);

  CsvTable t;
  t.add_column("x_d", tp.x);
  t.add_column("e_v", tp.e_v);
  t.add_column("e_c_ihu", tp.e_c_ihu);
  t.add_column("e_c_ppu", tp.e_c_ppu);
  t.add_column("e_vc_ihu", tp.e_vc_ihu);
  t.add_column("e_vc_ppu", tp.e_vc_ppu);
  t.write(resolve_output(out));
  std::cout << "truncation terms on " << tp.x.size() << " cells written to "
            << out << "\n";
  return kExitOk;
}

int cmd_curves(const std::string& region_name, int relperm_exponent, int n,
               const std::string& out) {
  RockRegion region;
  if (region_name == "matrix") {
    region = plot_units_matrix(relperm_exponent, 3.0, 4.0, 15.0, -15.0);
  } else if (region_name == "fracture") {
    region = plot_units_fracture(0.1);
  } else {
    throw ConfigError("curves region must be matrix or fracture");
  }
  const Fluid fluid{1.0, 1.0, 0.0, 0.0};
  std::vector<double> s(n), krw(n), krn(n), pc(n), diff(n);
  for (int k = 0; k < n; ++k) {
    s[k] = static_cast<double>(k) / (n - 1);
    krw[k] = region.krw.eval(s[k]).first;
    krn[k] = region.krn.eval(1.0 - s[k]).first;
    pc[k] = region.pc.pc(s[k]);
    diff[k] = capillary_diffusion(region, fluid, s[k]).first;
  }
  CsvTable t;
  t.add_column("s_w", s);
  t.add_column("kr_w", krw);
  t.add_column("kr_n", krn);
  t.add_column("pc_psi", pc);
  t.add_column("diffusion_psi_per_cp", diff);
  t.write(resolve_output(out));
  std::cout << region_name << " curve table written to " << out << "\n";
  return kExitOk;
}

int cmd_griddump(const std::string& config_path, const std::string& out) {
  const ScenarioConfig cfg = load_config(config_path);
  const BuiltScenario sc = build_scenario(cfg);
  const Grid1D& g = sc.problem.grid;
  std::vector<double> idx, x, z, dx, region, pv, perm, trans;
  for (int i = 0; i < g.n_cells; ++i) {
    idx.push_back(i);
    x.push_back(g.x_center[i]);
    z.push_back(g.z[i]);
    dx.push_back(g.dx[i]);
    region.push_back(g.region[i] == RegionId::matrix ? 0.0 : 1.0);
    pv.push_back(g.pore_volume[i]);
    perm.push_back(g.perm[i]);
    trans.push_back(i + 1 < g.n_cells ? g.interfaces[i].trans : 0.0);
  }
  CsvTable t;
  t.add_column("cell", idx);
  t.add_column("x_m", x);
  t.add_column("z_m", z);
  t.add_column("dx_m", dx);
  t.add_column("region", region);
  t.add_column("pore_volume_m3", pv);
  t.add_column("perm_m2", perm);
  t.add_column("trans_right_m3", trans);
  t.write(resolve_output(out));
  std::cout << "grid summary written to " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fully implicit two-phase flow in 1D fractured porous media"};
  app.require_subcommand(1);

  std::string config_path, scheme_opt, out_opt;
  int n_opt = 0;
  auto* run = app.add_subcommand("run", "run one scenario from a config file");
  run->add_option("config", config_path, "config JSON path")->required();
  run->add_option("--scheme", scheme_opt, "override scheme (ppu, ppu-c, ihu-c)");
  run->add_option("--n", n_opt, "override matrix cell count");
  run->add_option("--out", out_opt, "override output directory");

  std::vector<int> n_list;
  std::vector<std::string> scheme_names;
  int reference_n = 128, threads = 0;
  auto* sweep = app.add_subcommand("sweep", "refinement sweep with E2 table");
  sweep->add_option("config", config_path, "config JSON path")->required();
  sweep->add_option("--n-list", n_list, "matrix cell counts");
  sweep->add_option("--schemes", scheme_names, "schemes to sweep");
  sweep->add_option("--reference-n", reference_n, "reference resolution");
  sweep->add_option("--threads", threads, "sweep parallelism (0 = auto, 1 = serial)");
  sweep->add_option("--out", out_opt, "override output directory");

  std::string fs_scheme = "ppu", fs_out = "flux_surface.csv";
  double fs_ut = 0.0, fs_trans = 1.0;
  int fs_n = 200, fs_exp = 2;
  auto* fsurf = app.add_subcommand("flux-surface", "sample F_w(S_L,S_R)");
  fsurf->add_option("--scheme", fs_scheme, "ppu or ihu");
  fsurf->add_option("--ut", fs_ut, "prescribed total flux");
  fsurf->add_option("--trans", fs_trans, "interface transmissibility");
  fsurf->add_option("--n", fs_n, "grid resolution per axis");
  fsurf->add_option("--relperm-exponent", fs_exp, "matrix relperm exponent");
  fsurf->add_option("--out", fs_out, "output CSV");

  std::string tr_dir, tr_out = "truncation.csv";
  double tr_lo = 0.55, tr_hi = 0.75;
  auto* trunc = app.add_subcommand("truncation", "truncation-error terms of a run");
  trunc->add_option("rundir", tr_dir, "directory of a completed run")->required();
  trunc->add_option("--xd-lo", tr_lo, "segment lower bound (x/L)");
  trunc->add_option("--xd-hi", tr_hi, "segment upper bound (x/L)");
  trunc->add_option("--out", tr_out, "output CSV");

  std::string cv_region = "matrix", cv_out = "curves.csv";
  int cv_exp = 2, cv_n = 401;
  auto* curves = app.add_subcommand("curves", "saturation-function tables");
  curves->add_option("--region", cv_region, "matrix or fracture");
  curves->add_option("--relperm-exponent", cv_exp, "matrix relperm exponent");
  curves->add_option("--n", cv_n, "samples");
  curves->add_option("--out", cv_out, "output CSV");

  std::string gd_out = "grid.csv";
  auto* gdump = app.add_subcommand("grid-dump", "grid summary of a config");
  gdump->add_option("config", config_path, "config JSON path")->required();
  gdump->add_option("--out", gd_out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, scheme_opt, n_opt, out_opt);
    if (sweep->parsed()) {
      return cmd_sweep(config_path, n_list, scheme_names, reference_n, threads,
                       out_opt);
    }
    if (fsurf->parsed()) {
      return cmd_fluxsurface(fs_scheme, fs_ut, fs_trans, fs_n, fs_exp, fs_out);
    }
    if (trunc->parsed()) return cmd_truncation(tr_dir, tr_lo, tr_hi, tr_out);
    if (curves->parsed()) return cmd_curves(cv_region, cv_exp, cv_n, cv_out);
    if (gdump->parsed()) return cmd_griddump(config_path, gd_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const AnalysisError& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return kExitAnalysis;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}
