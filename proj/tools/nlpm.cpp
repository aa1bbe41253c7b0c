#include "nlpm/io.hpp"
#include "nlpm/probes.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

namespace fs = std::filesystem;
using namespace nlpm;

namespace {

std::string output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("NLPM_OUT_ROOT")) return env;
  return "nlpm-out";
}

FdExponentVariant parse_variant(const std::string& v) {
  if (v == "minus-md") return FdExponentVariant::MinusMd;
  return FdExponentVariant::PlusMd;
}

struct RunOutcome {
  bool ok = false;
  std::string message;
};

RunOutcome run_one(const RunConfig& cfg, const fs::path& dir, FdExponentVariant variant) {
  RunOutcome oc;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fs::create_directories(dir);
    write_text_file((dir / "config.txt").string(), format_config(cfg));
    const ModelParams params = config_params(cfg);
    const TorusGrid grid = config_grid(cfg);
    const Field init = prepare_initial_data(cfg.initial, params, grid);

    EvolveResult res;
    bool evolve_ok = true;
    std::string evolve_msg;
    try {
      res = evolve(init, params, cfg.ctrl, cfg.t_end, cfg.snapshot_times, cfg.p_list);
    } catch (const evolve_error& e) {
      res = e.partial;
      evolve_ok = false;
      evolve_msg = e.what();
    }

    write_text_file((dir / "diagnostics.csv").string(), diagnostics_csv(res.records, cfg.p_list));
    int idx = 0;
    for (const auto& snap : res.snapshots) {
      char name[64];
      std::snprintf(name, sizeof(name), "snapshot_%03d.bin", idx++);
      write_snapshot((dir / name).string(), snap.second, snap.first, cfg);
    }

    TheoremCheckOptions opts;
    opts.variant = variant;
    opts.fit_exponents = cfg.initial.kind == InitialDataSpec::Kind::ApproxDirac;
    std::vector<CheckVerdict> verdicts;
    if (!res.records.empty()) verdicts = check_theorem_items(res, params, opts);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text_file((dir / "report.json").string(), verdict_report_json(verdicts, cfg, wall));

    bool all = evolve_ok;
    for (const auto& v : verdicts)
      if (!v.passed) all = false;
    oc.ok = all;
    std::ostringstream msg;
    msg << dir.string() << ": " << res.total_steps << " steps";
    if (!evolve_ok) msg << " [run aborted: " << evolve_msg << "]";
    for (const auto& v : verdicts)
      msg << "\n  " << (v.skipped ? "SKIP" : v.passed ? "pass" : "FAIL") << "  " << v.name
          << "  margin=" << v.margin;
    oc.message = msg.str();
  } catch (const std::exception& e) {
    oc.ok = false;
    oc.message = dir.string() + ": error: " + e.what();
  }
  return oc;
}

int cmd_run(const std::string& config_path, const std::string& out, const std::string& variant) {
  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  const fs::path dir = fs::path(output_root(out)) / fs::path(config_path).stem();
  const RunOutcome oc = run_one(cfg, dir, parse_variant(variant));
  std::cout << oc.message << "\n";
  return oc.ok ? 0 : 1;
}

int cmd_sweep(const std::vector<std::string>& config_paths, const std::string& out,
              const std::string& variant) {
  std::vector<RunConfig> cfgs;
  std::vector<fs::path> dirs;
  const fs::path root = output_root(out);
  for (std::size_t i = 0; i < config_paths.size(); ++i) {
    try {
      cfgs.push_back(parse_config(config_paths[i]));
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    char sub[32];
    std::snprintf(sub, sizeof(sub), "sweep-%03zu-", i);
    dirs.push_back(root / (sub + fs::path(config_paths[i]).stem().string()));
  }
  std::vector<RunOutcome> outcomes(cfgs.size());
  std::atomic<std::size_t> next{0};
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(cfgs.size()));
  std::vector<std::thread> pool;
  const FdExponentVariant var = parse_variant(variant);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < cfgs.size(); i = next.fetch_add(1))
        outcomes[i] = run_one(cfgs[i], dirs[i], var);
    });
  for (auto& th : pool) th.join();
  bool all = true;
  for (const auto& oc : outcomes) {
    std::cout << oc.message << "\n";
    if (!oc.ok) all = false;
  }
  return all ? 0 : 1;
}

struct SuiteResult {
  int passed = 0;
  int total = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
};

void tally(SuiteResult& r, const CheckVerdict& v, std::uint64_t seed) {
  ++r.total;
  if (v.passed)
    ++r.passed;
  else
    std::cout << "  FAIL " << v.name << " seed=" << seed << " margin=" << v.margin << "\n";
  r.worst_margin = std::min(r.worst_margin, v.margin);
}

SuiteResult suite_min_principle(long base_seed) {
  SuiteResult r;
  const double alphas1[] = {1.2, 1.5, 1.8};
  const double alphas2[] = {1.0, 1.4};
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t seed = static_cast<std::uint64_t>(base_seed) * 1000003ULL + i;
    const int d = i % 2 == 0 ? 1 : 2;
    const double alpha = d == 1 ? alphas1[i % 3] : alphas2[i % 2];
    const ModelParams params =
        make_params(d, alpha + d - 2.0, 0.5, Regime::FastDiffusion, 1e-3);
    const TorusGrid grid = make_grid(d, d == 1 ? 128 : 64);
    const Field f = random_band_limited(grid, seed);
    tally(r, check_min_principle(f, params), seed);
  }
  return r;
}

SuiteResult suite_cv_max_principle(long base_seed) {
  SuiteResult r;
  const double alphas1[] = {1.2, 1.5, 1.8};
  const double alphas2[] = {1.0, 1.4};
  const double probes[] = {1.0, 2.0, 3.0};
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t seed = static_cast<std::uint64_t>(base_seed) * 2000003ULL + i;
    const int d = i % 2 == 0 ? 1 : 2;
    const double alpha = d == 1 ? alphas1[i % 3] : alphas2[i % 2];
    const ModelParams params =
        make_params(d, alpha + d - 2.0, 0.5, Regime::FastDiffusion, 1e-3);
    const TorusGrid grid = make_grid(d, d == 1 ? 128 : 64);
    Field f(grid);
    if (d == 1 && i % 10 == 0)
      f = approx_dirac_probe(grid, 0.02, 1.0);  // sharply peaked: first branch
    else
      f = random_band_limited(grid, seed, 0, i % 5 == 0 ? 0.01 : 0.5);
    for (double q : probes) tally(r, check_cv_max_principle(f, params, ConvexProbe{q}), seed);
  }
  return r;
}

SuiteResult suite_stroock_varopoulos(long base_seed) {
  SuiteResult r;
  const double ps[] = {0.5, 1.0, 1.5, 3.0};
  const double orders[] = {0.5, 1.0, 1.5};
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t seed = static_cast<std::uint64_t>(base_seed) * 3000017ULL + i;
    const int d = i % 5 == 4 ? 2 : 1;
    const TorusGrid grid = make_grid(d, d == 1 ? 128 : 64);
    const Field f = random_band_limited(grid, seed, 0, 0.3 + 0.1 * (i % 4));
    tally(r, check_stroock_varopoulos(f, ps[i % 4], orders[(i / 4) % 3]), seed);
  }
  return r;
}

int cmd_check(long seed, const std::string& suite) {
  bool all_ok = true;
  auto report = [&](const char* name, SuiteResult r) {
    std::cout << name << ": " << r.passed << "/" << r.total
              << " pass, worst margin = " << r.worst_margin << "\n";
    if (r.passed != r.total) all_ok = false;
  };
  if (suite == "min-principle" || suite == "all") report("min-principle", suite_min_principle(seed));
  if (suite == "cv-max-principle" || suite == "all")
    report("cv-max-principle", suite_cv_max_principle(seed));
  if (suite == "stroock-varopoulos" || suite == "all")
    report("stroock-varopoulos", suite_stroock_varopoulos(seed));
  return all_ok ? 0 : 1;
}

int cmd_barrier(int d, double s, double m, const std::string& regime, double mass, double phi0,
                double t_end, int points, const std::string& csv_path) {
  try {
    const Regime reg = regime == "clogged" ? Regime::Clogged : Regime::FastDiffusion;
    const ModelParams params = make_params(d, s, m, reg, 1e-3);
    BarrierParams bp;
    bp.m = m;
    bp.mass = mass;
    bp.C = barrier_constant(params);
    bp.phi0 = phi0;
    bp.regime = reg;
    const BarrierCurve curve = solve_barrier(bp, t_end, points);
    std::cout << "barrier constant C = " << bp.C
              << ", envelope prefactor = " << envelope_prefactor(bp) << "\n";
    std::ostringstream csv;
    csv << "t,phi,envelope\n";
    std::printf("%12s %14s %14s\n", "t", "phi", "envelope");
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
      const double env = barrier_envelope(bp, curve.times[i]);
      csv << curve.times[i] << "," << curve.values[i] << "," << env << "\n";
      if (i % std::max<std::size_t>(1, curve.times.size() / 20) == 0 ||
          i + 1 == curve.times.size())
        std::printf("%12.6g %14.8g %14.8g\n", curve.times[i], curve.values[i], env);
    }
    if (!csv_path.empty()) write_text_file(csv_path, csv.str());
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_exponents(int d, double s, double m, const std::string& regime, double p,
                  const std::string& variant) {
  try {
    const Regime reg = regime == "clogged" ? Regime::Clogged : Regime::FastDiffusion;
    const ModelParams params = make_params(d, s, m, reg, 1e-3);
    const ExponentSet e = compute_exponents(params, p, parse_variant(variant));
    std::printf("%8s %10s %10s %10s %10s\n", "p", "gamma", "delta_p", "zeta_p", "delta_fd");
    std::printf("%8.4g %10.4f %10.4f %10.4f %10.4f\n", e.p, e.gamma, e.delta_p, e.zeta_p,
                e.delta_fd);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral simulator and verification harness for nonlocal "
               "porous-medium equations on the periodic torus"};
  app.require_subcommand(1);

  std::string config_path, out_dir, variant = "plus-md", suite = "all";
  std::vector<std::string> config_paths;
  long seed = 7;
  int d = 1, points = 200;
  double s = 0.5, m = 0.5, mass = 1.0, phi0 = 0.0, t_end = 10.0, p = 1.0;
  std::string regime = "fast-diffusion", csv_path;

  auto* run = app.add_subcommand("run", "Execute one configured run and check it");
  run->add_option("--config", config_path, "Config file path")->required();
  run->add_option("--out", out_dir, "Output root (default $NLPM_OUT_ROOT or ./nlpm-out)");
  run->add_option("--formula-variant", variant, "plus-md or minus-md")
      ->check(CLI::IsMember({"plus-md", "minus-md"}));

  auto* sweep = app.add_subcommand("sweep", "Execute several runs concurrently");
  sweep->add_option("--config", config_paths, "Config file paths")->required()->expected(-1);
  sweep->add_option("--out", out_dir, "Output root");
  sweep->add_option("--formula-variant", variant, "plus-md or minus-md")
      ->check(CLI::IsMember({"plus-md", "minus-md"}));

  auto* check = app.add_subcommand("check", "Randomized lemma suites");
  check->add_option("--seed", seed, "Base seed");
  check->add_option("--suite", suite, "Suite name")
      ->check(CLI::IsMember({"all", "min-principle", "cv-max-principle", "stroock-varopoulos"}));

  auto* barrier = app.add_subcommand("barrier", "Integrate the lower-barrier ODE");
  barrier->add_option("--d", d, "Dimension (1 or 2)");
  barrier->add_option("--s", s, "Potential order s");
  barrier->add_option("--m", m, "Mobility exponent m");
  barrier->add_option("--regime", regime, "clogged or fast-diffusion")
      ->check(CLI::IsMember({"clogged", "fast-diffusion"}));
  barrier->add_option("--mass", mass, "Conserved mass");
  barrier->add_option("--phi0", phi0, "Initial barrier value");
  barrier->add_option("--t-end", t_end, "Final time");
  barrier->add_option("--points", points, "Output points");
  barrier->add_option("--csv", csv_path, "Optional CSV output path");

  auto* exponents = app.add_subcommand("exponents", "Print the regularization exponents");
  exponents->add_option("--d", d, "Dimension (1 or 2)");
  exponents->add_option("--s", s, "Potential order s");
  exponents->add_option("--m", m, "Mobility exponent m");
  exponents->add_option("--regime", regime, "clogged or fast-diffusion")
      ->check(CLI::IsMember({"clogged", "fast-diffusion"}));
  exponents->add_option("--p", p, "Norm index p");
  exponents->add_option("--formula-variant", variant, "plus-md or minus-md")
      ->check(CLI::IsMember({"plus-md", "minus-md"}));

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, out_dir, variant);
  if (sweep->parsed()) return cmd_sweep(config_paths, out_dir, variant);
  if (check->parsed()) return cmd_check(seed, suite);
  if (barrier->parsed()) return cmd_barrier(d, s, m, regime, mass, phi0, t_end, points, csv_path);
  if (exponents->parsed()) return cmd_exponents(d, s, m, regime, p, variant);
  return 2;
}
