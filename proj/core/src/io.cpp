#include "nlpm/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nlpm {

namespace {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", p);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream iss(t);
  std::vector<std::string> out;
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

struct ParseCtx {
  const std::string& origin;
  int line;

  [[noreturn]] void fail(const std::string& msg) const {
    throw config_error(origin + ":" + std::to_string(line) + ": " + msg);
  }

  double num(const std::string& v) const {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) fail("trailing characters in number '" + v + "'");
      return x;
    } catch (const std::invalid_argument&) {
      fail("expected a number, got '" + v + "'");
    } catch (const std::out_of_range&) {
      fail("number out of range: '" + v + "'");
    }
  }

  long integer(const std::string& v) const {
    const double x = num(v);
    const long i = static_cast<long>(x);
    if (static_cast<double>(i) != x) fail("expected an integer, got '" + v + "'");
    return i;
  }

  std::vector<double> numbers(const std::string& v) const {
    std::vector<double> out;
    for (const auto& tok : split_list(v)) out.push_back(num(tok));
    return out;
  }
};

const char* regime_name(Regime r) {
  return r == Regime::Clogged ? "clogged" : "fast-diffusion";
}

const char* initial_name(InitialDataSpec::Kind k) {
  switch (k) {
    case InitialDataSpec::Kind::Constant: return "constant";
    case InitialDataSpec::Kind::CosineBump: return "cosine-bump";
    case InitialDataSpec::Kind::ApproxDirac: return "approx-dirac";
    case InitialDataSpec::Kind::Custom: return "custom";
  }
  return "constant";
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream iss(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(iss, raw)) {
    ++lineno;
    ParseCtx ctx{origin, lineno};
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) ctx.fail("expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) ctx.fail("empty key");
    if (!seen.insert(key).second) ctx.fail("duplicate key '" + key + "'");

    if (key == "d") {
      cfg.d = static_cast<int>(ctx.integer(val));
    } else if (key == "s") {
      cfg.s = ctx.num(val);
    } else if (key == "m") {
      cfg.m = ctx.num(val);
    } else if (key == "regime") {
      if (val == "clogged")
        cfg.regime = Regime::Clogged;
      else if (val == "fast-diffusion")
        cfg.regime = Regime::FastDiffusion;
      else
        ctx.fail("regime must be 'clogged' or 'fast-diffusion', got '" + val + "'");
    } else if (key == "epsilon") {
      cfg.epsilon = ctx.num(val);
    } else if (key == "grid_n") {
      cfg.grid_n = static_cast<int>(ctx.integer(val));
    } else if (key == "initial") {
      if (val == "constant")
        cfg.initial.kind = InitialDataSpec::Kind::Constant;
      else if (val == "cosine-bump")
        cfg.initial.kind = InitialDataSpec::Kind::CosineBump;
      else if (val == "approx-dirac")
        cfg.initial.kind = InitialDataSpec::Kind::ApproxDirac;
      else if (val == "custom")
        cfg.initial.kind = InitialDataSpec::Kind::Custom;
      else
        ctx.fail("unknown initial data kind '" + val + "'");
    } else if (key == "initial_mass") {
      cfg.initial.target_mass = ctx.num(val);
    } else if (key == "cosine_amplitude") {
      cfg.initial.amplitude = ctx.num(val);
    } else if (key == "cosine_wavevector") {
      cfg.initial.wavevector = static_cast<int>(ctx.integer(val));
    } else if (key == "dirac_center") {
      const auto c = ctx.numbers(val);
      if (c.empty() || c.size() > 2) ctx.fail("dirac_center takes 1 or 2 coordinates");
      cfg.initial.center[0] = c[0];
      cfg.initial.center[1] = c.size() > 1 ? c[1] : 0.0;
    } else if (key == "dirac_width") {
      cfg.initial.spectral_width = ctx.num(val);
    } else if (key == "custom_samples") {
      cfg.initial.samples = ctx.numbers(val);
    } else if (key == "cfl_safety") {
      cfg.ctrl.cfl_safety = ctx.num(val);
    } else if (key == "dt_min") {
      cfg.ctrl.dt_min = ctx.num(val);
    } else if (key == "dt_max") {
      cfg.ctrl.dt_max = ctx.num(val);
    } else if (key == "positivity_floor_fraction") {
      cfg.ctrl.positivity_floor_fraction = ctx.num(val);
    } else if (key == "t_end") {
      cfg.t_end = ctx.num(val);
    } else if (key == "snapshot_times") {
      cfg.snapshot_times = ctx.numbers(val);
    } else if (key == "p_list") {
      cfg.p_list = ctx.numbers(val);
    } else if (key == "seed") {
      cfg.seed = ctx.integer(val);
    } else {
      ctx.fail("unknown key '" + key + "'");
    }
  }
  // Validate the model/grid domain eagerly so errors point at the config.
  try {
    (void)config_params(cfg);
    (void)config_grid(cfg);
    if (!(cfg.ctrl.cfl_safety > 0.0 && cfg.ctrl.cfl_safety <= 1.0))
      throw validation_error("cfl_safety must lie in (0,1]");
    if (!(cfg.ctrl.positivity_floor_fraction > 0.0 && cfg.ctrl.positivity_floor_fraction < 1.0))
      throw validation_error("positivity_floor_fraction must lie in (0,1)");
    if (!(cfg.t_end >= 0.0)) throw validation_error("t_end must be >= 0");
  } catch (const validation_error& e) {
    throw config_error(origin + ": " + e.what());
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  return parse_config_text(read_text_file(path), path);
}

std::string format_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "d = " << cfg.d << "\n";
  os << "s = " << fmt_num(cfg.s) << "\n";
  os << "m = " << fmt_num(cfg.m) << "\n";
  os << "regime = " << regime_name(cfg.regime) << "\n";
  os << "epsilon = " << fmt_num(cfg.epsilon) << "\n";
  os << "grid_n = " << cfg.grid_n << "\n";
  os << "initial = " << initial_name(cfg.initial.kind) << "\n";
  os << "initial_mass = " << fmt_num(cfg.initial.target_mass) << "\n";
  os << "cosine_amplitude = " << fmt_num(cfg.initial.amplitude) << "\n";
  os << "cosine_wavevector = " << cfg.initial.wavevector << "\n";
  os << "dirac_center = " << fmt_num(cfg.initial.center[0]) << " "
     << fmt_num(cfg.initial.center[1]) << "\n";
  os << "dirac_width = " << fmt_num(cfg.initial.spectral_width) << "\n";
  if (!cfg.initial.samples.empty()) {
    os << "custom_samples =";
    for (double v : cfg.initial.samples) os << " " << fmt_num(v);
    os << "\n";
  }
  os << "cfl_safety = " << fmt_num(cfg.ctrl.cfl_safety) << "\n";
  os << "dt_min = " << fmt_num(cfg.ctrl.dt_min) << "\n";
  os << "dt_max = " << fmt_num(cfg.ctrl.dt_max) << "\n";
  os << "positivity_floor_fraction = " << fmt_num(cfg.ctrl.positivity_floor_fraction) << "\n";
  os << "t_end = " << fmt_num(cfg.t_end) << "\n";
  os << "snapshot_times =";
  for (double v : cfg.snapshot_times) os << " " << fmt_num(v);
  os << "\n";
  os << "p_list =";
  for (double v : cfg.p_list) os << " " << fmt_num(v);
  os << "\n";
  os << "seed = " << cfg.seed << "\n";
  return os.str();
}

ModelParams config_params(const RunConfig& cfg) {
  return make_params(cfg.d, cfg.s, cfg.m, cfg.regime, cfg.epsilon);
}

TorusGrid config_grid(const RunConfig& cfg) { return make_grid(cfg.d, cfg.grid_n); }

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& recs,
                            const std::vector<double>& p_list) {
  std::vector<double> extra_ps;
  for (double p : p_list)
    if (p != 1.0 && p != 2.0) extra_ps.push_back(p);

  std::ostringstream os;
  os << "time,mass,l1,l2";
  for (double p : extra_ps) os << ",lp_" << fmt_p(p);
  os << ",linf,energy,min,max,spectral_tail,dt";
  for (double p : p_list) os << ",diss_p" << fmt_p(p);
  for (double p : p_list) os << ",sv_p" << fmt_p(p);
  os << ",flux\n";

  auto get = [](const std::map<double, double>& m, double p) {
    auto it = m.find(p);
    return it == m.end() ? 0.0 : it->second;
  };
  for (const auto& r : recs) {
    os << fmt_num(r.time) << "," << fmt_num(r.mass) << "," << fmt_num(get(r.lp_norms, 1.0)) << ","
       << fmt_num(get(r.lp_norms, 2.0));
    for (double p : extra_ps) os << "," << fmt_num(get(r.lp_norms, p));
    os << "," << fmt_num(r.linf) << "," << fmt_num(r.energy) << "," << fmt_num(r.min_value) << ","
       << fmt_num(r.max_value) << "," << fmt_num(r.spectral_tail) << "," << fmt_num(r.dt);
    for (double p : p_list) os << "," << fmt_num(get(r.dissipation_acc, p));
    for (double p : p_list) os << "," << fmt_num(get(r.sv_acc, p));
    os << "," << fmt_num(r.flux_acc) << "\n";
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw config_error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_snapshot(const std::string& path, const Field& f, double time, const RunConfig& cfg) {
  static_assert(sizeof(double) == 8);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open '" + path + "' for writing");
  char header[96];
  std::snprintf(header, sizeof(header), "NLPMSNAP 1 %d %d %.17g\n", f.grid.d,
                f.grid.points_per_axis, time);
  out << header;
  // Raw doubles; the format is little-endian and so are all supported hosts.
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!out) throw config_error("write failed for '" + path + "'");
  out.close();
  std::string meta = format_config(cfg);
  meta += "# snapshot_time = " + fmt_num(time) + "\n";
  write_text_file(path + ".meta", meta);
}

Field read_snapshot(const std::string& path, double& time) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic;
  int version = 0, d = 0, N = 0;
  hs >> magic >> version >> d >> N >> time;
  if (magic != "NLPMSNAP" || version != 1 || !hs)
    throw config_error("'" + path + "': not a version-1 snapshot file");
  Field f(make_grid(d, N));
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(double)))
    throw config_error("'" + path + "': truncated snapshot payload");
  return f;
}

std::string verdict_report_json(const std::vector<CheckVerdict>& verdicts, const RunConfig& cfg,
                                double wall_seconds) {
  nlohmann::json j;
  j["tool"] = {{"name", "nlpm"}, {"version", "0.1.0"}};
#if defined(__linux__)
  j["platform"] = "linux";
#elif defined(__APPLE__)
  j["platform"] = "darwin";
#else
  j["platform"] = "unknown";
#endif
  j["wall_seconds"] = wall_seconds;
  j["config"] = format_config(cfg);
  bool all = true;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : verdicts) {
    nlohmann::json jv;
    jv["name"] = v.name;
    jv["passed"] = v.passed;
    jv["skipped"] = v.skipped;
    jv["margin"] = v.margin;
    for (const auto& kv : v.details) jv["details"][kv.first] = kv.second;
    arr.push_back(std::move(jv));
    if (!v.passed) all = false;
  }
  j["verdicts"] = std::move(arr);
  j["all_passed"] = all;
  return j.dump(2) + "\n";
}

}  // namespace nlpm
