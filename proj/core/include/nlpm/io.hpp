#pragma once

#include "nlpm/theorems.hpp"

#include <string>
#include <vector>

namespace nlpm {

/// Full run description; round-trips losslessly through the key = value
/// config format (see format_config for the schema).
struct RunConfig {
  int d = 1;
  double s = 0.5;
  double m = 0.5;
  Regime regime = Regime::FastDiffusion;
  double epsilon = 1e-3;
  int grid_n = 256;
  InitialDataSpec initial;
  StepControl ctrl;
  double t_end = 1.0;
  std::vector<double> snapshot_times;
  std::vector<double> p_list = {2.0, 3.0};
  long seed = 0;
};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse config text; `origin` names the source (file path) for error
/// messages of the form "origin:line: message". Unknown keys are errors.
RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config(const std::string& path);

/// Canonical text form; parse_config_text(format_config(c)) == c.
std::string format_config(const RunConfig& cfg);

ModelParams config_params(const RunConfig& cfg);
TorusGrid config_grid(const RunConfig& cfg);

/// Deterministic CSV: fixed column schema (schema version 1), %.17g values.
/// Columns: time,mass,l1,l2,lp_<p>...,linf,energy,min,max,spectral_tail,dt,
/// diss_p<p>,sv_p<p>...,flux.
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& recs,
                            const std::vector<double>& p_list);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Snapshot: one text header line "NLPMSNAP 1 <d> <N> <time>\n" followed by
/// N^d little-endian doubles in row-major order; a ".meta" sidecar carries
/// the full config.
void write_snapshot(const std::string& path, const Field& f, double time, const RunConfig& cfg);
Field read_snapshot(const std::string& path, double& time);

/// Structured JSON verdict report (verdicts, config echo, provenance).
std::string verdict_report_json(const std::vector<CheckVerdict>& verdicts, const RunConfig& cfg,
                                double wall_seconds);

}  // namespace nlpm
