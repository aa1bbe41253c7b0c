#pragma once

#include "nlpm/diagnostics.hpp"
#include "nlpm/operators.hpp"

#include <array>
#include <utility>
#include <vector>

namespace nlpm {

struct InitialDataSpec {
  enum class Kind { Constant, CosineBump, ApproxDirac, Custom };
  Kind kind = Kind::Constant;
  double constant_value = 1.0;                 // Constant
  double amplitude = 0.5;                      // CosineBump
  int wavevector = 1;                          // CosineBump
  std::array<double, 2> center = {0.0, 0.0};   // ApproxDirac
  double spectral_width = 0.02;                // ApproxDirac (heat-kernel width)
  std::vector<double> samples;                 // Custom
  double target_mass = 1.0;
};

struct StepControl {
  double cfl_safety = 0.9;
  double dt_min = 1e-13;
  double dt_max = 1e-2;
  double positivity_floor_fraction = 0.5;
};

struct RunState {
  double time = 0.0;
  Field field;
  long step_count = 0;
  double dt_current = 0.0;
};

struct degenerate_mobility_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct step_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// mu_{0,eps}: mollified shape of total mass target_mass, plus the additive
/// floor eps. The recorded mass is target_mass + eps.
Field prepare_initial_data(const InitialDataSpec& spec, const ModelParams& params,
                           const TorusGrid& grid);

/// Pointwise mobility: (max(mu, eps/2))^{-m} in the clogged regime, mu^m in
/// fast diffusion. Throws degenerate_mobility_error if a clogged sample
/// drops below eps/4 (the step controller treats that as a rejection).
Field mobility(const Field& f, const ModelParams& params);

/// div(mobility * grad g * f) + eps * Laplacian f, pseudo-spectral with
/// 2/3-rule dealiasing of the flux. Zero mean exactly.
Field rhs(const Field& f, const ModelParams& params);

/// One adaptive step: integrating-factor RK4 (exact exponential for the
/// viscous symbol, classical RK4 for the transport term), with step
/// rejection and halving on positivity-guard violation.
RunState step(const RunState& state, const ModelParams& params, const StepControl& ctrl);

struct EvolveResult {
  std::vector<DiagnosticsRecord> records;
  DissipationLedger ledger;
  std::vector<std::pair<double, Field>> snapshots;
  Field final_state;
  double mu_bar_eps = 0.0;
  long total_steps = 0;
  long rejected_steps = 0;
  long guard_activations = 0;  // clogged mobility guard hits (logged, not fatal)
  double dt_initial = 0.0;
};

struct evolve_error : std::runtime_error {
  EvolveResult partial;
  evolve_error(const std::string& what, EvolveResult p)
      : std::runtime_error(what), partial(std::move(p)) {}
};

EvolveResult evolve(const Field& initial, const ModelParams& params, const StepControl& ctrl,
                    double t_end, const std::vector<double>& snapshot_times,
                    const std::vector<double>& p_list = {2.0, 3.0});

}  // namespace nlpm
