#pragma once

#include <string>
#include <vector>

#include "torusflow/field.hpp"

namespace torusflow {

enum class Scheme { upwind_quasilinear, laxfriedrichs_conservative };
enum class HyperbolicityPolicy { halt, warn };
enum class Termination { reached_t_end, blowup_detected, hyperbolicity_lost };

const char* scheme_name(Scheme s);
const char* termination_name(Termination t);

struct EvolutionParams {
  Scheme scheme = Scheme::upwind_quasilinear;
  double cfl = 0.8;                  // in (0, 1]
  double t_end = 0.1;
  int snapshot_stride = 1;           // snapshot every this many steps
  double blowup_gradient_cap = -1.0; // <= 0: auto, 1e3 * max(initial max grad, 1)
  HyperbolicityPolicy policy = HyperbolicityPolicy::halt;
  std::vector<double> claw_levels;   // conservative scheme; empty: default levels
  int max_steps = 2000000;
};

struct StepDiagnostics {
  int step = 0;
  double t = 0.0;  // time after the step
  double dt = 0.0;
  double max_lambda = 0.0;
  double min_gap = 0.0;
  double max_grad = 0.0;
  int count_sh = 0, count_deg = 0, count_ell = 0; // cell classification census
};

struct EvolutionHistory {
  std::vector<FieldGrid> snapshots;      // time-ordered, first = initial data
  std::vector<StepDiagnostics> diagnostics;
  Termination termination = Termination::reached_t_end;
  std::string termination_detail;
  double end_time = 0.0;
  int steps_taken = 0;
  double gradient_cap = 0.0;             // resolved blow-up cap

  // Conservative scheme extras: graph state carried across the whole run.
  std::vector<double> claw_levels;
  std::vector<std::vector<std::vector<double>>> f_snapshots; // [snapshot][law][cell]
  double max_conservation_step_drift = 0.0; // max over steps/laws of |sum f - previous sum f|

  // Quasi-periodicity diagnostic: best over cell shifts s of
  // max-norm difference between the final and initial snapshots.
  double best_shift_error = -1.0;
  int best_shift_cells = 0;
};

struct InitialMode {
  int mode = 1;
  double amplitude = 0.0;
  double phase = 0.0;
};

struct InitialFieldSpec {
  double mean = 0.0;
  std::vector<InitialMode> modes;
};

// Per-field trigonometric initial data
//   a_k(x) = mean_k + sum_m amplitude sin(2 pi mode x / L + phase).
struct InitialDataSpec {
  int n = 3;
  int M = 128;
  double L = 1.0;
  std::vector<InitialFieldSpec> fields; // size n
};

// Sample the spec at cell centers; rejects (invalid_state /
// classification_error, message contains the first offending cell) if any
// cell has g <= 0 or fails strict hyperbolicity.
FieldGrid make_initial_data(const InitialDataSpec& spec);

// One time-level advance with dt = cfl dx / max_cells max_i |lambda_i|
// (clamped so t does not pass t_end).  The conservative path derives graph
// values from the grid, advances them, and recovers the state per cell.
FieldGrid step(const FieldGrid& grid, const EvolutionParams& params);

// Repeated stepping with diagnostics and first-class termination causes.
// The conservative scheme keeps the graph variables as the authoritative
// state across steps, so their cell sums telescope to rounding.
EvolutionHistory evolve(const FieldGrid& grid0, const EvolutionParams& params);

struct TraceResult {
  std::vector<double> t;  // snapshot times covered
  std::vector<double> x;  // traced position (unwrapped)
  std::vector<double> r;  // r_i sampled along the curve
  double max_drift = 0.0; // max |r - r(0)|
  bool truncated = false; // curve left the stored history or lost hyperbolicity
};

// Integrate dx/dt = lambda_i(U(t,x)) through the stored snapshots (linear
// interpolation in x and t) and sample r_i along the curve.
TraceResult characteristic_trace(const EvolutionHistory& history, int field_index, double x0);

} // namespace torusflow
