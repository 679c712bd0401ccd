#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "torusflow/claws.hpp"
#include "torusflow/errors.hpp"
#include "torusflow/evolution.hpp"
#include "torusflow/io.hpp"
#include "torusflow/spectral.hpp"

using namespace torusflow;

namespace {

InitialDataSpec smooth_spec(int M, double amplitude) {
  InitialDataSpec spec;
  spec.n = 3;
  spec.M = M;
  spec.L = 1.0;
  spec.fields.resize(3);
  spec.fields[0].mean = 0.0;
  spec.fields[0].modes.push_back({1, amplitude, 0.0});
  spec.fields[1].mean = 0.0;
  spec.fields[2].mean = 1.0;
  return spec;
}

InitialDataSpec constant_spec(int M) { return smooth_spec(M, 0.0); }

// Initial data varying a single invariant: the exact solution rides a
// one-parameter curve in state space, so it steepens into a gradient
// catastrophe without leaving the strictly-hyperbolic region.
FieldGrid simple_wave_grid(int M, double amp, int field) {
  FieldPoint base{0.0, 0.0, 1.0};
  std::vector<double> r0 = riemann_invariants(base);
  FieldGrid g;
  g.length = 1.0;
  g.time = 0.0;
  g.cells.resize(M);
  FieldPoint guess = base;
  for (int j = 0; j < M; ++j) {
    std::vector<double> r = r0;
    r[field] += amp * std::sin(2 * M_PI * (j + 0.5) / M);
    guess = invert_riemann_map(r, guess);
    g.cells[j] = guess;
  }
  return g;
}

} // namespace

TEST_CASE("initial data sampling honors the field specs") {
  InitialDataSpec spec = smooth_spec(32, 0.05);
  FieldGrid g = make_initial_data(spec);
  REQUIRE(g.size() == 32);
  REQUIRE(g.n() == 3);
  for (int j = 0; j < 32; ++j) {
    double x = g.x_center(j);
    CHECK(g.cells[j][0] == doctest::Approx(0.05 * std::sin(2 * M_PI * x)).epsilon(1e-14));
    CHECK(g.cells[j][2] == doctest::Approx(1.0));
  }
}

TEST_CASE("initial data rejects non-hyperbolic and non-metric states") {
  InitialDataSpec bad = constant_spec(16);
  bad.fields[0].mean = 2.0;
  bad.fields[2].mean = 0.6; // elliptic anchor
  try {
    make_initial_data(bad);
    FAIL("expected a classification error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::classification_error);
  }

  InitialDataSpec nonmetric = constant_spec(16);
  nonmetric.fields[2].mean = -1.0;
  CHECK_THROWS_AS(make_initial_data(nonmetric), Error);
}

TEST_CASE("constant data is a fixed point of both schemes") {
  FieldGrid g0 = make_initial_data(constant_spec(16));
  for (Scheme s : {Scheme::upwind_quasilinear, Scheme::laxfriedrichs_conservative}) {
    EvolutionParams p;
    p.scheme = s;
    p.t_end = 0.05;
    EvolutionHistory h = evolve(g0, p);
    CHECK(h.termination == Termination::reached_t_end);
    CHECK(h.end_time == doctest::Approx(0.05).epsilon(1e-12));
    const FieldGrid& last = h.snapshots.back();
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < 3; ++k)
        CHECK(std::abs(last.cells[j][k] - g0.cells[j][k]) <= 1e-13);
    CHECK(h.best_shift_error <= 1e-13);
  }
}

TEST_CASE("conservative scheme telescopes the graph sums to rounding") {
  FieldGrid g0 = make_initial_data(smooth_spec(64, 0.02));
  EvolutionParams p;
  p.scheme = Scheme::laxfriedrichs_conservative;
  p.t_end = 0.2;
  EvolutionHistory h = evolve(g0, p);
  CHECK(h.termination == Termination::reached_t_end);
  CHECK(h.steps_taken > 50);
  CHECK(h.max_conservation_step_drift <= 1e-12);
  REQUIRE(!h.f_snapshots.empty());
  REQUIRE(h.claw_levels.size() == 3);
}

TEST_CASE("schemes agree on smooth data at coarse tolerance") {
  FieldGrid g0 = make_initial_data(smooth_spec(64, 0.02));
  EvolutionParams pu;
  pu.t_end = 0.05;
  EvolutionParams pl = pu;
  pl.scheme = Scheme::laxfriedrichs_conservative;
  EvolutionHistory hu = evolve(g0, pu);
  EvolutionHistory hl = evolve(g0, pl);
  REQUIRE(hu.termination == Termination::reached_t_end);
  REQUIRE(hl.termination == Termination::reached_t_end);
  double dist = 0.0;
  const FieldGrid& a = hu.snapshots.back();
  const FieldGrid& b = hl.snapshots.back();
  REQUIRE(a.size() == b.size());
  CHECK(a.time == doctest::Approx(b.time).epsilon(1e-12));
  for (int j = 0; j < a.size(); ++j)
    for (int k = 0; k < 3; ++k) dist = std::max(dist, std::abs(a.cells[j][k] - b.cells[j][k]));
  CHECK(dist <= 5e-3);
  CHECK(dist > 0.0); // the routes must be genuinely independent
}

TEST_CASE("claw residual shrinks with the grid on evolved smooth data") {
  double r_coarse = 0.0, r_fine = 0.0;
  for (int M : {64, 128}) {
    FieldGrid g0 = make_initial_data(smooth_spec(M, 0.02));
    EvolutionParams p;
    p.t_end = 0.05;
    EvolutionHistory h = evolve(g0, p);
    REQUIRE(h.termination == Termination::reached_t_end);
    ClawResidual blk = claw_residual(h.snapshots, default_claw_levels(3));
    (M == 64 ? r_coarse : r_fine) = blk.max_abs;
  }
  CHECK(r_fine < r_coarse);
  CHECK(r_coarse / r_fine >= 1.5);
}

TEST_CASE("steep data trips the gradient cap") {
  // a wave in the strongly nonlinear slow family steepens monotonically;
  // the cap sits above the initial gradient (~0.7) but below the peak
  FieldGrid g0 = simple_wave_grid(256, 0.05, 0);
  EvolutionParams p;
  p.t_end = 6.0;
  p.blowup_gradient_cap = 1.5;
  EvolutionHistory h = evolve(g0, p);
  CHECK(h.termination == Termination::blowup_detected);
  CHECK(h.gradient_cap == 1.5);
  CHECK(h.end_time < 6.0);
  REQUIRE(!h.diagnostics.empty());
  CHECK(h.diagnostics.back().max_grad > 1.5);
}

TEST_CASE("halt policy stops on a grid that lost strict hyperbolicity") {
  FieldGrid g;
  g.length = 1.0;
  g.cells.assign(16, FieldPoint{0.0, 0.0, 1.0});
  g.cells[5] = FieldPoint{2.0 / 3.0, 0.0, 1.0}; // exact double root
  EvolutionParams p;
  p.t_end = 0.1;
  EvolutionHistory h = evolve(g, p);
  CHECK(h.termination == Termination::hyperbolicity_lost);
  CHECK(h.steps_taken == 0);
  CHECK(h.termination_detail.find("degenerate") != std::string::npos);
}

TEST_CASE("warn policy pushes the conservative scheme through degeneracy") {
  FieldGrid g;
  g.length = 1.0;
  g.cells.assign(16, FieldPoint{0.0, 0.0, 1.0});
  g.cells[5] = FieldPoint{2.0 / 3.0, 0.0, 1.0};
  EvolutionParams p;
  p.scheme = Scheme::laxfriedrichs_conservative;
  p.policy = HyperbolicityPolicy::warn;
  p.t_end = 0.01;
  EvolutionHistory h = evolve(g, p);
  CHECK(h.termination == Termination::reached_t_end);
  REQUIRE(!h.diagnostics.empty());
  CHECK(h.diagnostics.front().count_deg >= 1);
  CHECK(h.diagnostics.front().count_sh == 15);
}

TEST_CASE("snapshot stride thins the stored history") {
  FieldGrid g0 = make_initial_data(smooth_spec(32, 0.01));
  EvolutionParams p;
  p.t_end = 0.05;
  p.snapshot_stride = 5;
  EvolutionHistory h = evolve(g0, p);
  CHECK(h.snapshots.size() <= static_cast<size_t>(h.steps_taken / 5 + 2));
  CHECK(h.snapshots.back().time == doctest::Approx(h.end_time));
}

TEST_CASE("characteristic trace is exact on constant data") {
  FieldGrid g0 = make_initial_data(constant_spec(16));
  Spectrum sp = spectrum(g0.cells[0]);
  EvolutionParams p;
  p.t_end = 0.05;
  EvolutionHistory h = evolve(g0, p);
  for (int i = 0; i < 3; ++i) {
    TraceResult tr = characteristic_trace(h, i, 0.25);
    REQUIRE(!tr.truncated);
    REQUIRE(tr.t.size() >= 2);
    CHECK(tr.max_drift <= 1e-12);
    double expect = 0.25 + sp.lambda[i] * (tr.t.back() - tr.t.front());
    CHECK(tr.x.back() == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("characteristic trace validates its inputs") {
  FieldGrid g0 = make_initial_data(constant_spec(16));
  EvolutionParams p;
  p.t_end = 0.02;
  EvolutionHistory h = evolve(g0, p);
  CHECK_THROWS_AS(characteristic_trace(h, 7, 0.25), Error);
  EvolutionHistory empty;
  empty.snapshots.push_back(g0);
  CHECK_THROWS_AS(characteristic_trace(empty, 0, 0.25), Error);
}

TEST_CASE("evolution is deterministic") {
  FieldGrid g0 = make_initial_data(smooth_spec(32, 0.02));
  EvolutionParams p;
  p.t_end = 0.05;
  EvolutionHistory h1 = evolve(g0, p);
  EvolutionHistory h2 = evolve(g0, p);
  CHECK(grid_csv(h1.snapshots) == grid_csv(h2.snapshots));
  CHECK(diagnostics_csv(h1) == diagnostics_csv(h2));
}

TEST_CASE("grid CSV round-trips bit-exactly") {
  FieldGrid g0 = make_initial_data(smooth_spec(32, 0.02));
  EvolutionParams p;
  p.t_end = 0.02;
  EvolutionHistory h = evolve(g0, p);
  std::string text = grid_csv(h.snapshots);
  std::vector<FieldGrid> back = parse_grid_csv(text);
  REQUIRE(back.size() == h.snapshots.size());
  for (size_t s = 0; s < back.size(); ++s) {
    CHECK(back[s].time == h.snapshots[s].time);
    CHECK(back[s].length == doctest::Approx(h.snapshots[s].length).epsilon(1e-12));
    REQUIRE(back[s].size() == h.snapshots[s].size());
    for (int j = 0; j < back[s].size(); ++j)
      for (int k = 0; k < 3; ++k) CHECK(back[s].cells[j][k] == h.snapshots[s].cells[j][k]);
  }
  CHECK(grid_csv(back) == text);
}

TEST_CASE("diagnostics CSV carries the declared header") {
  FieldGrid g0 = make_initial_data(constant_spec(16));
  EvolutionParams p;
  p.t_end = 0.01;
  EvolutionHistory h = evolve(g0, p);
  std::string text = diagnostics_csv(h);
  CHECK(text.rfind("step,t,dt,max_lambda,min_gap,max_grad,class_counts\n", 0) == 0);
}

TEST_CASE("evolution parameter validation") {
  FieldGrid g0 = make_initial_data(constant_spec(16));
  EvolutionParams p;
  p.cfl = 1.5;
  CHECK_THROWS_AS(evolve(g0, p), Error);
  p.cfl = 0.8;
  p.t_end = -1.0;
  CHECK_THROWS_AS(evolve(g0, p), Error);
}
