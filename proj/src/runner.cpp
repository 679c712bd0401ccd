#include "torusflow/runner.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "torusflow/claws.hpp"
#include "torusflow/errors.hpp"
#include "torusflow/evolution.hpp"
#include "torusflow/geodesics.hpp"
#include "torusflow/io.hpp"
#include "torusflow/samplers.hpp"
#include "torusflow/sampling.hpp"
#include "torusflow/spectral.hpp"
#include "torusflow/system.hpp"
#include "torusflow/version.hpp"

namespace torusflow {

namespace {

using json = nlohmann::ordered_json;

json parse_config(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) fail(errc::config_error, "config is not valid JSON");
  if (!j.is_object()) fail(errc::config_error, "config must be a JSON object");
  return j;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& ctx) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) fail(errc::config_error, "unknown config key '" + it.key() + "' in " + ctx);
  }
}

int get_int(const json& j, const char* key, int dflt, int lo, int hi) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_number_integer())
    fail(errc::config_error, std::string("config key '") + key + "' must be an integer");
  long long x = v.get<long long>();
  if (x < lo || x > hi)
    fail(errc::config_error, std::string("config key '") + key + "' out of range [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

double get_double(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_number())
    fail(errc::config_error, std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

bool get_bool(const json& j, const char* key, bool dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_boolean())
    fail(errc::config_error, std::string("config key '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& j, const char* key, const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_string())
    fail(errc::config_error, std::string("config key '") + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t get_seed(const json& j, std::uint64_t dflt) {
  if (!j.contains("seed")) return dflt;
  const json& v = j.at("seed");
  if (!v.is_number_integer() || v.get<long long>() < 0)
    fail(errc::config_error, "config key 'seed' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> get_double_array(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array() || v.empty())
    fail(errc::config_error, std::string("config key '") + key + "' must be a non-empty array");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number())
      fail(errc::config_error, std::string("config key '") + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void write_common(const std::string& out_dir, const json& resolved) {
  ensure_directory(out_dir);
  write_text_file(out_dir + "/config.json", resolved.dump(2) + "\n");
  write_text_file(out_dir + "/version.txt", std::string(version_string) + "\n");
}

// ---------------------------------------------------------------------------
// validate: dual-route determinant identity + eigenvalue route agreement.

void cmd_validate(const json& cfg, const std::string& out_dir) {
  reject_unknown(cfg, {"n", "samples", "seed", "identity_tolerance", "eigen_tolerance"},
                 "validate");
  int n = get_int(cfg, "n", 3, 2, 12);
  int samples = get_int(cfg, "samples", 1000, 1, 10000000);
  std::uint64_t seed = get_seed(cfg, 7);
  double tol_id = get_double(cfg, "identity_tolerance", 1e-9);
  double tol_eig = get_double(cfg, "eigen_tolerance", 1e-8);

  json echo;
  echo["command"] = "validate";
  echo["n"] = n;
  echo["samples"] = samples;
  echo["seed"] = seed;
  echo["identity_tolerance"] = tol_id;
  echo["eigen_tolerance"] = tol_eig;
  write_common(out_dir, echo);

  Rng rng(seed);
  double max_identity = 0.0;
  for (int s = 0; s < samples; ++s) {
    FieldPoint u = sample_point(rng, n);
    double lambda = rng.uniform(-5.0, 5.0);
    double d1 = det_lambda_minus_matrix(u, lambda);
    double d2 = char_poly_angle_form(u, lambda);
    max_identity = std::max(max_identity, std::abs(d1 - d2) / std::max(1.0, std::abs(d1)));
  }

  double max_route = 0.0;
  for (int s = 0; s < samples; ++s) {
    FieldPoint u = sample_hyperbolic_point(rng, n, 1e-3);
    Spectrum a = spectrum(u);
    Spectrum b = spectrum_dense(u);
    for (int i = 0; i < n; ++i)
      max_route = std::max(max_route, std::abs(a.lambda[i] - b.lambda[i]));
  }

  json report;
  report["n"] = n;
  report["samples"] = samples;
  report["seed"] = seed;
  report["max_identity_residual"] = max_identity;
  report["max_eigenvalue_route_disagreement"] = max_route;
  bool pass = max_identity <= tol_id && max_route <= tol_eig;
  report["pass"] = pass;
  write_text_file(out_dir + "/report.json", report.dump(2) + "\n");
  if (!pass) fail(errc::invalid_state, "validation residuals exceeded tolerance");
}

// ---------------------------------------------------------------------------
// spectrum: one point (JSON report) or a grid CSV (CSV report).

void cmd_spectrum(const json& cfg, const std::string& out_dir) {
  reject_unknown(cfg, {"point", "grid_csv", "tol_sep"}, "spectrum");
  double tol_sep = get_double(cfg, "tol_sep", -1.0);
  bool has_point = cfg.contains("point");
  bool has_grid = cfg.contains("grid_csv");
  if (has_point == has_grid)
    fail(errc::config_error, "spectrum needs exactly one of 'point' or 'grid_csv'");

  if (has_grid) {
    std::string path = get_string(cfg, "grid_csv", "");
    std::vector<FieldGrid> grids = parse_grid_csv(read_text_file(path));
    json echo;
    echo["command"] = "spectrum";
    echo["grid_csv"] = path;
    echo["tol_sep"] = tol_sep;
    write_common(out_dir, echo);
    write_text_file(out_dir + "/spectrum.csv", spectrum_csv(grids.back(), tol_sep));
    return;
  }

  FieldPoint u = get_double_array(cfg, "point");
  validate_point(u);
  json echo;
  echo["command"] = "spectrum";
  echo["point"] = u;
  echo["tol_sep"] = tol_sep;
  write_common(out_dir, echo);

  Spectrum sp = spectrum(u, tol_sep);
  json report;
  report["point"] = u;
  report["classification"] = hyperbolicity_name(sp.cls);
  report["tol_sep_used"] = sp.tol_sep;
  report["min_gap"] = sp.min_gap;
  json roots = json::array();
  for (const auto& z : sp.roots) roots.push_back({z.real(), z.imag()});
  report["roots"] = roots;
  if (sp.cls != Hyperbolicity::elliptic) {
    report["lambda"] = sp.lambda;
    report["phi"] = sp.phi;
  }
  if (sp.cls == Hyperbolicity::strictly_hyperbolic)
    report["riemann_invariants"] = riemann_invariants(u);
  write_text_file(out_dir + "/spectrum.json", report.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// claws: series coefficients at a point plus torus-graph samples per level.

void cmd_claws(const json& cfg, const std::string& out_dir) {
  reject_unknown(cfg, {"point", "order", "levels"}, "claws");
  if (!cfg.contains("point")) fail(errc::config_error, "claws needs a 'point'");
  FieldPoint u = get_double_array(cfg, "point");
  validate_point(u);
  int order = get_int(cfg, "order", 4, 2, 30);
  std::vector<double> levels =
      cfg.contains("levels") ? get_double_array(cfg, "levels") : default_claw_levels(degree(u));

  json echo;
  echo["command"] = "claws";
  echo["point"] = u;
  echo["order"] = order;
  echo["levels"] = levels;
  write_common(out_dir, echo);

  CLawSeries cs = series_claws(u, order);
  json report;
  report["point"] = u;
  report["order"] = order;
  report["G"] = cs.G;
  report["flux_series"] = cs.flux;
  json graph = json::array();
  for (double c : levels) {
    GraphPoint gp = torus_graph(u, c);
    json rec;
    rec["c"] = c;
    rec["f"] = gp.f;
    rec["flux"] = gp.flux;
    graph.push_back(rec);
  }
  report["graph"] = graph;
  write_text_file(out_dir + "/claws.json", report.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// evolve config shared by evolve / trace / geodesics(history metric).

struct EvolveSetup {
  InitialDataSpec init;
  EvolutionParams params;
};

EvolveSetup parse_evolve_config(const json& cfg, json& echo) {
  reject_unknown(cfg,
                 {"n", "grid", "initial", "scheme", "cfl", "t_end", "snapshot_stride",
                  "caps", "policy", "claw_levels"},
                 "evolve");
  EvolveSetup es;
  es.init.n = get_int(cfg, "n", 3, 2, 12);

  json grid_echo;
  if (cfg.contains("grid")) {
    const json& g = cfg.at("grid");
    if (!g.is_object()) fail(errc::config_error, "'grid' must be an object");
    reject_unknown(g, {"M", "L"}, "grid");
    es.init.M = get_int(g, "M", 128, 8, 1000000);
    es.init.L = get_double(g, "L", 1.0);
  } else {
    es.init.M = 128;
    es.init.L = 1.0;
  }
  if (es.init.L <= 0.0) fail(errc::config_error, "grid length L must be positive");
  grid_echo["M"] = es.init.M;
  grid_echo["L"] = es.init.L;

  json initial_echo;
  json fields_echo = json::array();
  if (!cfg.contains("initial")) {
    // Default: the constant flat state a = (0, ..., 0, 1).
    for (int k = 0; k < es.init.n; ++k) {
      InitialFieldSpec fs;
      fs.mean = (k == es.init.n - 1) ? 1.0 : 0.0;
      es.init.fields.push_back(fs);
      json fe;
      fe["mean"] = fs.mean;
      fe["modes"] = json::array();
      fields_echo.push_back(fe);
    }
  } else {
    const json& ini = cfg.at("initial");
    if (!ini.is_object()) fail(errc::config_error, "'initial' must be an object");
    reject_unknown(ini, {"fields"}, "initial");
    if (!ini.contains("fields") || !ini.at("fields").is_array())
      fail(errc::config_error, "'initial.fields' must be an array");
    const json& fields = ini.at("fields");
    if (static_cast<int>(fields.size()) != es.init.n)
      fail(errc::config_error, "'initial.fields' must have exactly n entries");
    for (const json& f : fields) {
      if (!f.is_object()) fail(errc::config_error, "each field spec must be an object");
      reject_unknown(f, {"mean", "modes"}, "initial.fields[]");
      InitialFieldSpec fs;
      fs.mean = get_double(f, "mean", 0.0);
      json modes_echo = json::array();
      if (f.contains("modes")) {
        const json& modes = f.at("modes");
        if (!modes.is_array()) fail(errc::config_error, "'modes' must be an array");
        for (const json& m : modes) {
          if (!m.is_object()) fail(errc::config_error, "each mode must be an object");
          reject_unknown(m, {"mode", "amplitude", "phase"}, "initial.fields[].modes[]");
          InitialMode im;
          im.mode = get_int(m, "mode", 1, 1, 100000);
          im.amplitude = get_double(m, "amplitude", 0.0);
          im.phase = get_double(m, "phase", 0.0);
          fs.modes.push_back(im);
          json me;
          me["mode"] = im.mode;
          me["amplitude"] = im.amplitude;
          me["phase"] = im.phase;
          modes_echo.push_back(me);
        }
      }
      es.init.fields.push_back(fs);
      json fe;
      fe["mean"] = fs.mean;
      fe["modes"] = modes_echo;
      fields_echo.push_back(fe);
    }
  }
  initial_echo["fields"] = fields_echo;

  std::string scheme = get_string(cfg, "scheme", "upwind-quasilinear");
  if (scheme == "upwind-quasilinear") es.params.scheme = Scheme::upwind_quasilinear;
  else if (scheme == "laxfriedrichs-conservative")
    es.params.scheme = Scheme::laxfriedrichs_conservative;
  else
    fail(errc::config_error,
         "scheme must be 'upwind-quasilinear' or 'laxfriedrichs-conservative'");

  es.params.cfl = get_double(cfg, "cfl", 0.8);
  es.params.t_end = get_double(cfg, "t_end", 0.1);
  es.params.snapshot_stride = get_int(cfg, "snapshot_stride", 1, 1, 1000000);

  json caps_echo;
  if (cfg.contains("caps")) {
    const json& caps = cfg.at("caps");
    if (!caps.is_object()) fail(errc::config_error, "'caps' must be an object");
    reject_unknown(caps, {"gradient", "max_steps"}, "caps");
    es.params.blowup_gradient_cap = get_double(caps, "gradient", -1.0);
    es.params.max_steps = get_int(caps, "max_steps", 2000000, 1, 100000000);
  }
  caps_echo["gradient"] = es.params.blowup_gradient_cap;
  caps_echo["max_steps"] = es.params.max_steps;

  std::string policy = get_string(cfg, "policy", "halt");
  if (policy == "halt") es.params.policy = HyperbolicityPolicy::halt;
  else if (policy == "warn") es.params.policy = HyperbolicityPolicy::warn;
  else fail(errc::config_error, "policy must be 'halt' or 'warn'");

  if (cfg.contains("claw_levels")) es.params.claw_levels = get_double_array(cfg, "claw_levels");

  echo["n"] = es.init.n;
  echo["grid"] = grid_echo;
  echo["initial"] = initial_echo;
  echo["scheme"] = scheme;
  echo["cfl"] = es.params.cfl;
  echo["t_end"] = es.params.t_end;
  echo["snapshot_stride"] = es.params.snapshot_stride;
  echo["caps"] = caps_echo;
  echo["policy"] = policy;
  if (!es.params.claw_levels.empty()) echo["claw_levels"] = es.params.claw_levels;
  return es;
}

json summarize(const EvolutionHistory& hist) {
  json s;
  s["termination"] = termination_name(hist.termination);
  s["termination_detail"] = hist.termination_detail;
  s["end_time"] = hist.end_time;
  s["steps_taken"] = hist.steps_taken;
  s["snapshots"] = hist.snapshots.size();
  s["gradient_cap"] = hist.gradient_cap;
  if (!hist.claw_levels.empty()) {
    s["claw_levels"] = hist.claw_levels;
    s["max_conservation_step_drift"] = hist.max_conservation_step_drift;
  }
  s["best_shift_error"] = hist.best_shift_error;
  s["best_shift_cells"] = hist.best_shift_cells;
  return s;
}

void cmd_evolve(const json& cfg, const std::string& out_dir) {
  json echo;
  echo["command"] = "evolve";
  EvolveSetup es = parse_evolve_config(cfg, echo);
  write_common(out_dir, echo);

  FieldGrid grid0 = make_initial_data(es.init);
  EvolutionHistory hist = evolve(grid0, es.params);

  write_text_file(out_dir + "/snapshots.csv", grid_csv(hist.snapshots));
  write_text_file(out_dir + "/diagnostics.csv", diagnostics_csv(hist));

  json summary = summarize(hist);
  if (hist.snapshots.size() >= 3) {
    std::vector<double> c = hist.claw_levels.empty() ? default_claw_levels(grid0.n())
                                                     : hist.claw_levels;
    try {
      ClawResidual blk = claw_residual(hist.snapshots, c);
      summary["claw_residual_max"] = blk.max_abs;
      size_t mid = hist.snapshots.size() / 2;
      write_text_file(out_dir + "/claw_residual.csv",
                      claw_csv({blk}, c, hist.snapshots[mid]));
    } catch (const Error& e) {
      summary["claw_residual_note"] = e.what();
    }
  }
  write_text_file(out_dir + "/summary.json", summary.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// trace: characteristic curves through a fresh or stored evolution.

EvolutionHistory history_from_config(const json& cfg, json& echo, const char* ctx) {
  bool has_run = cfg.contains("run");
  bool has_csv = cfg.contains("snapshots_csv");
  if (has_run == has_csv)
    fail(errc::config_error, std::string(ctx) + " needs exactly one of 'run' or 'snapshots_csv'");
  if (has_csv) {
    std::string path = get_string(cfg, "snapshots_csv", "");
    echo["snapshots_csv"] = path;
    EvolutionHistory hist;
    hist.snapshots = parse_grid_csv(read_text_file(path));
    if (hist.snapshots.size() < 2)
      fail(errc::config_error, "stored history must hold at least two snapshots");
    for (size_t i = 1; i < hist.snapshots.size(); ++i)
      if (hist.snapshots[i].time <= hist.snapshots[i - 1].time)
        fail(errc::config_error, "stored history times must increase");
    hist.end_time = hist.snapshots.back().time;
    return hist;
  }
  const json& run = cfg.at("run");
  if (!run.is_object()) fail(errc::config_error, "'run' must be an object");
  json run_echo;
  EvolveSetup es = parse_evolve_config(run, run_echo);
  echo["run"] = run_echo;
  FieldGrid grid0 = make_initial_data(es.init);
  return evolve(grid0, es.params);
}

void cmd_trace(const json& cfg, const std::string& out_dir) {
  reject_unknown(cfg, {"run", "snapshots_csv", "field_index", "starts"}, "trace");
  json echo;
  echo["command"] = "trace";
  EvolutionHistory hist = history_from_config(cfg, echo, "trace");
  int n = hist.snapshots.front().n();
  int field_index = get_int(cfg, "field_index", 0, 0, n - 1);
  std::vector<double> starts =
      cfg.contains("starts") ? get_double_array(cfg, "starts") : std::vector<double>{0.25};
  echo["field_index"] = field_index;
  echo["starts"] = starts;
  write_common(out_dir, echo);

  json report = json::array();
  for (size_t i = 0; i < starts.size(); ++i) {
    TraceResult tr = characteristic_trace(hist, field_index, starts[i]);
    write_text_file(out_dir + "/trace_" + std::to_string(i + 1) + ".csv", trace_csv(tr));
    json rec;
    rec["x0"] = starts[i];
    rec["samples"] = tr.t.size();
    rec["max_drift"] = tr.max_drift;
    rec["truncated"] = tr.truncated;
    report.push_back(rec);
  }
  write_text_file(out_dir + "/trace.json", report.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// geodesics: full or reduced flow over flat / stationary / history metrics.

void cmd_geodesics(const json& cfg, const std::string& out_dir) {
  reject_unknown(cfg,
                 {"metric", "perturb", "chart", "t0", "x0", "phi0", "p0", "tau_span",
                  "t_span", "dtau", "dt"},
                 "geodesics");
  if (!cfg.contains("metric") || !cfg.at("metric").is_object())
    fail(errc::config_error, "geodesics needs a 'metric' object");
  const json& metric = cfg.at("metric");
  reject_unknown(metric, {"type", "n", "beta", "L", "run", "snapshots_csv", "interp"},
                 "metric");
  std::string type = get_string(metric, "type", "flat");

  json echo;
  echo["command"] = "geodesics";
  json metric_echo;
  metric_echo["type"] = type;

  // Keep whichever pieces the sampler references alive for the whole run.
  EvolutionHistory hist;
  std::unique_ptr<FieldSampler> owner;
  if (type == "flat" || type == "stationary") {
    int n = get_int(metric, "n", 3, 2, 12);
    metric_echo["n"] = n;
    if (type == "flat") {
      if (metric.contains("beta") || metric.contains("L") || metric.contains("run") ||
          metric.contains("snapshots_csv") || metric.contains("interp"))
        fail(errc::config_error, "flat metric takes only 'type' and 'n'");
      owner = std::make_unique<AnalyticSampler>(flat_sampler(n));
    } else {
      double beta = get_double(metric, "beta", 0.1);
      double L = get_double(metric, "L", 1.0);
      if (L <= 0.0) fail(errc::config_error, "metric period L must be positive");
      metric_echo["beta"] = beta;
      metric_echo["L"] = L;
      owner = std::make_unique<AnalyticSampler>(stationary_sampler(n, beta, L));
    }
  } else if (type == "history") {
    std::string interp = get_string(metric, "interp", "linear");
    XInterp xi;
    if (interp == "linear") xi = XInterp::linear;
    else if (interp == "cubic") xi = XInterp::cubic;
    else fail(errc::config_error, "interp must be 'linear' or 'cubic'");
    hist = history_from_config(metric, metric_echo, "history metric");
    metric_echo["interp"] = interp;
    owner = std::make_unique<HistorySampler>(hist, xi);
  } else {
    fail(errc::config_error, "metric type must be 'flat', 'stationary', or 'history'");
  }
  echo["metric"] = metric_echo;

  std::unique_ptr<PerturbedSampler> perturbed;
  const FieldSampler* field = owner.get();
  if (cfg.contains("perturb")) {
    const json& p = cfg.at("perturb");
    if (!p.is_object()) fail(errc::config_error, "'perturb' must be an object");
    reject_unknown(p, {"field", "amplitude", "mode"}, "perturb");
    int fidx = get_int(p, "field", 0, 0, field->n() - 1);
    double amp = get_double(p, "amplitude", 0.0);
    int mode = get_int(p, "mode", 1, 1, 100000);
    perturbed = std::make_unique<PerturbedSampler>(*field, fidx, amp, mode);
    field = perturbed.get();
    json pe;
    pe["field"] = fidx;
    pe["amplitude"] = amp;
    pe["mode"] = mode;
    echo["perturb"] = pe;
  }

  std::string chart = get_string(cfg, "chart", "full");
  double default_t0 = (type == "history") ? field->t_begin() : 0.0;
  double t0 = get_double(cfg, "t0", default_t0);
  double x0 = get_double(cfg, "x0", 0.25);
  echo["chart"] = chart;
  echo["t0"] = t0;
  echo["x0"] = x0;

  Trajectory traj;
  if (chart == "full") {
    double phi0 = get_double(cfg, "phi0", 1.0);
    double tau_span = get_double(cfg, "tau_span", 10.0);
    double dtau = get_double(cfg, "dtau", 1e-3);
    echo["phi0"] = phi0;
    echo["tau_span"] = tau_span;
    echo["dtau"] = dtau;
    write_common(out_dir, echo);
    traj = integrate_geodesic(*field, t0, x0, phi0, tau_span, dtau);
  } else if (chart == "reduced") {
    double p0 = get_double(cfg, "p0", 0.5);
    double default_span = (type == "history") ? field->t_end() - t0 : 1.0;
    double t_span = get_double(cfg, "t_span", default_span);
    double dt = get_double(cfg, "dt", 1e-3);
    echo["p0"] = p0;
    echo["t_span"] = t_span;
    echo["dt"] = dt;
    write_common(out_dir, echo);
    traj = integrate_reduced(*field, t0, x0, p0, t_span, dt);
  } else {
    fail(errc::config_error, "chart must be 'full' or 'reduced'");
  }

  write_text_file(out_dir + "/trajectory.csv", trajectory_csv(traj));
  DriftStats ds = invariant_drift(traj);
  json drift;
  drift["maxH"] = ds.maxH;
  drift["rmsH"] = ds.rmsH;
  drift["maxF"] = ds.maxF;
  drift["rmsF"] = ds.rmsF;
  drift["clipped"] = ds.clipped;
  drift["samples"] = traj.samples.size();
  write_text_file(out_dir + "/drift.json", drift.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// gn-scan: genuine-nonlinearity indicators along a segment of states.

void cmd_gn_scan(const json& cfg, const std::string& out_dir) {
  reject_unknown(cfg, {"n", "base", "direction", "s0", "s1", "nodes", "h", "refine"},
                 "gn-scan");
  int n = get_int(cfg, "n", 3, 2, 12);
  FieldPoint base;
  if (cfg.contains("base")) base = get_double_array(cfg, "base");
  else {
    base.assign(n, 0.0);
    base[n - 1] = 1.0;
  }
  validate_point(base);
  if (degree(base) != n && cfg.contains("n"))
    fail(errc::config_error, "'base' length disagrees with 'n'");
  n = degree(base);
  std::vector<double> direction;
  if (cfg.contains("direction")) direction = get_double_array(cfg, "direction");
  else {
    direction.assign(n, 0.0);
    direction[0] = 1.0;
  }
  if (static_cast<int>(direction.size()) != n)
    fail(errc::config_error, "'direction' length disagrees with the base point");
  double s0 = get_double(cfg, "s0", -0.5);
  double s1 = get_double(cfg, "s1", 0.5);
  int nodes = get_int(cfg, "nodes", 101, 2, 1000000);
  double h = get_double(cfg, "h", 1e-4);
  int refine = get_int(cfg, "refine", 30, 0, 200);
  if (!(s1 > s0)) fail(errc::config_error, "scan needs s1 > s0");
  if (h <= 0.0) fail(errc::config_error, "FD step h must be positive");

  json echo;
  echo["command"] = "gn-scan";
  echo["n"] = n;
  echo["base"] = base;
  echo["direction"] = direction;
  echo["s0"] = s0;
  echo["s1"] = s1;
  echo["nodes"] = nodes;
  echo["h"] = h;
  echo["refine"] = refine;
  write_common(out_dir, echo);

  std::vector<GnRecord> records = gn_scan(base, direction, s0, s1, nodes, h, refine);
  json report = json::array();
  for (const GnRecord& r : records) {
    json rec;
    rec["s"] = r.s;
    rec["point"] = r.point;
    rec["field_index"] = r.field_index;
    rec["indicator"] = r.indicator;
    rec["step"] = r.step;
    report.push_back(rec);
  }
  write_text_file(out_dir + "/gn_scan.json", report.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// rich-check: nested-FD compatibility residual at seeded random points.

void cmd_rich_check(const json& cfg, const std::string& out_dir) {
  reject_unknown(cfg, {"n", "points", "seed", "h", "margin"}, "rich-check");
  int n = get_int(cfg, "n", 3, 2, 12);
  int points = get_int(cfg, "points", 100, 1, 100000);
  std::uint64_t seed = get_seed(cfg, 7);
  double h = get_double(cfg, "h", 1e-3);
  // margin > 0 filters the broad validation box; the default -1 selects the
  // certification distribution, whose truncation constants keep the
  // residual resolvable at the default step.
  double margin = get_double(cfg, "margin", -1.0);
  if (h <= 0.0) fail(errc::config_error, "FD step h must be positive");

  json echo;
  echo["command"] = "rich-check";
  echo["n"] = n;
  echo["points"] = points;
  echo["seed"] = seed;
  echo["h"] = h;
  echo["margin"] = margin;
  write_common(out_dir, echo);

  Rng rng(seed);
  double max_h = 0.0, max_h2 = 0.0;
  json entries = json::array();
  for (int s = 0; s < points; ++s) {
    FieldPoint u = margin > 0.0 ? sample_hyperbolic_point(rng, n, margin)
                                : sample_richness_point(rng, n);
    double r1 = richness_residual_max(u, h);
    double r2 = richness_residual_max(u, 0.5 * h);
    max_h = std::max(max_h, r1);
    max_h2 = std::max(max_h2, r2);
    json e;
    e["point"] = u;
    e["residual"] = r1;
    e["residual_half"] = r2;
    entries.push_back(e);
  }

  json report;
  report["n"] = n;
  report["points"] = points;
  report["seed"] = seed;
  report["h"] = h;
  report["margin"] = margin;
  report["max_residual"] = max_h;
  report["max_residual_half"] = max_h2;
  report["decay_factor"] = (max_h2 > 0.0) ? max_h / max_h2 : 0.0;
  report["entries"] = entries;
  write_text_file(out_dir + "/rich_check.json", report.dump(2) + "\n");
}

} // namespace

void run_command(const std::string& command, const std::string& config_json,
                 const std::string& out_dir) {
  if (out_dir.empty()) fail(errc::config_error, "output directory must not be empty");
  json cfg = parse_config(config_json);

  if (command == "validate") cmd_validate(cfg, out_dir);
  else if (command == "spectrum") cmd_spectrum(cfg, out_dir);
  else if (command == "claws") cmd_claws(cfg, out_dir);
  else if (command == "evolve") cmd_evolve(cfg, out_dir);
  else if (command == "trace") cmd_trace(cfg, out_dir);
  else if (command == "geodesics") cmd_geodesics(cfg, out_dir);
  else if (command == "gn-scan") cmd_gn_scan(cfg, out_dir);
  else if (command == "rich-check") cmd_rich_check(cfg, out_dir);
  else fail(errc::config_error, "unknown command '" + command + "'");
}

} // namespace torusflow
