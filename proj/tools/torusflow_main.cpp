// Command-line front end: parses flags, merges them over an optional JSON
// config file, and drives the shared library through its C API only.
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torusflow.h"

namespace {

using json = nlohmann::ordered_json;

int fail_config(const std::string& msg) {
  std::fprintf(stderr, "config error: %s\n", msg.c_str());
  return TF_ERR_CONFIG;
}

std::optional<json> load_config(const std::string& path, int& status) {
  if (path.empty()) return json::object();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    status = fail_config("cannot read config file: " + path);
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  json j = json::parse(ss.str(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    status = fail_config("config file is not a JSON object: " + path);
    return std::nullopt;
  }
  return j;
}

bool parse_point_list(const std::string& text, std::vector<double>& out, std::string& err) {
  out.clear();
  std::istringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      err = "not a number in list: '" + tok + "'";
      return false;
    }
  }
  if (out.empty()) {
    err = "empty number list";
    return false;
  }
  return true;
}

struct CommandSpec {
  std::string name;
  std::string description;
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(tf_version()) +
               " - integrable geodesic flows on the two-torus: spectra, conservation "
               "laws, evolution, and trajectory certificates"};
  app.require_subcommand(1);

  const std::vector<CommandSpec> commands = {
      {"validate", "Cross-check the determinant identity and eigenvalue routes"},
      {"spectrum", "Eigenvalues, fiber angles, and classification at a point or grid"},
      {"claws", "Conservation-law series and torus-graph values at a point"},
      {"evolve", "Advance periodic initial data with a finite-volume scheme"},
      {"trace", "Trace characteristics through an evolution and sample invariants"},
      {"geodesics", "Integrate geodesic trajectories and report invariant drift"},
      {"gn-scan", "Scan genuine-nonlinearity indicators along a family of states"},
      {"rich-check", "Nested-FD compatibility residuals at random hyperbolic points"},
  };

  struct Flags {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<long long> seed;
    std::optional<int> n;
    std::optional<int> samples;
    std::optional<int> order;
    std::optional<int> points;
    std::optional<int> nodes;
    std::optional<int> field_index;
    std::optional<int> m_cells;
    std::optional<int> stride;
    std::optional<double> tol_sep, cfl, t_end, h, margin, s0, s1, x0, t0, phi0, p0,
        tau_span, t_span, dtau, dt, beta, amplitude;
    std::string point_text, levels_text, starts_text, base_text, direction_text;
    std::string scheme, policy, chart, metric_type, interp, grid_csv, snapshots_csv;
  };
  Flags f;

  std::vector<CLI::App*> subs;
  for (const CommandSpec& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.description);
    sub->add_option("--config", f.config_path, "JSON config file; flags override it");
    sub->add_option("--out", f.out_dir, "Output directory (default: out)");
    subs.push_back(sub);
  }
  auto* validate = subs[0];
  auto* spectrum = subs[1];
  auto* claws = subs[2];
  auto* evolve = subs[3];
  auto* trace = subs[4];
  auto* geodesics = subs[5];
  auto* gnscan = subs[6];
  auto* richcheck = subs[7];

  validate->add_option("--n", f.n, "Field degree");
  validate->add_option("--samples", f.samples, "Random samples per route");
  validate->add_option("--seed", f.seed, "RNG seed");

  spectrum->add_option("--n", f.n, "Degree for the default point (0,...,0,1)");
  spectrum->add_option("--point", f.point_text, "Comma-separated coefficients a0,...,a{n-1}");
  spectrum->add_option("--grid-csv", f.grid_csv, "Grid CSV to classify cell by cell");
  spectrum->add_option("--tol-sep", f.tol_sep, "Eigenvalue separation tolerance");

  claws->add_option("--n", f.n, "Degree for the default point (0,...,0,1)");
  claws->add_option("--point", f.point_text, "Comma-separated coefficients a0,...,a{n-1}");
  claws->add_option("--order", f.order, "Series truncation order K >= 2");
  claws->add_option("--levels", f.levels_text, "Comma-separated level values c_i");

  evolve->add_option("--n", f.n, "Field degree");
  evolve->add_option("--M", f.m_cells, "Number of grid cells");
  evolve->add_option("--scheme", f.scheme,
                     "upwind-quasilinear or laxfriedrichs-conservative");
  evolve->add_option("--cfl", f.cfl, "CFL number in (0,1]");
  evolve->add_option("--t-end", f.t_end, "Final time");
  evolve->add_option("--stride", f.stride, "Snapshot stride in steps");
  evolve->add_option("--policy", f.policy, "halt or warn on losing hyperbolicity");

  trace->add_option("--field-index", f.field_index, "Characteristic family (0-based)");
  trace->add_option("--starts", f.starts_text, "Comma-separated start positions x0");

  geodesics->add_option("--metric", f.metric_type, "flat, stationary, or history");
  geodesics->add_option("--n", f.n, "Degree of the analytic metrics");
  geodesics->add_option("--beta", f.beta, "Stationary metric amplitude");
  geodesics->add_option("--chart", f.chart, "full or reduced");
  geodesics->add_option("--t0", f.t0, "Start time");
  geodesics->add_option("--x0", f.x0, "Start position");
  geodesics->add_option("--phi0", f.phi0, "Initial angle (full chart)");
  geodesics->add_option("--p0", f.p0, "Initial slope (reduced chart)");
  geodesics->add_option("--tau-span", f.tau_span, "Arclength span (full chart)");
  geodesics->add_option("--t-span", f.t_span, "Time span (reduced chart)");
  geodesics->add_option("--dtau", f.dtau, "Step in tau (full chart)");
  geodesics->add_option("--dt", f.dt, "Step in t (reduced chart)");

  gnscan->add_option("--n", f.n, "Field degree");
  gnscan->add_option("--base", f.base_text, "Comma-separated base point");
  gnscan->add_option("--direction", f.direction_text, "Comma-separated scan direction");
  gnscan->add_option("--s0", f.s0, "Scan start parameter");
  gnscan->add_option("--s1", f.s1, "Scan end parameter");
  gnscan->add_option("--nodes", f.nodes, "Scan nodes");
  gnscan->add_option("--fd-step", f.h, "FD step");

  richcheck->add_option("--n", f.n, "Field degree");
  richcheck->add_option("--points", f.points, "Random points");
  richcheck->add_option("--seed", f.seed, "RNG seed");
  richcheck->add_option("--fd-step", f.h, "FD step");
  richcheck->add_option("--margin", f.margin, "Relative eigenvalue-gap margin");

  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  std::string command = chosen->get_name();

  int status = 0;
  std::optional<json> loaded = load_config(f.config_path, status);
  if (!loaded) return status;
  json cfg = *loaded;

  auto set_list = [&](const char* key, const std::string& text) {
    std::vector<double> vals;
    std::string err;
    if (!parse_point_list(text, vals, err)) {
      status = fail_config(std::string(key) + ": " + err);
      return false;
    }
    cfg[key] = vals;
    return true;
  };

  if (f.n) cfg["n"] = *f.n;
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.samples) cfg["samples"] = *f.samples;
  if (f.order) cfg["order"] = *f.order;
  if (f.points) cfg["points"] = *f.points;
  if (f.nodes) cfg["nodes"] = *f.nodes;
  if (f.field_index) cfg["field_index"] = *f.field_index;
  if (f.stride) cfg["snapshot_stride"] = *f.stride;
  if (f.tol_sep) cfg["tol_sep"] = *f.tol_sep;
  if (f.cfl) cfg["cfl"] = *f.cfl;
  if (f.t_end) cfg["t_end"] = *f.t_end;
  if (f.h) cfg["h"] = *f.h;
  if (f.margin) cfg["margin"] = *f.margin;
  if (f.s0) cfg["s0"] = *f.s0;
  if (f.s1) cfg["s1"] = *f.s1;
  if (f.x0) cfg["x0"] = *f.x0;
  if (f.t0) cfg["t0"] = *f.t0;
  if (f.phi0) cfg["phi0"] = *f.phi0;
  if (f.p0) cfg["p0"] = *f.p0;
  if (f.tau_span) cfg["tau_span"] = *f.tau_span;
  if (f.t_span) cfg["t_span"] = *f.t_span;
  if (f.dtau) cfg["dtau"] = *f.dtau;
  if (f.dt) cfg["dt"] = *f.dt;
  if (!f.scheme.empty()) cfg["scheme"] = f.scheme;
  if (!f.policy.empty()) cfg["policy"] = f.policy;
  if (!f.chart.empty()) cfg["chart"] = f.chart;
  if (!f.grid_csv.empty()) cfg["grid_csv"] = f.grid_csv;
  if (!f.snapshots_csv.empty()) cfg["snapshots_csv"] = f.snapshots_csv;
  if (!f.point_text.empty() && !set_list("point", f.point_text)) return status;
  if (!f.levels_text.empty() && !set_list("levels", f.levels_text)) return status;
  if (!f.starts_text.empty() && !set_list("starts", f.starts_text)) return status;
  if (!f.base_text.empty() && !set_list("base", f.base_text)) return status;
  if (!f.direction_text.empty() && !set_list("direction", f.direction_text)) return status;

  if (f.m_cells) {
    if (!cfg.contains("grid")) cfg["grid"] = json::object();
    cfg["grid"]["M"] = *f.m_cells;
  }
  if (command == "geodesics") {
    // --metric/--n/--beta address the nested metric object.
    if (!f.metric_type.empty() || f.n || f.beta) {
      if (!cfg.contains("metric")) cfg["metric"] = json::object();
      if (!f.metric_type.empty()) cfg["metric"]["type"] = f.metric_type;
      if (f.n) cfg["metric"]["n"] = *f.n;
      if (f.beta) cfg["metric"]["beta"] = *f.beta;
      cfg.erase("n");
    }
  }
  if ((command == "spectrum" || command == "claws") && f.n) {
    // --n without --point selects the reference point (0, ..., 0, 1).
    if (!cfg.contains("point") && !cfg.contains("grid_csv")) {
      std::vector<double> pt(static_cast<size_t>(*f.n), 0.0);
      pt.back() = 1.0;
      cfg["point"] = pt;
    } else if (cfg.contains("point") &&
               static_cast<int>(cfg["point"].size()) != *f.n) {
      return fail_config("--n disagrees with the --point length");
    }
    cfg.erase("n");
  }

  tf_session* session = tf_session_create();
  if (!session) {
    std::fprintf(stderr, "runtime error: cannot create session\n");
    return TF_ERR_RUNTIME;
  }
  int rc = tf_run(session, command.c_str(), cfg.dump().c_str(), f.out_dir.c_str());
  if (rc != TF_OK) {
    const char* kind = (rc == TF_ERR_CONFIG) ? "config error" : "runtime error";
    std::fprintf(stderr, "%s: %s\n", kind, tf_last_error(session));
  } else {
    std::printf("%s: wrote %s\n", command.c_str(), f.out_dir.c_str());
  }
  tf_session_destroy(session);
  return rc;
}
