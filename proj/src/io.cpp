#include "torusflow/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "torusflow/errors.hpp"

namespace torusflow {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(errc::io_error, "cannot open for writing: " + path);
  out << content;
  if (!out) fail(errc::io_error, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) fail(errc::io_error, "cannot create directory: " + path);
}

std::string grid_csv(const std::vector<FieldGrid>& grids) {
  if (grids.empty()) fail(errc::arity_error, "no grids to serialize");
  int n = grids.front().n();
  std::ostringstream out;
  out << "t,x";
  for (int k = 0; k < n; ++k) out << ",a" << k;
  out << "\n";
  for (const FieldGrid& g : grids) {
    if (g.n() != n) fail(errc::arity_error, "grids with mixed degrees");
    for (int j = 0; j < g.size(); ++j) {
      out << format_double(g.time) << "," << format_double(g.x_center(j));
      for (int k = 0; k < n; ++k) out << "," << format_double(g.cells[j][k]);
      out << "\n";
    }
  }
  return out.str();
}

std::vector<FieldGrid> parse_grid_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(errc::io_error, "empty grid CSV");
  int n = 0;
  {
    std::istringstream hs(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(hs, tok, ',')) cols.push_back(tok);
    if (cols.size() < 4 || cols[0] != "t" || cols[1] != "x")
      fail(errc::io_error, "grid CSV header must be t,x,a0,...");
    n = static_cast<int>(cols.size()) - 2;
  }

  struct Row {
    double t, x;
    FieldPoint u;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ls, tok, ',')) vals.push_back(std::stod(tok));
    if (static_cast<int>(vals.size()) != n + 2)
      fail(errc::io_error, "grid CSV row arity mismatch");
    Row r;
    r.t = vals[0];
    r.x = vals[1];
    r.u.assign(vals.begin() + 2, vals.end());
    rows.push_back(std::move(r));
  }
  if (rows.empty()) fail(errc::io_error, "grid CSV has no data rows");

  std::vector<FieldGrid> grids;
  size_t i = 0;
  while (i < rows.size()) {
    double t = rows[i].t;
    size_t j = i;
    while (j < rows.size() && rows[j].t == t) ++j;
    size_t m = j - i;
    if (m < 8) fail(errc::io_error, "grid CSV snapshot has fewer than 8 cells");
    double dx = rows[i + 1].x - rows[i].x;
    FieldGrid g;
    g.time = t;
    g.length = dx * static_cast<double>(m);
    g.cells.reserve(m);
    for (size_t r = i; r < j; ++r) g.cells.push_back(rows[r].u);
    validate_grid(g);
    grids.push_back(std::move(g));
    i = j;
  }
  return grids;
}

std::string spectrum_csv(const FieldGrid& grid, double tol_sep) {
  int n = grid.n();
  std::ostringstream out;
  out << "x";
  for (int i = 1; i <= n; ++i) out << ",lambda" << i;
  for (int i = 1; i <= n; ++i) out << ",phi" << i;
  out << ",class\n";
  for (int j = 0; j < grid.size(); ++j) {
    Spectrum sp = spectrum(grid.cells[j], tol_sep);
    out << format_double(grid.x_center(j));
    for (int i = 0; i < n; ++i)
      out << "," << (sp.cls == Hyperbolicity::elliptic ? "nan"
                                                       : format_double(sp.lambda[i]));
    for (int i = 0; i < n; ++i)
      out << "," << (sp.cls == Hyperbolicity::elliptic ? "nan"
                                                       : format_double(sp.phi[i]));
    out << "," << hyperbolicity_name(sp.cls) << "\n";
  }
  return out.str();
}

std::string claw_csv(const std::vector<ClawResidual>& blocks, const std::vector<double>& c,
                     const FieldGrid& reference_grid) {
  std::ostringstream out;
  out << "t,x,i,c_i,f_i,flux_i,residual_i\n";
  for (const ClawResidual& blk : blocks) {
    for (size_t i = 0; i < c.size(); ++i) {
      for (int j = 0; j < reference_grid.size(); ++j) {
        out << format_double(blk.t_mid) << "," << format_double(reference_grid.x_center(j))
            << "," << (i + 1) << "," << format_double(c[i]) << ","
            << format_double(blk.f[i][j]) << "," << format_double(blk.flux[i][j]) << ","
            << format_double(blk.residual[i][j]) << "\n";
      }
    }
  }
  return out.str();
}

std::string diagnostics_csv(const EvolutionHistory& history) {
  std::ostringstream out;
  out << "step,t,dt,max_lambda,min_gap,max_grad,class_counts\n";
  for (const StepDiagnostics& d : history.diagnostics) {
    out << d.step << "," << format_double(d.t) << "," << format_double(d.dt) << ","
        << format_double(d.max_lambda) << "," << format_double(d.min_gap) << ","
        << format_double(d.max_grad) << "," << d.count_sh << ":" << d.count_deg << ":"
        << d.count_ell << "\n";
  }
  return out.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "tau,t,x,p1,p2,H,F\n";
  for (const TrajectorySample& s : traj.samples) {
    out << format_double(s.tau) << "," << format_double(s.t) << "," << format_double(s.x)
        << "," << format_double(s.p1) << "," << format_double(s.p2) << ","
        << format_double(s.H) << "," << format_double(s.F) << "\n";
  }
  return out.str();
}

std::string trace_csv(const TraceResult& trace) {
  std::ostringstream out;
  out << "t,x,r\n";
  for (size_t i = 0; i < trace.t.size(); ++i)
    out << format_double(trace.t[i]) << "," << format_double(trace.x[i]) << ","
        << format_double(trace.r[i]) << "\n";
  return out.str();
}

} // namespace torusflow
