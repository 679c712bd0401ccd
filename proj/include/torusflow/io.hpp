#pragma once

#include <string>
#include <vector>

#include "torusflow/claws.hpp"
#include "torusflow/evolution.hpp"
#include "torusflow/field.hpp"
#include "torusflow/geodesics.hpp"
#include "torusflow/spectral.hpp"

namespace torusflow {

// 17-significant-digit decimal; used for every CSV number so outputs are
// byte-stable for identical inputs.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void ensure_directory(const std::string& path);

// Header `t,x,a0,...,a{n-1}`, one row per cell.  Multiple grids (snapshot
// streams) share one header.
std::string grid_csv(const std::vector<FieldGrid>& grids);
std::vector<FieldGrid> parse_grid_csv(const std::string& text);

// Header `x,lambda1..lambdan,phi1..phin,class`.
std::string spectrum_csv(const FieldGrid& grid, double tol_sep);

// Header `t,x,i,c_i,f_i,flux_i,residual_i`; laws indexed from 1.
std::string claw_csv(const std::vector<ClawResidual>& blocks, const std::vector<double>& c,
                     const FieldGrid& reference_grid);

// Header `step,t,dt,max_lambda,min_gap,max_grad,class_counts` where
// class_counts is `sh:deg:ell`.
std::string diagnostics_csv(const EvolutionHistory& history);

// Header `tau,t,x,p1,p2,H,F`.
std::string trajectory_csv(const Trajectory& traj);

// Header `t,x,r`.
std::string trace_csv(const TraceResult& trace);

} // namespace torusflow
