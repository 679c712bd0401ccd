#pragma once

#include <vector>

#include "torusflow/errors.hpp"

namespace torusflow {

// State vector U = (a_0, ..., a_{n-1}) at one spatial point.  The trailing
// entry is the metric coefficient g = a_{n-1} > 0, and a_n == 1 is implicit:
// it is never stored and every formula treats it as the constant 1.
using FieldPoint = std::vector<double>;

inline int degree(const FieldPoint& u) { return static_cast<int>(u.size()); }
inline double metric_g(const FieldPoint& u) { return u.back(); }

// a_k with the conventions a_k = 0 for k < 0 and a_n = 1.
double coeff(const FieldPoint& u, int k);

// n >= 2, all entries finite, g > 0; throws invalid_state otherwise.
void validate_point(const FieldPoint& u);

// Periodic 1-D grid of FieldPoints at a fixed time, cells at centers
// x_j = (j + 1/2) * length / size().
struct FieldGrid {
  double length = 1.0;
  double time = 0.0;
  std::vector<FieldPoint> cells;

  int size() const { return static_cast<int>(cells.size()); }
  int n() const { return cells.empty() ? 0 : degree(cells.front()); }
  double dx() const { return length / size(); }
  double x_center(int j) const { return (j + 0.5) * dx(); }

  // Periodic indexing: j may be any integer.
  const FieldPoint& cell(int j) const {
    int m = size();
    int jj = ((j % m) + m) % m;
    return cells[jj];
  }
  FieldPoint& cell(int j) {
    int m = size();
    int jj = ((j % m) + m) % m;
    return cells[jj];
  }
};

// size >= 8, uniform degree >= 2, every point valid; throws invalid_state.
void validate_grid(const FieldGrid& grid);

} // namespace torusflow
