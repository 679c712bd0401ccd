#include "torusflow/field.hpp"

#include <cmath>
#include <string>

namespace torusflow {

double coeff(const FieldPoint& u, int k) {
  int n = degree(u);
  if (k < 0) return 0.0;
  if (k == n) return 1.0;
  if (k > n) return 0.0;
  return u[k];
}

void validate_point(const FieldPoint& u) {
  if (degree(u) < 2) fail(errc::invalid_state, "field point needs degree n >= 2");
  for (double v : u)
    if (!std::isfinite(v)) fail(errc::invalid_state, "field point has a non-finite entry");
  if (metric_g(u) <= 0.0)
    fail(errc::invalid_state, "metric coefficient g = " + std::to_string(metric_g(u)) + " must be positive");
}

void validate_grid(const FieldGrid& grid) {
  if (grid.size() < 8) fail(errc::invalid_state, "grid needs at least 8 cells");
  if (grid.length <= 0.0) fail(errc::invalid_state, "grid period must be positive");
  int n = grid.n();
  for (int j = 0; j < grid.size(); ++j) {
    const FieldPoint& u = grid.cells[j];
    if (degree(u) != n)
      fail(errc::invalid_state, "grid cell " + std::to_string(j) + " has inconsistent degree");
    validate_point(u);
  }
}

} // namespace torusflow
