#include "torusflow/errors.hpp"

namespace torusflow {

const char* errc_name(errc c) {
  switch (c) {
  case errc::ok: return "ok";
  case errc::invalid_state: return "invalid-state";
  case errc::domain_error: return "domain-error";
  case errc::classification_error: return "classification-error";
  case errc::range_error: return "range-error";
  case errc::critical_level_error: return "critical-level-error";
  case errc::degenerate_graph: return "degenerate-graph";
  case errc::no_convergence: return "no-convergence";
  case errc::arity_error: return "arity-error";
  case errc::io_error: return "io-error";
  case errc::config_error: return "config-error";
  }
  return "unknown";
}

} // namespace torusflow
