#pragma once

#include <stdexcept>
#include <string>

namespace torusflow {

// Error taxonomy shared by the library, the C API and the CLI exit codes.
enum class errc {
  ok = 0,
  invalid_state,        // malformed field data: n < 2, non-finite entries, g <= 0
  domain_error,         // argument outside the mathematical domain (|p| > 1, point off strip)
  classification_error, // operation requires strict hyperbolicity and the point lacks it
  range_error,          // requested level is not attained on the tracked root branch
  critical_level_error, // root branch reaches a critical point of the level function
  degenerate_graph,     // coalescing graph values / repeated levels make inversion singular
  no_convergence,       // iterative solve failed to converge
  arity_error,          // inconsistent sizes, orders, or history lengths
  io_error,             // file read/write failure
  config_error,         // config parse or validation failure
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace torusflow
