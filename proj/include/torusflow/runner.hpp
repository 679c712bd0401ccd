#pragma once

#include <string>

namespace torusflow {

// Executes one named command with a JSON config into an output directory:
// parses and strictly validates the config (unknown keys rejected), runs the
// computation, writes the report files plus the resolved config echo
// (config.json) and the tool version (version.txt).
//
// Commands: validate, spectrum, claws, evolve, trace, geodesics, gn-scan,
// rich-check.
//
// Throws Error: config problems carry errc::config_error, everything else a
// runtime code.
void run_command(const std::string& command, const std::string& config_json,
                 const std::string& out_dir);

} // namespace torusflow
