#pragma once

namespace torusflow {

inline constexpr const char* version_string = "torusflow 1.0.0";

}
