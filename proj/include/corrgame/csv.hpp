#pragma once

#include <string>

namespace corrgame {

/// Shortest round-trip decimal form of v ("0.1", not "0.10000000000000001").
/// One code path for every CSV and snapshot writer so byte-identical reruns
/// only depend on the computed values.
std::string format_double(double v);

}  // namespace corrgame
