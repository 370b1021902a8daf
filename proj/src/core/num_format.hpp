#pragma once

#include <string>

namespace cddm {

// Shortest round-trip decimal form of v (std::to_chars). All CSV and JSON
// output goes through this so identical runs produce byte-identical files.
std::string format_double(double v);

void append_double(std::string& out, double v);

}  // namespace cddm
