#pragma once

#include <string>
#include <vector>

namespace staterep {

// Shortest representation that parses back to the same double ("0.5",
// "6", "1e-06"); infinities become "inf". Keeps CSV output byte-stable
// and exact under re-parsing.
std::string format_double(double value);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace staterep
