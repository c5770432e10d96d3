#pragma once

#include <map>
#include <ostream>
#include <string>

namespace ddecc {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

// Writes "# key=value" lines; artifacts carry their effective configuration this way.
void write_config_header(std::ostream& out, const std::map<std::string, std::string>& config);

// Inverse of write_config_header: collects "# key=value" lines from the top of a text.
std::map<std::string, std::string> read_config_header(const std::string& text);

}  // namespace ddecc
