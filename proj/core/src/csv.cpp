#include "ddecc/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace ddecc {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_config_header(std::ostream& out, const std::map<std::string, std::string>& config) {
    for (const auto& [key, value] : config) out << "# " << key << '=' << value << '\n';
}

std::map<std::string, std::string> read_config_header(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) != 0) break;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        out[line.substr(2, eq - 2)] = line.substr(eq + 1);
    }
    return out;
}

}  // namespace ddecc
