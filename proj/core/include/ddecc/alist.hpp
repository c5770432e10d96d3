#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ddecc/gf2.hpp"

namespace ddecc {

// Parses alist text ("n m" header, 1-based indices, zero padding ignored).
// Column and row lists are cross-checked, so a swapped header fails loudly.
ParityCheckMatrix load_alist(std::string_view text);
ParityCheckMatrix load_alist_file(const std::filesystem::path& path);

// Writes the canonical zero-padded form.
std::string to_alist(const ParityCheckMatrix& h);

}  // namespace ddecc
