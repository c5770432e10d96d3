#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "ddecc/gf2.hpp"
#include "ddecc/model.hpp"

namespace ddecc::nn {

inline constexpr std::uint32_t checkpoint_version = 1;

using Metadata = std::map<std::string, std::string>;

/// Binary layout (little endian):
///   "DDECCKPT" | u32 version | u64 config length | config text ("key=value\n" lines)
///   | u64 array count | per array: u32 name length, name, u32 rank, u64 dims[rank], f64 values
///   | u64 FNV-1a checksum of every preceding byte.
/// The config text holds the architecture, the code dimensions and the caller's metadata.
std::string serialize_checkpoint(const DenoiserModel& model, const Metadata& metadata = {});
void save_checkpoint(const DenoiserModel& model, const std::filesystem::path& path, const Metadata& metadata = {});

struct LoadedCheckpoint {
    DenoiserModel model;
    Metadata metadata;
};

// The model is rebuilt against `h`; dimension or parameter-shape disagreement raises ShapeError.
LoadedCheckpoint deserialize_checkpoint(const std::string& bytes, const ParityCheckMatrix& h);
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path, const ParityCheckMatrix& h);

bool is_checkpoint(std::string_view bytes) noexcept;
// Caller metadata only (no arch.* / code.* keys); validates checksum and version.
Metadata checkpoint_metadata(const std::string& bytes);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace ddecc::nn
