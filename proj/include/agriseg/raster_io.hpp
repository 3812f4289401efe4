#pragma once

#include <filesystem>
#include <set>
#include <string>

#include "agriseg/raster.hpp"

namespace agriseg {

// MSST stack file, little-endian:
//   "MSST" | u32 version (1) | u32 T | u32 H | u32 W | u32 C
//   C x (u32 byte length | UTF-8 band name)
//   T*H*W*C f32 reflectances, timestep-major, then row-major, channels innermost.
//
// A directory holding several .msst files is read as one stack: files are
// taken in filename order and concatenated along time. The tile id is the
// file stem (or the directory name).
MultispectralStack read_msst(const std::filesystem::path& path);
void write_msst(const MultispectralStack& stack, const std::filesystem::path& path);

/// Newline-delimited tile ids; blank lines and '#' comments ignored.
std::set<std::string> read_exclusion_list(const std::filesystem::path& path);

void write_png(const RgbSnapshot& snapshot, const std::filesystem::path& path);
/// Reads any PNG as 8-bit RGB. The tile id is the file stem.
RgbSnapshot read_png(const std::filesystem::path& path);

}  // namespace agriseg
