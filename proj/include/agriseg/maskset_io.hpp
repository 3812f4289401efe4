#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "agriseg/mask.hpp"

namespace agriseg {

// Interchange document:
// {"version":1,"image_id":str,"height":int,"width":int,
//  "generator":{"pps":int,"mmra":int,"pps_percent":num,"mmra_percent":num},
//  "masks":[{"predicted_iou":num,"area":int,"rle":[int,...]},...]}
//
// Parse errors are FormatError and name the offending mask index.
MaskSet parse_maskset(std::string_view json_text);
MaskSet read_maskset(const std::filesystem::path& path);

/// Canonical form: fixed key order, canonical RLE, one line, trailing newline.
std::string write_maskset(const MaskSet& set);
void write_maskset(const MaskSet& set, const std::filesystem::path& path);

}  // namespace agriseg
